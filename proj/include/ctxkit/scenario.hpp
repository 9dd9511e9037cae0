#pragma once

// Measurement scenarios and empirical models as dense finite tables.
//
// Every context owns a row of |O|^k probabilities, one per joint outcome,
// in lexicographic order of outcome indices with the first observable of
// the context as the most significant digit. This ordering is part of the
// model file format and fixes the column layout of every LP built on top.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctxkit {

inline constexpr double kDefaultNormTol = 1e-9;
inline constexpr double kIngestedNormTol = 1e-6;

/// Outcome indices, one per observable of a context (or of the scenario).
using OutcomeTuple = std::vector<std::size_t>;

/// Lexicographic rank of `tuple` among all |O|^k tuples.
std::size_t tuple_index(std::span<const std::size_t> tuple, std::size_t outcome_count);

/// Inverse of tuple_index.
OutcomeTuple tuple_at(std::size_t index, std::size_t arity, std::size_t outcome_count);

/// |O|^k, or nullopt if it exceeds `cap`.
std::optional<std::size_t> checked_power(std::size_t base, std::size_t exponent, std::size_t cap);

class MeasurementScenario {
 public:
  /// Validates and builds a scenario. Labels keep the order they are given
  /// in; that order defines the canonical table layout.
  static MeasurementScenario create(std::vector<std::string> observables,
                                    const std::vector<std::vector<std::string>>& cover,
                                    std::vector<std::string> outcomes);

  const std::vector<std::string>& observables() const noexcept { return observables_; }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const std::vector<std::vector<std::size_t>>& contexts() const noexcept { return contexts_; }

  std::size_t observable_count() const noexcept { return observables_.size(); }
  std::size_t outcome_count() const noexcept { return outcomes_.size(); }
  std::size_t context_count() const noexcept { return contexts_.size(); }

  std::span<const std::size_t> context(std::size_t i) const { return contexts_.at(i); }
  std::vector<std::string> context_labels(std::size_t i) const;

  /// Number of joint outcomes of context i.
  std::size_t tuple_count(std::size_t i) const;

  std::optional<std::size_t> observable_index(std::string_view label) const;
  std::optional<std::size_t> outcome_index(std::string_view label) const;

  /// Indices of the observables shared by contexts i and j, in the order
  /// they appear in context i.
  std::vector<std::size_t> overlap(std::size_t i, std::size_t j) const;

  bool operator==(const MeasurementScenario&) const = default;

 private:
  MeasurementScenario() = default;

  std::vector<std::string> observables_;
  std::vector<std::vector<std::size_t>> contexts_;
  std::vector<std::string> outcomes_;
};

/// A probability vector over the joint outcomes of an ordered list of
/// observables. Used for marginalisation.
struct Distribution {
  std::vector<std::size_t> observables;
  std::size_t outcome_count = 0;
  std::vector<double> probabilities;
};

/// Sums out every observable of `dist` not listed in `target`. The result
/// is laid out in the order of `target`.
Distribution marginalize(const Distribution& dist, std::span<const std::size_t> target);

class EmpiricalModel {
 public:
  /// Checks only the table shape (ArityMismatch). Use validate_model for
  /// sign and normalisation.
  EmpiricalModel(MeasurementScenario scenario, std::vector<std::vector<double>> tables);

  const MeasurementScenario& scenario() const noexcept { return scenario_; }
  const std::vector<std::vector<double>>& tables() const noexcept { return tables_; }
  std::span<const double> row(std::size_t context) const { return tables_.at(context); }

  double probability(std::size_t context, std::span<const std::size_t> tuple) const;

  Distribution distribution(std::size_t context) const;

  bool operator==(const EmpiricalModel&) const = default;

 private:
  MeasurementScenario scenario_;
  std::vector<std::vector<double>> tables_;
};

/// Throws NegativeProbability or RowNotNormalized.
void validate_model(const EmpiricalModel& model, double norm_tol = kDefaultNormTol);

/// Largest disagreement between two contexts' marginals on a shared
/// sub-context, over all context pairs and all outcome tuples. Zero iff the
/// model is exactly non-signalling.
double signalling_gap(const EmpiricalModel& model);

class PossibilisticModel {
 public:
  /// Throws ArityMismatch on shape errors and EmptySupport if a context has
  /// no possible outcome.
  PossibilisticModel(MeasurementScenario scenario, std::vector<std::vector<bool>> supports);

  const MeasurementScenario& scenario() const noexcept { return scenario_; }
  const std::vector<std::vector<bool>>& supports() const noexcept { return supports_; }
  bool possible(std::size_t context, std::size_t tuple) const { return supports_.at(context).at(tuple); }

  bool operator==(const PossibilisticModel&) const = default;

 private:
  MeasurementScenario scenario_;
  std::vector<std::vector<bool>> supports_;
};

/// One outcome index per observable of the scenario.
struct GlobalAssignment {
  OutcomeTuple values;

  /// Tuple index of the restriction to context i.
  std::size_t restrict_to(const MeasurementScenario& scenario, std::size_t context) const;

  bool operator==(const GlobalAssignment&) const = default;
};

// Built-in scenarios and models.

/// X = {a1,b1,a2,b2}, contexts (a1,b1),(a1,b2),(a2,b1),(a2,b2), O = {0,1}.
MeasurementScenario bell_scenario();

/// X = {x1,x2,x3}, contexts (x1,x2),(x2,x3),(x3,x1), O = {0,1}.
MeasurementScenario minimal_scenario();

/// The Bell/CHSH empirical table.
EmpiricalModel bell_chsh();

/// PR-like table on the minimal scenario:
///   (x1,x2), (x2,x3): 00 -> (1+e)/2, 11 -> (1-e)/2
///   (x3,x1):          01 -> (1+e)/2, 10 -> (1-e)/2
EmpiricalModel pr_prism(const std::array<double, 3>& eps);

/// pr_prism(0,0,0): the non-signalling PR box on the minimal scenario.
EmpiricalModel pr_box();

/// The four-context PR box on the Bell scenario: perfect correlation on
/// (a1,b1),(a1,b2),(a2,b1), perfect anti-correlation on (a2,b2).
EmpiricalModel pr_box_chsh();

/// bell_chsh, pr_box, pr_box_chsh and pr_prism (with eps = 0), by name.
std::map<std::string, EmpiricalModel> builtin_models();

}  // namespace ctxkit
