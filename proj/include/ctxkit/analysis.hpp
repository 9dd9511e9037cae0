#pragma once

// Contextuality analysis of empirical models: possibilistic collapse,
// global-section search, contextual and signalling fractions by linear
// programming, PR-like closed forms and the signalling-corrected criterion
// CF > 2|M| SF.

#include <array>
#include <cstddef>
#include <iterator>
#include <optional>
#include <vector>

#include "ctxkit/lp.hpp"
#include "ctxkit/scenario.hpp"

namespace ctxkit {

inline constexpr double kDefaultSupportTol = 1e-9;
inline constexpr double kDefaultSfTol = 1e-9;
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 24;

struct AnalysisOptions {
  double support_tol = kDefaultSupportTol;
  double sf_tol = kDefaultSfTol;
  double lp_tol = kDefaultLpTol;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t max_pivots = kDefaultMaxPivots;
  LpBackend backend = &solve;
};

/// A tuple is possible iff its probability exceeds support_tol.
PossibilisticModel possibilistic_collapse(const EmpiricalModel& model, double support_tol = kDefaultSupportTol);

/// All |O|^|X| global assignments in lexicographic order (first observable
/// most significant). Indexable, so callers can split it into ranges.
class GlobalAssignmentRange {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = GlobalAssignment;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = GlobalAssignment;

    iterator() = default;
    iterator(const GlobalAssignmentRange* range, std::size_t index) : range_(range), index_(index) {}

    GlobalAssignment operator*() const { return range_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++index_;
      return copy;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const GlobalAssignmentRange* range_ = nullptr;
    std::size_t index_ = 0;
  };

  GlobalAssignmentRange(std::size_t observable_count, std::size_t outcome_count, std::size_t size)
      : observable_count_(observable_count), outcome_count_(outcome_count), size_(size) {}

  std::size_t size() const noexcept { return size_; }
  GlobalAssignment at(std::size_t index) const;
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  std::size_t observable_count_;
  std::size_t outcome_count_;
  std::size_t size_;
};

/// Throws EnumerationTooLarge if |O|^|X| exceeds `cap`.
GlobalAssignmentRange enumerate_global_assignments(const MeasurementScenario& scenario,
                                                   std::size_t cap = kDefaultEnumerationCap);

/// Assignments whose restriction to every context is possible.
std::vector<GlobalAssignment> consistent_global_sections(const PossibilisticModel& poss,
                                                         std::size_t cap = kDefaultEnumerationCap);

/// Some possible local section extends to no consistent global assignment.
bool is_logically_contextual(const PossibilisticModel& poss, std::size_t cap = kDefaultEnumerationCap);

/// No consistent global assignment exists.
bool is_strongly_contextual(const PossibilisticModel& poss, std::size_t cap = kDefaultEnumerationCap);

/// Supports agree on every overlap: projecting two contexts' supports onto
/// their shared observables gives the same set.
bool is_possibilistically_nonsignalling(const PossibilisticModel& poss);

/// Vertex form: one weight per global assignment, each local constraint
/// bounded by the model's probability, maximise the total weight.
LinearProgram noncontextual_fraction_lp(const EmpiricalModel& model, std::size_t cap = kDefaultEnumerationCap);

/// One variable per (context, tuple) followed by the mass variable; the
/// sub-model must be non-signalling on every overlap.
LinearProgram nonsignalling_fraction_lp(const EmpiricalModel& model);

double contextual_fraction(const EmpiricalModel& model, const AnalysisOptions& options = {});
double signalling_fraction(const EmpiricalModel& model, const AnalysisOptions& options = {});

/// Maps the canonical minimal scenario onto a source scenario: canonical
/// observable x_{k+1} is source observable `source_observable[k]`, and the
/// canonical outcome o reads as outcome (o xor flipped[k]) on the source.
struct Relabelling {
  std::array<std::size_t, 3> source_observable{0, 1, 2};
  std::array<bool, 3> flipped{false, false, false};

  bool operator==(const Relabelling&) const = default;
};

/// The 3! * 2^3 = 48 relabellings, identity first.
std::vector<Relabelling> all_relabellings();

struct PRLikeModel {
  std::array<double, 3> epsilons{};
  Relabelling labelling;

  /// The canonical PR-like table carried onto `source` by `labelling`.
  EmpiricalModel to_model(const MeasurementScenario& source) const;
};

/// Throws WrongScenarioShape unless the scenario is the 3-observable cycle
/// with two outcomes. Relabellings are tried in all_relabellings() order.
std::optional<PRLikeModel> detect_pr_like(const EmpiricalModel& model, double support_tol = kDefaultSupportTol);

/// max |eps_i|; throws EpsilonOutOfRange.
double pr_like_sf(const std::array<double, 3>& eps);

struct ContextualityVerdict {
  double cf = 0.0;
  double sf = 0.0;
  std::size_t context_count = 0;
  bool nonsignalling = false;
  bool logically_contextual = false;
  bool strongly_contextual = false;
  bool signalling_aware_contextual = false;
  /// CF > 0, reported only for non-signalling models.
  std::optional<bool> nonsignalling_contextual;
};

ContextualityVerdict verdict(const EmpiricalModel& model, const AnalysisOptions& options = {});

}  // namespace ctxkit
