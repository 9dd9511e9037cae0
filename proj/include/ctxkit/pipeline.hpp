#pragma once

// Masked-LM probabilities to PR-like models to contextuality classification,
// plus the aggregate outputs (histogram, summary, CSV) and bundle diagrams.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctxkit/scenario.hpp"
#include "ctxkit/schema.hpp"

namespace ctxkit {

/// With |M| = 3 and CF = 1, CF > 2|M| SF reduces to SF < 1/6.
inline constexpr double kContextualSfThreshold = 1.0 / 6.0;
inline constexpr std::size_t kHistogramBins = 24;

/// Raw masked-token scores for (first noun, second noun), one pair per
/// sentence of the instance.
struct ProbabilityRecord {
  std::string instance_id;
  std::array<std::array<double, 2>, 3> raw_scores{};
};

/// {"instance_id": ..., "raw_scores": [[p,p],[p,p],[p,p]]}. Throws
/// InvalidRecord for a wrong shape, a score outside (0, 1], or non-numbers.
ProbabilityRecord record_from_json(const nlohmann::json& doc);
nlohmann::ordered_json record_to_json(const ProbabilityRecord& record);

/// Reads JSON-lines, skipping blank lines. Errors name the offending line.
std::vector<ProbabilityRecord> read_probability_records(std::istream& in);

/// Pairwise renormalisation: P_first = p_first / (p_first + p_second).
/// Throws ZeroMass unless the sum is positive.
std::pair<double, double> normalize(double p_first, double p_second);

/// Normalised probability of the first noun in each sentence.
std::array<double, 3> first_noun_probabilities(const ProbabilityRecord& record);

/// PR-like model on the minimal scenario with outcome 0 bound to the first
/// noun: rows {00: P1, 11: 1-P1}, {00: P2, 11: 1-P2}, {01: P3, 10: 1-P3}.
EmpiricalModel build_model(const ProbabilityRecord& record);

/// Fields recoverable from an instance id or a masked-sentence record.
struct InstanceMetadata {
  std::array<std::string, 2> nouns;
  std::array<std::string, 3> modifiers;
  std::string category;
};

/// Splits category:noun1:noun2:x1:x2:x3, turning '_' back into spaces.
std::optional<InstanceMetadata> parse_instance_id(const std::string& instance_id);

struct AnalysisRow {
  std::string instance_id;
  std::optional<InstanceMetadata> metadata;
  std::array<double, 3> p{};
  std::array<double, 3> eps{};
  double sf = 0.0;
  bool contextual = false;
};

/// eps_i = 2 P_i - 1, sf = max |eps_i|, contextual iff sf < 1/6.
AnalysisRow classify(const ProbabilityRecord& record);

struct Histogram {
  std::vector<std::size_t> counts = std::vector<std::size_t>(kHistogramBins, 0);

  std::size_t bins() const noexcept { return counts.size(); }
  double left_edge(std::size_t bin) const { return static_cast<double>(bin) / static_cast<double>(bins()); }
  std::size_t total() const;
  /// Bins lying entirely below the contextual threshold (0..3 for 24 bins).
  std::size_t contextual_bins() const;
};

/// Bin k holds [k/24, (k+1)/24); sf = 1 goes to the last bin.
std::size_t histogram_bin(double sf, std::size_t bins = kHistogramBins);

Histogram histogram_of(std::span<const double> sfs);

struct PairSummary {
  std::string category;
  std::array<std::string, 2> nouns;  // alphabetical, so both noun orders pool
  std::size_t total = 0;
  std::size_t contextual = 0;
};

struct Summary {
  std::size_t total = 0;
  std::size_t contextual = 0;
  std::vector<PairSummary> per_pair;  // in order of first appearance
};

struct Aggregate {
  Histogram histogram;
  Summary summary;
};

/// Throws EmptyInput for no rows.
Aggregate aggregate(std::span<const AnalysisRow> rows);

nlohmann::ordered_json histogram_to_json(const Histogram& histogram);
nlohmann::ordered_json summary_to_json(const Aggregate& aggregate);

/// Fixed column order: instance_id, noun1, noun2, x1, x2, x3, category,
/// P1, P2, P3, eps1, eps2, eps3, sf, contextual. Floats with 15 significant
/// digits.
std::string rows_to_csv(std::span<const AnalysisRow> rows);

/// The sf column of a results CSV. Throws ParseError.
std::vector<double> sf_column_from_csv(std::string_view text);

// Bundle diagrams for cyclic scenarios (every context has two observables
// and every observable lies in exactly two contexts, forming one cycle).

struct FiberEdge {
  std::size_t context = 0;
  std::size_t from_observable = 0;
  std::size_t from_outcome = 0;
  std::size_t to_observable = 0;
  std::size_t to_outcome = 0;
  std::optional<double> probability;
};

struct BundleDiagram {
  std::vector<std::string> observables;
  std::vector<std::string> outcomes;
  std::vector<std::size_t> base_cycle;                     // observable indices in cycle order
  std::vector<std::array<std::size_t, 2>> base_edges;      // one per context
  std::vector<std::array<std::size_t, 2>> fiber_vertices;  // (observable, outcome)
  std::vector<FiberEdge> fiber_edges;
  std::vector<std::array<std::size_t, 2>> crossing_pairs;  // indices into fiber_edges
};

/// Throws NotCyclicScenario.
BundleDiagram bundle_diagram(const PossibilisticModel& poss);
/// Same, with each fiber edge annotated by its probability.
BundleDiagram bundle_diagram(const EmpiricalModel& model, double support_tol);

nlohmann::ordered_json bundle_to_json(const BundleDiagram& diagram);
std::string bundle_to_dot(const BundleDiagram& diagram);

}  // namespace ctxkit
