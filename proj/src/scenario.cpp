#include "ctxkit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ctxkit/error.hpp"

namespace ctxkit {

std::size_t tuple_index(std::span<const std::size_t> tuple, std::size_t outcome_count) {
  std::size_t index = 0;
  for (std::size_t digit : tuple) index = index * outcome_count + digit;
  return index;
}

OutcomeTuple tuple_at(std::size_t index, std::size_t arity, std::size_t outcome_count) {
  OutcomeTuple tuple(arity);
  for (std::size_t k = arity; k-- > 0;) {
    tuple[k] = index % outcome_count;
    index /= outcome_count;
  }
  return tuple;
}

std::optional<std::size_t> checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) return std::nullopt;
    result *= base;
  }
  if (result > cap) return std::nullopt;
  return result;
}

MeasurementScenario MeasurementScenario::create(std::vector<std::string> observables,
                                                const std::vector<std::vector<std::string>>& cover,
                                                std::vector<std::string> outcomes) {
  if (observables.empty()) throw Error(ErrorCode::EmptyInput, "no observables");
  if (cover.empty()) throw Error(ErrorCode::EmptyInput, "empty measurement cover");
  if (outcomes.size() < 2) throw Error(ErrorCode::TooFewOutcomes, "need at least 2 outcomes");

  MeasurementScenario s;
  std::set<std::string> seen;
  for (const auto& label : observables) {
    if (!seen.insert(label).second) throw Error(ErrorCode::DuplicateObservable, label);
  }
  seen.clear();
  for (const auto& label : outcomes) {
    if (!seen.insert(label).second) throw Error(ErrorCode::DuplicateOutcome, label);
  }
  s.observables_ = std::move(observables);
  s.outcomes_ = std::move(outcomes);

  std::vector<bool> covered(s.observables_.size(), false);
  for (const auto& ctx : cover) {
    if (ctx.empty()) throw Error(ErrorCode::EmptyContext, "context with no observables");
    std::vector<std::size_t> indices;
    for (const auto& label : ctx) {
      auto idx = s.observable_index(label);
      if (!idx) throw Error(ErrorCode::UnknownObservable, label);
      if (std::find(indices.begin(), indices.end(), *idx) != indices.end()) {
        throw Error(ErrorCode::DuplicateObservableInContext, fmt::format("{} in [{}]", label, fmt::join(ctx, ",")));
      }
      indices.push_back(*idx);
      covered[*idx] = true;
    }
    s.contexts_.push_back(std::move(indices));
  }
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) throw Error(ErrorCode::CoverNotCovering, fmt::format("observable {} is in no context", s.observables_[i]));
  }

  // Antichain: no context may be contained in another (equal contexts included).
  for (std::size_t i = 0; i < s.contexts_.size(); ++i) {
    std::set<std::size_t> a(s.contexts_[i].begin(), s.contexts_[i].end());
    for (std::size_t j = 0; j < s.contexts_.size(); ++j) {
      if (i == j) continue;
      std::set<std::size_t> b(s.contexts_[j].begin(), s.contexts_[j].end());
      if (std::includes(b.begin(), b.end(), a.begin(), a.end()) && (a.size() < b.size() || i > j)) {
        throw Error(ErrorCode::SubsumedContext,
                    fmt::format("context {} is contained in context {}", i, j));
      }
    }
  }
  return s;
}

std::vector<std::string> MeasurementScenario::context_labels(std::size_t i) const {
  std::vector<std::string> labels;
  for (std::size_t idx : contexts_.at(i)) labels.push_back(observables_[idx]);
  return labels;
}

std::size_t MeasurementScenario::tuple_count(std::size_t i) const {
  auto n = checked_power(outcomes_.size(), contexts_.at(i).size(), std::numeric_limits<std::size_t>::max());
  if (!n) throw Error(ErrorCode::EnumerationTooLarge, "context table too large");
  return *n;
}

std::optional<std::size_t> MeasurementScenario::observable_index(std::string_view label) const {
  auto it = std::find(observables_.begin(), observables_.end(), label);
  if (it == observables_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - observables_.begin());
}

std::optional<std::size_t> MeasurementScenario::outcome_index(std::string_view label) const {
  auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
  if (it == outcomes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - outcomes_.begin());
}

std::vector<std::size_t> MeasurementScenario::overlap(std::size_t i, std::size_t j) const {
  std::vector<std::size_t> shared;
  const auto& b = contexts_.at(j);
  for (std::size_t idx : contexts_.at(i)) {
    if (std::find(b.begin(), b.end(), idx) != b.end()) shared.push_back(idx);
  }
  return shared;
}

Distribution marginalize(const Distribution& dist, std::span<const std::size_t> target) {
  std::vector<std::size_t> positions;
  for (std::size_t k = 0; k < target.size(); ++k) {
    auto it = std::find(dist.observables.begin(), dist.observables.end(), target[k]);
    if (it == dist.observables.end()) {
      throw Error(ErrorCode::NotASubcontext, fmt::format("observable index {} not in source context", target[k]));
    }
    if (std::find(target.begin(), target.begin() + k, target[k]) != target.begin() + k) {
      throw Error(ErrorCode::NotASubcontext, "target lists an observable twice");
    }
    positions.push_back(static_cast<std::size_t>(it - dist.observables.begin()));
  }

  const std::size_t arity = dist.observables.size();
  Distribution out;
  out.observables.assign(target.begin(), target.end());
  out.outcome_count = dist.outcome_count;
  out.probabilities.assign(*checked_power(dist.outcome_count, target.size(), std::numeric_limits<std::size_t>::max()), 0.0);

  OutcomeTuple projected(target.size());
  for (std::size_t t = 0; t < dist.probabilities.size(); ++t) {
    OutcomeTuple full = tuple_at(t, arity, dist.outcome_count);
    for (std::size_t k = 0; k < positions.size(); ++k) projected[k] = full[positions[k]];
    out.probabilities[tuple_index(projected, dist.outcome_count)] += dist.probabilities[t];
  }
  return out;
}

EmpiricalModel::EmpiricalModel(MeasurementScenario scenario, std::vector<std::vector<double>> tables)
    : scenario_(std::move(scenario)), tables_(std::move(tables)) {
  if (tables_.size() != scenario_.context_count()) {
    throw Error(ErrorCode::ArityMismatch,
                fmt::format("{} tables for {} contexts", tables_.size(), scenario_.context_count()));
  }
  for (std::size_t c = 0; c < tables_.size(); ++c) {
    if (tables_[c].size() != scenario_.tuple_count(c)) {
      throw Error(ErrorCode::ArityMismatch, fmt::format("context {} has {} entries, expected {}", c,
                                                        tables_[c].size(), scenario_.tuple_count(c)));
    }
  }
}

double EmpiricalModel::probability(std::size_t context, std::span<const std::size_t> tuple) const {
  if (tuple.size() != scenario_.context(context).size()) {
    throw Error(ErrorCode::ArityMismatch, "tuple arity differs from context arity");
  }
  for (std::size_t v : tuple) {
    if (v >= scenario_.outcome_count()) throw Error(ErrorCode::ArityMismatch, "outcome index out of range");
  }
  return tables_.at(context)[tuple_index(tuple, scenario_.outcome_count())];
}

Distribution EmpiricalModel::distribution(std::size_t context) const {
  const auto ctx = scenario_.context(context);
  return Distribution{{ctx.begin(), ctx.end()}, scenario_.outcome_count(), tables_.at(context)};
}

void validate_model(const EmpiricalModel& model, double norm_tol) {
  const auto& s = model.scenario();
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    double sum = 0.0;
    for (double p : model.row(c)) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::NegativeProbability, fmt::format("context {} has entry {}", c, p));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > norm_tol) {
      throw Error(ErrorCode::RowNotNormalized, fmt::format("context {} sums to {:.17g}", c, sum));
    }
  }
}

double signalling_gap(const EmpiricalModel& model) {
  const auto& s = model.scenario();
  double gap = 0.0;
  for (std::size_t i = 0; i < s.context_count(); ++i) {
    for (std::size_t j = i + 1; j < s.context_count(); ++j) {
      auto shared = s.overlap(i, j);
      if (shared.empty()) continue;
      auto mi = marginalize(model.distribution(i), shared);
      auto mj = marginalize(model.distribution(j), shared);
      for (std::size_t t = 0; t < mi.probabilities.size(); ++t) {
        gap = std::max(gap, std::abs(mi.probabilities[t] - mj.probabilities[t]));
      }
    }
  }
  return gap;
}

PossibilisticModel::PossibilisticModel(MeasurementScenario scenario, std::vector<std::vector<bool>> supports)
    : scenario_(std::move(scenario)), supports_(std::move(supports)) {
  if (supports_.size() != scenario_.context_count()) {
    throw Error(ErrorCode::ArityMismatch, "support count differs from context count");
  }
  for (std::size_t c = 0; c < supports_.size(); ++c) {
    if (supports_[c].size() != scenario_.tuple_count(c)) {
      throw Error(ErrorCode::ArityMismatch, fmt::format("context {} support has wrong size", c));
    }
    if (std::none_of(supports_[c].begin(), supports_[c].end(), [](bool b) { return b; })) {
      throw Error(ErrorCode::EmptySupport, fmt::format("context {} has no possible outcome", c));
    }
  }
}

std::size_t GlobalAssignment::restrict_to(const MeasurementScenario& scenario, std::size_t context) const {
  std::size_t index = 0;
  for (std::size_t obs : scenario.context(context)) index = index * scenario.outcome_count() + values.at(obs);
  return index;
}

MeasurementScenario bell_scenario() {
  return MeasurementScenario::create({"a1", "b1", "a2", "b2"},
                                     {{"a1", "b1"}, {"a1", "b2"}, {"a2", "b1"}, {"a2", "b2"}}, {"0", "1"});
}

MeasurementScenario minimal_scenario() {
  return MeasurementScenario::create({"x1", "x2", "x3"}, {{"x1", "x2"}, {"x2", "x3"}, {"x3", "x1"}}, {"0", "1"});
}

EmpiricalModel bell_chsh() {
  return EmpiricalModel(bell_scenario(), {{1.0 / 2, 0.0, 0.0, 1.0 / 2},
                                          {3.0 / 8, 1.0 / 8, 1.0 / 8, 3.0 / 8},
                                          {3.0 / 8, 1.0 / 8, 1.0 / 8, 3.0 / 8},
                                          {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8}});
}

EmpiricalModel pr_prism(const std::array<double, 3>& eps) {
  for (double e : eps) {
    if (!(e >= -1.0 && e <= 1.0)) throw Error(ErrorCode::EpsilonOutOfRange, fmt::format("epsilon {}", e));
  }
  auto hi = [](double e) { return (1.0 + e) / 2.0; };
  auto lo = [](double e) { return (1.0 - e) / 2.0; };
  return EmpiricalModel(minimal_scenario(), {{hi(eps[0]), 0.0, 0.0, lo(eps[0])},
                                             {hi(eps[1]), 0.0, 0.0, lo(eps[1])},
                                             {0.0, hi(eps[2]), lo(eps[2]), 0.0}});
}

EmpiricalModel pr_box() { return pr_prism({0.0, 0.0, 0.0}); }

EmpiricalModel pr_box_chsh() {
  return EmpiricalModel(bell_scenario(), {{0.5, 0.0, 0.0, 0.5},
                                          {0.5, 0.0, 0.0, 0.5},
                                          {0.5, 0.0, 0.0, 0.5},
                                          {0.0, 0.5, 0.5, 0.0}});
}

std::map<std::string, EmpiricalModel> builtin_models() {
  std::map<std::string, EmpiricalModel> models;
  models.emplace("bell_chsh", bell_chsh());
  models.emplace("pr_box", pr_box());
  models.emplace("pr_box_chsh", pr_box_chsh());
  models.emplace("pr_prism", pr_prism({0.0, 0.0, 0.0}));
  return models;
}

}  // namespace ctxkit
