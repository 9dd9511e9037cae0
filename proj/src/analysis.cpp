#include "ctxkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include <fmt/format.h>

#include "ctxkit/error.hpp"

namespace ctxkit {

PossibilisticModel possibilistic_collapse(const EmpiricalModel& model, double support_tol) {
  std::vector<std::vector<bool>> supports;
  for (const auto& row : model.tables()) {
    std::vector<bool> support(row.size());
    for (std::size_t t = 0; t < row.size(); ++t) support[t] = row[t] > support_tol;
    supports.push_back(std::move(support));
  }
  for (std::size_t c = 0; c < supports.size(); ++c) {
    if (std::none_of(supports[c].begin(), supports[c].end(), [](bool b) { return b; })) {
      throw Error(ErrorCode::EmptySupport,
                  fmt::format("context {} collapses to impossible at support_tol {}", c, support_tol));
    }
  }
  return PossibilisticModel(model.scenario(), std::move(supports));
}

GlobalAssignment GlobalAssignmentRange::at(std::size_t index) const {
  return GlobalAssignment{tuple_at(index, observable_count_, outcome_count_)};
}

GlobalAssignmentRange enumerate_global_assignments(const MeasurementScenario& scenario, std::size_t cap) {
  auto size = checked_power(scenario.outcome_count(), scenario.observable_count(), cap);
  if (!size) {
    throw Error(ErrorCode::EnumerationTooLarge,
                fmt::format("{}^{} global assignments exceed the cap of {}", scenario.outcome_count(),
                            scenario.observable_count(), cap));
  }
  return GlobalAssignmentRange(scenario.observable_count(), scenario.outcome_count(), *size);
}

namespace {

bool is_consistent(const PossibilisticModel& poss, const GlobalAssignment& g) {
  const auto& s = poss.scenario();
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    if (!poss.possible(c, g.restrict_to(s, c))) return false;
  }
  return true;
}

}  // namespace

std::vector<GlobalAssignment> consistent_global_sections(const PossibilisticModel& poss, std::size_t cap) {
  std::vector<GlobalAssignment> sections;
  for (auto g : enumerate_global_assignments(poss.scenario(), cap)) {
    if (is_consistent(poss, g)) sections.push_back(std::move(g));
  }
  return sections;
}

bool is_logically_contextual(const PossibilisticModel& poss, std::size_t cap) {
  const auto& s = poss.scenario();
  std::vector<std::vector<bool>> extended;
  for (std::size_t c = 0; c < s.context_count(); ++c) extended.emplace_back(s.tuple_count(c), false);
  for (const auto& g : consistent_global_sections(poss, cap)) {
    for (std::size_t c = 0; c < s.context_count(); ++c) extended[c][g.restrict_to(s, c)] = true;
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    for (std::size_t t = 0; t < s.tuple_count(c); ++t) {
      if (poss.possible(c, t) && !extended[c][t]) return true;
    }
  }
  return false;
}

bool is_strongly_contextual(const PossibilisticModel& poss, std::size_t cap) {
  for (auto g : enumerate_global_assignments(poss.scenario(), cap)) {
    if (is_consistent(poss, g)) return false;
  }
  return true;
}

namespace {

// Projection of a context's support onto `shared`, as a set of tuple indices.
std::set<std::size_t> project_support(const PossibilisticModel& poss, std::size_t c,
                                      const std::vector<std::size_t>& shared) {
  const auto& s = poss.scenario();
  const auto ctx = s.context(c);
  std::vector<std::size_t> positions;
  for (std::size_t obs : shared) {
    positions.push_back(static_cast<std::size_t>(std::find(ctx.begin(), ctx.end(), obs) - ctx.begin()));
  }
  std::set<std::size_t> projected;
  OutcomeTuple sub(shared.size());
  for (std::size_t t = 0; t < s.tuple_count(c); ++t) {
    if (!poss.possible(c, t)) continue;
    auto full = tuple_at(t, ctx.size(), s.outcome_count());
    for (std::size_t k = 0; k < positions.size(); ++k) sub[k] = full[positions[k]];
    projected.insert(tuple_index(sub, s.outcome_count()));
  }
  return projected;
}

// Maps each tuple of context c to its index on `shared`.
std::vector<std::size_t> restriction_map(const MeasurementScenario& s, std::size_t c,
                                         const std::vector<std::size_t>& shared) {
  const auto ctx = s.context(c);
  std::vector<std::size_t> positions;
  for (std::size_t obs : shared) {
    positions.push_back(static_cast<std::size_t>(std::find(ctx.begin(), ctx.end(), obs) - ctx.begin()));
  }
  std::vector<std::size_t> map(s.tuple_count(c));
  OutcomeTuple sub(shared.size());
  for (std::size_t t = 0; t < map.size(); ++t) {
    auto full = tuple_at(t, ctx.size(), s.outcome_count());
    for (std::size_t k = 0; k < positions.size(); ++k) sub[k] = full[positions[k]];
    map[t] = tuple_index(sub, s.outcome_count());
  }
  return map;
}

}  // namespace

bool is_possibilistically_nonsignalling(const PossibilisticModel& poss) {
  const auto& s = poss.scenario();
  for (std::size_t i = 0; i < s.context_count(); ++i) {
    for (std::size_t j = i + 1; j < s.context_count(); ++j) {
      auto shared = s.overlap(i, j);
      if (shared.empty()) continue;
      if (project_support(poss, i, shared) != project_support(poss, j, shared)) return false;
    }
  }
  return true;
}

LinearProgram noncontextual_fraction_lp(const EmpiricalModel& model, std::size_t cap) {
  const auto& s = model.scenario();
  const auto assignments = enumerate_global_assignments(s, cap);
  const std::size_t n = assignments.size();

  LinearProgram lp(n);
  lp.set_objective(std::vector<double>(n, 1.0));

  // Precompute each assignment's tuple in every context.
  std::vector<std::vector<std::size_t>> restricted(s.context_count(), std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < n; ++g) {
    const auto assignment = assignments.at(g);
    for (std::size_t c = 0; c < s.context_count(); ++c) restricted[c][g] = assignment.restrict_to(s, c);
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    for (std::size_t t = 0; t < s.tuple_count(c); ++t) {
      std::vector<double> row(n, 0.0);
      for (std::size_t g = 0; g < n; ++g) {
        if (restricted[c][g] == t) row[g] = 1.0;
      }
      lp.add_constraint(std::move(row), Relation::LessEqual, model.row(c)[t]);
    }
  }
  return lp;
}

LinearProgram nonsignalling_fraction_lp(const EmpiricalModel& model) {
  const auto& s = model.scenario();
  std::vector<std::size_t> offset(s.context_count() + 1, 0);
  for (std::size_t c = 0; c < s.context_count(); ++c) offset[c + 1] = offset[c] + s.tuple_count(c);
  const std::size_t mass = offset.back();
  const std::size_t n = mass + 1;

  LinearProgram lp(n);
  std::vector<double> objective(n, 0.0);
  objective[mass] = 1.0;
  lp.set_objective(std::move(objective));

  for (std::size_t c = 0; c < s.context_count(); ++c) {
    for (std::size_t t = 0; t < s.tuple_count(c); ++t) {
      std::vector<double> row(n, 0.0);
      row[offset[c] + t] = 1.0;
      lp.add_constraint(std::move(row), Relation::LessEqual, model.row(c)[t]);
    }
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    std::vector<double> row(n, 0.0);
    for (std::size_t t = 0; t < s.tuple_count(c); ++t) row[offset[c] + t] = 1.0;
    row[mass] = -1.0;
    lp.add_constraint(std::move(row), Relation::Equal, 0.0);
  }
  for (std::size_t i = 0; i < s.context_count(); ++i) {
    for (std::size_t j = i + 1; j < s.context_count(); ++j) {
      auto shared = s.overlap(i, j);
      if (shared.empty()) continue;
      const auto map_i = restriction_map(s, i, shared);
      const auto map_j = restriction_map(s, j, shared);
      const std::size_t sub_count = *checked_power(s.outcome_count(), shared.size(), SIZE_MAX);
      for (std::size_t u = 0; u < sub_count; ++u) {
        std::vector<double> row(n, 0.0);
        for (std::size_t t = 0; t < map_i.size(); ++t) {
          if (map_i[t] == u) row[offset[i] + t] += 1.0;
        }
        for (std::size_t t = 0; t < map_j.size(); ++t) {
          if (map_j[t] == u) row[offset[j] + t] -= 1.0;
        }
        lp.add_constraint(std::move(row), Relation::Equal, 0.0);
      }
    }
  }
  return lp;
}

namespace {

double solve_fraction(const LinearProgram& lp, const AnalysisOptions& options, const char* what) {
  const auto solution = options.backend(lp, SolverOptions{options.lp_tol, options.max_pivots});
  if (solution.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalFailure, fmt::format("{} LP did not reach an optimum", what));
  }
  const double fraction = 1.0 - solution.objective_value;
  const double excursion = 10.0 * options.lp_tol;
  if (fraction < -excursion || fraction > 1.0 + excursion) {
    throw Error(ErrorCode::NumericalFailure, fmt::format("{} = {:.17g} is outside [0,1]", what, fraction));
  }
  return std::clamp(fraction, 0.0, 1.0);
}

}  // namespace

double contextual_fraction(const EmpiricalModel& model, const AnalysisOptions& options) {
  return solve_fraction(noncontextual_fraction_lp(model, options.enumeration_cap), options, "contextual fraction");
}

double signalling_fraction(const EmpiricalModel& model, const AnalysisOptions& options) {
  return solve_fraction(nonsignalling_fraction_lp(model), options, "signalling fraction");
}

std::vector<Relabelling> all_relabellings() {
  std::vector<Relabelling> result;
  std::array<std::size_t, 3> perm{0, 1, 2};
  do {
    for (unsigned mask = 0; mask < 8; ++mask) {
      result.push_back(Relabelling{perm, {(mask & 4u) != 0, (mask & 2u) != 0, (mask & 1u) != 0}});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

namespace {

constexpr std::array<std::array<std::size_t, 2>, 3> kCanonicalContexts{{{0, 1}, {1, 2}, {2, 0}}};

bool is_minimal_cycle(const MeasurementScenario& s) {
  if (s.observable_count() != 3 || s.outcome_count() != 2 || s.context_count() != 3) return false;
  std::set<std::set<std::size_t>> pairs;
  for (const auto& ctx : s.contexts()) {
    if (ctx.size() != 2) return false;
    pairs.insert({ctx[0], ctx[1]});
  }
  return pairs.size() == 3;
}

// Source context holding both observables, and whether it lists them as (u, v).
std::pair<std::size_t, bool> find_context(const MeasurementScenario& s, std::size_t u, std::size_t v) {
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const auto ctx = s.context(c);
    if (ctx[0] == u && ctx[1] == v) return {c, true};
    if (ctx[0] == v && ctx[1] == u) return {c, false};
  }
  throw Error(ErrorCode::WrongScenarioShape, "observable pair is not a context");
}

// Canonical table of `model` read through relabelling r.
std::array<std::array<double, 4>, 3> canonical_table(const EmpiricalModel& model, const Relabelling& r) {
  const auto& s = model.scenario();
  std::array<std::array<double, 4>, 3> table{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [ka, kb] = kCanonicalContexts[k];
    const std::size_t u = r.source_observable[ka];
    const std::size_t v = r.source_observable[kb];
    const auto [c, forward] = find_context(s, u, v);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const std::size_t su = a ^ static_cast<std::size_t>(r.flipped[ka]);
        const std::size_t sv = b ^ static_cast<std::size_t>(r.flipped[kb]);
        const std::size_t t = forward ? su * 2 + sv : sv * 2 + su;
        table[k][a * 2 + b] = model.row(c)[t];
      }
    }
  }
  return table;
}

}  // namespace

EmpiricalModel PRLikeModel::to_model(const MeasurementScenario& source) const {
  if (!is_minimal_cycle(source)) throw Error(ErrorCode::WrongScenarioShape, "not the 3-observable cycle with 2 outcomes");
  const auto canonical = pr_prism(epsilons);
  std::array<std::size_t, 3> canonical_of{};
  for (std::size_t k = 0; k < 3; ++k) canonical_of[labelling.source_observable[k]] = k;

  std::vector<std::vector<double>> tables;
  for (std::size_t c = 0; c < source.context_count(); ++c) {
    const auto ctx = source.context(c);
    const std::size_t ku = canonical_of[ctx[0]];
    const std::size_t kv = canonical_of[ctx[1]];
    std::vector<double> row(4);
    for (std::size_t su = 0; su < 2; ++su) {
      for (std::size_t sv = 0; sv < 2; ++sv) {
        const std::size_t a = su ^ static_cast<std::size_t>(labelling.flipped[ku]);
        const std::size_t b = sv ^ static_cast<std::size_t>(labelling.flipped[kv]);
        // Canonical context k is (x_k, x_{k+1 mod 3}).
        std::size_t k = 0;
        std::size_t t = 0;
        for (; k < 3; ++k) {
          if (kCanonicalContexts[k][0] == ku && kCanonicalContexts[k][1] == kv) {
            t = a * 2 + b;
            break;
          }
          if (kCanonicalContexts[k][0] == kv && kCanonicalContexts[k][1] == ku) {
            t = b * 2 + a;
            break;
          }
        }
        row[su * 2 + sv] = canonical.row(k)[t];
      }
    }
    tables.push_back(std::move(row));
  }
  return EmpiricalModel(source, std::move(tables));
}

std::optional<PRLikeModel> detect_pr_like(const EmpiricalModel& model, double support_tol) {
  if (!is_minimal_cycle(model.scenario())) {
    throw Error(ErrorCode::WrongScenarioShape, "PR-like detection needs the 3-observable cycle with 2 outcomes");
  }
  for (const auto& r : all_relabellings()) {
    const auto table = canonical_table(model, r);
    const bool zeros_match = table[0][1] <= support_tol && table[0][2] <= support_tol &&
                             table[1][1] <= support_tol && table[1][2] <= support_tol &&
                             table[2][0] <= support_tol && table[2][3] <= support_tol;
    if (!zeros_match) continue;
    return PRLikeModel{{table[0][0] - table[0][3], table[1][0] - table[1][3], table[2][1] - table[2][2]}, r};
  }
  return std::nullopt;
}

double pr_like_sf(const std::array<double, 3>& eps) {
  double sf = 0.0;
  for (double e : eps) {
    if (!(e >= -1.0 && e <= 1.0)) throw Error(ErrorCode::EpsilonOutOfRange, fmt::format("epsilon {}", e));
    sf = std::max(sf, std::abs(e));
  }
  return sf;
}

ContextualityVerdict verdict(const EmpiricalModel& model, const AnalysisOptions& options) {
  ContextualityVerdict v;
  v.context_count = model.scenario().context_count();
  v.cf = contextual_fraction(model, options);
  v.sf = signalling_fraction(model, options);
  v.nonsignalling = v.sf <= options.sf_tol;

  const auto poss = possibilistic_collapse(model, options.support_tol);
  v.strongly_contextual = is_strongly_contextual(poss, options.enumeration_cap);
  v.logically_contextual = v.strongly_contextual || is_logically_contextual(poss, options.enumeration_cap);

  // Strict inequality with the LP tolerance as margin, so round-off on a
  // non-contextual model never reads as contextual.
  const double bound = 2.0 * static_cast<double>(v.context_count) * v.sf;
  v.signalling_aware_contextual = v.cf > bound + options.lp_tol;
  if (v.nonsignalling) v.nonsignalling_contextual = v.cf > options.lp_tol;
  return v;
}

}  // namespace ctxkit
