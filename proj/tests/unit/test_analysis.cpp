#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "ctxkit/analysis.hpp"
#include "ctxkit/error.hpp"
#include "oracle/exact_lp.hpp"
#include "support/random_models.hpp"

using namespace ctxkit;

namespace {

// Flips the outcome of observable `obs` everywhere it occurs.
EmpiricalModel flip_outcome(const EmpiricalModel& m, std::size_t obs) {
  const auto& s = m.scenario();
  auto tables = m.tables();
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const auto ctx = s.context(c);
    std::vector<double> row(tables[c].size());
    for (std::size_t t = 0; t < row.size(); ++t) {
      auto tuple = tuple_at(t, ctx.size(), s.outcome_count());
      for (std::size_t k = 0; k < ctx.size(); ++k) {
        if (ctx[k] == obs) tuple[k] = s.outcome_count() - 1 - tuple[k];
      }
      row[tuple_index(tuple, s.outcome_count())] = tables[c][t];
    }
    tables[c] = row;
  }
  return EmpiricalModel(s, tables);
}

// Same model, with observables listed in reverse and each context's
// observables reversed (so every table is transposed).
EmpiricalModel reverse_layout(const EmpiricalModel& m) {
  const auto& s = m.scenario();
  auto obs = s.observables();
  std::reverse(obs.begin(), obs.end());
  std::vector<std::vector<std::string>> cover;
  std::vector<std::vector<double>> tables;
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    auto labels = s.context_labels(c);
    std::reverse(labels.begin(), labels.end());
    cover.push_back(labels);
    const auto ctx = s.context(c);
    std::vector<double> row(m.row(c).size());
    for (std::size_t t = 0; t < row.size(); ++t) {
      auto tuple = tuple_at(t, ctx.size(), s.outcome_count());
      std::reverse(tuple.begin(), tuple.end());
      row[tuple_index(tuple, s.outcome_count())] = m.row(c)[t];
    }
    tables.push_back(row);
  }
  return EmpiricalModel(MeasurementScenario::create(obs, cover, s.outcomes()), tables);
}

EmpiricalModel mix(const EmpiricalModel& a, const EmpiricalModel& b, double lambda) {
  auto tables = a.tables();
  for (std::size_t c = 0; c < tables.size(); ++c) {
    for (std::size_t t = 0; t < tables[c].size(); ++t) tables[c][t] = lambda * tables[c][t] + (1 - lambda) * b.row(c)[t];
  }
  return EmpiricalModel(a.scenario(), tables);
}

LpSolution failing_backend(const LinearProgram&, const SolverOptions&) { return {}; }

}  // namespace

TEST_CASE("possibilistic_collapse") {
  const auto bell = possibilistic_collapse(bell_chsh());
  CHECK(bell.supports()[0] == std::vector<bool>{true, false, false, true});
  for (std::size_t c = 1; c < 4; ++c) CHECK(bell.supports()[c] == std::vector<bool>(4, true));

  const auto pr = possibilistic_collapse(pr_prism({0, 0, 0}));
  CHECK(pr.supports()[0] == std::vector<bool>{true, false, false, true});
  CHECK(pr.supports()[1] == std::vector<bool>{true, false, false, true});
  CHECK(pr.supports()[2] == std::vector<bool>{false, true, true, false});

  const EmpiricalModel tiny(minimal_scenario(), {{1 - 1e-12, 1e-12, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}});
  CHECK_FALSE(possibilistic_collapse(tiny, 1e-9).possible(0, 1));
  CHECK(possibilistic_collapse(tiny, 1e-13).possible(0, 1));
}

TEST_CASE("enumerate_global_assignments") {
  CHECK(enumerate_global_assignments(minimal_scenario()).size() == 8);
  CHECK(enumerate_global_assignments(bell_scenario()).size() == 16);
  const auto one = MeasurementScenario::create({"a"}, {{"a"}}, {"0", "1"});
  const auto range = enumerate_global_assignments(one);
  std::vector<OutcomeTuple> got;
  for (const auto& g : range) got.push_back(g.values);
  CHECK(got == std::vector<OutcomeTuple>{{0}, {1}});
  CHECK_THROWS_AS(enumerate_global_assignments(bell_scenario(), 15), Error);
}

TEST_CASE("global sections and logical / strong contextuality") {
  const auto pr = possibilistic_collapse(pr_box());
  CHECK(consistent_global_sections(pr).empty());
  CHECK(is_logically_contextual(pr));
  CHECK(is_strongly_contextual(pr));

  const auto pr4 = possibilistic_collapse(pr_box_chsh());
  CHECK(is_strongly_contextual(pr4));

  const auto bell = possibilistic_collapse(bell_chsh());
  const auto sections = consistent_global_sections(bell);
  CHECK(sections.size() == 8);
  for (const auto& g : sections) CHECK(g.values[0] == g.values[1]);  // a1 = b1
  CHECK_FALSE(is_logically_contextual(bell));
  CHECK_FALSE(is_strongly_contextual(bell));

  const auto s = minimal_scenario();
  const PossibilisticModel full(s, std::vector<std::vector<bool>>(3, std::vector<bool>(4, true)));
  CHECK(consistent_global_sections(full).size() == 8);

  // Deterministic model from the assignment (1,0,1).
  const GlobalAssignment g{{1, 0, 1}};
  std::vector<std::vector<bool>> det(3, std::vector<bool>(4, false));
  for (std::size_t c = 0; c < 3; ++c) det[c][g.restrict_to(s, c)] = true;
  const PossibilisticModel deterministic(s, det);
  CHECK_FALSE(is_logically_contextual(deterministic));
  CHECK_FALSE(is_strongly_contextual(deterministic));
}

TEST_CASE("possibilistic non-signalling") {
  CHECK(is_possibilistically_nonsignalling(possibilistic_collapse(pr_box())));
  CHECK(is_possibilistically_nonsignalling(possibilistic_collapse(bell_chsh())));
  const PossibilisticModel lopsided(minimal_scenario(),
                                    {{true, false, false, false}, {true, true, true, true}, {true, true, true, true}});
  CHECK_FALSE(is_possibilistically_nonsignalling(lopsided));
}

TEST_CASE("contextual_fraction") {
  CHECK(contextual_fraction(pr_box()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(contextual_fraction(pr_prism({0.3, -0.7, 0.9})) == doctest::Approx(1.0).epsilon(1e-6));

  const auto s = minimal_scenario();
  const GlobalAssignment g{{0, 1, 1}};
  std::vector<std::vector<double>> det(3, std::vector<double>(4, 0.0));
  for (std::size_t c = 0; c < 3; ++c) det[c][g.restrict_to(s, c)] = 1.0;
  CHECK(contextual_fraction(EmpiricalModel(s, det)) == doctest::Approx(0.0).epsilon(1e-9));

  const oracle::ScenarioShape bell_shape{4, 2, {{0, 1}, {0, 3}, {2, 1}, {2, 3}}};
  const oracle::Rational h(1, 2), a(3, 8), b(1, 8);
  const auto exact = oracle::noncontextual_fraction(bell_shape, {{h, 0, 0, h}, {a, b, b, a}, {a, b, b, a}, {b, a, a, b}});
  CHECK(contextual_fraction(bell_chsh()) == doctest::Approx(1.0 - oracle::to_double(exact)).epsilon(1e-6));
  CHECK(contextual_fraction(bell_chsh()) > 0.0);
}

TEST_CASE("signalling_fraction") {
  CHECK(signalling_fraction(pr_box()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(signalling_fraction(bell_chsh()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(signalling_fraction(pr_prism({-0.0119, -0.0929, 0.1436})) == doctest::Approx(0.1436).epsilon(1e-4));
  CHECK(signalling_fraction(pr_prism({0.2, 0, 0})) == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("LP backend failures surface as NumericalFailure") {
  AnalysisOptions opts;
  opts.backend = &failing_backend;
  try {
    contextual_fraction(pr_box(), opts);
    FAIL("expected NumericalFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NumericalFailure);
    CHECK(is_numerical(e.code()));
  }
}

TEST_CASE("PR-like detection") {
  CHECK(all_relabellings().size() == 48);
  CHECK(all_relabellings().front() == Relabelling{});
  const std::set<std::pair<std::array<std::size_t, 3>, std::array<bool, 3>>> distinct = [] {
    std::set<std::pair<std::array<std::size_t, 3>, std::array<bool, 3>>> out;
    for (const auto& r : all_relabellings()) out.insert({r.source_observable, r.flipped});
    return out;
  }();
  CHECK(distinct.size() == 48);

  const auto found = detect_pr_like(pr_prism({0.1, -0.2, 0.05}));
  REQUIRE(found.has_value());
  CHECK(found->labelling == Relabelling{});
  CHECK(found->epsilons[0] == doctest::Approx(0.1));
  CHECK(found->epsilons[1] == doctest::Approx(-0.2));
  CHECK(found->epsilons[2] == doctest::Approx(0.05));

  const auto flipped = flip_outcome(pr_prism({0.1, -0.2, 0.05}), 0);
  const auto again = detect_pr_like(flipped);
  REQUIRE(again.has_value());
  CHECK(again->labelling.flipped[0] != again->labelling.flipped[1]);
  const auto rebuilt = again->to_model(flipped.scenario());
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t t = 0; t < 4; ++t) CHECK(rebuilt.row(c)[t] == doctest::Approx(flipped.row(c)[t]));
  }
  CHECK(pr_like_sf(again->epsilons) == doctest::Approx(0.2));

  const EmpiricalModel full(minimal_scenario(), std::vector<std::vector<double>>(3, std::vector<double>(4, 0.25)));
  CHECK_FALSE(detect_pr_like(full).has_value());
  CHECK_THROWS_AS(detect_pr_like(bell_chsh()), Error);
}

TEST_CASE("pr_like_sf") {
  CHECK(pr_like_sf({0, 0, 0}) == 0.0);
  const std::array<double, 3> eps{2 * 0.5711 - 1, 2 * 0.5655 - 1, 2 * 0.5280 - 1};
  CHECK(pr_like_sf(eps) == doctest::Approx(0.1422));
  CHECK_THROWS_AS(pr_like_sf({0, 1.01, 0}), Error);
}

TEST_CASE("verdict") {
  const auto v = verdict(pr_prism({0.1422, 0.1310, 0.0560}));
  CHECK(v.cf == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(v.sf == doctest::Approx(0.1422).epsilon(1e-6));
  CHECK(v.context_count == 3);
  CHECK(v.signalling_aware_contextual);
  CHECK_FALSE(v.nonsignalling);
  CHECK_FALSE(v.nonsignalling_contextual.has_value());

  const auto w = verdict(pr_prism({0.4, 0, 0}));
  CHECK(w.sf == doctest::Approx(0.4).epsilon(1e-6));
  CHECK_FALSE(w.signalling_aware_contextual);

  const auto bell = verdict(bell_chsh());
  CHECK(bell.nonsignalling);
  REQUIRE(bell.nonsignalling_contextual.has_value());
  CHECK(*bell.nonsignalling_contextual);
  CHECK(bell.signalling_aware_contextual);
  CHECK_FALSE(bell.logically_contextual);
}

TEST_CASE("property: CF matches the exact oracle, SF = 0 iff gap = 0") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 2);
    const auto r = trial % 3 == 0   ? testsupport::random_rows(n, rng)
                   : trial % 3 == 1 ? testsupport::random_global_mixture(n, rng)
                                    : testsupport::random_pr_mixture(rng);
    const double exact_cf = 1.0 - oracle::to_double(oracle::noncontextual_fraction(r.shape, r.exact));
    CHECK(contextual_fraction(r.model) == doctest::Approx(exact_cf).epsilon(1e-6));
    const bool sf_zero = signalling_fraction(r.model) <= 1e-7;
    const bool gap_zero = signalling_gap(r.model) <= 1e-9;
    CHECK(sf_zero == gap_zero);
  }
}

TEST_CASE("property: fractions are invariant under relabelling") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = testsupport::random_rows(3 + static_cast<std::size_t>(trial % 2), rng).model;
    const double cf = contextual_fraction(m), sf = signalling_fraction(m);
    for (const auto& other : {flip_outcome(m, 0), flip_outcome(m, 1), reverse_layout(m)}) {
      CHECK(contextual_fraction(other) == doctest::Approx(cf).epsilon(1e-7));
      CHECK(signalling_fraction(other) == doctest::Approx(sf).epsilon(1e-7));
    }
  }
}

TEST_CASE("property: non-contextual fraction is concave along mixtures") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testsupport::random_rows(3, rng);
    // Second model on the same cover.
    std::vector<std::vector<double>> tables;
    for (const auto& row : a.model.tables()) {
      std::vector<double> r(row.size());
      double sum = 0;
      for (auto& p : r) sum += (p = std::uniform_real_distribution<double>(0, 1)(rng));
      for (auto& p : r) p /= sum;
      tables.push_back(r);
    }
    const EmpiricalModel other(a.model.scenario(), tables);
    const double lambda = std::uniform_real_distribution<double>(0, 1)(rng);
    const double ncf_a = 1 - contextual_fraction(a.model), ncf_b = 1 - contextual_fraction(other);
    const double ncf_mix = 1 - contextual_fraction(mix(a.model, other, lambda));
    CHECK(ncf_mix >= lambda * ncf_a + (1 - lambda) * ncf_b - 1e-7);
  }
}

TEST_CASE("property: a single context is never contextual") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> obs;
    for (std::size_t i = 0; i < n; ++i) obs.push_back("y" + std::to_string(i));
    const auto s = MeasurementScenario::create(obs, {obs}, {"0", "1", "2"});
    std::vector<double> row(s.tuple_count(0));
    double sum = 0;
    for (auto& p : row) sum += (p = u(rng));
    for (auto& p : row) p /= sum;
    const EmpiricalModel m(s, {row});
    CHECK(contextual_fraction(m) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(signalling_fraction(m) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("property: shrinking a support keeps strong contextuality") {
  const auto s = minimal_scenario();
  std::vector<std::vector<bool>> masks;
  for (unsigned m = 1; m < 16; ++m) masks.push_back({(m & 1u) != 0, (m & 2u) != 0, (m & 4u) != 0, (m & 8u) != 0});
  std::size_t checked = 0;
  for (const auto& r0 : masks) {
    for (const auto& r1 : masks) {
      for (const auto& r2 : masks) {
        const PossibilisticModel poss(s, {r0, r1, r2});
        if (!is_strongly_contextual(poss)) continue;
        // Drop one possible entry anywhere, if the row keeps some support.
        for (std::size_t c = 0; c < 3; ++c) {
          for (std::size_t t = 0; t < 4; ++t) {
            auto sup = poss.supports();
            if (!sup[c][t] || std::count(sup[c].begin(), sup[c].end(), true) == 1) continue;
            sup[c][t] = false;
            CHECK(is_strongly_contextual(PossibilisticModel(s, sup)));
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("property: raising support_tol only removes support") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testsupport::random_rows(4, rng).model;
    const auto loose = possibilistic_collapse(m, 0.0);
    const auto tight = possibilistic_collapse(m, 0.1);
    for (std::size_t c = 0; c < m.scenario().context_count(); ++c) {
      for (std::size_t t = 0; t < m.row(c).size(); ++t) {
        if (tight.possible(c, t)) CHECK(loose.possible(c, t));
      }
    }
  }
}
