#include "doctest.h"

#include <algorithm>
#include <random>

#include "ctxkit/error.hpp"
#include "ctxkit/lp.hpp"
#include "oracle/exact_lp.hpp"

using namespace ctxkit;

TEST_CASE("solve: small programs") {
  SUBCASE("max x, x <= 3") {
    LinearProgram lp(1);
    lp.set_objective({1});
    lp.add_constraint({1}, Relation::LessEqual, 3);
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(3));
  }
  SUBCASE("max x + y, x + y = 1") {
    LinearProgram lp(2);
    lp.set_objective({1, 1});
    lp.add_constraint({1, 1}, Relation::Equal, 1);
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(1));
  }
  SUBCASE("infeasible") {
    LinearProgram lp(1);
    lp.set_objective({1});
    lp.add_constraint({1}, Relation::LessEqual, 1);
    lp.add_constraint({1}, Relation::GreaterEqual, 2);
    CHECK(solve(lp).status == LpStatus::Infeasible);
  }
  SUBCASE("unbounded") {
    LinearProgram lp(2);
    lp.set_objective({1, 0});
    lp.add_constraint({0, 1}, Relation::LessEqual, 1);
    CHECK(solve(lp).status == LpStatus::Unbounded);
  }
  SUBCASE("negative right-hand side and redundant equalities") {
    // -x - y <= -1 (x + y >= 1), x + y = 2 twice, max -x
    LinearProgram lp(2);
    lp.set_objective({-1, 0});
    lp.add_constraint({-1, -1}, Relation::LessEqual, -1);
    lp.add_constraint({1, 1}, Relation::Equal, 2);
    lp.add_constraint({2, 2}, Relation::Equal, 4);
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(0));
    CHECK(s.assignment[1] == doctest::Approx(2));
  }
}

TEST_CASE("solve: invalid input and pivot cap") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_constraint({1}, Relation::LessEqual, 1), Error);
  CHECK_THROWS_AS(lp.set_objective({1, 2, 3}), Error);

  LinearProgram big(3);
  big.set_objective({1, 1, 1});
  big.add_constraint({1, 0, 0}, Relation::LessEqual, 1);
  big.add_constraint({0, 1, 0}, Relation::LessEqual, 1);
  big.add_constraint({0, 0, 1}, Relation::LessEqual, 1);
  try {
    solve(big, {kDefaultLpTol, 1});
    FAIL("expected NumericalFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NumericalFailure);
  }
}

namespace {

struct RandomLp {
  std::vector<std::vector<oracle::Rational>> A;
  std::vector<oracle::Rational> b, c;
};

RandomLp random_packing_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 7);
  std::uniform_int_distribution<int> coef(0, 6);
  RandomLp r;
  const int n = dim(rng), m = dim(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<oracle::Rational> row;
    for (int j = 0; j < n; ++j) row.emplace_back(coef(rng));
    r.A.push_back(row);
    r.b.emplace_back(coef(rng) + 1);
  }
  // Every variable appears with a positive coefficient somewhere, so bounded.
  for (int j = 0; j < n; ++j) r.A[0][static_cast<std::size_t>(j)] += 1;
  for (int j = 0; j < n; ++j) r.c.emplace_back(coef(rng) - 1);
  return r;
}

LinearProgram to_lp(const RandomLp& r, const std::vector<std::size_t>& row_order) {
  LinearProgram lp(r.c.size());
  std::vector<double> c;
  for (const auto& v : r.c) c.push_back(oracle::to_double(v));
  lp.set_objective(c);
  for (std::size_t i : row_order) {
    std::vector<double> row;
    for (const auto& v : r.A[i]) row.push_back(oracle::to_double(v));
    lp.add_constraint(row, Relation::LessEqual, oracle::to_double(r.b[i]));
  }
  return lp;
}

}  // namespace

TEST_CASE("property: simplex agrees with the exact oracle and ignores row order") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_packing_lp(rng);
    const double exact = oracle::to_double(oracle::maximize(r.A, r.b, r.c));
    std::vector<std::size_t> order(r.A.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto s1 = solve(to_lp(r, order));
    std::shuffle(order.begin(), order.end(), rng);
    const auto s2 = solve(to_lp(r, order));
    REQUIRE(s1.status == LpStatus::Optimal);
    REQUIRE(s2.status == LpStatus::Optimal);
    CHECK(s1.objective_value == doctest::Approx(exact).epsilon(1e-9));
    CHECK(s2.objective_value == doctest::Approx(exact).epsilon(1e-9));
  }
}
