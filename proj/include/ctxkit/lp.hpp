#pragma once

// Dense two-phase simplex for small linear programs.
//
//   maximize    c . x
//   subject to  a_i . x  (<= | = | >=)  b_i
//               x >= 0
//
// Pivoting follows Bland's rule (lowest eligible index enters, lowest
// basic index leaves on ratio ties), so results are reproducible for
// identical input. Every Optimal answer is re-substituted into the original
// constraints before it is returned.

#include <cstddef>
#include <vector>

namespace ctxkit {

inline constexpr double kDefaultLpTol = 1e-7;
inline constexpr std::size_t kDefaultMaxPivots = 10'000;

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::LessEqual;
  double bound = 0.0;
};

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variable_count);

  std::size_t variable_count() const noexcept { return variable_count_; }
  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  /// Throws InvalidLinearProgram on a length mismatch or non-finite entry.
  void set_objective(std::vector<double> coefficients);
  void add_constraint(std::vector<double> coefficients, Relation relation, double bound);

  /// Left-hand side of constraint i at `x`.
  double evaluate(std::size_t i, const std::vector<double>& x) const;
  double objective_at(const std::vector<double>& x) const;

 private:
  std::size_t variable_count_;
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective_value = 0.0;   // meaningful iff Optimal
  std::vector<double> assignment; // empty unless Optimal
};

struct SolverOptions {
  double tolerance = kDefaultLpTol;
  std::size_t max_pivots = kDefaultMaxPivots;
};

/// Throws Error(NumericalFailure) if the pivot cap is hit or the returned
/// optimum fails re-substitution; never returns an uncertified Optimal.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

/// Pluggable solver entry point, so callers can swap the backend (for
/// instance to an exact-arithmetic one) without touching model code.
using LpBackend = LpSolution (*)(const LinearProgram&, const SolverOptions&);

}  // namespace ctxkit
