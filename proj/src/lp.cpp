#include "ctxkit/lp.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ctxkit/error.hpp"

namespace ctxkit {

LinearProgram::LinearProgram(std::size_t variable_count)
    : variable_count_(variable_count), objective_(variable_count, 0.0) {
  if (variable_count == 0) throw Error(ErrorCode::InvalidLinearProgram, "no variables");
}

void LinearProgram::set_objective(std::vector<double> coefficients) {
  if (coefficients.size() != variable_count_) {
    throw Error(ErrorCode::InvalidLinearProgram,
                fmt::format("objective has {} coefficients, expected {}", coefficients.size(), variable_count_));
  }
  for (double v : coefficients) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidLinearProgram, "non-finite objective coefficient");
  }
  objective_ = std::move(coefficients);
}

void LinearProgram::add_constraint(std::vector<double> coefficients, Relation relation, double bound) {
  if (coefficients.size() != variable_count_) {
    throw Error(ErrorCode::InvalidLinearProgram,
                fmt::format("constraint has {} coefficients, expected {}", coefficients.size(), variable_count_));
  }
  for (double v : coefficients) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidLinearProgram, "non-finite constraint coefficient");
  }
  if (!std::isfinite(bound)) throw Error(ErrorCode::InvalidLinearProgram, "non-finite bound");
  constraints_.push_back({std::move(coefficients), relation, bound});
}

double LinearProgram::evaluate(std::size_t i, const std::vector<double>& x) const {
  const auto& a = constraints_.at(i).coefficients;
  double sum = 0.0;
  for (std::size_t j = 0; j < variable_count_; ++j) sum += a[j] * x[j];
  return sum;
}

double LinearProgram::objective_at(const std::vector<double>& x) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < variable_count_; ++j) sum += objective_[j] * x[j];
  return sum;
}

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-11;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double& value() { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void drop_row(std::size_t r) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1));
    data_.erase(first, first + static_cast<std::ptrdiff_t>(cols_ + 1));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { Optimal, Unbounded };

struct SimplexState {
  Tableau tab;
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
  std::size_t max_pivots;
};

// Bland's rule on columns [0, usable_cols).
PhaseResult run_phase(SimplexState& st, std::size_t usable_cols) {
  auto& tab = st.tab;
  for (;;) {
    std::size_t entering = usable_cols;
    for (std::size_t c = 0; c < usable_cols; ++c) {
      if (tab.cost(c) < -kCostEps) {
        entering = c;
        break;
      }
    }
    if (entering == usable_cols) return PhaseResult::Optimal;

    std::size_t leaving = tab.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      const double a = tab.at(r, entering);
      if (a <= kPivotEps) continue;
      const double ratio = tab.rhs(r) / a;
      if (leaving == tab.rows() || ratio < best - 1e-12) {
        best = ratio;
        leaving = r;
      } else if (ratio <= best + 1e-12 && st.basis[r] < st.basis[leaving]) {
        leaving = r;
      }
    }
    if (leaving == tab.rows()) return PhaseResult::Unbounded;

    if (++st.pivots > st.max_pivots) {
      throw Error(ErrorCode::NumericalFailure, fmt::format("simplex exceeded {} pivots", st.max_pivots));
    }
    tab.pivot(leaving, entering);
    st.basis[leaving] = entering;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (tab.rhs(r) < 0.0 && tab.rhs(r) > -kPivotEps) tab.rhs(r) = 0.0;
    }
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  const std::size_t n = lp.variable_count();
  const auto& cons = lp.constraints();
  const std::size_t m = cons.size();

  // Normalise every row to a non-negative right-hand side.
  std::vector<double> sign(m, 1.0);
  std::vector<Relation> rel(m);
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = cons[i].relation;
    if (cons[i].bound < 0.0) {
      sign[i] = -1.0;
      if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
      else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
    }
    if (rel[i] != Relation::Equal) ++slack_count;
    if (rel[i] != Relation::LessEqual) ++artificial_count;
  }

  const std::size_t slack_begin = n;
  const std::size_t art_begin = n + slack_count;
  const std::size_t cols = art_begin + artificial_count;

  SimplexState st{Tableau(m, cols), std::vector<std::size_t>(m), 0, options.max_pivots};
  auto& tab = st.tab;
  std::size_t next_slack = slack_begin;
  std::size_t next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign[i] * cons[i].coefficients[j];
    tab.rhs(i) = sign[i] * cons[i].bound;
    if (rel[i] == Relation::LessEqual) {
      tab.at(i, next_slack) = 1.0;
      st.basis[i] = next_slack++;
    } else {
      if (rel[i] == Relation::GreaterEqual) tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      st.basis[i] = next_art++;
    }
  }

  // Phase 1: maximise minus the sum of artificials.
  if (artificial_count > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (st.basis[i] < art_begin) continue;
      for (std::size_t c = 0; c <= cols; ++c) {
        if (c >= art_begin && c < cols) continue;
        tab.at(m, c) -= tab.at(i, c);
      }
    }
    run_phase(st, cols);
    if (-tab.value() > options.tolerance) return LpSolution{LpStatus::Infeasible, 0.0, {}};

    // Pivot remaining (zero-valued) artificials out of the basis, dropping
    // rows that turn out to be linearly dependent.
    for (std::size_t r = tab.rows(); r-- > 0;) {
      if (st.basis[r] < art_begin) continue;
      std::size_t pc = art_begin;
      double best = kPivotEps;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::abs(tab.at(r, c)) > best) {
          best = std::abs(tab.at(r, c));
          pc = c;
        }
      }
      if (pc == art_begin) {
        tab.drop_row(r);
        st.basis.erase(st.basis.begin() + static_cast<std::ptrdiff_t>(r));
      } else {
        tab.pivot(r, pc);
        st.basis[r] = pc;
      }
    }
  }

  // Phase 2 objective row: reduced costs of the original objective.
  const auto& c = lp.objective();
  auto cost_of = [&](std::size_t col) { return col < n ? c[col] : 0.0; };
  for (std::size_t col = 0; col <= cols; ++col) tab.at(tab.rows(), col) = 0.0;
  for (std::size_t col = 0; col < art_begin; ++col) tab.cost(col) = -cost_of(col);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    const double cb = cost_of(st.basis[r]);
    if (cb == 0.0) continue;
    for (std::size_t col = 0; col < art_begin; ++col) tab.cost(col) += cb * tab.at(r, col);
    tab.value() += cb * tab.rhs(r);
  }

  if (run_phase(st, art_begin) == PhaseResult::Unbounded) return LpSolution{LpStatus::Unbounded, 0.0, {}};

  std::vector<double> x(n, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (st.basis[r] < n) x[st.basis[r]] = tab.rhs(r);
  }

  // Certify by re-substitution.
  const double tol = options.tolerance;
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] < -tol) throw Error(ErrorCode::NumericalFailure, fmt::format("variable {} = {} < 0", j, x[j]));
    if (x[j] < 0.0) x[j] = 0.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double lhs = lp.evaluate(i, x);
    const double b = cons[i].bound;
    const double slack = tol * (1.0 + std::abs(b));
    bool ok = true;
    switch (cons[i].relation) {
      case Relation::LessEqual: ok = lhs <= b + slack; break;
      case Relation::GreaterEqual: ok = lhs >= b - slack; break;
      case Relation::Equal: ok = std::abs(lhs - b) <= slack; break;
    }
    if (!ok) {
      throw Error(ErrorCode::NumericalFailure,
                  fmt::format("constraint {} violated after solve: lhs {:.17g}, bound {:.17g}", i, lhs, b));
    }
  }
  const double z = lp.objective_at(x);
  if (std::abs(z - tab.value()) > tol * (1.0 + std::abs(z))) {
    throw Error(ErrorCode::NumericalFailure,
                fmt::format("objective mismatch: tableau {:.17g}, re-substituted {:.17g}", tab.value(), z));
  }
  return LpSolution{LpStatus::Optimal, z, std::move(x)};
}

}  // namespace ctxkit
