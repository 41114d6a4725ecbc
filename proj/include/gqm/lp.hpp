#pragma once

#include "gqm/rational.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace gqm {

struct LpColumn {
  std::vector<std::pair<std::size_t, Rational>> entries;  // (row, coefficient)
  Rational cost;
};

/// minimize cost . x  subject to  A x = rhs,  x >= 0.
struct LpProblem {
  std::size_t rows = 0;
  std::vector<Rational> rhs;
  std::vector<LpColumn> columns;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> x;
  /// Dual multipliers: cost_j - y . A_j >= 0 for every column, rhs . y = objective.
  std::vector<Rational> dual;
  std::size_t pivots = 0;
};

struct LpLimits {
  std::size_t max_pivots = 1'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Exact two-phase dense-tableau simplex with Bland's rule. Throws ResourceLimit
/// when a limit is hit.
LpSolution solve_lp(const LpProblem& problem, const LpLimits& limits = {});

/// Double-precision primal simplex over a dense tableau that can grow by rows
/// and columns between solves without losing its basis. Every row carries an
/// artificial column: a penalized one (cost `penalty`) or one held at zero,
/// which may leave the basis but never enters it.
class WarmSimplex {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// A new row has no entries in existing columns.
  std::size_t add_row(double rhs, std::optional<double> penalty);
  /// Entries must refer to existing rows. Returns the column index.
  std::size_t add_column(const std::vector<std::pair<std::size_t, double>>& entries, double cost);
  /// Changes the cost of every penalized artificial.
  void set_penalty(double penalty);
  /// Holds every artificial at zero from now on (their values must be zero).
  void fix_artificials();
  /// Optimizes from the current basis; false when unbounded.
  bool solve(const LpLimits& limits = {});

  std::size_t rows() const { return rhs_.size(); }
  std::size_t columns() const { return cost_.size(); }
  double objective() const;
  double artificial_mass() const;
  /// y with cost_j - y . A_j equal to the reduced cost of column j.
  std::vector<double> dual() const;
  /// Structural column basic in each row, or npos for an artificial.
  std::vector<std::size_t> basis() const;
  /// Rows whose artificial column is basic.
  std::vector<std::size_t> artificial_basis_rows() const;
  std::vector<double> values() const;
  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(std::size_t r, std::size_t c);
  void recompute_reduced_costs();
  /// Rebuilds the tableau from the original columns; false when the basis is numerically singular.
  bool refactor();

  // columns: structural ones then artificials interleaved in creation order
  std::vector<double> cost_;
  std::vector<std::size_t> art_row_;  // npos for structural columns
  std::vector<bool> fixed_;
  std::vector<std::size_t> art_of_row_;
  std::vector<double> sigma_;
  std::vector<double> rhs_;
  std::vector<std::vector<std::pair<std::size_t, double>>> orig_;  // sign-scaled
  std::vector<std::vector<double>> t_;
  std::vector<double> beta_;
  std::vector<double> d_;
  std::vector<std::size_t> basic_;
  std::size_t pivots_ = 0;
};

/// Exact solution of a square sparse system, given column-wise; nullopt when singular.
std::optional<std::vector<Rational>> solve_sparse_square(
    std::size_t n, const std::vector<std::vector<std::pair<std::size_t, Rational>>>& columns,
    const std::vector<Rational>& rhs, bool transpose = false);

}  // namespace gqm
