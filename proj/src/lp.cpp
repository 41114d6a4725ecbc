#include "gqm/lp.hpp"

#include "gqm/error.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace gqm {

namespace {

class Tableau {
 public:
  Tableau(const LpProblem& p) : m_(p.rows), n_(p.columns.size()), width_(n_ + m_ + 1) {
    if (p.rhs.size() != m_) throw PreconditionViolated("rhs size does not match row count");
    sign_.assign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (p.rhs[i] < 0) sign_[i] = -1;
    }
    t_.assign(m_, std::vector<Rational>(width_));
    for (std::size_t j = 0; j < n_; ++j) {
      for (const auto& [row, v] : p.columns[j].entries) {
        if (row >= m_) throw PreconditionViolated("column entry row out of range");
        t_[row][j] += sign_[row] < 0 ? Rational(-v) : v;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      t_[i][n_ + i] = 1;
      t_[i][width_ - 1] = sign_[i] < 0 ? Rational(-p.rhs[i]) : p.rhs[i];
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  void set_costs(const std::vector<Rational>& c) {
    // reduced costs d_j = c_j - sum_i c_B(i) t_ij; last entry holds -objective
    z_.assign(width_, Rational(0));
    for (std::size_t j = 0; j + 1 < width_; ++j) z_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (t_[i][j] != 0) z_[j] -= cb * t_[i][j];
      }
    }
  }

  // Dantzig's rule while the objective keeps improving, Bland's rule after a run
  // of degenerate pivots (which rules out cycling). Returns false when unbounded.
  bool run(std::size_t allowed_cols, const LpLimits& limits, std::size_t& pivots) {
    std::size_t degenerate = 0;
    while (true) {
      const bool bland = degenerate >= 50;
      std::size_t enter = width_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (z_[j] >= 0) continue;
        if (enter == width_ || (!bland && z_[j] < z_[enter])) enter = j;
        if (bland) break;
      }
      if (enter == width_) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][width_ - 1] / t_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      if (best == 0) ++degenerate;
      else degenerate = 0;
      pivot(leave, enter);
      if (++pivots > limits.max_pivots) throw ResourceLimit("simplex pivot limit exceeded");
      if (limits.deadline && (pivots & 15) == 0 && std::chrono::steady_clock::now() > *limits.deadline) {
        throw ResourceLimit("simplex time budget exceeded");
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational pv = t_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j) {
      if (t_[r][j] != 0) {
        t_[r][j] /= pv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      const Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * t_[r][j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(t_[i]);
    }
    eliminate(z_);
    basis_[r] = c;
  }

  // Pivot basic artificials at level zero out of the basis where possible.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (t_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Rational objective() const { return -z_[width_ - 1]; }
  std::size_t m_, n_, width_;
  std::vector<int> sign_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> z_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpLimits& limits) {
  Tableau tab(problem);
  const std::size_t n = problem.columns.size();
  const std::size_t m = problem.rows;
  LpSolution sol;

  std::vector<Rational> phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  tab.set_costs(phase1);
  tab.run(n + m, limits, sol.pivots);
  if (tab.objective() != 0) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  tab.expel_artificials();

  std::vector<Rational> phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = problem.columns[j].cost;
  tab.set_costs(phase2);
  if (!tab.run(n, limits, sol.pivots)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.objective = tab.objective();
  sol.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis_[i] < n) sol.x[tab.basis_[i]] = tab.t_[i][tab.width_ - 1];
  }
  sol.dual.assign(m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    const Rational& d = tab.z_[n + i];
    sol.dual[i] = tab.sign_[i] < 0 ? d : Rational(-d);
  }
  return sol;
}

namespace {
constexpr double kPivotTol = 1e-7;
constexpr double kCostTol = 1e-9;
constexpr double kZero = 1e-12;
constexpr double kFeasTol = 1e-9;
}  // namespace

std::size_t WarmSimplex::add_row(double rhs, std::optional<double> penalty) {
  const std::size_t r = rhs_.size();
  const std::size_t a = cost_.size();
  rhs_.push_back(rhs);
  sigma_.push_back(rhs < 0 ? -1.0 : 1.0);
  for (auto& row : t_) row.push_back(0.0);
  t_.emplace_back(a + 1, 0.0);
  t_[r][a] = 1.0;
  beta_.push_back(std::abs(rhs));
  cost_.push_back(penalty.value_or(0.0));
  art_row_.push_back(r);
  fixed_.push_back(!penalty);
  orig_.push_back({{r, 1.0}});
  art_of_row_.push_back(a);
  basic_.push_back(a);
  d_.push_back(0.0);
  return r;
}

std::size_t WarmSimplex::add_column(const std::vector<std::pair<std::size_t, double>>& entries, double cost) {
  const std::size_t m = rhs_.size();
  std::vector<double> col(m, 0.0);
  std::vector<std::pair<std::size_t, double>> scaled;
  for (const auto& [r, v] : entries) {
    if (r >= m) throw PreconditionViolated("column entry row out of range");
    if (v != 0.0) scaled.push_back({r, v * sigma_[r]});
    const std::size_t a = art_of_row_[r];
    const double f = v * sigma_[r];
    for (std::size_t i = 0; i < m; ++i) {
      if (t_[i][a] != 0.0) col[i] += f * t_[i][a];
    }
  }
  double d = cost;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(col[i]) < kZero) col[i] = 0.0;
    t_[i].push_back(col[i]);
    d -= cost_[basic_[i]] * col[i];
  }
  orig_.push_back(std::move(scaled));
  cost_.push_back(cost);
  art_row_.push_back(npos);
  fixed_.push_back(false);
  d_.push_back(d);
  return cost_.size() - 1;
}

void WarmSimplex::recompute_reduced_costs() {
  d_ = cost_;
  for (std::size_t i = 0; i < rhs_.size(); ++i) {
    const double cb = cost_[basic_[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < d_.size(); ++j) d_[j] -= cb * t_[i][j];
  }
}

bool WarmSimplex::refactor() {
  const std::size_t m = rhs_.size();
  // [B | I] -> [I | B^-1] with partial pivoting
  std::vector<std::vector<double>> b(m, std::vector<double>(2 * m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [r, v] : orig_[basic_[i]]) b[r][i] = v;
    b[i][m + i] = 1.0;
  }
  std::vector<std::size_t> slot(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < m; ++i) {
      if (std::abs(b[i][k]) > std::abs(b[p][k])) p = i;
    }
    if (std::abs(b[p][k]) < kPivotTol) return false;
    std::swap(b[p], b[k]);
    const double pv = b[k][k];
    for (double& x : b[k]) x /= pv;
    for (std::size_t i = 0; i < m; ++i) {
      const double f = b[i][k];
      if (i == k || f == 0.0) continue;
      for (std::size_t j = k; j < 2 * m; ++j) b[i][j] -= f * b[k][j];
    }
  }
  // row i of B^-1 is b[i][m..2m); basis column i sits in tableau row i
  for (std::size_t i = 0; i < m; ++i) {
    const double* inv = b[i].data() + m;
    std::vector<double>& row = t_[i];
    for (std::size_t j = 0; j < orig_.size(); ++j) {
      double x = 0.0;
      for (const auto& [r, v] : orig_[j]) x += inv[r] * v;
      row[j] = std::abs(x) < kZero ? 0.0 : x;
    }
    row[basic_[i]] = 1.0;
    double x = 0.0;
    for (std::size_t r = 0; r < m; ++r) x += inv[r] * std::abs(rhs_[r]);
    beta_[i] = x < 0.0 && x > -1e-9 ? 0.0 : x;
  }
  recompute_reduced_costs();
  return true;
}

void WarmSimplex::set_penalty(double penalty) {
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    if (art_row_[j] != npos && !fixed_[j]) cost_[j] = penalty;
  }
  recompute_reduced_costs();
}

void WarmSimplex::fix_artificials() {
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    if (art_row_[j] == npos) continue;
    fixed_[j] = true;
    cost_[j] = 0.0;
  }
  for (std::size_t i = 0; i < rhs_.size(); ++i) {
    if (art_row_[basic_[i]] != npos) beta_[i] = 0.0;
  }
  recompute_reduced_costs();
}

void WarmSimplex::pivot(std::size_t r, std::size_t c) {
  std::vector<double>& pr = t_[r];
  const double pv = pr[c];
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < pr.size(); ++j) {
    if (pr[j] == 0.0) continue;
    pr[j] /= pv;
    if (std::abs(pr[j]) < kZero) pr[j] = 0.0;
    else nz.push_back(j);
  }
  pr[c] = 1.0;
  beta_[r] /= pv;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (i == r || t_[i][c] == 0.0) continue;
    std::vector<double>& row = t_[i];
    const double f = row[c];
    for (std::size_t j : nz) {
      row[j] -= f * pr[j];
      if (std::abs(row[j]) < kZero) row[j] = 0.0;
    }
    row[c] = 0.0;
    beta_[i] -= f * beta_[r];
    if (beta_[i] < 0.0 && beta_[i] > -kFeasTol) beta_[i] = 0.0;
  }
  if (d_[c] != 0.0) {
    const double f = d_[c];
    for (std::size_t j : nz) d_[j] -= f * pr[j];
    d_[c] = 0.0;
  }
  basic_[r] = c;
  ++pivots_;
}

bool WarmSimplex::solve(const LpLimits& limits) {
  const std::size_t m = rhs_.size();
  std::vector<bool> is_basic(cost_.size(), false);
  for (std::size_t b : basic_) is_basic[b] = true;
  std::size_t degenerate = 0, done = 0;
  while (true) {
    const bool bland = degenerate >= 200;
    std::size_t enter = npos;
    for (std::size_t j = 0; j < d_.size(); ++j) {
      if (is_basic[j] || fixed_[j] || d_[j] >= -kCostTol) continue;
      if (enter == npos || (!bland && d_[j] < d_[enter])) enter = j;
      if (bland) break;
    }
    if (enter == npos) return true;
    // Harris: the widest step keeping every basic above -kFeasTol, then the largest pivot within it
    double limit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double t = t_[i][enter];
      if (fixed_[basic_[i]]) {
        if (std::abs(t) > kPivotTol) limit = std::min(limit, kFeasTol / std::abs(t));
      } else if (t > kPivotTol) {
        limit = std::min(limit, (std::max(beta_[i], 0.0) + kFeasTol) / t);
      }
    }
    std::size_t leave = npos;
    double best = 0.0, best_mag = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = t_[i][enter];
      double ratio;
      if (fixed_[basic_[i]]) {
        if (std::abs(t) <= kPivotTol) continue;
        ratio = 0.0;
      } else {
        if (t <= kPivotTol) continue;
        ratio = std::max(beta_[i], 0.0) / t;
      }
      if (ratio > limit) continue;
      const double mag = std::abs(t);
      // Bland breaks ties by the smallest basic index; otherwise prefer large pivots
      if (leave == npos || (bland ? basic_[i] < basic_[leave] : mag > best_mag)) {
        leave = i;
        best = ratio;
        best_mag = mag;
      }
    }
    if (leave == npos) return false;
    degenerate = best <= kZero ? degenerate + 1 : 0;
    is_basic[basic_[leave]] = false;
    is_basic[enter] = true;
    pivot(leave, enter);
    if (done % 500 == 499) refactor();
    if (++done > limits.max_pivots) throw ResourceLimit("simplex pivot limit exceeded");
    if (limits.deadline && (done & 15) == 0 && std::chrono::steady_clock::now() > *limits.deadline) {
      throw ResourceLimit("simplex time budget exceeded");
    }
  }
}

double WarmSimplex::objective() const {
  double z = 0.0;
  for (std::size_t i = 0; i < rhs_.size(); ++i) z += cost_[basic_[i]] * beta_[i];
  return z;
}

double WarmSimplex::artificial_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rhs_.size(); ++i) {
    if (art_row_[basic_[i]] != npos) s += std::abs(beta_[i]);
  }
  return s;
}

std::vector<double> WarmSimplex::dual() const {
  std::vector<double> y(rhs_.size());
  for (std::size_t r = 0; r < rhs_.size(); ++r) {
    const std::size_t a = art_of_row_[r];
    y[r] = sigma_[r] * (cost_[a] - d_[a]);
  }
  return y;
}

std::vector<std::size_t> WarmSimplex::basis() const {
  std::vector<std::size_t> b(rhs_.size());
  for (std::size_t i = 0; i < rhs_.size(); ++i) b[i] = art_row_[basic_[i]] == npos ? basic_[i] : npos;
  return b;
}

std::vector<std::size_t> WarmSimplex::artificial_basis_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t b : basic_) {
    if (art_row_[b] != npos) out.push_back(art_row_[b]);
  }
  return out;
}

std::vector<double> WarmSimplex::values() const {
  std::vector<double> x(cost_.size(), 0.0);
  for (std::size_t i = 0; i < rhs_.size(); ++i) x[basic_[i]] = beta_[i];
  return x;
}

std::optional<std::vector<Rational>> solve_sparse_square(
    std::size_t n, const std::vector<std::vector<std::pair<std::size_t, Rational>>>& columns,
    const std::vector<Rational>& rhs, bool transpose) {
  if (columns.size() != n || rhs.size() != n) throw PreconditionViolated("system is not square");
  std::vector<std::map<std::size_t, Rational>> rows(n);
  std::vector<std::set<std::size_t>> col_rows(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [i, v] : columns[j]) {
      if (i >= n) throw PreconditionViolated("entry out of range");
      if (v == 0) continue;
      const std::size_t r = transpose ? j : i, c = transpose ? i : j;
      rows[r][c] += v;
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::erase_if(rows[r], [](const auto& e) { return e.second == 0; });
    for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);
  }
  std::vector<Rational> b = rhs;
  std::vector<bool> active(n, true);
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (row, column)
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t r = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && (r == n || rows[i].size() < rows[r].size())) r = i;
    }
    if (rows[r].empty()) return std::nullopt;
    std::size_t c = n;
    for (const auto& [j, v] : rows[r]) {
      if (c == n || col_rows[j].size() < col_rows[c].size()) c = j;
    }
    active[r] = false;
    order.push_back({r, c});
    const Rational pv = rows[r].at(c);
    std::vector<std::size_t> targets;
    for (std::size_t i : col_rows[c]) {
      if (active[i]) targets.push_back(i);
    }
    for (std::size_t i : targets) {
      const Rational f = rows[i].at(c) / pv;
      for (const auto& [j, v] : rows[r]) {
        auto [it, inserted] = rows[i].try_emplace(j, 0);
        it->second -= f * v;
        if (it->second == 0) {
          rows[i].erase(it);
          col_rows[j].erase(i);
        } else if (inserted) {
          col_rows[j].insert(i);
        }
      }
      b[i] -= f * b[r];
    }
  }
  std::vector<Rational> x(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto [r, c] = *it;
    Rational acc = b[r];
    for (const auto& [j, v] : rows[r]) {
      if (j != c) acc -= v * x[j];
    }
    x[c] = acc / rows[r].at(c);
  }
  return x;
}

}  // namespace gqm
