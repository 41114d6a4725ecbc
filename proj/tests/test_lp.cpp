#include "gqm/error.hpp"
#include "gqm/lp.hpp"

#include <doctest.h>

#include <optional>
#include <random>

using namespace gqm;

namespace {

// Solve the square system B x = b exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Minimum over basic feasible solutions; requires full row rank.
std::optional<Rational> brute_force(const LpProblem& p) {
  const std::size_t m = p.rows, n = p.columns.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [r, v] : p.columns[j].entries) a[r][j] += v;
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (pick.size() == m) {
      std::vector<std::vector<Rational>> sq(m, std::vector<Rational>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) sq[i][k] = a[i][pick[k]];
      auto x = solve_square(sq, p.rhs);
      if (!x) return;
      Rational obj = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if ((*x)[k] < 0) return;
        obj += (*x)[k] * p.columns[pick[k]].cost;
      }
      if (!best || obj < *best) best = obj;
      return;
    }
    for (std::size_t j = start; j < n; ++j) {
      pick.push_back(j);
      self(self, j + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace

TEST_CASE("small hand LP") {
  // min x + y  s.t. x - y = 1  -> x = 1, y = 0
  LpProblem p;
  p.rows = 1;
  p.rhs = {1};
  p.columns = {{{{0, Rational(1)}}, 1}, {{{0, Rational(-1)}}, 1}};
  auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == 1);
  CHECK(s.x[0] == 1);
  CHECK(s.x[1] == 0);
  CHECK(s.dual[0] == 1);
}

TEST_CASE("infeasible and unbounded") {
  LpProblem p;
  p.rows = 1;
  p.rhs = {-1};
  p.columns = {{{{0, Rational(1)}}, 1}};
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
  LpProblem u;
  u.rows = 1;
  u.rhs = {0};
  u.columns = {{{{0, Rational(1)}}, -1}, {{{0, Rational(-1)}}, 0}};
  CHECK(solve_lp(u).status == LpStatus::Unbounded);
}

TEST_CASE("pivot limit") {
  LpProblem p;
  p.rows = 2;
  p.rhs = {1, 1};
  p.columns = {{{{0, Rational(1)}}, 1}, {{{1, Rational(1)}}, 1}};
  LpLimits lim;
  lim.max_pivots = 0;
  CHECK_THROWS_AS(solve_lp(p, lim), ResourceLimit);
}

TEST_CASE("random LPs agree with basis enumeration and certify duals") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> coef(-3, 3), cost(0, 4), dim(1, 3), extra(1, 4);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LpProblem p;
    p.rows = dim(rng);
    const std::size_t n = p.rows + extra(rng);
    for (std::size_t i = 0; i < p.rows; ++i) p.rhs.push_back(coef(rng));
    for (std::size_t j = 0; j < n; ++j) {
      LpColumn c;
      c.cost = cost(rng);
      for (std::size_t i = 0; i < p.rows; ++i) {
        int v = coef(rng);
        if (v != 0) c.entries.push_back({i, Rational(v)});
      }
      p.columns.push_back(c);
    }
    // identity block keeps full row rank for the oracle
    for (std::size_t i = 0; i < p.rows; ++i) p.columns.push_back({{{i, Rational(trial % 2 ? 1 : -1)}}, 5});
    auto s = solve_lp(p);
    auto oracle = brute_force(p);
    if (!oracle) {
      CHECK(s.status == LpStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(s.status == LpStatus::Optimal);
    ++optimal;
    CHECK(s.objective == *oracle);
    Rational primal = 0, dual_obj = 0;
    for (std::size_t j = 0; j < p.columns.size(); ++j) {
      CHECK(s.x[j] >= 0);
      primal += s.x[j] * p.columns[j].cost;
      Rational ya = 0;
      for (const auto& [r, v] : p.columns[j].entries) ya += s.dual[r] * v;
      CHECK(p.columns[j].cost - ya >= 0);
    }
    for (std::size_t i = 0; i < p.rows; ++i) {
      Rational ax = 0;
      for (std::size_t j = 0; j < p.columns.size(); ++j)
        for (const auto& [r, v] : p.columns[j].entries)
          if (r == i) ax += v * s.x[j];
      CHECK(ax == p.rhs[i]);
      dual_obj += p.rhs[i] * s.dual[i];
    }
    CHECK(primal == s.objective);
    CHECK(dual_obj == s.objective);
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 0);
}
