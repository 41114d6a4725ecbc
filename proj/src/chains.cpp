#include "gqm/chains.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <variant>

namespace gqm {

bool is_admissible(const GroupContext& ctx, const Pair2& p) {
  return ctx.in_normal_subgroup(p.first) || ctx.in_normal_subgroup(p.second);
}

Chain1 single(const Element& x, const Rational& c) {
  Chain1 out;
  out.add(x, c);
  return out;
}

Chain1 boundary2(const Pair2& p) {
  Chain1 out;
  out.add(p.second, 1);
  out.add(mul(p.first, p.second), -1);
  out.add(p.first, 1);
  return out;
}

Chain1 boundary2(const Chain2& c) {
  Chain1 out;
  for (const auto& [p, coeff] : c.terms()) out.add(boundary2(p), coeff);
  return out;
}

Chain2 witness_commutator_chain(const GroupContext& ctx, const Element& g, const Element& h) {
  if (!ctx.in_normal_subgroup(h)) throw PreconditionViolated("second argument " + format(h) + " is not in N");
  Chain2 c;
  c.add(Pair2{commutator(g, h), mul(h, g)}, 1);
  c.add(Pair2{g, h}, -1);
  c.add(Pair2{h, g}, 1);
  return c;
}

std::vector<Pair2> ball_support(const GroupContext& ctx, std::size_t radius, std::size_t cap) {
  const auto ball = enumerate_ball(ctx.group(), radius, cap);
  std::vector<bool> in_n;
  in_n.reserve(ball.size());
  for (const auto& e : ball) in_n.push_back(ctx.in_normal_subgroup(e));
  std::vector<Pair2> out;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      if (in_n[i] || in_n[j]) out.push_back({ball[i], ball[j]});
    }
  }
  std::sort(out.begin(), out.end(), Pair2Less{});
  return out;
}

std::vector<Pair2> full_support(const GroupContext& ctx) {
  if (!ctx.group()->is_finite()) throw PreconditionViolated("full support needs a finite group");
  return ball_support(ctx, static_cast<std::size_t>(-1));
}

std::vector<Pair2> chain_support(const Chain2& c) {
  std::vector<Pair2> out;
  for (const auto& [p, coeff] : c.terms()) out.push_back(p);
  return out;
}

namespace {

struct IndexedSupport {
  std::vector<Pair2> pairs;
  std::vector<Element> elements;
  std::unordered_map<Word, std::size_t, WordHash> index;
  std::vector<std::vector<std::pair<std::size_t, int>>> boundary;

  std::size_t id(const Element& e) {
    auto [it, inserted] = index.try_emplace(e.word(), elements.size());
    if (inserted) elements.push_back(e);
    return it->second;
  }

  IndexedSupport(const GroupContext& ctx, const std::vector<Pair2>& support) {
    pairs = support;
    std::sort(pairs.begin(), pairs.end(), Pair2Less{});
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    boundary.reserve(pairs.size());
    for (const auto& p : pairs) {
      if (p.first.group_ptr() != ctx.group() || p.second.group_ptr() != ctx.group()) {
        throw GroupMismatch("support pair not in the context group");
      }
      if (!is_admissible(ctx, p)) {
        throw PreconditionViolated("pair (" + format(p.first) + ", " + format(p.second) + ") is not admissible");
      }
      std::vector<std::pair<std::size_t, int>> terms;
      auto put = [&](std::size_t k, int c) {
        for (auto& t : terms) {
          if (t.first == k) {
            t.second += c;
            return;
          }
        }
        terms.push_back({k, c});
      };
      put(id(p.second), 1);
      put(id(mul(p.first, p.second)), -1);
      put(id(p.first), 1);
      std::erase_if(terms, [](const auto& t) { return t.second == 0; });
      boundary.push_back(std::move(terms));
    }
  }
};

struct Master {
  std::vector<std::size_t> pairs;
  std::vector<bool> in_master;
  std::unordered_map<std::size_t, std::size_t> row_of;
  std::vector<std::size_t> row_elements;
  std::vector<Rational> rhs;

  void ensure_row(std::size_t elem, const Rational& rhs_value = Rational(0)) {
    if (row_of.try_emplace(elem, row_elements.size()).second) {
      row_elements.push_back(elem);
      rhs.push_back(rhs_value);
    }
  }

  void add_pair(const IndexedSupport& s, std::size_t k) {
    if (in_master[k]) return;
    in_master[k] = true;
    pairs.push_back(k);
    for (const auto& [e, c] : s.boundary[k]) ensure_row(e);
  }

  // Real columns cost `real_cost`; with `artificial_cost` set, every row with a
  // nonzero right-hand side also gets a pair of artificial columns of that cost.
  LpProblem build(const IndexedSupport& s, const Rational& real_cost,
                  const std::optional<Rational>& artificial_cost) const {
    LpProblem p;
    p.rows = row_elements.size();
    p.rhs = rhs;
    for (std::size_t k : pairs) {
      for (int sign : {1, -1}) {
        LpColumn col;
        col.cost = real_cost;
        for (const auto& [e, c] : s.boundary[k]) col.entries.push_back({row_of.at(e), Rational(sign * c)});
        p.columns.push_back(std::move(col));
      }
    }
    if (artificial_cost) {
      for (std::size_t r = 0; r < p.rows; ++r) {
        if (rhs[r] == 0) continue;
        p.columns.push_back({{{r, Rational(1)}}, *artificial_cost});
        p.columns.push_back({{{r, Rational(-1)}}, *artificial_cost});
      }
    }
    return p;
  }
};

// Adds up to `batch` pairs whose reduced cost is negative; returns how many.
std::size_t price(const IndexedSupport& s, Master& m, const std::vector<Rational>& dual, const Rational& threshold,
                  std::size_t batch) {
  std::vector<Rational> y(s.elements.size(), Rational(0));
  for (std::size_t r = 0; r < m.row_elements.size(); ++r) y[m.row_elements[r]] = dual[r];
  std::vector<std::pair<Rational, std::size_t>> candidates;
  for (std::size_t k = 0; k < s.pairs.size(); ++k) {
    if (m.in_master[k] || s.boundary[k].empty()) continue;
    Rational score = 0;
    for (const auto& [e, c] : s.boundary[k]) {
      if (y[e] != 0) score += c * y[e];
    }
    Rational excess = abs(score) - threshold;
    if (excess > 0) candidates.push_back({excess, k});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const std::size_t take = std::min(batch, candidates.size());
  for (std::size_t i = 0; i < take; ++i) m.add_pair(s, candidates[i].second);
  return take;
}

// Exact restricted-master column generation; the slow but sure path.
LpSolution exact_generation(const IndexedSupport& s, Master& m, const Rational& l1, const FillOptions& options,
                            std::size_t& iterations) {
  Rational penalty = 4 * l1 + 4;
  while (true) {
    ++iterations;
    LpSolution sol = solve_lp(m.build(s, Rational(1), penalty), options.limits);
    if (price(s, m, sol.dual, Rational(1), options.batch) > 0) continue;
    Rational artificial = 0;
    for (std::size_t j = 2 * m.pairs.size(); j < sol.x.size(); ++j) artificial += sol.x[j];
    if (artificial == 0) {
      sol.x.resize(2 * m.pairs.size());
      return sol;
    }
    while (true) {
      ++iterations;
      LpSolution feas = solve_lp(m.build(s, Rational(0), Rational(1)), options.limits);
      if (feas.objective == 0) break;
      if (price(s, m, feas.dual, Rational(0), options.batch) == 0) {
        throw Infeasible("target is not in the span of the support boundaries");
      }
    }
    penalty *= 16;
  }
}

// Is the target a combination of the support boundaries? Exact echelon reduction.
bool in_span(const IndexedSupport& s, const Master& m) {
  // keys are shortlex ranks, largest first: a boundary g + h - gh pivots on its
  // longest element, so substitution only brings in shorter ones
  std::vector<std::size_t> order(s.elements.size()), rank(s.elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ElementLess{}(s.elements[a], s.elements[b]); });
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  using Vec = std::map<std::size_t, Rational, std::greater<>>;
  std::unordered_map<std::size_t, Vec> pivots;
  auto reduce = [&](Vec v) {
    auto it = v.begin();
    while (it != v.end()) {
      auto p = pivots.find(it->first);
      if (p == pivots.end()) {
        ++it;
        continue;
      }
      const std::size_t key = it->first;
      const Rational f = it->second;
      for (const auto& [k, c] : p->second) {
        auto [jt, inserted] = v.try_emplace(k, 0);
        jt->second -= f * c;
        if (jt->second == 0) v.erase(jt);
      }
      it = v.upper_bound(key);
    }
    return v;
  };
  for (const auto& terms : s.boundary) {
    Vec v;
    for (const auto& [e, c] : terms) v[rank[e]] += c;
    std::erase_if(v, [](const auto& t) { return t.second == 0; });
    v = reduce(std::move(v));
    if (v.empty()) continue;
    const Rational lead = v.begin()->second;
    for (auto& [k, c] : v) c /= lead;
    pivots.emplace(v.begin()->first, std::move(v));
  }
  Vec b;
  for (std::size_t r = 0; r < m.row_elements.size(); ++r) {
    if (m.rhs[r] != 0) b[rank[m.row_elements[r]]] = m.rhs[r];
  }
  return reduce(std::move(b)).empty();
}

// Dual values on elements outside the master are free. Assigns them greedily,
// each from the pairs in which it is the last unassigned element, then returns
// the pairs outside the master whose constraint |y . d(p)| <= 1 still fails.
template <class Num>
std::vector<std::pair<Num, std::size_t>> extend_and_price(const IndexedSupport& s, std::vector<Num>& y,
                                                          std::vector<bool> known,
                                                          const std::vector<bool>& in_master, const Num& tol) {
  using std::abs;
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < s.pairs.size(); ++k) {
    if (!in_master[k] && !s.boundary[k].empty()) open.push_back(k);
  }
  std::vector<std::optional<Num>> lo(s.elements.size()), hi(s.elements.size());
  while (true) {
    std::vector<std::size_t> touched, still_open;
    for (std::size_t k : open) {
      std::size_t unknown = none, count = 0;
      Num fixed_part = 0, coeff = 0;
      for (const auto& [e, c] : s.boundary[k]) {
        if (known[e]) {
          fixed_part += c * y[e];
        } else {
          ++count;
          unknown = e;
          coeff = c;
        }
      }
      if (count == 0) continue;
      if (count > 1) {
        still_open.push_back(k);
        continue;
      }
      // |fixed_part + coeff * v| <= 1
      Num a = (Num(-1) - fixed_part) / coeff, b = (Num(1) - fixed_part) / coeff;
      if (b < a) std::swap(a, b);
      if (!lo[unknown] || a > *lo[unknown]) lo[unknown] = a;
      if (!hi[unknown] || b < *hi[unknown]) hi[unknown] = b;
      touched.push_back(unknown);
    }
    if (touched.empty()) break;
    for (std::size_t e : touched) {
      if (known[e]) continue;
      known[e] = true;
      const Num& a = *lo[e];
      const Num& b = *hi[e];
      if (a > b) y[e] = (a + b) / 2;
      else if (a > 0) y[e] = a;
      else if (b < 0) y[e] = b;
      else y[e] = 0;
    }
    open = std::move(still_open);
  }
  std::vector<std::pair<Num, std::size_t>> violations;
  for (std::size_t k = 0; k < s.pairs.size(); ++k) {
    if (in_master[k]) continue;
    Num score = 0;
    for (const auto& [e, c] : s.boundary[k]) {
      if (known[e]) score += c * y[e];
    }
    if (abs(score) > Num(1) + tol) violations.push_back({abs(score), k});
  }
  return violations;
}

// Master in floating point: columns 2k and 2k+1 of the pair list are +/- copies.
struct FloatMaster {
  WarmSimplex lp;
  std::vector<std::size_t> pairs;
  std::vector<bool> in_master;
  std::unordered_map<std::size_t, std::size_t> row_of;
  std::vector<std::size_t> row_elements;
  std::vector<Rational> rhs;
  std::unordered_map<std::size_t, std::pair<std::size_t, int>> column_of;  // lp column -> (pair, sign)

  void ensure_row(std::size_t elem, const Rational& value, std::optional<double> penalty) {
    if (!row_of.try_emplace(elem, row_elements.size()).second) return;
    row_elements.push_back(elem);
    rhs.push_back(value);
    lp.add_row(value.convert_to<double>(), penalty);
  }

  void add_pair(const IndexedSupport& s, std::size_t k) {
    if (in_master[k]) return;
    in_master[k] = true;
    pairs.push_back(k);
    for (const auto& [e, c] : s.boundary[k]) ensure_row(e, Rational(0), std::nullopt);
    for (int sign : {1, -1}) {
      std::vector<std::pair<std::size_t, double>> entries;
      for (const auto& [e, c] : s.boundary[k]) entries.push_back({row_of.at(e), double(sign * c)});
      column_of[lp.add_column(entries, 1.0)] = {k, sign};
    }
  }

  std::size_t price(const IndexedSupport& s, std::size_t batch) {
    std::vector<double> y(s.elements.size(), 0.0);
    std::vector<bool> known(s.elements.size(), false);
    const std::vector<double> dual = lp.dual();
    for (std::size_t r = 0; r < row_elements.size(); ++r) {
      y[row_elements[r]] = dual[r];
      known[row_elements[r]] = true;
    }
    auto candidates = extend_and_price<double>(s, y, known, in_master, 1e-7);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t take = std::min(batch, candidates.size());
    for (std::size_t i = 0; i < take; ++i) add_pair(s, candidates[i].second);
    return take;
  }
};

struct Certified {
  Chain2 witness;
  Rational value;
  std::vector<Rational> dual;  // by element id
};

// Re-solves the float basis exactly. Returns the certified optimum, or the
// pairs violating exact dual feasibility (empty when the basis itself is unusable).
std::variant<Certified, std::vector<std::size_t>> polish(const IndexedSupport& s, const FloatMaster& fm,
                                                          std::size_t limit) {
  const std::size_t m = fm.row_elements.size();
  std::vector<bool> covered(m, false);
  for (std::size_t r : fm.lp.artificial_basis_rows()) covered[r] = true;
  std::vector<std::size_t> local(m, WarmSimplex::npos), free_rows;
  for (std::size_t r = 0; r < m; ++r) {
    if (!covered[r]) {
      local[r] = free_rows.size();
      free_rows.push_back(r);
    }
  }
  std::vector<std::size_t> cols;
  for (std::size_t b : fm.lp.basis()) {
    if (b != WarmSimplex::npos) cols.push_back(b);
  }
  if (cols.size() != free_rows.size()) return std::vector<std::size_t>{};
  const std::size_t n = cols.size();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [k, sign] = fm.column_of.at(cols[j]);
    for (const auto& [e, c] : s.boundary[k]) {
      const std::size_t r = local[fm.row_of.at(e)];
      if (r != WarmSimplex::npos) a[j].push_back({r, Rational(sign * c)});
    }
  }
  std::vector<Rational> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = fm.rhs[free_rows[i]];
  auto x = solve_sparse_square(n, a, b);
  if (!x) return std::vector<std::size_t>{};
  Certified out;
  for (std::size_t j = 0; j < n; ++j) {
    if ((*x)[j] < 0) return std::vector<std::size_t>{};
    const auto [k, sign] = fm.column_of.at(cols[j]);
    out.witness.add(s.pairs[k], sign * (*x)[j]);
  }
  // the covered rows must balance too, since their artificials are held at zero
  std::vector<Rational> ax(m);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [k, sign] = fm.column_of.at(cols[j]);
    for (const auto& [e, c] : s.boundary[k]) ax[fm.row_of.at(e)] += sign * c * (*x)[j];
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (ax[r] != fm.rhs[r]) return std::vector<std::size_t>{};
  }
  auto yf = solve_sparse_square(n, a, std::vector<Rational>(n, Rational(1)), true);
  if (!yf) return std::vector<std::size_t>{};
  std::vector<Rational> y(s.elements.size(), Rational(0));
  std::vector<bool> known(s.elements.size(), false);
  for (std::size_t r : fm.row_elements) known[r] = true;
  for (std::size_t i = 0; i < n; ++i) y[fm.row_elements[free_rows[i]]] = (*yf)[i];
  // master pairs are dual feasible by optimality only up to rounding, so price them too
  auto violated = extend_and_price<Rational>(s, y, known, std::vector<bool>(s.pairs.size(), false), Rational(0));
  if (!violated.empty()) {
    // the worst violators only, so the float master stays small
    std::stable_sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::size_t> out_pairs;
    for (const auto& [v, k] : violated) {
      if (out_pairs.size() >= limit) break;
      if (!fm.in_master[k]) out_pairs.push_back(k);
    }
    return out_pairs;
  }
  out.dual = std::move(y);
  out.value = 0;
  for (const auto& [p, c] : out.witness.terms()) out.value += abs(c);
  return out;
}

}  // namespace

FillResult fill_norm_lp(const GroupContext& ctx, const Chain1& target, const std::vector<Pair2>& support,
                        const FillOptions& options) {
  IndexedSupport s(ctx, support);
  FillResult result;
  result.support = s.pairs;
  for (const auto& [e, c] : target.terms()) {
    if (e.group_ptr() != ctx.group()) throw GroupMismatch("target not in the context group");
    s.id(e);
  }
  auto set_dual = [&](const std::vector<std::size_t>& row_elements, const std::vector<Rational>& dual) {
    for (const auto& e : s.elements) result.dual[e] = 0;
    for (std::size_t r = 0; r < row_elements.size(); ++r) result.dual[s.elements[row_elements[r]]] = dual[r];
  };
  if (target.empty()) {
    set_dual({}, {});
    return result;
  }
  // torsion in N/[G,N] makes such targets rational boundaries, so test membership directly
  if (target.size() == 1 && ctx.group()->is_finite()) {
    const Element& x = target.terms().begin()->first;
    const auto sub = mixed_commutator_subgroup(ctx);
    if (!std::binary_search(sub.begin(), sub.end(), x, ElementLess{})) {
      throw Infeasible(format(x) + " is not in [G,N]");
    }
  }

  Master m;
  m.in_master.assign(s.pairs.size(), false);
  for (const auto& [e, c] : target.terms()) m.ensure_row(s.id(e), c);

  auto finish_exact = [&](const LpSolution& sol) {
    result.value = 0;
    result.witness = Chain2{};
    for (std::size_t i = 0; i < m.pairs.size(); ++i) {
      result.witness.add(s.pairs[m.pairs[i]], sol.x[2 * i] - sol.x[2 * i + 1]);
      result.value += sol.x[2 * i] + sol.x[2 * i + 1];
    }
    result.master_columns = m.pairs.size();
    set_dual(m.row_elements, sol.dual);
    return result;
  };

  if (options.explicit_lp) {
    for (std::size_t k = 0; k < s.pairs.size(); ++k) {
      if (!s.boundary[k].empty()) m.add_pair(s, k);
    }
    ++result.iterations;
    LpSolution sol = solve_lp(m.build(s, Rational(1), std::nullopt), options.limits);
    if (sol.status == LpStatus::Infeasible) throw Infeasible("target is not in the span of the support boundaries");
    return finish_exact(sol);
  }

  // Column generation in floating point with penalized artificials on the
  // target rows; the final basis is then re-solved and priced exactly.
  FloatMaster fm;
  fm.in_master.assign(s.pairs.size(), false);
  double penalty = (4 * target.l1() + 4).convert_to<double>();
  for (const auto& [e, c] : target.terms()) fm.ensure_row(s.id(e), c, penalty);
  bool fixed = false;
  std::size_t polishes = 0;
  const std::size_t float_batch = std::max<std::size_t>(options.batch, 64);
  // degenerate rounds: the extended duals keep pricing columns that do not move the objective
  double best_objective = std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;
  while (true) {
    ++result.iterations;
    fm.lp.solve(options.limits);
    const double objective = fm.lp.objective();
    stalled = objective < best_objective - 1e-9 * (1 + std::abs(objective)) ? 0 : stalled + 1;
    best_objective = std::min(best_objective, objective);
    if (stalled < 3 && fm.price(s, float_batch) > 0) continue;
    stalled = 0;
    if (!fixed) {
      if (fm.lp.artificial_mass() > 1e-6) {
        if (penalty > 1e12) {
          if (!in_span(s, m)) throw Infeasible("target is not in the span of the support boundaries");
          break;
        }
        penalty *= 16;
        fm.lp.set_penalty(penalty);
        best_objective = std::numeric_limits<double>::infinity();
        continue;
      }
      fm.lp.fix_artificials();
      fixed = true;
      best_objective = std::numeric_limits<double>::infinity();
      continue;
    }
    auto exact = polish(s, fm, float_batch);
    if (auto* c = std::get_if<Certified>(&exact)) {
      result.value = c->value;
      result.witness = std::move(c->witness);
      result.master_columns = fm.pairs.size();
      for (std::size_t e = 0; e < s.elements.size(); ++e) result.dual[s.elements[e]] = c->dual[e];
      return result;
    }
    const auto& violations = std::get<std::vector<std::size_t>>(exact);
    if (violations.empty() || ++polishes > 32) break;
    for (std::size_t k : violations) fm.add_pair(s, k);
  }
  for (std::size_t k : fm.pairs) m.add_pair(s, k);
  return finish_exact(exact_generation(s, m, target.l1(), options, result.iterations));
}

IntegralFillResult integral_fill_norm(const GroupContext& ctx, const Element& x, const std::vector<Pair2>& support,
                                      std::size_t node_budget, const LpLimits& limits) {
  IndexedSupport s(ctx, support);
  Master m;
  m.in_master.assign(s.pairs.size(), false);
  m.ensure_row(s.id(x), 1);
  for (std::size_t k = 0; k < s.pairs.size(); ++k) {
    if (!s.boundary[k].empty()) m.add_pair(s, k);
  }
  const LpProblem base = m.build(s, Rational(1), std::nullopt);
  const std::size_t nvars = base.columns.size();

  struct Bound {
    std::size_t var;
    bool upper;
    BigInt value;
  };
  IntegralFillResult result;
  std::optional<BigInt> best;
  std::vector<Rational> best_x;

  auto solve_node = [&](const std::vector<Bound>& bounds) {
    LpProblem p = base;
    for (const auto& b : bounds) {
      const std::size_t r = p.rows++;
      p.rhs.push_back(Rational(b.value));
      p.columns[b.var].entries.push_back({r, Rational(1)});
      p.columns.push_back({{{r, Rational(b.upper ? 1 : -1)}}, 0});
    }
    return solve_lp(p, limits);
  };

  std::vector<std::vector<Bound>> stack{{}};
  while (!stack.empty()) {
    if (++result.nodes > node_budget) throw ResourceLimit("branch-and-bound node budget exhausted");
    std::vector<Bound> bounds = std::move(stack.back());
    stack.pop_back();
    LpSolution sol = solve_node(bounds);
    if (sol.status != LpStatus::Optimal) continue;
    if (best && ceil(sol.objective) >= *best) continue;
    std::size_t frac = nvars;
    for (std::size_t j = 0; j < nvars; ++j) {
      if (!is_integer(sol.x[j])) {
        frac = j;
        break;
      }
    }
    if (frac == nvars) {
      best = boost::multiprecision::numerator(sol.objective);
      best_x.assign(sol.x.begin(), sol.x.begin() + nvars);
      continue;
    }
    auto up = bounds;
    up.push_back({frac, false, ceil(sol.x[frac])});
    auto down = std::move(bounds);
    down.push_back({frac, true, floor(sol.x[frac])});
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }
  if (!best) throw Infeasible("no integral chain over the support has boundary " + format(x));
  result.value = *best;
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    result.witness.add(s.pairs[m.pairs[i]], best_x[2 * i] - best_x[2 * i + 1]);
  }
  return result;
}

Rational scl_upper_from_fill(const GroupContext& ctx, const Element& x, long long n, const std::vector<Pair2>& support,
                             const FillOptions& options) {
  if (n < 1) throw PreconditionViolated("power must be at least 1");
  const FillResult r = fill_norm_lp(ctx, single(power(x, n)), support, options);
  return (r.value + 1) / Rational(4 * n);
}

DualCheck verify_dual_certificate(const GroupContext& ctx, const DualVector& dual, const std::vector<Pair2>& support,
                                  const Chain1& target) {
  auto value = [&](const Element& e) -> const Rational& {
    auto it = dual.find(e);
    if (it == dual.end()) throw MissingValue("dual has no value at " + format(e));
    return it->second;
  };
  DualCheck out;
  out.feasible = true;
  for (const auto& p : support) {
    if (!is_admissible(ctx, p)) throw PreconditionViolated("support pair is not admissible");
    const Rational v = value(p.second) - value(mul(p.first, p.second)) + value(p.first);
    if (out.feasible && abs(v) > 1) {
      out.feasible = false;
      out.violation = p;
    }
  }
  for (const auto& [e, c] : target.terms()) out.objective += c * value(e);
  return out;
}

Json chain2_to_json(const Chain2& c) {
  Json out = Json::array();
  for (const auto& [p, coeff] : c.terms()) {
    out.push_back({{"pair", {format(p.first), format(p.second)}}, {"coeff", to_string(coeff)}});
  }
  return out;
}

Chain2 chain2_from_json(const GroupContext& ctx, const Json& j) {
  if (!j.is_array()) throw ParseError("chain must be an array");
  Chain2 c;
  for (const auto& t : j) {
    if (!t.contains("pair") || !t.contains("coeff") || t.at("pair").size() != 2) throw ParseError("malformed chain term");
    Pair2 p{element_from_json(ctx.group(), t.at("pair")[0]), element_from_json(ctx.group(), t.at("pair")[1])};
    if (!is_admissible(ctx, p)) throw PreconditionViolated("chain pair is not admissible");
    const Json& cj = t.at("coeff");
    c.add(p, cj.is_string() ? parse_rational(cj.get<std::string>()) : Rational(cj.get<long long>()));
  }
  return c;
}

Json chain1_to_json(const Chain1& c) {
  Json out = Json::array();
  for (const auto& [e, coeff] : c.terms()) out.push_back({{"element", format(e)}, {"coeff", to_string(coeff)}});
  return out;
}

Json dual_to_json(const DualVector& d) {
  Json out = Json::array();
  for (const auto& [e, v] : d) out.push_back({{"element", format(e)}, {"value", to_string(v)}});
  return out;
}

DualVector dual_from_json(const GroupContext& ctx, const Json& j) {
  DualVector d;
  for (const auto& t : j) {
    const Json& v = t.at("value");
    d[element_from_json(ctx.group(), t.at("element"))] =
        v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long long>());
  }
  return d;
}

}  // namespace gqm
