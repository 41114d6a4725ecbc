#pragma once

#include "gqm/group.hpp"
#include "gqm/group_json.hpp"
#include "gqm/lp.hpp"
#include "gqm/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace gqm {

struct Pair2 {
  Element first;
  Element second;

  friend bool operator==(const Pair2&, const Pair2&) = default;
};

struct Pair2Less {
  bool operator()(const Pair2& x, const Pair2& y) const {
    if (x.first.word() != y.first.word()) return shortlex_less(x.first.word(), y.first.word());
    return shortlex_less(x.second.word(), y.second.word());
  }
};

/// A pair generates C2' when one of its coordinates lies in N.
bool is_admissible(const GroupContext& ctx, const Pair2& p);

/// Sparse exact chain; zero coefficients are never stored.
template <class Key, class Less>
class SparseChain {
 public:
  using Map = std::map<Key, Rational, Less>;

  void add(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  void add(const SparseChain& other, const Rational& scale = Rational(1)) {
    for (const auto& [k, c] : other.terms_) add(k, c * scale);
  }
  Rational coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational l1() const {
    Rational s = 0;
    for (const auto& [k, c] : terms_) s += abs(c);
    return s;
  }
  bool is_integral() const {
    for (const auto& [k, c] : terms_)
      if (!is_integer(c)) return false;
    return true;
  }
  friend bool operator==(const SparseChain& a, const SparseChain& b) { return a.terms_ == b.terms_; }

 private:
  Map terms_;
};

using Chain2 = SparseChain<Pair2, Pair2Less>;
using Chain1 = SparseChain<Element, ElementLess>;
using DualVector = std::map<Element, Rational, ElementLess>;

Chain1 single(const Element& x, const Rational& c = Rational(1));

/// d(g1, g2) = g2 - g1 g2 + g1, extended linearly.
Chain1 boundary2(const Chain2& c);
Chain1 boundary2(const Pair2& p);

/// ([g,h], hg) - (g, h) + (h, g), whose boundary is [g,h]. Requires h in N.
Chain2 witness_commutator_chain(const GroupContext& ctx, const Element& g, const Element& h);

/// All admissible pairs with both coordinates in the ball of the given radius,
/// sorted by Pair2Less.
std::vector<Pair2> ball_support(const GroupContext& ctx, std::size_t radius, std::size_t cap = kDefaultElementCap);
/// All admissible pairs of a finite group.
std::vector<Pair2> full_support(const GroupContext& ctx);
/// The pairs carrying the terms of a chain.
std::vector<Pair2> chain_support(const Chain2& c);

struct FillResult {
  Rational value;
  Chain2 witness;
  DualVector dual;
  std::vector<Pair2> support;
  std::size_t master_columns = 0;
  std::size_t iterations = 0;
};

struct FillOptions {
  LpLimits limits;
  /// Columns added per pricing round.
  std::size_t batch = 16;
  /// Solve the explicit LP over the whole support instead of column generation.
  bool explicit_lp = false;
};

/// min l1(c) subject to d(c) = target over chains supported on `support`.
/// Throws Infeasible when the target is not in the span of the boundaries.
FillResult fill_norm_lp(const GroupContext& ctx, const Chain1& target, const std::vector<Pair2>& support,
                        const FillOptions& options = {});

struct IntegralFillResult {
  BigInt value;
  Chain2 witness;
  std::size_t nodes = 0;
};

/// Minimal l1 norm of an integral chain with boundary x over `support`, by
/// branch and bound on the LP relaxation. Throws ResourceLimit past `node_budget`.
IntegralFillResult integral_fill_norm(const GroupContext& ctx, const Element& x, const std::vector<Pair2>& support,
                                      std::size_t node_budget = 20000, const LpLimits& limits = {});

/// (||x^n||' + 1) / (4n) with the norm restricted to `support`.
Rational scl_upper_from_fill(const GroupContext& ctx, const Element& x, long long n, const std::vector<Pair2>& support,
                             const FillOptions& options = {});

struct DualCheck {
  bool feasible = false;
  Rational objective;
  /// First violated pair, when infeasible.
  std::optional<Pair2> violation;
};

/// |f(g2) - f(g1 g2) + f(g1)| <= 1 on every support pair, and <f, target>.
/// Throws MissingValue when f is undefined on an incident element.
DualCheck verify_dual_certificate(const GroupContext& ctx, const DualVector& dual, const std::vector<Pair2>& support,
                                  const Chain1& target);

Json chain2_to_json(const Chain2& c);
Chain2 chain2_from_json(const GroupContext& ctx, const Json& j);
Json chain1_to_json(const Chain1& c);
Json dual_to_json(const DualVector& d);
DualVector dual_from_json(const GroupContext& ctx, const Json& j);

}  // namespace gqm
