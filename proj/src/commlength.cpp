#include "gqm/commlength.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace gqm {

const char* to_string(ClKind k) {
  switch (k) {
    case ClKind::Exact: return "Exact";
    case ClKind::UpperBound: return "UpperBound";
    case ClKind::NotFound: return "NotFound";
  }
  return "?";
}

Element multiply_commutators(const GroupPtr& group, const std::vector<CommutatorPair>& pairs) {
  Element x = Element::identity(group);
  for (const auto& [g, h] : pairs) x = mul(x, commutator(g, h));
  return x;
}

namespace {

struct Generator {
  Element value;
  CommutatorPair pair;
};

// Distinct nontrivial [g,h] with g from `gs`, h from `hs` in N; the first pair
// in (g, h) order names each value. Sorted by value.
std::vector<Generator> commutator_generators(const GroupContext& ctx, const std::vector<Element>& gs,
                                             const std::vector<Element>& hs) {
  std::unordered_map<Element, CommutatorPair, ElementHash> first;
  std::vector<Element> ns;
  for (const auto& h : hs) {
    if (ctx.in_normal_subgroup(h)) ns.push_back(h);
  }
  for (const auto& g : gs) {
    for (const auto& h : ns) {
      Element c = commutator(g, h);
      if (!c.is_identity()) first.try_emplace(c, CommutatorPair{g, h});
    }
  }
  std::vector<Generator> out;
  out.reserve(first.size());
  for (auto& [c, p] : first) out.push_back({c, p});
  std::sort(out.begin(), out.end(), [](const Generator& a, const Generator& b) { return ElementLess{}(a.value, b.value); });
  return out;
}

std::vector<Element> sorted_elements(const GroupPtr& g, std::size_t cap) {
  auto all = enumerate_group(g, cap);
  std::sort(all.begin(), all.end(), ElementLess{});
  return all;
}

void check_deadline(const SearchConfig& cfg) {
  if (cfg.deadline && std::chrono::steady_clock::now() > *cfg.deadline) {
    throw ResourceLimit("commutator search time budget exceeded");
  }
}

// Products of at most `depth` generators, with parent links for witnesses.
struct Levels {
  struct Node {
    Element parent;
    std::size_t gen;
  };
  std::unordered_map<Element, Node, ElementHash> nodes;
  std::vector<Element> frontier;
  std::size_t depth = 0;

  explicit Levels(const GroupPtr& g) {
    Element e = Element::identity(g);
    nodes.emplace(e, Node{e, 0});
    frontier.push_back(e);
  }

  void grow(const std::vector<Generator>& gens, const SearchConfig& cfg) {
    std::vector<Element> next;
    for (const auto& cur : frontier) {
      check_deadline(cfg);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Element y = mul(cur, gens[i].value);
        if (nodes.try_emplace(y, Node{cur, i}).second) {
          next.push_back(y);
          if (nodes.size() > cfg.element_cap) throw ResourceLimit("commutator search exceeded the element cap");
        }
      }
    }
    frontier = std::move(next);
    ++depth;
  }

  std::vector<CommutatorPair> path(const Element& x, const std::vector<Generator>& gens) const {
    std::vector<CommutatorPair> out;
    Element cur = x;
    while (!cur.is_identity()) {
      const Node& n = nodes.at(cur);
      out.push_back(gens[n.gen].pair);
      cur = n.parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

ClResult bounded_search(const GroupContext& ctx, const Element& x, const SearchConfig& cfg) {
  if (cfg.ball_radius < 1 || cfg.max_factors < 1) throw PreconditionViolated("ball radius and max factors must be >= 1");
  const auto ball = enumerate_ball(ctx.group(), cfg.ball_radius, cfg.element_cap);
  const auto gens = commutator_generators(ctx, ball, ball);
  ClResult r;
  auto found = [&](std::vector<CommutatorPair> w) {
    r.kind = ClKind::UpperBound;
    r.value = w.size();
    r.witness = std::move(w);
    return r;
  };
  Levels levels(ctx.group());
  if (!cfg.meet_in_middle) {
    // breadth first; the last layer is only probed, never stored
    for (std::size_t k = 1; k <= cfg.max_factors; ++k) {
      while (levels.depth + 1 < k) levels.grow(gens, cfg);
      for (const auto& gen : gens) {
        Element rest = mul(x, inv(gen.value));
        if (levels.nodes.count(rest)) {
          auto w = levels.path(rest, gens);
          w.push_back(gen.pair);
          return found(std::move(w));
        }
      }
    }
    return r;
  }
  for (std::size_t k = 1; k <= cfg.max_factors; ++k) {
    const std::size_t b = k / 2, a = k - b;
    while (levels.depth < b) levels.grow(gens, cfg);
    // enumerate a-tuples u and look up u^{-1} x among products of at most b
    std::vector<std::size_t> seq;
    std::optional<std::vector<CommutatorPair>> hit;
    auto dfs = [&](auto&& self, const Element& u) -> void {
      if (hit) return;
      if (seq.size() == a) {
        Element rest = mul(inv(u), x);
        if (levels.nodes.count(rest)) {
          std::vector<CommutatorPair> w;
          for (std::size_t i : seq) w.push_back(gens[i].pair);
          auto tail = levels.path(rest, gens);
          w.insert(w.end(), tail.begin(), tail.end());
          hit = std::move(w);
        }
        return;
      }
      if (seq.size() == 0) check_deadline(cfg);
      for (std::size_t i = 0; i < gens.size() && !hit; ++i) {
        seq.push_back(i);
        self(self, mul(u, gens[i].value));
        seq.pop_back();
      }
    };
    dfs(dfs, Element::identity(ctx.group()));
    if (hit) return found(std::move(*hit));
  }
  return r;
}

}  // namespace

std::optional<std::size_t> ClTable::value(const Element& x) const {
  auto it = length.find(x);
  if (it == length.end()) return std::nullopt;
  return it->second;
}

std::vector<CommutatorPair> ClTable::witness(const Element& x) const {
  std::vector<CommutatorPair> out;
  Element cur = x;
  while (!cur.is_identity()) {
    const auto& [prev, pair] = parent.at(cur);
    out.push_back(pair);
    cur = prev;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ClTable cl_table(const GroupContext& ctx, std::size_t cap) {
  if (!ctx.group()->is_finite()) throw PreconditionViolated("exact commutator lengths need a finite group");
  const auto all = sorted_elements(ctx.group(), cap);
  const auto gens = commutator_generators(ctx, all, all);
  ClTable t;
  Element e = Element::identity(ctx.group());
  t.length.emplace(e, 0);
  std::deque<Element> queue{e};
  while (!queue.empty()) {
    Element cur = queue.front();
    queue.pop_front();
    const std::size_t d = t.length.at(cur);
    for (const auto& g : gens) {
      Element y = mul(cur, g.value);
      if (t.length.try_emplace(y, d + 1).second) {
        t.parent.emplace(y, std::make_pair(cur, g.pair));
        queue.push_back(y);
      }
    }
  }
  return t;
}

ClResult cl_mixed(const GroupContext& ctx, const Element& x, const SearchConfig& cfg) {
  if (x.group_ptr() != ctx.group()) throw GroupMismatch("element is not in the context group");
  ClResult r;
  if (x.is_identity()) {
    r.kind = ClKind::Exact;
    r.value = 0;
    return r;
  }
  if (ctx.group()->is_finite()) {
    const ClTable t = cl_table(ctx, cfg.element_cap);
    if (auto v = t.value(x)) {
      r.kind = ClKind::Exact;
      r.value = *v;
      r.witness = t.witness(x);
    }
    return r;
  }
  return bounded_search(ctx, x, cfg);
}

ClResult cl_plain(const GroupPtr& group, const Element& x, const SearchConfig& cfg) {
  return cl_mixed(GroupContext::full(group), x, cfg);
}

long long cl_lower_from_qm(const Rational& defect_upper, const Rational& f_at_x) {
  if (defect_upper <= 0) throw NonpositiveDefect("defect bound must be positive");
  return static_cast<long long>(ceil((abs(f_at_x) / defect_upper + 1) / 2));
}

SclReport scl_mixed_report(const GroupContext& ctx, const Element& x, const SearchConfig& cfg,
                           const std::vector<long long>& powers, const std::vector<QmCertificate>& certificates) {
  SclReport rep;
  for (long long n : powers) {
    if (n < 1) throw PreconditionViolated("powers must be positive");
    ClResult r = cl_mixed(ctx, power(x, n), cfg);
    if (r.value) {
      Rational bound = Rational(static_cast<long long>(*r.value)) / n;
      if (!rep.has_upper || bound < rep.upper) {
        rep.upper = bound;
        rep.has_upper = true;
        rep.upper_power = n;
      }
    }
    rep.powers.push_back({n, std::move(r)});
  }
  for (const auto& c : certificates) {
    if (c.defect_upper <= 0) throw NonpositiveDefect("defect bound must be positive");
    Rational lower = abs(c.f_at_x) / (2 * c.defect_upper);
    if (!rep.lower_certificate || lower > rep.lower) {
      rep.lower = lower;
      rep.lower_certificate = c;
    }
  }
  return rep;
}

RewriteResult lemma84_rewrite(const GroupContext& ctx, const std::vector<RewriteInput>& inputs) {
  const GroupPtr& g = ctx.group();
  RewriteResult out;
  Element lhs = Element::identity(g), gamma = Element::identity(g);
  auto conj_pair = [](const Element& c, const Element& u, const Element& v) {
    return CommutatorPair{conjugate(c, u), conjugate(c, v)};
  };
  for (const auto& in : inputs) {
    for (const Element* e : {&in.f, &in.g, &in.alpha, &in.beta}) {
      if (e->group_ptr() != g) throw GroupMismatch("rewrite input not in the context group");
    }
    if (ctx.project(in.f) != ctx.project(in.alpha) || ctx.project(in.g) != ctx.project(in.beta)) {
      throw PreconditionViolated("q(f) = q(alpha) and q(g) = q(beta) are required");
    }
    const Element h1 = mul(inv(in.alpha), in.f);
    const Element h2 = mul(inv(in.beta), in.g);
    const Element c = mul(gamma, mul(in.alpha, in.beta));
    out.witness.push_back(conj_pair(c, inv(in.beta), h1));
    out.witness.push_back(conj_pair(c, h1, h2));
    // [h2, alpha^{-1}] = [alpha, alpha^{-1} h2 alpha]
    out.witness.push_back(conj_pair(c, in.alpha, conjugate(inv(in.alpha), h2)));
    lhs = mul(lhs, commutator(in.f, in.g));
    gamma = mul(gamma, commutator(in.alpha, in.beta));
  }
  out.product = mul(lhs, inv(gamma));
  out.clbound = 3 * inputs.size();
  if (!ctx.in_normal_subgroup(out.product) || multiply_commutators(g, out.witness) != out.product) {
    throw std::logic_error("rewrite witness does not reproduce the product");
  }
  for (const auto& [a, h] : out.witness) {
    if (!ctx.in_normal_subgroup(h)) throw std::logic_error("rewrite witness has an argument outside N");
  }
  return out;
}

std::pair<std::size_t, std::size_t> pigeonhole_window(const GroupPtr& w_group, const std::vector<Element>& ws) {
  if (!w_group->is_finite() || ws.size() != w_group->order()) {
    throw PreconditionViolated("need exactly #W elements of a finite group W");
  }
  std::unordered_map<Element, std::size_t, ElementHash> seen;
  Element v = Element::identity(w_group);
  seen.emplace(v, 0);
  for (std::size_t k = 1; k <= ws.size(); ++k) {
    if (ws[k - 1].group_ptr() != w_group) throw GroupMismatch("window element not in W");
    v = mul(v, ws[k - 1]);
    auto [it, inserted] = seen.try_emplace(v, k);
    if (!inserted) return {it->second + 1, k};
  }
  throw std::logic_error("pigeonhole failed");
}

Element central_section_reduce(const GroupContext& ctx, const Element& alpha, const Element& beta,
                               const std::function<Element(const Element&)>& t) {
  const GroupPtr& g = ctx.group();
  const Element tb = t(beta);
  if (tb.group_ptr() != g) throw GroupMismatch("section value not in the context group");
  if (ctx.project(tb) != ctx.project(beta)) throw PreconditionViolated("t(beta) is not in the coset of beta");
  for (std::size_t i = 0; i < g->generator_count(); ++i) {
    Element s = generator(g, i);
    if (mul(s, tb) != mul(tb, s)) {
      throw CentralityViolated(format(tb) + " does not commute with " + format(s));
    }
  }
  const Element b = mul(inv(tb), beta);
  if (commutator(alpha, beta) != commutator(alpha, b)) {
    throw CentralityViolated("[alpha, beta] != [alpha, b]");
  }
  return b;
}

SectionData compute_section_constants(const GroupContext& ctx, const std::map<Element, Element, ElementLess>& section,
                                      std::size_t cap) {
  const GroupPtr& g = ctx.group();
  if (!g->is_finite()) throw PreconditionViolated("section constants need a finite group");
  SectionData out;
  out.section = section;
  for (const auto& q : enumerate_group(ctx.quotient_group(), cap)) {
    auto it = section.find(q);
    if (it == section.end()) throw PreconditionViolated("section undefined at " + format(q));
    if (it->second.group_ptr() != g || ctx.project(it->second) != q) {
      throw PreconditionViolated("q(s(" + format(q) + ")) != " + format(q));
    }
    if (q.is_identity() && !it->second.is_identity()) throw PreconditionViolated("s(e) must be e");
  }
  std::vector<Element> image;
  for (const auto& [q, s] : section) image.push_back(s);
  std::sort(image.begin(), image.end(), ElementLess{});
  image.erase(std::unique(image.begin(), image.end()), image.end());

  out.generated = subgroup_closure(g, image, cap);
  std::vector<Element> gen_comms;
  for (const auto& a : out.generated)
    for (const auto& b : out.generated) gen_comms.push_back(commutator(a, b));
  out.generated_derived = subgroup_closure(g, gen_comms, cap);
  out.mixed = mixed_commutator_subgroup(ctx, cap);
  const std::unordered_set<Element, ElementHash> mixed(out.mixed.begin(), out.mixed.end());
  std::size_t meet = 0;
  for (const auto& x : out.generated_derived) meet += mixed.count(x);
  out.ms = out.generated_derived.size() / meet;

  const ClTable mixed_cl = cl_table(ctx, cap);
  const ClTable plain_cl = cl_table(GroupContext::full(g), cap);

  // products of k (s(Q), s(Q))-commutators, memoized as sets
  std::unordered_set<Element, ElementHash> base;
  for (const auto& a : image)
    for (const auto& b : image) base.insert(commutator(a, b));
  std::vector<Element> basis(base.begin(), base.end());
  std::sort(basis.begin(), basis.end(), ElementLess{});
  std::vector<Element> level = basis;
  for (std::size_t k = 1; k <= out.ms; ++k) {
    std::sort(level.begin(), level.end(), ElementLess{});
    for (const auto& p : level) {
      if (!mixed.count(p)) continue;
      Rational ratio = Rational(static_cast<long long>(*mixed_cl.value(p))) / static_cast<long long>(k);
      if (!out.argmax_product || ratio > out.cs) {
        out.cs = ratio;
        out.argmax_k = k;
        out.argmax_product = p;
      }
    }
    if (k == out.ms) break;
    std::unordered_set<Element, ElementHash> next;
    for (const auto& p : level)
      for (const auto& c : basis) next.insert(mul(p, c));
    level.assign(next.begin(), next.end());
  }

  out.verified = true;
  for (const auto& x : out.mixed) {
    SectionCheck c{x, *mixed_cl.value(x), *plain_cl.value(x)};
    if (Rational(static_cast<long long>(c.cl_mixed)) > (out.cs + 3) * static_cast<long long>(c.cl_plain)) {
      out.verified = false;
    }
    out.checks.push_back(c);
  }
  return out;
}

}  // namespace gqm
