#include "gqm/acceptance.hpp"

#include "gqm/abelian.hpp"
#include "gqm/chains.hpp"
#include "gqm/error.hpp"
#include "gqm/small_groups.hpp"
#include "gqm/surfaces.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

namespace gqm {

Fixture fixture_from_json(const Json& j) {
  try {
    Fixture f{j.at("name").get<std::string>(), context_from_json(j.at("context")), {}, {}, {}, {}, {}, {}, {}};
    const auto& g = f.ctx.group();
    for (const auto& e : j.at("elements")) f.elements.push_back(element_from_json(g, e));
    if (j.contains("search")) {
      f.search.ball_radius = j["search"].value("ball_radius", f.search.ball_radius);
      f.search.max_factors = j["search"].value("max_factors", f.search.max_factors);
    }
    f.scl_powers = j.value("scl_powers", std::vector<long long>{1});
    if (j.contains("lp")) {
      f.lp_radii = j["lp"].value("radii", std::vector<std::size_t>{});
      f.lp_powers = j["lp"].value("powers", std::vector<long long>{1});
    }
    for (const auto& q : j.value("qms", Json::array())) f.qms.push_back(qm_from_json(f.ctx, q));
    if (j.contains("section")) {
      const auto& q = f.ctx.quotient_group();
      f.section[Element::identity(q)] = Element::identity(g);
      for (const auto& s : j.at("section")) {
        f.section[element_from_json(q, s.at("q"))] = element_from_json(g, s.at("g"));
      }
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed fixture: ") + e.what());
  }
}

Fixture load_fixture(const std::string& path) { return fixture_from_json(load_json_file(path)); }

std::vector<Fixture> load_fixtures(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<Fixture> out;
  for (const auto& p : paths) out.push_back(load_fixture(p));
  return out;
}

Rational SclBounds::best_lower() const {
  Rational best = 0;
  for (const auto& b : lower) best = std::max(best, b.value);
  return best;
}

std::optional<Rational> SclBounds::best_upper() const {
  std::optional<Rational> best;
  for (const auto& b : upper)
    if (!best || b.value < *best) best = b.value;
  return best;
}

bool SclBounds::consistent() const {
  const auto u = best_upper();
  return !u || best_lower() <= *u;
}

SclBounds scl_bounds(const Fixture& f, const Element& x, bool with_lp) {
  SclBounds b;
  for (const auto& q : f.qms) {
    if (q.homogeneous && q.g_invariant && q.bounds.d_upper) b.lower.push_back({"bavard:" + q.name(), bavard_lower(q, x)});
  }
  const SclReport rep = scl_mixed_report(f.ctx, x, f.search, f.scl_powers);
  for (const auto& [n, r] : rep.powers) {
    if (r.value) b.upper.push_back({"search:n=" + std::to_string(n), Rational(static_cast<long long>(*r.value)) / n});
  }
  if (!with_lp) return b;
  for (std::size_t radius : f.lp_radii) {
    const auto support = ball_support(f.ctx, radius);
    for (long long n : f.lp_powers) {
      const std::string tag = "lp:n=" + std::to_string(n) + ",radius=" + std::to_string(radius);
      try {
        b.upper.push_back({tag, scl_upper_from_fill(f.ctx, x, n, support)});
      } catch (const Infeasible&) {
        b.infeasible.push_back(tag);
      }
    }
  }
  return b;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Failure {
  std::string message;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

Element random_element(const GroupPtr& g, std::size_t max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, g->generator_count() - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  Word w;
  for (std::size_t i = len(rng); i > 0; --i) {
    w.push_back({static_cast<std::uint32_t>(gen(rng)), static_cast<std::int8_t>(sign(rng) ? 1 : -1)});
  }
  return canonicalize(g, w);
}

Element random_normal(const GroupContext& ctx, std::size_t max_len, std::mt19937_64& rng) {
  for (int i = 0; i < 10000; ++i) {
    Element h = random_element(ctx.group(), max_len, rng);
    if (ctx.in_normal_subgroup(h)) return h;
  }
  throw Failure{"could not sample an element of N"};
}

const Fixture& fixture(const std::vector<Fixture>& fs, const std::string& name) {
  for (const auto& f : fs)
    if (f.name == name) return f;
  throw Failure{"missing fixture " + name};
}

std::string str(const Rational& r) { return to_string(r); }

// C1
std::string finite_oracle(const std::vector<Fixture>& fs) {
  std::size_t checked = 0;
  for (const char* name : {"d4", "s3"}) {
    const GroupContext& ctx = fixture(fs, name).ctx;
    const auto all = enumerate_group(ctx.group());
    std::vector<Element> comms;
    for (const auto& g : all)
      for (const auto& h : all)
        if (ctx.in_normal_subgroup(h)) comms.push_back(commutator(g, h));
    std::map<Element, std::size_t, ElementLess> best;
    best[Element::identity(ctx.group())] = 0;
    auto put = [&](const Element& x, std::size_t k) {
      auto [it, inserted] = best.try_emplace(x, k);
      if (!inserted && k < it->second) it->second = k;
    };
    for (const auto& c1 : comms) {
      put(c1, 1);
      for (const auto& c2 : comms) {
        const Element p = mul(c1, c2);
        put(p, 2);
        for (const auto& c3 : comms) put(mul(p, c3), 3);
      }
    }
    for (const auto& x : mixed_commutator_subgroup(ctx)) {
      const ClResult r = cl_mixed(ctx, x);
      require(best.count(x) == 1, std::string(name) + ": oracle misses " + format(x));
      require(r.kind == ClKind::Exact && r.value == best.at(x),
              std::string(name) + ": cl(" + format(x) + ") differs from the oracle");
      ++checked;
    }
  }
  return std::to_string(checked) + " elements of [G,N] agree";
}

// C2
std::string boundary_identity(const std::vector<Fixture>& fs, std::mt19937_64& rng) {
  std::size_t done = 0;
  for (const char* name : {"f2", "d4", "z2_z3"}) {
    const GroupContext& ctx = fixture(fs, name).ctx;
    const std::size_t quota = name == std::string("z2_z3") ? 66 : 67;
    for (std::size_t i = 0; i < quota;) {
      const Element g = random_element(ctx.group(), 5, rng);
      const Element h = random_normal(ctx, 6, rng);
      if (g.is_identity() || h.is_identity() || g == h) continue;
      const Chain2 c = witness_commutator_chain(ctx, g, h);
      require(boundary2(c) == single(commutator(g, h)), std::string(name) + ": boundary differs at " + format(g) + ", " + format(h));
      require(c.l1() == 3, std::string(name) + ": l1 != 3 at " + format(g) + ", " + format(h));
      ++i;
      ++done;
    }
  }
  return std::to_string(done) + " witness chains with boundary [g,h] and l1 = 3";
}

// C3
// Chain with boundary [g1,h1]...[gk,hk] and at most 4k - 1 terms.
Chain2 product_chain(const GroupContext& ctx, const std::vector<CommutatorPair>& pairs) {
  Chain2 c;
  Element partial = Element::identity(ctx.group());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Element ci = commutator(pairs[i].first, pairs[i].second);
    c.add(witness_commutator_chain(ctx, pairs[i].first, pairs[i].second));
    if (i > 0) c.add(Pair2{partial, ci}, Rational(-1));
    partial = mul(partial, ci);
  }
  return c;
}

std::string lp_sandwich(const std::vector<Fixture>& fs) {
  std::ostringstream out;
  std::size_t lps = 0;
  for (const auto& f : fs) {
    for (const auto& x : f.elements) {
      const ClResult cl = cl_mixed(f.ctx, x, f.search);
      // the bound is a theorem once the support carries the chain of a cl witness
      std::vector<Pair2> extra;
      if (cl.value && *cl.value > 0) {
        const Chain2 w = product_chain(f.ctx, cl.witness);
        require(boundary2(w) == single(x), f.name + ": cl witness chain has the wrong boundary");
        require(w.l1() <= Rational(4 * static_cast<long long>(*cl.value) - 1), f.name + ": cl witness chain too long");
        extra = chain_support(w);
      }
      std::optional<Rational> prev;
      bool prev_feasible = false;
      for (std::size_t radius : f.lp_radii) {
        auto support = ball_support(f.ctx, radius);
        for (const auto& p : extra) {
          if (!std::binary_search(support.begin(), support.end(), p, Pair2Less{})) support.push_back(p);
        }
        std::sort(support.begin(), support.end(), Pair2Less{});
        const Chain1 target = single(x);
        std::optional<Rational> value;
        try {
          const FillResult r = fill_norm_lp(f.ctx, target, support);
          const DualCheck d = verify_dual_certificate(f.ctx, r.dual, support, target);
          require(d.feasible, f.name + ": infeasible dual for " + format(x));
          require(d.objective == r.value, f.name + ": dual objective != primal for " + format(x));
          require(boundary2(r.witness) == target, f.name + ": primal witness has the wrong boundary");
          require(r.witness.l1() == r.value, f.name + ": primal witness norm differs from the value");
          value = r.value;
          ++lps;
        } catch (const Infeasible&) {
          require(!prev_feasible, f.name + ": feasibility lost when the support grew for " + format(x));
        }
        if (value && cl.value) {
          require(*value <= Rational(4 * static_cast<long long>(*cl.value) - 1),
                  f.name + ": ||x||' > 4 cl - 1 for " + format(x));
        }
        if (value && prev) require(*value <= *prev, f.name + ": norm increased with the radius for " + format(x));
        if (value) {
          prev = value;
          prev_feasible = true;
        }
      }
      out << f.name << ":" << format(x) << "=" << (prev ? str(*prev) : "inf") << " ";
    }
  }
  return std::to_string(lps) + " LPs; " + out.str();
}

// C4
std::string f2_commutator(const std::vector<Fixture>& fs) {
  const Fixture& f = fixture(fs, "f2");
  const Element x = parse_element(f.ctx.group(), "[a,b]");
  require(!f.qms.empty(), "f2 fixture ships no quasimorphism");
  const Quasimorphism& q = f.qms.front();
  require(q(x) == 1, "configured f([a,b]) != 1");
  require(*q.bounds.d_upper == 1, "configured defect bound is not 1");
  const Rational lower = bavard_lower(q, x);
  require(lower == Rational(1, 2), "Bavard lower bound " + str(lower) + " != 1/2");
  std::ostringstream out;
  out << "lower=" << str(lower);
  std::optional<Rational> prev;
  for (std::size_t radius : {2, 3, 4}) {
    std::string v = "inf";
    try {
      const Rational u = scl_upper_from_fill(f.ctx, x, 2, ball_support(f.ctx, radius));
      require(!prev || u <= *prev, "LP upper bound increased with the radius");
      prev = u;
      v = str(u);
    } catch (const Infeasible&) {
      require(!prev, "LP became infeasible at a larger radius");
    }
    out << " upper(n=2,r=" << radius << ")=" << v;
  }
  require(prev && *prev >= Rational(1, 2) && *prev <= 1, "radius-4 LP upper bound outside [1/2, 1]");
  return out.str();
}

// C5
std::string separation(const std::vector<Fixture>& fs) {
  const Fixture& f = fixture(fs, "f2_swap");
  const auto& g = f.ctx.group();
  const Element x = parse_element(g, "a (z a z) A (z A z)");
  const Element z = parse_element(g, "z");
  require(f.ctx.in_normal_subgroup(x), "x is not in N");
  for (long long n = 1; n <= 4; ++n) {
    const Element lhs = power(x, 2 * n);
    const Element xn = power(x, -n);
    require(f.ctx.in_normal_subgroup(xn), "x^-n is not in N");
    require(lhs == commutator(z, xn), "x^(2n) != [z, x^-n] at n = " + std::to_string(n));
    require(!lhs.is_identity(), "x^(2n) is trivial");
    // one (G,N)-commutator, and x^(2n) != e: cl = 1, scl <= 1/(2n)
  }
  const ClResult r = cl_mixed(f.ctx, power(x, 2), f.search);
  require(r.value == 1u, "search did not find cl(x^2) = 1");
  const SclReport rep = scl_mixed_report(f.ctx, x, f.search, {2});
  require(rep.has_upper && rep.upper <= Rational(1, 2), "scl upper bound above 1/2");
  std::size_t candidates = 0;
  const Element e = Element::identity(g);
  for (const auto& w : enumerate_ball(GroupSpec::free(2), 4)) {
    if (w.is_identity()) continue;
    const Quasimorphism q = symmetrize(homogenized_counting_qm(g, w.word()), f.ctx, {e, z});
    require(q.homogeneous && q.g_invariant, "symmetrized candidate is not flagged invariant");
    require(q(x) == 0 && bavard_lower(Rational(1), q(x)) == 0, "candidate " + q.name() + " is nonzero at x");
    ++candidates;
  }
  for (const auto& q : f.qms) require(bavard_lower(q, x) == 0, "fixture qm " + q.name() + " gives a positive bound");
  return "x^(2n) = [z,x^-n] for n <= 4; search scl upper " + str(rep.upper) + "; " + std::to_string(candidates) +
         " symmetrized candidates vanish";
}

// C6
std::string surfaces(std::mt19937_64& rng) {
  auto f4 = GroupSpec::free(4);
  const GroupContext ctx = GroupContext::full(f4);
  for (std::size_t m = 1; m <= 3; ++m) {
    for (int t = 0; t < 10; ++t) {
      std::vector<CommutatorPair> pairs;
      for (std::size_t i = 0; i < m; ++i) pairs.emplace_back(random_element(f4, 4, rng), random_element(f4, 4, rng));
      const Element x = multiply_commutators(f4, pairs);
      const SurfaceReport r = validate(build_from_decomposition(ctx, pairs, x), ctx);
      require(r.s == 4 * m - 1 && r.e == 6 * m - 1 && r.p == 1, "decomposition counts differ at m = " + std::to_string(m));
      require(r.genus == static_cast<long long>(m), "decomposition genus differs at m = " + std::to_string(m));
      require(r.euler_identities && r.orientable && r.gn_labelled, "decomposition surface fails an identity");
    }
  }
  auto f2 = GroupSpec::free(2);
  const GroupContext c2 = GroupContext::full(f2);
  std::size_t glued = 0;
  for (int t = 0; t < 30; ++t) {
    Element g = t == 0 ? parse_element(f2, "a") : random_element(f2, 4, rng);
    Element h = t == 0 ? parse_element(f2, "b") : random_element(f2, 4, rng);
    if (commutator(g, h).is_identity()) continue;
    const Element x = commutator(g, h);
    const DeltaSurface s = build_from_chain(c2, witness_commutator_chain(c2, g, h), x);
    const SurfaceReport r = validate(s, c2);
    require(r.connected && r.genus == 1 && r.boundary_edge_count == 1 && s.edges[s.boundary[0]] == x,
            "witness surface for [" + format(g) + "," + format(h) + "] is not a genus-1 surface with boundary [g,h]");
    ++glued;
  }
  return "decompositions m = 1..3 match s = 4m-1, e = 6m-1, p = 1; " + std::to_string(glued) + " witness surfaces of genus 1";
}

// C7
std::string rewrite(const std::vector<Fixture>& fs, std::mt19937_64& rng) {
  auto f4 = GroupSpec::free(4);
  auto z3 = cyclic_group(3, "c");
  const Element c = generator(z3, 0);
  const GroupContext f4ctx(f4, Homomorphism(f4, z3, {c, c, c, Element::identity(z3)}));
  const GroupContext& d4 = fixture(fs, "d4").ctx;
  std::size_t done = 0;
  for (const GroupContext* ctx : {&f4ctx, &d4}) {
    for (int t = 0; t < 100; ++t) {
      std::vector<RewriteInput> in;
      const int k = 1 + t % 4;
      for (int i = 0; i < k; ++i) {
        const Element al = random_element(ctx->group(), 4, rng), be = random_element(ctx->group(), 4, rng);
        in.push_back({mul(al, random_normal(*ctx, 4, rng)), mul(be, random_normal(*ctx, 4, rng)), al, be});
      }
      const RewriteResult r = lemma84_rewrite(*ctx, in);
      Element expected = Element::identity(ctx->group()), subtract = expected;
      for (const auto& i : in) {
        expected = mul(expected, commutator(i.f, i.g));
        subtract = mul(subtract, commutator(i.alpha, i.beta));
      }
      expected = mul(expected, inv(subtract));
      require(r.product == expected, "rewrite product differs from the input product");
      require(multiply_commutators(ctx->group(), r.witness) == r.product, "rewrite witness does not multiply back");
      require(r.witness.size() <= 3 * in.size(), "rewrite uses more than 3k commutators");
      for (const auto& [g, h] : r.witness) require(ctx->in_normal_subgroup(h), "rewrite commutator is not mixed");
      ++done;
    }
  }
  return std::to_string(done) + " instances in F4 -> Z/3 and D4";
}

// C8
std::string freeindex() {
  const std::vector<std::pair<std::string, GroupPtr>> groups{
      {"Z/2", cyclic_group(2)}, {"Z/3", cyclic_group(3)}, {"Z/4", cyclic_group(4)}, {"Z/6", cyclic_group(6)},
      {"S3", symmetric_group(3)}, {"Z/2xZ/2", GroupSpec::direct({cyclic_group(2, "x"), cyclic_group(2, "y")})}};
  std::size_t pairs = 0;
  for (const auto& [an, a] : groups)
    for (const auto& [bn, b] : groups) {
      const FreeIndexCheck c = check_freeindex(a, b);
      require(c.agree, an + " * " + bn + ": " + c.presentation.to_string() + " vs " + c.tensor.to_string());
      ++pairs;
    }
  const auto c46 = check_freeindex(cyclic_group(4), cyclic_group(6));
  require(c46.presentation.to_string() == "Z/2", "(Z/4, Z/6) does not give Z/2");
  const auto c23 = check_freeindex(cyclic_group(2), cyclic_group(3));
  require(c23.presentation.is_trivial(), "(Z/2, Z/3) is not trivial");
  return std::to_string(pairs) + " ordered pairs agree; (Z/4,Z/6) -> Z/2, (Z/2,Z/3) -> 0";
}

// C9
std::string extensions(const std::vector<Fixture>& fs) {
  const Fixture& f = fixture(fs, "f2_swap");
  const auto& g = f.ctx.group();
  const auto& q = f.ctx.quotient_group();
  const Element e = Element::identity(g), z = parse_element(g, "z");
  require(!f.qms.empty(), "f2_swap fixture ships no quasimorphism");
  const Quasimorphism& base = f.qms.front();
  require(base.homogeneous && base.g_invariant && base.bounds.d_upper, "fixture qm lacks flags or bound");
  const Quasimorphism avg = extend_by_averaging(base, f.ctx, {{}, {}, {Element::identity(q), generator(q, 0)}, {e, z}});
  const Quasimorphism sec = extend_by_section(base, f.ctx, {{e, Rational(0)}, {z, Rational(0)}});
  require(avg.bounds.d_upper && *avg.bounds.d_upper == *base.bounds.d_upper, "averaging bound is not D(f) + 3 * 0");
  require(sec.bounds.dpp_upper && *sec.bounds.dpp_upper == *base.bounds.d_upper, "section bound is not D(f)");
  std::size_t restricted = 0;
  for (const auto& x : enumerate_ball(g, 5)) {
    if (!f.ctx.in_normal_subgroup(x)) continue;
    const Rational fx = base(x);
    require(avg(x) == fx && sec(x) == fx, "extension differs from f at " + format(x));
    ++restricted;
  }
  const auto ball = enumerate_ball(g, 3);
  ElementPairs pairs;
  for (const auto& a : ball)
    for (const auto& b : ball) pairs.emplace_back(a, b);
  const DefectWitness d = defect_lower(avg, pairs);
  require(d.value <= *avg.bounds.d_upper, "sampled D(f') = " + str(d.value) + " exceeds the recorded bound");
  const DefectWitness dpp = nqm_defect_lower(sec, f.ctx, ball_sample(f.ctx, 3, 3, true));
  require(dpp.value <= *sec.bounds.dpp_upper, "sampled D''(f') = " + str(dpp.value) + " exceeds the recorded bound");
  return std::to_string(restricted) + " elements of N restrict exactly; sampled D(f') = " + str(d.value) + " <= " +
         str(*avg.bounds.d_upper) + ", D''(f') = " + str(dpp.value) + " <= " + str(*sec.bounds.dpp_upper);
}

// C10
std::string section_constants(const std::vector<Fixture>& fs) {
  std::ostringstream out;
  for (const char* name : {"d4", "s3"}) {
    const Fixture& f = fixture(fs, name);
    const auto all = enumerate_group(f.ctx.group());
    std::map<Element, std::vector<Element>, ElementLess> fibres;
    for (const auto& g : all) fibres[f.ctx.project(g)].push_back(g);
    // every section with s(e) = e (the quotient here is Z/2)
    std::size_t sections = 0;
    Rational worst = 0;
    for (const auto& [qe, fibre] : fibres) {
      if (qe.is_identity()) continue;
      for (const auto& g : fibre) {
        std::map<Element, Element, ElementLess> s{{Element::identity(f.ctx.quotient_group()), Element::identity(f.ctx.group())},
                                                  {qe, g}};
        const SectionData d = compute_section_constants(f.ctx, s);
        require(d.verified, std::string(name) + ": section check failed");
        for (const auto& c : d.checks) {
          require(Rational(static_cast<long long>(c.cl_mixed)) <= (d.cs + 3) * static_cast<long long>(c.cl_plain),
                  std::string(name) + ": cl_{G,N} > (C(s)+3) cl_G at " + format(c.x));
        }
        worst = std::max(worst, d.cs);
        ++sections;
      }
    }
    out << name << ": " << sections << " sections, max C(s) = " << str(worst) << "; ";
  }
  return out.str();
}

// C11
std::string duality(const std::vector<Fixture>& fs) {
  std::size_t checked = 0;
  for (const auto& f : fs) {
    for (const auto& x : f.elements) {
      const SclBounds b = scl_bounds(f, x);
      const auto u = b.best_upper();
      require(b.consistent(), f.name + ": lower bound " + str(b.best_lower()) + " exceeds upper bound " +
                                  (u ? str(*u) : std::string("none")) + " at " + format(x));
      checked += b.lower.size() * b.upper.size();
    }
  }
  return std::to_string(checked) + " lower/upper pairs ordered correctly";
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& fixture_dir, std::uint64_t seed, std::optional<int> only) {
  std::vector<CriterionResult> results;
  std::vector<Fixture> fs;
  std::string load_error;
  try {
    fs = load_fixtures(fixture_dir);
  } catch (const std::exception& e) {
    load_error = e.what();
  }
  std::mt19937_64 rng(seed);
  struct Item {
    int id;
    const char* title;
    double limit;
    std::function<std::string()> run;
  };
  const std::vector<Item> items{
      {1, "finite-group cl oracle", 5, [&] { return finite_oracle(fs); }},
      {2, "witness chain boundary identity", 0, [&] { return boundary_identity(fs, rng); }},
      {3, "LP sandwich and monotonicity", 0, [&] { return lp_sandwich(fs); }},
      {4, "scl([a,b]) in F2", 60, [&] { return f2_commutator(fs); }},
      {5, "separation example", 0, [&] { return separation(fs); }},
      {6, "surface counts and genus", 0, [&] { return surfaces(rng); }},
      {7, "commutator rewrite suite", 0, [&] { return rewrite(fs, rng); }},
      {8, "free-product quotient", 30, [&] { return freeindex(); }},
      {9, "extension bounds", 0, [&] { return extensions(fs); }},
      {10, "section constants", 0, [&] { return section_constants(fs); }},
      {11, "duality never inverts", 0, [&] { return duality(fs); }},
  };
  for (const auto& item : items) {
    if (only && *only != item.id) continue;
    CriterionResult r{item.id, item.title, false, {}, 0};
    const auto start = Clock::now();
    try {
      if (!load_error.empty()) throw Failure{"fixtures: " + load_error};
      r.detail = item.run();
      r.pass = true;
    } catch (const Failure& f) {
      r.detail = f.message;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.pass && item.limit > 0 && r.seconds >= item.limit) {
      r.pass = false;
      r.detail += " (runtime over " + std::to_string(static_cast<int>(item.limit)) + " s)";
    }
    results.push_back(r);
  }
  return results;
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << (r.pass ? "PASS" : "FAIL") << " C" << r.id << " " << r.title << " (" << r.seconds << " s): " << r.detail;
  return out.str();
}

}  // namespace gqm
