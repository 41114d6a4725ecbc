#include "gqm/abelian.hpp"
#include "gqm/acceptance.hpp"
#include "gqm/chains.hpp"
#include "gqm/commlength.hpp"
#include "gqm/error.hpp"
#include "gqm/group_json.hpp"
#include "gqm/quasimorphisms.hpp"
#include "gqm/small_groups.hpp"
#include "gqm/surfaces.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace gqm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitFalsified = 4;

using Clock = std::chrono::steady_clock;

struct Options {
  std::string ctx_path;
  std::string out_path;
  std::optional<long long> budget_ms;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<std::string> argv;
};

// Thrown when an embedded certificate fails to re-verify or bounds cross.
struct Falsified {
  std::string what;
};

Json number(const Rational& v, const char* kind, const std::string& source = {}) {
  Json j = {{"value", to_string(v)}, {"kind", kind}};
  if (!source.empty()) j["source"] = source;
  return j;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

// FNV-1a over the command line and the canonical dumps of every file read.
class Digest {
 public:
  void add(const std::string& s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    h_ ^= 0xff;
    h_ *= 0x100000001b3ULL;
  }
  std::string hex() const { return hex64(h_); }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct Session {
  Options opt;
  Digest digest;
  Clock::time_point start = Clock::now();
  std::optional<Clock::time_point> deadline;
  Json results = Json::object();
  Json certificates = Json::object();
  std::vector<std::string> summary;
  bool not_found = false;

  Json load(const std::string& path) {
    Json j = load_json_file(path);
    digest.add(path);
    digest.add(j.dump());
    return j;
  }

  // A context file is either a bare context or a fixture holding one.
  Json context_json() {
    if (opt.ctx_path.empty()) throw ParseError("--ctx is required for this command");
    return load(opt.ctx_path);
  }

  GroupContext context() {
    const Json j = context_json();
    return context_from_json(j.contains("context") ? j.at("context") : j);
  }

  std::optional<Fixture> fixture() {
    const Json j = context_json();
    if (!j.contains("context")) return std::nullopt;
    return fixture_from_json(j);
  }

  SearchConfig search(std::size_t radius, std::size_t factors) const {
    SearchConfig cfg;
    cfg.ball_radius = radius;
    cfg.max_factors = factors;
    cfg.deadline = deadline;
    return cfg;
  }

  FillOptions fill_options() const {
    FillOptions o;
    o.limits.deadline = deadline;
    return o;
  }
};

Json pairs_to_json(const std::vector<CommutatorPair>& pairs) {
  Json out = Json::array();
  for (const auto& [g, h] : pairs) out.push_back({format(g), format(h)});
  return out;
}

std::vector<CommutatorPair> pairs_from_json(const GroupPtr& g, const Json& j) {
  std::vector<CommutatorPair> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ParseError("a commutator pair is a two-element array");
    out.emplace_back(element_from_json(g, p[0]), element_from_json(g, p[1]));
  }
  return out;
}

const char* cl_kind(ClKind k) {
  switch (k) {
    case ClKind::Exact: return "exact";
    case ClKind::UpperBound: return "upper-bound";
    case ClKind::NotFound: break;
  }
  return "not-found";
}

std::size_t element_order(const Element& x, std::size_t cap = 1 << 16) {
  Element p = x;
  for (std::size_t n = 1; n <= cap; ++n) {
    if (p.is_identity()) return n;
    p = mul(p, x);
  }
  throw ResourceLimit("element order exceeds " + std::to_string(cap));
}

std::vector<Quasimorphism> load_qms(Session& s, const GroupContext& ctx, const std::string& path) {
  const Json j = s.load(path);
  std::vector<Quasimorphism> out;
  if (j.is_array()) {
    for (const auto& q : j) out.push_back(qm_from_json(ctx, q));
  } else {
    out.push_back(qm_from_json(ctx, j));
  }
  return out;
}

Json bounds_to_json(const DefectBounds& b) {
  Json j = Json::object();
  if (b.d_upper) j["D"] = number(*b.d_upper, "upper-bound");
  if (b.dprime_upper) j["D_prime"] = number(*b.dprime_upper, "upper-bound");
  if (b.dpp_upper) j["D_double_prime"] = number(*b.dpp_upper, "upper-bound");
  return j;
}

// cl

struct ClArgs {
  std::string element;
  bool plain = false;
  std::size_t max_factors = 2;
  std::size_t ball_radius = 2;
};

void run_cl(Session& s, const ClArgs& a) {
  const GroupContext ctx = s.context();
  const Element x = parse_element(ctx.group(), a.element);
  const ClResult r = a.plain ? cl_plain(ctx.group(), x, s.search(a.ball_radius, a.max_factors))
                             : cl_mixed(ctx, x, s.search(a.ball_radius, a.max_factors));
  Json res = {{"element", format(x)}, {"mode", a.plain ? "plain" : "mixed"}, {"found", r.value.has_value()}};
  if (r.value) {
    res["cl"] = number(Rational(static_cast<long long>(*r.value)), cl_kind(r.kind));
    const bool ok = multiply_commutators(ctx.group(), r.witness) == x;
    bool in_n = true;
    for (const auto& [g, h] : r.witness) in_n = in_n && (a.plain || ctx.in_normal_subgroup(h));
    s.certificates["witness"] = pairs_to_json(r.witness);
    s.certificates["witness_verified"] = ok && in_n;
    if (!ok || !in_n) throw Falsified{"commutator witness does not multiply to " + format(x)};
    s.summary.push_back("cl(" + format(x) + ") " + (r.kind == ClKind::Exact ? "= " : "<= ") +
                        std::to_string(*r.value));
  } else {
    res["cl"] = {{"value", nullptr}, {"kind", "not-found"}};
    s.not_found = true;
    s.summary.push_back("no commutator witness for " + format(x) + " within the search budget");
  }
  s.results = res;
}

// scl

struct SclArgs {
  std::string element;
  std::vector<long long> powers{1, 2};
  std::optional<std::size_t> support_radius;
  std::string qm_file;
  std::size_t max_factors = 2;
  std::size_t ball_radius = 2;
};

void run_scl(Session& s, const SclArgs& a) {
  const auto fixture = s.fixture();
  const GroupContext ctx = fixture ? fixture->ctx : s.context();
  const Element x = parse_element(ctx.group(), a.element);
  std::vector<Quasimorphism> qms;
  if (!a.qm_file.empty()) qms = load_qms(s, ctx, a.qm_file);
  else if (fixture) qms = fixture->qms;

  std::vector<long long> powers = a.powers;
  if (ctx.group()->is_finite()) powers.push_back(static_cast<long long>(element_order(x)));
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  for (long long n : powers) {
    if (n < 1) throw ParseError("powers must be positive");
  }

  Json lower = Json::array(), upper = Json::array(), infeasible = Json::array();
  Rational best_lower = 0;
  std::string lower_source = "trivial";
  lower.push_back(number(0, "lower-bound", "trivial"));
  for (const auto& q : qms) {
    if (!(q.homogeneous && q.g_invariant && q.bounds.d_upper)) {
      s.summary.push_back("skipped " + q.name() + ": needs homogeneous, g_invariant and d_upper");
      continue;
    }
    const Rational v = bavard_lower(q, x);
    lower.push_back(number(v, "lower-bound", "bavard:" + q.name()));
    if (v > best_lower) {
      best_lower = v;
      lower_source = "bavard:" + q.name();
    }
  }

  std::optional<Rational> best_upper;
  std::string upper_source;
  auto offer = [&](const Rational& v, const std::string& src) {
    upper.push_back(number(v, "upper-bound", src));
    if (!best_upper || v < *best_upper) {
      best_upper = v;
      upper_source = src;
    }
  };
  const SclReport rep = scl_mixed_report(ctx, x, s.search(a.ball_radius, a.max_factors), powers);
  Json search_witnesses = Json::array();
  for (const auto& [n, r] : rep.powers) {
    if (!r.value) continue;
    if (multiply_commutators(ctx.group(), r.witness) != power(x, n)) {
      throw Falsified{"search witness for x^" + std::to_string(n) + " does not multiply out"};
    }
    offer(Rational(static_cast<long long>(*r.value)) / n, "search:n=" + std::to_string(n));
    search_witnesses.push_back({{"n", n}, {"pairs", pairs_to_json(r.witness)}});
  }
  if (a.support_radius) {
    const auto support = ball_support(ctx, *a.support_radius);
    for (long long n : a.powers) {
      const std::string tag = "lp:n=" + std::to_string(n) + ",radius=" + std::to_string(*a.support_radius);
      try {
        offer(scl_upper_from_fill(ctx, x, n, support, s.fill_options()), tag);
      } catch (const Infeasible&) {
        infeasible.push_back(tag);
      }
    }
  }

  Json res = {{"element", format(x)}, {"lower_bounds", lower}, {"upper_bounds", upper},
              {"lp_infeasible", infeasible}};
  res["interval"] = {{"lower", number(best_lower, "lower-bound", lower_source)},
                     {"upper", best_upper ? number(*best_upper, "upper-bound", upper_source) : Json(nullptr)}};
  if (best_upper && *best_upper == best_lower) res["scl"] = number(best_lower, "exact");
  s.certificates["search_witnesses"] = search_witnesses;
  s.results = res;
  s.summary.push_back("scl(" + format(x) + ") in [" + to_string(best_lower) + ", " +
                      (best_upper ? to_string(*best_upper) : std::string("?")) + "]");
  if (best_upper && best_lower > *best_upper) {
    s.results["falsified"] = true;
    throw Falsified{"lower bound " + to_string(best_lower) + " exceeds upper bound " + to_string(*best_upper)};
  }
}

// fill

struct FillArgs {
  std::string element;
  std::optional<std::size_t> support_radius;
  long long power = 1;
};

void run_fill(Session& s, const FillArgs& a) {
  const GroupContext ctx = s.context();
  const Element x = parse_element(ctx.group(), a.element);
  if (a.power < 1) throw ParseError("--power must be positive");
  const bool full = !a.support_radius;
  if (full && !ctx.group()->is_finite()) throw ParseError("--support-radius is required for infinite groups");
  const auto support = full ? full_support(ctx) : ball_support(ctx, *a.support_radius);
  const Chain1 target = single(power(x, a.power));
  Json res = {{"element", format(x)}, {"power", a.power}, {"support_pairs", support.size()},
              {"support", full ? "full" : "ball:" + std::to_string(*a.support_radius)}};
  try {
    const FillResult r = fill_norm_lp(ctx, target, support, s.fill_options());
    const DualCheck d = verify_dual_certificate(ctx, r.dual, support, target);
    const bool primal_ok = boundary2(r.witness) == target && r.witness.l1() == r.value;
    const bool dual_ok = d.feasible && d.objective == r.value;
    res["norm"] = number(r.value, full ? "exact" : "upper-bound");
    res["restricted_value"] = number(r.value, "exact");
    res["feasible"] = true;
    s.certificates["primal"] = chain2_to_json(r.witness);
    s.certificates["dual"] = dual_to_json(r.dual);
    s.certificates["primal_verified"] = primal_ok;
    s.certificates["dual_verified"] = dual_ok;
    s.results = res;
    if (!primal_ok || !dual_ok) throw Falsified{"fill certificates do not re-verify"};
    s.summary.push_back("||" + format(x) + (a.power > 1 ? "^" + std::to_string(a.power) : "") + "||' " +
                        (full ? "= " : "<= ") + to_string(r.value) + " over " + std::to_string(support.size()) +
                        " pairs");
  } catch (const Infeasible& e) {
    res["feasible"] = false;
    res["reason"] = e.what();
    s.results = res;
    s.not_found = true;
    s.summary.push_back("target is not a boundary over this support");
  }
}

// surface

struct SurfaceArgs {
  std::string mode;
  std::string element;
  std::string pairs;
  std::string chain_file;
  std::string surface_file;
  std::size_t max_factors = 2;
  std::size_t ball_radius = 2;
};

void report_surface(Session& s, const DeltaSurface& surf, const GroupContext& ctx) {
  s.certificates["surface"] = surface_to_json(surf);
  const SurfaceReport rep = validate(surf, ctx);
  s.results["report"] = report_to_json(rep);
  if (rep.genus) s.results["genus"] = number(Rational(*rep.genus), "exact");
  // the embedded surface must survive a round trip through its own JSON
  const SurfaceReport again = validate(surface_from_json(ctx, s.certificates["surface"]), ctx);
  s.certificates["surface_verified"] = again.genus == rep.genus && again.euler_identities == rep.euler_identities;
  if (rep.genus && !rep.euler_identities) throw Falsified{"Euler identities fail"};
  std::ostringstream line;
  line << "surface: s=" << rep.s << " e=" << rep.e << " p=" << rep.p;
  if (rep.genus) line << " genus " << *rep.genus;
  s.summary.push_back(line.str());
}

void run_surface(Session& s, const SurfaceArgs& a) {
  const GroupContext ctx = s.context();
  if (a.mode == "from-decomp") {
    std::vector<CommutatorPair> pairs;
    std::optional<Element> x;
    if (!a.element.empty()) x = parse_element(ctx.group(), a.element);
    if (!a.pairs.empty()) {
      pairs = pairs_from_json(ctx.group(), Json::parse(a.pairs));
    } else {
      if (!x) throw ParseError("from-decomp needs --pairs or an element");
      const ClResult r = cl_mixed(ctx, *x, s.search(a.ball_radius, a.max_factors));
      if (!r.value) throw ResourceLimit("no commutator decomposition of " + format(*x) + " found");
      pairs = r.witness;
    }
    if (!x) x = multiply_commutators(ctx.group(), pairs);
    s.results = {{"element", format(*x)}, {"pairs", pairs_to_json(pairs)}, {"m", pairs.size()}};
    report_surface(s, build_from_decomposition(ctx, pairs, *x), ctx);
  } else if (a.mode == "from-chain") {
    if (a.chain_file.empty() || a.element.empty()) throw ParseError("from-chain needs --chain and an element");
    const Element x = parse_element(ctx.group(), a.element);
    const Chain2 c = chain2_from_json(ctx, s.load(a.chain_file));
    const DeltaSurface surf = build_from_chain(ctx, c, x);
    s.results = {{"element", format(x)}, {"pruned_triangles", surf.pruned_triangles}, {"warnings", surf.warnings}};
    report_surface(s, surf, ctx);
  } else if (a.mode == "validate") {
    if (a.surface_file.empty()) throw ParseError("validate needs --surface");
    const Json j = s.load(a.surface_file);
    const DeltaSurface surf = surface_from_json(ctx, j.contains("surface") ? j.at("surface") : j);
    try {
      const SurfaceReport rep = validate(surf, ctx);
      s.results = {{"valid", true}, {"report", report_to_json(rep)}};
      s.summary.push_back("surface is valid");
    } catch (const MalformedComplex& e) {
      s.results = {{"valid", false}, {"reason", e.what()}};
      throw Falsified{e.what()};
    }
  } else {
    throw ParseError("unknown surface mode " + a.mode);
  }
}

// qm

struct QmArgs {
  std::string action;
  std::string element;
  std::string qm_file;
  std::string method;
  std::string extension;
  std::size_t g_radius = 2;
  std::size_t x_radius = 2;
};

Json declared(const Quasimorphism& q) {
  return {{"name", q.name()}, {"homogeneous", q.homogeneous}, {"g_invariant", q.g_invariant},
          {"bounds", bounds_to_json(q.bounds)}, {"metadata", q.metadata}};
}

// Sampled defects must stay within the declared bounds.
Json sampled_defects(Session& s, const Quasimorphism& q, const GroupContext& ctx, const QmArgs& a) {
  const ElementPairs all = ball_sample(ctx, a.g_radius, a.x_radius, false);
  const ElementPairs normal = ball_sample(ctx, a.g_radius, a.x_radius, true);
  const DefectWitness d = defect_lower(q, all);
  const DefectWitness dp = conjugation_defect_lower(q, ctx, normal);
  const DefectWitness dpp = nqm_defect_lower(q, ctx, normal);
  auto entry = [](const DefectWitness& w) {
    Json j = number(w.value, "lower-bound", "sampled");
    if (w.witness) j["pair"] = {format(w.witness->first), format(w.witness->second)};
    return j;
  };
  Json out = {{"D", entry(d)}, {"D_prime", entry(dp)}, {"D_double_prime", entry(dpp)}};
  auto check = [&](const std::optional<Rational>& bound, const DefectWitness& w, const char* name) {
    if (bound && w.value > *bound) {
      s.results["falsified"] = true;
      throw Falsified{std::string("sampled ") + name + " = " + to_string(w.value) + " exceeds declared " +
                      to_string(*bound)};
    }
  };
  s.results["sampled"] = out;
  check(q.bounds.d_upper, d, "D");
  check(q.bounds.dprime_upper, dp, "D'");
  check(q.bounds.dpp_upper, dpp, "D''");
  return out;
}

void run_qm(Session& s, const QmArgs& a) {
  const GroupContext ctx = s.context();
  if (a.qm_file.empty()) throw ParseError("--qm-file is required");
  const Json spec = s.load(a.qm_file);
  if (a.action == "eval" || a.action == "bavard") {
    const Quasimorphism q = qm_from_json(ctx, spec);
    if (a.element.empty()) throw ParseError("an element is required");
    Json vals = Json::array();
    {
      const Element x = parse_element(ctx.group(), a.element);
      Json v = {{"element", format(x)}, {"value", number(q(x), "exact")}};
      if (a.action == "bavard") {
        const Rational b = bavard_lower(q, x);
        v["scl_lower"] = number(b, "lower-bound", "bavard:" + q.name());
        s.summary.push_back("scl(" + format(x) + ") >= " + to_string(b));
      } else {
        s.summary.push_back(q.name() + "(" + format(x) + ") = " + to_string(q(x)));
      }
      vals.push_back(v);
    }
    s.results = {{"qm", declared(q)}, {"values", vals}};
  } else if (a.action == "defect") {
    const Quasimorphism q = qm_from_json(ctx, spec);
    s.results = {{"qm", declared(q)}};
    const Json d = sampled_defects(s, q, ctx, a);
    s.summary.push_back("sampled D(" + q.name() + ") >= " + d["D"]["value"].get<std::string>());
  } else if (a.action == "extend") {
    if (a.method != "section" && a.method != "averaging") throw ParseError("--method is section or averaging");
    Json ext = a.extension.empty() ? Json::object() : Json::parse(a.extension);
    if (!ext.is_object()) throw ParseError("--extension must be a JSON object");
    ext["kind"] = "extended";
    ext["method"] = a.method;
    ext["base"] = spec;
    const Quasimorphism base = qm_from_json(ctx, spec);
    const Quasimorphism q = qm_from_json(ctx, ext);
    // f' restricts to f on N
    std::size_t checked = 0;
    for (const auto& g : enumerate_ball(ctx.group(), a.x_radius)) {
      if (!ctx.in_normal_subgroup(g)) continue;
      ++checked;
      if (q(g) != base(g)) {
        s.results = {{"qm", declared(q)}, {"restricts", false}, {"violation", format(g)}};
        throw Falsified{"extension differs from the base at " + format(g)};
      }
    }
    s.results = {{"qm", declared(q)}, {"base", declared(base)}, {"restricts", true}, {"restriction_checked", checked}};
    sampled_defects(s, q, ctx, a);
    s.summary.push_back("extension restricts to the base on " + std::to_string(checked) + " elements of N");
  } else {
    throw ParseError("unknown qm action " + a.action);
  }
}

// freeproduct-quotient

GroupPtr group_arg(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) return group_from_json(Json::parse(text));
  if (text.size() >= 2) {
    const char c = text.front();
    const std::string rest = text.substr(1);
    if (rest.find_first_not_of("0123456789") == std::string::npos) {
      const std::size_t n = std::stoul(rest);
      if (n >= 1 && (c == 'Z' || c == 'C')) return cyclic_group(n, "x");
      if (n >= 1 && c == 'D') return dihedral_group(n);
      if (n >= 1 && c == 'S') return symmetric_group(n);
    }
  }
  throw ParseError("group " + text + " is not Z<n>, D<n>, S<n> or a JSON spec");
}

void run_freeproduct(Session& s, const std::string& a_text, const std::string& b_text) {
  s.digest.add(a_text);
  s.digest.add(b_text);
  const FreeIndexCheck c = check_freeindex(group_arg(a_text), group_arg(b_text));
  s.results = to_json(c);
  s.results["a"] = a_text;
  s.results["b"] = b_text;
  s.results["quotient"] = {{"value", c.presentation.to_string()}, {"kind", "exact"}};
  s.summary.push_back("N/[G,N] = " + c.presentation.to_string() + ", A^ab (x) B^ab = " + c.tensor.to_string() +
                      (c.presentation == c.tensor ? " (agree)" : " (DISAGREE)"));
  if (!(c.presentation == c.tensor)) throw Falsified{"the two computations of N/[G,N] disagree"};
}

// section-constants

std::vector<std::map<Element, Element, ElementLess>> all_sections(const GroupContext& ctx, std::size_t cap) {
  const auto qs = enumerate_group(ctx.quotient_group());
  std::map<Element, std::vector<Element>, ElementLess> fibres;
  for (const auto& g : enumerate_group(ctx.group())) fibres[ctx.project(g)].push_back(g);
  std::vector<std::map<Element, Element, ElementLess>> out{{}};
  for (const auto& q : qs) {
    const bool id = q.is_identity();
    std::vector<std::map<Element, Element, ElementLess>> next;
    for (const auto& partial : out) {
      for (const auto& g : fibres[q]) {
        if (id && !g.is_identity()) continue;
        auto m = partial;
        m[q] = g;
        next.push_back(std::move(m));
        if (next.size() > cap) throw ResourceLimit("more than " + std::to_string(cap) + " sections");
      }
    }
    out = std::move(next);
  }
  return out;
}

void run_section_constants(Session& s, const std::string& section_text, std::size_t cap) {
  const auto fixture = s.fixture();
  const GroupContext ctx = fixture ? fixture->ctx : s.context();
  if (!ctx.group()->is_finite()) throw ParseError("section constants need a finite group");
  std::vector<std::map<Element, Element, ElementLess>> sections;
  if (!section_text.empty()) {
    s.digest.add(section_text);
    std::map<Element, Element, ElementLess> sec{{Element::identity(ctx.quotient_group()), Element::identity(ctx.group())}};
    for (const auto& e : Json::parse(section_text)) {
      sec[element_from_json(ctx.quotient_group(), e.at("q"))] = element_from_json(ctx.group(), e.at("g"));
    }
    sections.push_back(std::move(sec));
  } else {
    sections = all_sections(ctx, cap);
  }
  Json list = Json::array();
  Rational worst = 0;
  bool all_ok = true;
  for (const auto& sec : sections) {
    const SectionData d = compute_section_constants(ctx, sec);
    Json m = Json::array();
    for (const auto& [q, g] : sec) m.push_back({{"q", format(q)}, {"g", format(g)}});
    Json entry = {{"section", m},
                  {"M", number(Rational(static_cast<long long>(d.ms)), "exact")},
                  {"C", number(d.cs, "exact")},
                  {"verified", d.verified},
                  {"checked_elements", d.checks.size()}};
    if (d.argmax_product) entry["argmax"] = {{"k", d.argmax_k}, {"product", format(*d.argmax_product)}};
    list.push_back(entry);
    worst = std::max(worst, d.cs);
    all_ok = all_ok && d.verified;
  }
  s.results = {{"sections", list}, {"max_C", number(worst, "exact")}, {"verified", all_ok}};
  s.summary.push_back(std::to_string(sections.size()) + " section(s), max C(s) = " + to_string(worst) +
                      (all_ok ? ", cl bound verified" : ", cl bound FAILED"));
  if (!all_ok) throw Falsified{"cl_{G,N} <= (C(s)+3) cl_G fails for some section"};
}

// verify

void run_verify(Session& s, const std::string& suite, const std::string& dir) {
  std::optional<int> only;
  if (suite != "all") {
    std::string t = suite;
    if (!t.empty() && (t.front() == 'C' || t.front() == 'c')) t.erase(0, 1);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("suite is all or a criterion number such as C3");
    }
    only = std::stoi(t);
  }
  s.digest.add(suite);
  const auto results = run_acceptance(dir, s.opt.seed, only);
  if (results.empty()) throw ParseError("no criterion " + suite);
  Json list = Json::array();
  std::size_t passed = 0;
  for (const auto& r : results) {
    list.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    s.summary.push_back(format_result_line(r));
    passed += r.pass;
  }
  s.results = {{"criteria", list}, {"passed", passed}, {"total", results.size()}};
  s.summary.push_back(std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed");
  if (passed != results.size()) throw Falsified{"acceptance criteria failed"};
}

int emit(Session& s, const std::string& command, int code, const std::string& error = {}) {
  Json report = {{"command", command},
                 {"argv", s.opt.argv},
                 {"inputs_digest", s.digest.hex()},
                 {"results", s.results},
                 {"certificates", s.certificates},
                 {"seed", s.opt.seed},
                 {"threads", s.opt.threads},
                 {"exit_code", code}};
  report["budget"] = {{"budget_ms", s.opt.budget_ms ? Json(*s.opt.budget_ms) : Json(nullptr)},
                      {"exhausted", code == kExitResource},
                      {"not_found", s.not_found}};
  report["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - s.start).count();
  if (!error.empty()) report["error"] = error;
  const std::string text = report.dump(2) + "\n";
  if (s.opt.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(s.opt.out_path);
    if (!out) {
      std::cerr << "cannot write " << s.opt.out_path << "\n";
      return kExitUsage;
    }
    out << text;
  }
  for (const auto& line : s.summary) std::cerr << line << "\n";
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gqm: mixed commutator lengths, filling norms, scl bounds and quasimorphisms"};
  app.require_subcommand(1);
  Session s;
  for (int i = 0; i < argc; ++i) s.opt.argv.emplace_back(argv[i]);

  auto shared = [&](CLI::App* c) {
    c->add_option("--ctx", s.opt.ctx_path, "context JSON (or a fixture containing one)");
    c->add_option("--out", s.opt.out_path, "write the JSON report here instead of stdout");
    c->add_option("--budget-ms", s.opt.budget_ms, "wall-clock budget for searches and LPs");
    c->add_option("--seed", s.opt.seed, "seed for randomized checks");
    c->add_option("--threads", s.opt.threads, "accepted for compatibility; computations are single-threaded");
  };

  ClArgs cl;
  auto* cl_cmd = app.add_subcommand("cl", "mixed or plain commutator length");
  shared(cl_cmd);
  cl_cmd->add_option("element", cl.element, "element word")->required();
  auto* plain = cl_cmd->add_flag("--plain", cl.plain, "cl_G instead of cl_{G,N}");
  cl_cmd->add_flag("--mixed", "cl_{G,N} (default)")->excludes(plain);
  cl_cmd->add_option("--max-factors", cl.max_factors)->check(CLI::PositiveNumber);
  cl_cmd->add_option("--ball-radius", cl.ball_radius)->check(CLI::PositiveNumber);

  SclArgs scl;
  bool with_lp = false;
  auto* scl_cmd = app.add_subcommand("scl", "two-sided bounds on scl_{G,N}");
  shared(scl_cmd);
  scl_cmd->add_option("element", scl.element)->required();
  scl_cmd->add_option("--powers", scl.powers)->delimiter(',');
  scl_cmd->add_option("--support-radius", scl.support_radius, "ball radius of the LP support");
  scl_cmd->add_flag("--with-lp", with_lp, "run the LP at radius 2 unless --support-radius is given");
  scl_cmd->add_option("--qm-file", scl.qm_file, "quasimorphism spec or array of specs");
  scl_cmd->add_option("--max-factors", scl.max_factors)->check(CLI::PositiveNumber);
  scl_cmd->add_option("--ball-radius", scl.ball_radius)->check(CLI::PositiveNumber);

  FillArgs fill;
  auto* fill_cmd = app.add_subcommand("fill", "(G,N)-filling norm by linear programming");
  shared(fill_cmd);
  fill_cmd->add_option("element", fill.element)->required();
  fill_cmd->add_option("--support-radius", fill.support_radius, "ball radius (default: full support, finite G)");
  fill_cmd->add_option("--power", fill.power);

  SurfaceArgs surf;
  auto* surf_cmd = app.add_subcommand("surface", "(G,N)-simplicial surfaces");
  shared(surf_cmd);
  surf_cmd->add_option("mode", surf.mode, "from-decomp | from-chain | validate")
      ->required()
      ->check(CLI::IsMember({"from-decomp", "from-chain", "validate"}));
  surf_cmd->add_option("element", surf.element);
  surf_cmd->add_option("--pairs", surf.pairs, "JSON array of [g, h] pairs");
  surf_cmd->add_option("--chain", surf.chain_file, "integral chain JSON");
  surf_cmd->add_option("--surface", surf.surface_file, "surface JSON");
  surf_cmd->add_option("--max-factors", surf.max_factors)->check(CLI::PositiveNumber);
  surf_cmd->add_option("--ball-radius", surf.ball_radius)->check(CLI::PositiveNumber);

  QmArgs qm;
  auto* qm_cmd = app.add_subcommand("qm", "quasimorphism evaluation, defects, extensions, Bavard bounds");
  shared(qm_cmd);
  qm_cmd->add_option("action", qm.action, "eval | defect | extend | bavard")
      ->required()
      ->check(CLI::IsMember({"eval", "defect", "extend", "bavard"}));
  qm_cmd->add_option("element", qm.element, "element for eval and bavard");
  qm_cmd->add_option("--qm-file", qm.qm_file)->required();
  qm_cmd->add_option("--method", qm.method, "section | averaging");
  qm_cmd->add_option("--extension", qm.extension, "JSON object with the section or lambda/cosets data");
  qm_cmd->add_option("--g-radius", qm.g_radius);
  qm_cmd->add_option("--x-radius", qm.x_radius);

  std::string fa, fb;
  auto* fp_cmd = app.add_subcommand("freeproduct-quotient", "N/[G,N] for G = A * B two ways");
  shared(fp_cmd);
  fp_cmd->add_option("--a", fa, "Z<n>, D<n>, S<n> or a JSON group spec")->required();
  fp_cmd->add_option("--b", fb)->required();

  std::string section_text;
  std::size_t section_cap = 4096;
  auto* sec_cmd = app.add_subcommand("section-constants", "M(s), C(s) and the cl comparison for sections");
  shared(sec_cmd);
  sec_cmd->add_option("--section", section_text, "JSON array of {q, g}; default: every section with s(e) = e");
  sec_cmd->add_option("--max-sections", section_cap);

  std::string suite = "all";
#ifdef GQM_FIXTURE_DIR
  std::string fixture_dir = GQM_FIXTURE_DIR;
#else
  std::string fixture_dir = "fixtures";
#endif
  auto* ver_cmd = app.add_subcommand("verify", "run the acceptance suite");
  shared(ver_cmd);
  ver_cmd->add_option("suite", suite, "all or a criterion such as C3");
  ver_cmd->add_option("--fixtures", fixture_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  for (const auto& a : s.opt.argv) s.digest.add(a);
  if (s.opt.budget_ms) {
    if (*s.opt.budget_ms <= 0) return emit(s, name, kExitUsage, "--budget-ms must be positive");
    s.deadline = s.start + std::chrono::milliseconds(*s.opt.budget_ms);
  }
  try {
    if (name == "cl") run_cl(s, cl);
    else if (name == "scl") {
      if (with_lp && !scl.support_radius) scl.support_radius = 2;
      run_scl(s, scl);
    } else if (name == "fill") run_fill(s, fill);
    else if (name == "surface") run_surface(s, surf);
    else if (name == "qm") run_qm(s, qm);
    else if (name == "freeproduct-quotient") run_freeproduct(s, fa, fb);
    else if (name == "section-constants") run_section_constants(s, section_text, section_cap);
    else run_verify(s, suite, fixture_dir);
  } catch (const Falsified& f) {
    return emit(s, name, kExitFalsified, f.what);
  } catch (const ResourceLimit& e) {
    return emit(s, name, kExitResource, e.what());
  } catch (const Error& e) {
    return emit(s, name, kExitUsage, e.what());
  } catch (const Json::exception& e) {
    return emit(s, name, kExitUsage, std::string("JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return emit(s, name, kExitUsage, e.what());
  } catch (const std::out_of_range& e) {
    return emit(s, name, kExitUsage, e.what());
  }
  return emit(s, name, kExitOk);
}
