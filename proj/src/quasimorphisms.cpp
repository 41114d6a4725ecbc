#include "gqm/quasimorphisms.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace gqm {

namespace {

// The free group the counting is done in: the group itself, or the fiber of a semidirect product.
const GroupSpec& counting_domain(const GroupPtr& group) {
  if (group->kind() == GroupKind::Free) return *group;
  if (group->kind() == GroupKind::Semidirect && group->fiber()->kind() == GroupKind::Free) return *group->fiber();
  throw PreconditionViolated("counting quasimorphisms need a free group or a semidirect product with free fiber");
}

Word fiber_part(const GroupPtr& group, const Element& x) {
  if (x.group_ptr() != group) throw GroupMismatch("element is not in the quasimorphism's group");
  if (group->kind() == GroupKind::Free) return x.word();
  const auto rank = group->fiber()->generator_count();
  Word w;
  for (Letter l : x.word()) {
    if (l.gen >= rank) break;
    w.push_back(l);
  }
  return w;
}

Word checked_pattern(const GroupPtr& group, const Word& pattern) {
  const GroupSpec& dom = counting_domain(group);
  if (pattern.empty()) throw EmptyPattern("counting pattern is empty");
  Word reduced = dom.normalize(pattern);
  if (reduced != pattern) throw PreconditionViolated("counting pattern is not reduced");
  return reduced;
}

long long count_linear(const Word& x, const Word& w) {
  long long n = 0;
  for (std::size_t i = 0; i + w.size() <= x.size(); ++i) n += std::equal(w.begin(), w.end(), x.begin() + static_cast<long>(i));
  return n;
}

long long count_cyclic(const Word& c, const Word& w) {
  if (c.empty()) return 0;
  long long n = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < w.size() && match; ++j) match = c[(i + j) % c.size()] == w[j];
    n += match;
  }
  return n;
}

Word cyclic_reduction(Word w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == inverse(w[hi - 1])) {
    ++lo;
    --hi;
  }
  return Word(w.begin() + static_cast<long>(lo), w.begin() + static_cast<long>(hi));
}

void check_group(const GroupContext& ctx, const Element& x) {
  if (x.group_ptr() != ctx.group()) throw GroupMismatch("sample element is not in the context group");
}

void require_normal(const GroupContext& ctx, const Element& x) {
  check_group(ctx, x);
  if (!ctx.in_normal_subgroup(x)) throw NonNormalSample(format(x) + " is not in N");
}

void keep_max(DefectWitness& best, const Rational& v, const Element& a, const Element& b) {
  if (!best.witness || v > best.value) {
    best.value = v;
    best.witness = std::make_pair(a, b);
  }
}

std::optional<Rational> json_rational(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const Json& v = j.at(key);
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) throw ParseError(std::string(key) + " must be a rational string");
  return parse_rational(v.get<std::string>());
}

}  // namespace

Quasimorphism counting_qm(const GroupPtr& group, const Word& pattern) {
  const Word w = checked_pattern(group, pattern);
  const Word winv = inverse(w);
  Quasimorphism f("h_" + format_word(counting_domain(group), w), [group, w, winv](const Element& x) {
    const Word fx = fiber_part(group, x);
    return Rational(count_linear(fx, w) - count_linear(fx, winv));
  });
  f.metadata = {{"kind", "counting"}, {"pattern", format_word(counting_domain(group), w)}, {"overlaps", true}};
  if (w.size() == 1) {
    f.homogeneous = true;
    f.bounds.d_upper = Rational(0);
  }
  return f;
}

Quasimorphism counting_qm(const GroupPtr& group, std::string_view pattern) {
  return counting_qm(group, parse_word(counting_domain(group), pattern));
}

Quasimorphism homogenized_counting_qm(const GroupPtr& group, const Word& pattern) {
  const Word w = checked_pattern(group, pattern);
  const Word winv = inverse(w);
  Quasimorphism f("hbar_" + format_word(counting_domain(group), w), [group, w, winv](const Element& x) {
    const Word c = cyclic_reduction(fiber_part(group, x));
    return Rational(count_cyclic(c, w) - count_cyclic(c, winv));
  });
  f.homogeneous = true;
  f.metadata = {{"kind", "counting"},
                {"pattern", format_word(counting_domain(group), w)},
                {"overlaps", true},
                {"homogenized", true}};
  if (w.size() == 1) f.bounds.d_upper = Rational(0);
  return f;
}

Quasimorphism homogenized_counting_qm(const GroupPtr& group, std::string_view pattern) {
  return homogenized_counting_qm(group, parse_word(counting_domain(group), pattern));
}

Quasimorphism combine(const std::vector<std::pair<Rational, Quasimorphism>>& terms) {
  std::string name;
  bool homogeneous = true, invariant = true;
  std::optional<Rational> d = Rational(0), dp = Rational(0);
  Json meta = {{"kind", "combination"}, {"terms", Json::array()}};
  for (const auto& [c, f] : terms) {
    if (!name.empty()) name += " + ";
    name += to_string(c) + "*" + f.name();
    homogeneous = homogeneous && f.homogeneous;
    invariant = invariant && f.g_invariant;
    if (d && f.bounds.d_upper) *d += abs(c) * *f.bounds.d_upper;
    else d.reset();
    const std::optional<Rational> fdp = f.g_invariant ? std::optional<Rational>(0) : f.bounds.dprime_upper;
    if (dp && fdp) *dp += abs(c) * *fdp;
    else dp.reset();
    meta["terms"].push_back({{"coefficient", to_string(c)}, {"qm", f.metadata}});
  }
  Quasimorphism out(name.empty() ? "0" : name, [terms](const Element& x) -> Rational {
    Rational s = 0;
    for (const auto& [c, f] : terms) s += c * f(x);
    return s;
  });
  out.homogeneous = homogeneous;
  out.g_invariant = invariant;
  out.bounds.d_upper = d;
  out.bounds.dprime_upper = dp;
  out.metadata = meta;
  return out;
}

HomogenizedEstimate homogenize_estimate(const Quasimorphism& f, const Element& x, long long n, bool with_error) {
  if (n < 1) throw PreconditionViolated("homogenization needs n >= 1");
  HomogenizedEstimate h;
  if (with_error) {
    if (!f.bounds.d_upper) throw MissingDefectBound("error bound requested without a defect bound for " + f.name());
    h.error = *f.bounds.d_upper / n;
  }
  h.estimate = f(power(x, n)) / n;
  return h;
}

DefectWitness defect_lower(const Quasimorphism& f, const ElementPairs& sample) {
  DefectWitness best;
  for (const auto& [a, b] : sample) keep_max(best, abs(f(mul(a, b)) - f(a) - f(b)), a, b);
  return best;
}

DefectWitness conjugation_defect_lower(const Quasimorphism& f, const GroupContext& ctx, const ElementPairs& sample) {
  DefectWitness best;
  for (const auto& [g, x] : sample) {
    check_group(ctx, g);
    require_normal(ctx, x);
    keep_max(best, abs(f(conjugate(g, x)) - f(x)), g, x);
  }
  return best;
}

DefectWitness nqm_defect_lower(const Quasimorphism& f, const GroupContext& ctx, const ElementPairs& sample) {
  DefectWitness best;
  for (const auto& [g, x] : sample) {
    check_group(ctx, g);
    require_normal(ctx, x);
    const Rational fg = f(g), fx = f(x);
    keep_max(best, abs(f(mul(g, x)) - fg - fx), g, x);
    keep_max(best, abs(f(mul(x, g)) - fx - fg), x, g);
  }
  return best;
}

Quasimorphism symmetrize(const Quasimorphism& f, const GroupContext& ctx, const std::vector<Element>& conjugators) {
  if (conjugators.empty()) throw NotClosed("no automorphisms given");
  std::vector<Element> sorted = conjugators;
  for (const auto& c : sorted) check_group(ctx, c);
  std::sort(sorted.begin(), sorted.end(), ElementLess{});
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw NotClosed("repeated conjugator");
  for (const auto& a : sorted) {
    for (const auto& b : sorted) {
      if (!std::binary_search(sorted.begin(), sorted.end(), mul(a, b), ElementLess{})) {
        throw NotClosed(format(a) + " * " + format(b) + " is not among the conjugators");
      }
    }
  }
  const Rational k(static_cast<long long>(sorted.size()));
  Quasimorphism out("sym(" + f.name() + ")", [f, sorted, k](const Element& x) -> Rational {
    Rational s = 0;
    for (const auto& c : sorted) s += f(conjugate(c, x));
    return s / k;
  });
  out.homogeneous = f.homogeneous;
  // a homogeneous quasimorphism on N is conjugation invariant under N, so
  // invariance under a transversal of the acting group gives G-invariance
  out.g_invariant = f.g_invariant || (f.homogeneous && [&] {
                      std::vector<Element> images;
                      for (const auto& c : sorted) images.push_back(ctx.project(c));
                      const auto q = ctx.quotient_group();
                      if (!q->is_finite()) return false;
                      std::sort(images.begin(), images.end(), ElementLess{});
                      images.erase(std::unique(images.begin(), images.end()), images.end());
                      return images.size() == enumerate_group(q).size();
                    }());
  out.bounds.d_upper = f.bounds.d_upper;
  Json autos = Json::array();
  for (const auto& c : sorted) autos.push_back(format(c));
  out.metadata = {{"kind", "symmetrized"}, {"base", f.metadata}, {"autos", autos}};
  return out;
}

Quasimorphism extend_by_section(const Quasimorphism& f, const GroupContext& ctx,
                                const std::vector<std::pair<Element, Rational>>& section) {
  const auto q = ctx.quotient_group();
  if (!q->is_finite()) throw InfiniteCosetSpace("section extension needs a finite quotient");
  const auto quotient = enumerate_group(q);
  auto reps = std::make_shared<std::map<Element, std::pair<Element, Rational>, ElementLess>>();
  for (const auto& [s, v] : section) {
    check_group(ctx, s);
    const Element image = ctx.project(s);
    if (!reps->emplace(image, std::make_pair(s, v)).second) {
      throw NotTransversal("two representatives of the coset " + format(image));
    }
    if (image.is_identity() && (!s.is_identity() || v != 0)) {
      throw NotTransversal("the identity coset must be represented by e with value 0");
    }
  }
  if (reps->size() != quotient.size()) throw NotTransversal("section does not cover G/N");
  GroupContext c = ctx;
  Quasimorphism out("sect(" + f.name() + ")", [f, c, reps](const Element& g) -> Rational {
    const auto& [s, v] = reps->at(c.project(g));
    return v + f(mul(inv(s), g));
  });
  out.homogeneous = false;
  if (f.homogeneous && f.bounds.d_upper) out.bounds.dpp_upper = f.bounds.d_upper;
  Json sec = Json::array();
  for (const auto& [s, v] : section) sec.push_back({{"rep", format(s)}, {"value", to_string(v)}});
  out.metadata = {{"kind", "extended"}, {"method", "section"}, {"base", f.metadata}, {"section", sec}};
  return out;
}

Quasimorphism extend_by_averaging(const Quasimorphism& f, const GroupContext& ctx, const VirtualSection& vs) {
  const auto q = ctx.quotient_group();
  const auto& g = ctx.group();
  if (!q->is_finite()) throw InfiniteCosetSpace("averaging needs a finite quotient");
  if (vs.lambda_generators.size() != vs.lambda_images.size() || vs.cosets.size() != vs.coset_lifts.size()) {
    throw PreconditionViolated("virtual section lists have mismatched lengths");
  }
  for (std::size_t i = 0; i < vs.lambda_generators.size(); ++i) {
    if (ctx.project(vs.lambda_images[i]) != vs.lambda_generators[i]) {
      throw PreconditionViolated("q(s(" + format(vs.lambda_generators[i]) + ")) != " + format(vs.lambda_generators[i]));
    }
  }
  // s on all of Lambda, checked on every Cayley graph edge
  std::map<Element, Element, ElementLess> s;
  s.emplace(Element::identity(q), Element::identity(g));
  std::vector<Element> queue{Element::identity(q)};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element lam = queue[head];
    const Element image = s.at(lam);
    for (std::size_t i = 0; i < vs.lambda_generators.size(); ++i) {
      for (int sign : {1, -1}) {
        const Element step = sign > 0 ? vs.lambda_generators[i] : inv(vs.lambda_generators[i]);
        const Element lift = sign > 0 ? vs.lambda_images[i] : inv(vs.lambda_images[i]);
        const Element next = mul(lam, step);
        const Element next_image = mul(image, lift);
        auto [it, inserted] = s.emplace(next, next_image);
        if (inserted) queue.push_back(next);
        else if (it->second != next_image) throw PreconditionViolated("s is not a homomorphism on Lambda");
      }
    }
  }
  for (std::size_t i = 0; i < vs.cosets.size(); ++i) {
    if (ctx.project(vs.coset_lifts[i]) != vs.cosets[i]) {
      throw NotTransversal("q(s'(" + format(vs.cosets[i]) + ")) != " + format(vs.cosets[i]));
    }
  }
  auto t = std::make_shared<std::map<Element, Element, ElementLess>>();
  for (const auto& x : enumerate_group(q)) {
    int hits = 0;
    for (std::size_t i = 0; i < vs.cosets.size(); ++i) {
      auto it = s.find(mul(x, inv(vs.cosets[i])));
      if (it == s.end()) continue;
      ++hits;
      t->emplace(x, mul(it->second, vs.coset_lifts[i]));
    }
    if (hits != 1) throw NotTransversal(format(x) + " lies in " + std::to_string(hits) + " cosets of B");
  }
  GroupContext c = ctx;
  const std::vector<Element> cosets = vs.cosets;
  const Rational k(static_cast<long long>(cosets.size()));
  Quasimorphism out("avg(" + f.name() + ")", [f, c, t, cosets, k](const Element& x) -> Rational {
    const Element qx = c.project(x);
    Rational sum = 0;
    for (const auto& b : cosets) sum += f(mul(mul(x, inv(t->at(mul(b, qx)))), t->at(b)));
    return sum / k;
  });
  const std::optional<Rational> dp = f.g_invariant ? std::optional<Rational>(0) : f.bounds.dprime_upper;
  if (f.bounds.d_upper && dp) out.bounds.d_upper = *f.bounds.d_upper + 3 * *dp;
  Json lam = Json::array(), cos = Json::array();
  for (std::size_t i = 0; i < vs.lambda_generators.size(); ++i)
    lam.push_back({{"q", format(vs.lambda_generators[i])}, {"g", format(vs.lambda_images[i])}});
  for (std::size_t i = 0; i < vs.cosets.size(); ++i)
    cos.push_back({{"b", format(vs.cosets[i])}, {"lift", format(vs.coset_lifts[i])}});
  out.metadata = {{"kind", "extended"}, {"method", "averaging"}, {"base", f.metadata}, {"lambda", lam}, {"cosets", cos}};
  return out;
}

Rational bavard_lower(const Rational& d_upper, const Rational& f_at_x) {
  if (d_upper <= 0) throw NonpositiveDefect("defect bound must be positive");
  return abs(f_at_x) / (2 * d_upper);
}

Rational bavard_lower(const Quasimorphism& f, const Element& x) {
  if (!f.homogeneous || !f.g_invariant) throw PreconditionViolated(f.name() + " is not flagged homogeneous and G-invariant");
  if (!f.bounds.d_upper) throw MissingDefectBound("no defect bound for " + f.name());
  return bavard_lower(*f.bounds.d_upper, f(x));
}

Lemma36Result lemma36_check(const Quasimorphism& f, const Rational& d_upper, const GroupContext& ctx,
                            const ElementPairs& sample) {
  Lemma36Result r;
  for (const auto& [g, h] : sample) {
    require_normal(ctx, h);
    const Rational v = abs(f(commutator(g, h)));
    if (v > r.worst) r.worst = v;
    if (v > d_upper && r.ok) {
      r.ok = false;
      r.violation = std::make_pair(g, h);
    }
  }
  return r;
}

ElementPairs ball_sample(const GroupContext& ctx, std::size_t g_radius, std::size_t x_radius, bool x_in_normal) {
  const auto gs = enumerate_ball(ctx.group(), g_radius);
  std::vector<Element> xs;
  for (const auto& x : enumerate_ball(ctx.group(), x_radius))
    if (!x_in_normal || ctx.in_normal_subgroup(x)) xs.push_back(x);
  ElementPairs out;
  for (const auto& g : gs)
    for (const auto& x : xs) out.emplace_back(g, x);
  return out;
}

Quasimorphism qm_from_json(const GroupContext& ctx, const Json& j) {
  std::optional<Quasimorphism> f;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "counting") {
      const std::string pattern = j.at("pattern").get<std::string>();
      f = j.value("homogenized", false) ? homogenized_counting_qm(ctx.group(), std::string_view(pattern))
                                        : counting_qm(ctx.group(), std::string_view(pattern));
    } else if (kind == "combination") {
      std::vector<std::pair<Rational, Quasimorphism>> terms;
      for (const auto& t : j.at("terms")) {
        terms.emplace_back(*json_rational(t, "coefficient"), qm_from_json(ctx, t.at("qm")));
      }
      f = combine(terms);
    } else if (kind == "symmetrized") {
      std::vector<Element> autos;
      for (const auto& a : j.at("autos")) autos.push_back(element_from_json(ctx.group(), a));
      f = symmetrize(qm_from_json(ctx, j.at("base")), ctx, autos);
    } else if (kind == "extended") {
      const std::string method = j.at("method").get<std::string>();
      const Quasimorphism base = qm_from_json(ctx, j.at("base"));
      if (method == "section") {
        std::vector<std::pair<Element, Rational>> section;
        for (const auto& s : j.at("section")) {
          section.emplace_back(element_from_json(ctx.group(), s.at("rep")), json_rational(s, "value").value_or(0));
        }
        f = extend_by_section(base, ctx, section);
      } else if (method == "averaging") {
        VirtualSection vs;
        for (const auto& l : j.value("lambda", Json::array())) {
          vs.lambda_generators.push_back(element_from_json(ctx.quotient_group(), l.at("q")));
          vs.lambda_images.push_back(element_from_json(ctx.group(), l.at("g")));
        }
        for (const auto& c : j.at("cosets")) {
          vs.cosets.push_back(element_from_json(ctx.quotient_group(), c.at("b")));
          vs.coset_lifts.push_back(element_from_json(ctx.group(), c.at("lift")));
        }
        f = extend_by_averaging(base, ctx, vs);
      } else {
        throw ParseError("unknown extension method '" + method + "'");
      }
    } else {
      throw ParseError("unknown quasimorphism kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed quasimorphism spec: ") + e.what());
  }
  if (auto d = json_rational(j, "d_upper")) f->bounds.d_upper = d;
  if (auto d = json_rational(j, "dprime_upper")) f->bounds.dprime_upper = d;
  try {
    if (j.contains("homogeneous")) f->homogeneous = j.at("homogeneous").get<bool>();
    if (j.contains("g_invariant")) f->g_invariant = j.at("g_invariant").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed quasimorphism flags: ") + e.what());
  }
  return *f;
}

}  // namespace gqm
