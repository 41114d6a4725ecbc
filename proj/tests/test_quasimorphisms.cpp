#include "gqm/error.hpp"
#include "gqm/quasimorphisms.hpp"
#include "support.hpp"

#include <doctest.h>

#include <string>

using namespace gqm;
using namespace gqm::testing;

namespace {

// Letters as characters: a, b, ... and A, B, ... for inverses.
std::string letters(const Word& w) {
  std::string s;
  for (Letter l : w) s += static_cast<char>((l.sign > 0 ? 'a' : 'A') + l.gen);
  return s;
}

long long substring_count(const std::string& hay, const std::string& needle) {
  long long n = 0;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) n += hay.compare(i, needle.size(), needle) == 0;
  return n;
}

std::string reversed_inverse(const std::string& s) {
  std::string out(s.rbegin(), s.rend());
  for (char& c : out) c = std::islower(static_cast<unsigned char>(c)) ? std::toupper(c) : std::tolower(c);
  return out;
}

// Free reduction of a letter string.
std::string reduce(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c)) out.pop_back();
    else out += c;
  }
  return out;
}

Word random_reduced(std::size_t gens, std::size_t len, std::mt19937_64& rng) {
  auto g = GroupSpec::free(gens);
  Word w;
  while (w.size() < len) w = g->normalize(random_word(gens, len + 4, rng));
  return Word(w.begin(), w.begin() + static_cast<long>(len));
}

Quasimorphism antisym_config(const GroupPtr& g) {
  Quasimorphism f =
      combine({{Rational(1, 2), homogenized_counting_qm(g, "a b")}, {Rational(-1, 2), homogenized_counting_qm(g, "b a")}});
  f.g_invariant = true;
  f.bounds.d_upper = Rational(1);
  return f;
}

Quasimorphism swap_symmetric(const GroupContext& ctx) {
  auto g = ctx.group();
  Quasimorphism f = symmetrize(homogenized_counting_qm(g, "a b"), ctx, {Element::identity(g), parse_element(g, "z")});
  f.bounds.d_upper = Rational(2);
  return f;
}

}  // namespace

TEST_CASE("counting quasimorphism values") {
  auto g = GroupSpec::free(2);
  auto a = counting_qm(g, "a");
  CHECK(a.homogeneous);
  CHECK(a(parse_element(g, "a b a A a B")) == 2);
  auto ab = counting_qm(g, "a b");
  CHECK(ab(parse_element(g, "a b a b")) == 2);
  CHECK(ab(parse_element(g, "B A")) == -1);
  CHECK(ab(parse_element(g, "[a,b]")) == 1);
  CHECK(ab(Element::identity(g)) == 0);
  CHECK(counting_qm(g, "a a")(parse_element(g, "a a a")) == 2);
  CHECK_THROWS_AS(counting_qm(g, Word{}), EmptyPattern);
  CHECK_THROWS_AS(counting_qm(g, Word{{0, 1}, {0, -1}}), PreconditionViolated);
  CHECK_THROWS_AS(counting_qm(dihedral_group(4), "r"), PreconditionViolated);
}

TEST_CASE("counting agrees with a string oracle") {
  std::mt19937_64 rng(21);
  auto g = GroupSpec::free(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_reduced(3, 1 + trial % 3, rng);
    const Element x = random_element(g, 12, rng);
    const std::string pat = letters(w), xs = letters(x.word());
    const long long expected = substring_count(xs, pat) - substring_count(xs, reversed_inverse(pat));
    CHECK(counting_qm(g, w)(x) == expected);
  }
}

TEST_CASE("homogenized counting equals the stable growth of f(x^n)") {
  std::mt19937_64 rng(22);
  auto g = GroupSpec::free(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Word w = random_reduced(2, 1 + trial % 3, rng);
    const Element x = random_element(g, 6, rng);
    const std::string pat = letters(w), xs = letters(x.word());
    // f(x^(n+1)) - f(x^n) is constant once n exceeds |x| + |w|
    const std::size_t n = xs.size() + pat.size() + 2;
    std::string pn, pn1;
    for (std::size_t i = 0; i < n; ++i) pn += xs;
    pn1 = reduce(pn + xs);
    pn = reduce(pn);
    auto count = [&](const std::string& s) {
      return substring_count(s, pat) - substring_count(s, reversed_inverse(pat));
    };
    const auto hbar = homogenized_counting_qm(g, w);
    CHECK(hbar(x) == count(pn1) - count(pn));
    CHECK(hbar(power(x, 3)) == 3 * hbar(x));
    CHECK(hbar(inv(x)) == -hbar(x));
  }
}

TEST_CASE("homogenize_estimate") {
  auto g = GroupSpec::free(2);
  const Element c = parse_element(g, "[a,b]");
  const auto hom = counting_qm(g, "a");
  const Element x = parse_element(g, "a a b");
  auto h = homogenize_estimate(hom, x, 5);
  CHECK(h.estimate == 2);
  CHECK(*h.error == 0);
  Quasimorphism ab = counting_qm(g, "a b");
  CHECK_THROWS_AS(homogenize_estimate(ab, c, 8), MissingDefectBound);
  ab.bounds.d_upper = Rational(2);
  h = homogenize_estimate(ab, c, 8);
  // (a b A B)^8 has eight a b and no B A
  std::string expanded;
  for (int i = 0; i < 8; ++i) expanded += "abAB";
  CHECK(h.estimate == Rational(substring_count(expanded, "ab") - substring_count(expanded, "BA"), 8));
  CHECK(*h.error == Rational(1, 4));
  CHECK(abs(h.estimate - homogenized_counting_qm(g, "a b")(c)) <= *h.error);
  CHECK(homogenize_estimate(ab, Element::identity(g), 3).estimate == 0);
}

TEST_CASE("homogenization consistency on samples") {
  std::mt19937_64 rng(23);
  auto g = GroupSpec::free(2);
  Quasimorphism f = counting_qm(g, "a b");
  f.bounds.d_upper = Rational(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Element x = random_element(g, 6, rng);
    for (long long n : {1, 2, 5}) {
      const Rational d = f(power(x, n)) / n - f(power(x, 2 * n)) / (2 * n);
      CHECK(abs(d) <= *f.bounds.d_upper * (Rational(1, n) + Rational(1, 2 * n)));
    }
  }
}

TEST_CASE("defect lower bounds") {
  auto ctx = GroupContext::full(GroupSpec::free(2));
  auto g = ctx.group();
  const auto sample = ball_sample(ctx, 2, 2, false);
  CHECK(defect_lower(counting_qm(g, "a"), sample).value == 0);
  const auto d = defect_lower(counting_qm(g, "a b"), sample);
  CHECK(d.value > 0);
  REQUIRE(d.witness);
  const auto& [x, y] = *d.witness;
  const auto f = counting_qm(g, "a b");
  CHECK(abs(f(mul(x, y)) - f(x) - f(y)) == d.value);
  CHECK(defect_lower(f, {}).value == 0);
  CHECK_FALSE(defect_lower(f, {}).witness);

  // configured bounds are never exceeded on radius-4 samples
  const auto big = ball_sample(ctx, 4, 4, false);
  CHECK(defect_lower(antisym_config(g), big).value <= 1);
  const auto sym = combine({{Rational(1, 2), homogenized_counting_qm(g, "a b")}, {Rational(1, 2), homogenized_counting_qm(g, "b a")}});
  CHECK(defect_lower(sym, big).value <= 2);
}

TEST_CASE("conjugation defect") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  const Element z = parse_element(g, "z"), ab = parse_element(g, "a b");
  const auto f = counting_qm(g, "a b");
  const auto d = conjugation_defect_lower(f, ctx, {{z, ab}});
  CHECK(d.value == 1);
  CHECK_THROWS_AS(conjugation_defect_lower(f, ctx, {{ab, z}}), NonNormalSample);
  const auto sample = ball_sample(ctx, 3, 4, true);
  CHECK(conjugation_defect_lower(swap_symmetric(ctx), ctx, sample).value == 0);
  CHECK(conjugation_defect_lower(counting_qm(g, "a"), ctx, sample).value > 0);
}

TEST_CASE("N-quasimorphism defect") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  const auto sample = ball_sample(ctx, 3, 3, true);
  // exponent sum of the fiber is an N-homomorphism on the semidirect product with z fixing a+b
  const auto total = combine({{Rational(1), counting_qm(g, "a")}, {Rational(1), counting_qm(g, "b")}});
  CHECK(nqm_defect_lower(total, ctx, sample).value == 0);
  Quasimorphism noise("noise", [](const Element& x) { return Rational(static_cast<long long>(WordHash{}(x.word()) % 1000)); });
  CHECK(nqm_defect_lower(noise, ctx, sample).value > 100);
  CHECK_THROWS_AS(nqm_defect_lower(total, ctx, {{parse_element(g, "a"), parse_element(g, "z")}}), NonNormalSample);
}

TEST_CASE("symmetrize") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  const Element e = Element::identity(g), z = parse_element(g, "z");
  std::mt19937_64 rng(24);
  const auto base = homogenized_counting_qm(g, "a b");
  const auto same = symmetrize(base, ctx, {e});
  const auto sym = symmetrize(base, ctx, {e, z});
  CHECK(sym.g_invariant);
  CHECK_FALSE(same.g_invariant);
  for (int trial = 0; trial < 200; ++trial) {
    Element x = random_element(g, 8, rng);
    if (!ctx.in_normal_subgroup(x)) x = mul(x, z);
    CHECK(same(x) == base(x));
    CHECK(sym(conjugate(z, x)) == sym(x));
  }
  CHECK_THROWS_AS(symmetrize(base, ctx, {z}), NotClosed);
  CHECK_THROWS_AS(symmetrize(base, ctx, {}), NotClosed);
}

TEST_CASE("symmetrized homogeneous candidates vanish on the separation example") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  const Element x = parse_element(g, "a (z a z) A (z A z)");
  const Element e = Element::identity(g), z = parse_element(g, "z");
  std::size_t candidates = 0;
  for (const auto& w : enumerate_ball(GroupSpec::free(2), 4)) {
    if (w.is_identity()) continue;
    Quasimorphism f = symmetrize(homogenized_counting_qm(g, w.word()), ctx, {e, z});
    f.bounds.d_upper = Rational(4);
    CHECK(f(x) == 0);
    CHECK(bavard_lower(f, x) == 0);
    ++candidates;
  }
  CHECK(candidates == 160);
}

TEST_CASE("extend_by_section") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  const Element e = Element::identity(g), z = parse_element(g, "z");
  const auto f = swap_symmetric(ctx);
  const auto ext = extend_by_section(f, ctx, {{e, Rational(0)}, {z, Rational(0)}});
  REQUIRE(ext.bounds.dpp_upper);
  CHECK(*ext.bounds.dpp_upper == 2);
  for (const auto& x : enumerate_ball(g, 5))
    if (ctx.in_normal_subgroup(x)) CHECK(ext(x) == f(x));
  const auto sample = ball_sample(ctx, 3, 3, true);
  CHECK(nqm_defect_lower(ext, ctx, sample).value <= *ext.bounds.dpp_upper);
  // restriction of an N-quasimorphism is quasi-invariant with constant 2 D''
  CHECK(conjugation_defect_lower(ext, ctx, sample).value <= 2 * *ext.bounds.dpp_upper);

  CHECK_THROWS_AS(extend_by_section(f, ctx, {{e, Rational(0)}}), NotTransversal);
  CHECK_THROWS_AS(extend_by_section(f, ctx, {{e, Rational(1)}, {z, Rational(0)}}), NotTransversal);
  CHECK_THROWS_AS(extend_by_section(f, ctx, {{e, Rational(0)}, {z, 0}, {mul(parse_element(g, "a"), z), 0}}),
                  NotTransversal);

  Quasimorphism zero("0", [](const Element&) { return Rational(0); });
  const auto zext = extend_by_section(zero, ctx, {{e, Rational(0)}, {z, Rational(3)}});
  CHECK(zext(mul(parse_element(g, "a b"), z)) == 3);
  CHECK(nqm_defect_lower(extend_by_section(zero, ctx, {{e, Rational(0)}, {z, Rational(0)}}), ctx, sample).value == 0);

  auto full = GroupContext::full(GroupSpec::free(2));
  const auto hb = homogenized_counting_qm(full.group(), "a b");
  const auto same = extend_by_section(hb, full, {{Element::identity(full.group()), Rational(0)}});
  for (const auto& x : enumerate_ball(full.group(), 3)) CHECK(same(x) == hb(x));
}

TEST_CASE("extend_by_averaging") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  auto q = ctx.quotient_group();
  const Element z = parse_element(g, "z");
  const VirtualSection vs{{}, {}, {Element::identity(q), generator(q, 0)}, {Element::identity(g), z}};
  const auto f = swap_symmetric(ctx);
  const auto ext = extend_by_averaging(f, ctx, vs);
  REQUIRE(ext.bounds.d_upper);
  CHECK(*ext.bounds.d_upper == 2);
  for (const auto& x : enumerate_ball(g, 5))
    if (ctx.in_normal_subgroup(x)) CHECK(ext(x) == f(x));
  const auto all = enumerate_ball(g, 3);
  ElementPairs sample;
  for (const auto& a : all)
    for (const auto& b : all) sample.emplace_back(a, b);
  CHECK(defect_lower(ext, sample).value <= *ext.bounds.d_upper);

  // the lambda = Q section gives the same averages with one coset
  const VirtualSection full_lambda{{generator(q, 0)}, {z}, {Element::identity(q)}, {Element::identity(g)}};
  const auto ext2 = extend_by_averaging(f, ctx, full_lambda);
  for (const auto& x : all) CHECK(ext2(x) == f(mul(x, inv(ctx.project(x).is_identity() ? Element::identity(g) : z))));

  Quasimorphism zero("0", [](const Element&) { return Rational(0); });
  zero.g_invariant = true;
  zero.bounds.d_upper = Rational(0);
  const auto zext = extend_by_averaging(zero, ctx, vs);
  for (const auto& x : all) CHECK(zext(x) == 0);

  CHECK_THROWS_AS(extend_by_averaging(f, ctx, {{}, {}, {Element::identity(q)}, {Element::identity(g)}}), NotTransversal);
  CHECK_THROWS_AS(extend_by_averaging(f, ctx, {{generator(q, 0)}, {parse_element(g, "a")}, {Element::identity(q)},
                                              {Element::identity(g)}}),
                  PreconditionViolated);

  auto free_q = GroupSpec::free(1);
  auto f2 = GroupSpec::free(2);
  GroupContext infinite(f2, Homomorphism(f2, free_q, {generator(free_q, 0), Element::identity(free_q)}));
  CHECK_THROWS_AS(extend_by_averaging(zero, infinite, {}), InfiniteCosetSpace);
}

TEST_CASE("extend_by_averaging with N = G") {
  auto ctx = GroupContext::full(GroupSpec::free(2));
  auto g = ctx.group();
  auto q = ctx.quotient_group();
  const auto f = homogenized_counting_qm(g, "a b");
  const auto ext = extend_by_averaging(f, ctx, {{}, {}, {Element::identity(q)}, {Element::identity(g)}});
  for (const auto& x : enumerate_ball(g, 3)) CHECK(ext(x) == f(x));
}

TEST_CASE("Bavard lower bounds") {
  auto g = GroupSpec::free(2);
  const auto f = antisym_config(g);
  const Element c = parse_element(g, "[a,b]");
  CHECK(f(c) == 1);
  CHECK(bavard_lower(f, c) == Rational(1, 2));
  CHECK(bavard_lower(Rational(3), Rational(0)) == 0);
  CHECK_THROWS_AS(bavard_lower(Rational(0), Rational(1)), NonpositiveDefect);
  CHECK_THROWS_AS(bavard_lower(counting_qm(g, "a b"), c), PreconditionViolated);
}

TEST_CASE("commutators are bounded by the defect") {
  auto ctx = GroupContext::full(GroupSpec::free(2));
  auto g = ctx.group();
  const auto sample = ball_sample(ctx, 3, 3, true);
  Quasimorphism zero("0", [](const Element&) { return Rational(0); });
  CHECK(lemma36_check(zero, Rational(0), ctx, sample).ok);
  CHECK(lemma36_check(counting_qm(g, "a"), Rational(0), ctx, sample).ok);
  const auto f = antisym_config(g);
  CHECK(lemma36_check(f, *f.bounds.d_upper, ctx, sample).ok);
  const auto raw = lemma36_check(counting_qm(g, "a b"), Rational(1), ctx, sample);
  CHECK_FALSE(raw.ok);
  REQUIRE(raw.violation);
  CHECK(raw.worst > 1);
}

TEST_CASE("quasimorphism JSON specs") {
  auto ctx = f2_swap_context();
  auto g = ctx.group();
  const Json sym = {{"kind", "symmetrized"},
                    {"base", {{"kind", "counting"}, {"pattern", "a b"}, {"homogenized", true}}},
                    {"autos", {"", "z"}},
                    {"d_upper", "2"}};
  const auto f = qm_from_json(ctx, sym);
  CHECK(*f.bounds.d_upper == 2);
  CHECK(f.g_invariant);
  const auto direct = swap_symmetric(ctx);
  for (const auto& x : enumerate_ball(g, 4))
    if (ctx.in_normal_subgroup(x)) CHECK(f(x) == direct(x));
  const Json avg = {{"kind", "extended"}, {"method", "averaging"}, {"base", sym},
                    {"cosets", {{{"b", ""}, {"lift", ""}}, {{"b", "z"}, {"lift", "z"}}}}};
  CHECK(*qm_from_json(ctx, avg).bounds.d_upper == 2);
  const Json sec = {{"kind", "extended"}, {"method", "section"}, {"base", sym},
                    {"section", {{{"rep", ""}, {"value", "0"}}, {{"rep", "z"}, {"value", "1/2"}}}}};
  CHECK(qm_from_json(ctx, sec)(parse_element(g, "z")) == Rational(1, 2));
  const Json comb = {{"kind", "combination"},
                     {"terms", {{{"coefficient", "1/2"}, {"qm", {{"kind", "counting"}, {"pattern", "a"}}}}}}};
  CHECK(qm_from_json(ctx, comb)(parse_element(g, "a a")) == 1);
  CHECK_THROWS_AS(qm_from_json(ctx, Json{{"kind", "mystery"}}), ParseError);
  CHECK_THROWS_AS(qm_from_json(ctx, Json{{"pattern", "a"}}), ParseError);
}
