#pragma once

#include "gqm/group.hpp"
#include "gqm/group_json.hpp"
#include "gqm/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gqm {

/// Caller-supplied certified upper bounds. D, D' and D'' are the defect, the
/// conjugation defect on N, and the N-quasimorphism defect.
struct DefectBounds {
  std::optional<Rational> d_upper;
  std::optional<Rational> dprime_upper;
  std::optional<Rational> dpp_upper;
};

class Quasimorphism {
 public:
  using Evaluator = std::function<Rational(const Element&)>;

  Quasimorphism(std::string name, Evaluator eval) : name_(std::move(name)), eval_(std::move(eval)) {}

  Rational operator()(const Element& x) const { return eval_(x); }
  const std::string& name() const { return name_; }

  bool homogeneous = false;
  bool g_invariant = false;
  DefectBounds bounds;
  /// Counting convention and construction data.
  Json metadata;

 private:
  std::string name_;
  Evaluator eval_;
};

/// A value with the pair realising it; `witness` is empty when the value is 0 from an empty sample.
struct DefectWitness {
  Rational value = 0;
  std::optional<std::pair<Element, Element>> witness;
};

/// Occurrences of `pattern` minus occurrences of its inverse in the reduced
/// word, overlaps included. On a semidirect product with free fiber the count
/// is taken on the fiber part. Throws EmptyPattern.
Quasimorphism counting_qm(const GroupPtr& group, const Word& pattern);
Quasimorphism counting_qm(const GroupPtr& group, std::string_view pattern);

/// Exact homogenization of counting_qm: the same count on the cyclically reduced word.
Quasimorphism homogenized_counting_qm(const GroupPtr& group, const Word& pattern);
Quasimorphism homogenized_counting_qm(const GroupPtr& group, std::string_view pattern);

/// Sum of c_i * f_i; the defect bound is sum |c_i| D(f_i) when all are known.
Quasimorphism combine(const std::vector<std::pair<Rational, Quasimorphism>>& terms);

struct HomogenizedEstimate {
  Rational estimate;
  std::optional<Rational> error;
};

/// f(x^n)/n with |estimate - f_bar(x)| <= D/n. Throws MissingDefectBound when
/// `with_error` is set and the defect bound is unknown.
HomogenizedEstimate homogenize_estimate(const Quasimorphism& f, const Element& x, long long n, bool with_error = true);

using ElementPairs = std::vector<std::pair<Element, Element>>;

DefectWitness defect_lower(const Quasimorphism& f, const ElementPairs& sample);
/// max |f(g x g^-1) - f(x)| over (g, x) with x in N. Throws NonNormalSample.
DefectWitness conjugation_defect_lower(const Quasimorphism& f, const GroupContext& ctx, const ElementPairs& sample);
/// max of |f(gx) - f(g) - f(x)| and |f(xg) - f(x) - f(g)| over (g, x) with x in N.
DefectWitness nqm_defect_lower(const Quasimorphism& f, const GroupContext& ctx, const ElementPairs& sample);

/// x -> average of f(c x c^-1) over the conjugators. They must form a finite
/// group under multiplication (NotClosed otherwise).
Quasimorphism symmetrize(const Quasimorphism& f, const GroupContext& ctx, const std::vector<Element>& conjugators);

/// f'(s h) = value(s) + f(h) for a transversal S of N in G (finite quotient).
/// Throws NotTransversal.
Quasimorphism extend_by_section(const Quasimorphism& f, const GroupContext& ctx,
                                const std::vector<std::pair<Element, Rational>>& section);

/// A homomorphic section s on Lambda <= Q with right coset representatives B of
/// Lambda in Q and lifts s'(b); t(lambda b) = s(lambda) s'(b).
struct VirtualSection {
  std::vector<Element> lambda_generators;
  std::vector<Element> lambda_images;
  std::vector<Element> cosets;
  std::vector<Element> coset_lifts;
};

/// f'(g) = (1/#B) sum_b f(g t(b q(g))^-1 t(b)). Throws InfiniteCosetSpace for
/// infinite Q, NotTransversal when B is not a right transversal of Lambda, and
/// PreconditionViolated when s is not a homomorphic section.
Quasimorphism extend_by_averaging(const Quasimorphism& f, const GroupContext& ctx, const VirtualSection& vs);

/// |f_at_x| / (2 D). Throws NonpositiveDefect.
Rational bavard_lower(const Rational& d_upper, const Rational& f_at_x);
/// Uses f(x) directly; f must be flagged homogeneous and G-invariant with a defect bound.
Rational bavard_lower(const Quasimorphism& f, const Element& x);

struct Lemma36Result {
  bool ok = true;
  std::optional<std::pair<Element, Element>> violation;
  Rational worst = 0;
};

/// Checks |f([g,h])| <= D over samples (g, h) with h in N.
Lemma36Result lemma36_check(const Quasimorphism& f, const Rational& d_upper, const GroupContext& ctx,
                            const ElementPairs& sample);

/// Pairs (g, x) with g in the ball and x in the ball intersected with N.
ElementPairs ball_sample(const GroupContext& ctx, std::size_t g_radius, std::size_t x_radius, bool x_in_normal);

/// {"kind": "counting", "pattern", "homogenized"} | {"kind": "combination", "terms": [{"coefficient", "qm"}]}
/// | {"kind": "symmetrized", "base", "autos"} | {"kind": "extended", "method": "section" | "averaging", ...}.
/// Optional "d_upper" and "dprime_upper" strings and asserted "homogeneous" /
/// "g_invariant" flags on any spec.
Quasimorphism qm_from_json(const GroupContext& ctx, const Json& j);

}  // namespace gqm
