#pragma once

#include "gqm/group.hpp"
#include "gqm/rational.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace gqm {

struct SearchConfig {
  std::size_t ball_radius = 2;
  std::size_t max_factors = 2;
  std::size_t element_cap = kDefaultElementCap;
  bool meet_in_middle = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class ClKind { Exact, UpperBound, NotFound };

const char* to_string(ClKind k);

using CommutatorPair = std::pair<Element, Element>;

struct ClResult {
  ClKind kind = ClKind::NotFound;
  std::optional<std::size_t> value;
  /// x = [g_1,h_1] ... [g_k,h_k] with every h_i in N.
  std::vector<CommutatorPair> witness;
};

Element multiply_commutators(const GroupPtr& group, const std::vector<CommutatorPair>& pairs);

/// Exact mixed commutator lengths on a finite group: distance from e in the
/// Cayley graph of [G,N] on the generating set {[g,h] : g in G, h in N}.
struct ClTable {
  std::unordered_map<Element, std::size_t, ElementHash> length;
  std::unordered_map<Element, std::pair<Element, CommutatorPair>, ElementHash> parent;

  std::optional<std::size_t> value(const Element& x) const;
  std::vector<CommutatorPair> witness(const Element& x) const;
};

ClTable cl_table(const GroupContext& ctx, std::size_t cap = kDefaultElementCap);

ClResult cl_mixed(const GroupContext& ctx, const Element& x, const SearchConfig& cfg = {});
ClResult cl_plain(const GroupPtr& group, const Element& x, const SearchConfig& cfg = {});

/// ceil((|f(x)| / D + 1) / 2) for a homogeneous G-invariant f with D >= D(f);
/// a lower bound for cl_{G,N}(x) when x != e.
long long cl_lower_from_qm(const Rational& defect_upper, const Rational& f_at_x);

/// A quasimorphism value and defect bound supplied as a lower-bound certificate.
struct QmCertificate {
  std::string name;
  Rational f_at_x;
  Rational defect_upper;
};

struct SclReport {
  Rational upper;
  bool has_upper = false;
  std::optional<long long> upper_power;
  std::vector<std::pair<long long, ClResult>> powers;
  Rational lower = 0;
  std::optional<QmCertificate> lower_certificate;
};

/// Upper bound min cl(x^n)/n over the given powers, lower bound max |f(x)|/(2D)
/// over the certificates.
SclReport scl_mixed_report(const GroupContext& ctx, const Element& x, const SearchConfig& cfg,
                           const std::vector<long long>& powers, const std::vector<QmCertificate>& certificates = {});

struct RewriteInput {
  Element f, g, alpha, beta;
};

struct RewriteResult {
  Element product;
  std::size_t clbound = 0;
  std::vector<CommutatorPair> witness;
};

/// y = [f_1,g_1]...[f_k,g_k] ([alpha_1,beta_1]...[alpha_k,beta_k])^{-1} as a product of 3k
/// mixed commutators. Requires q(f_i) = q(alpha_i) and q(g_i) = q(beta_i).
RewriteResult lemma84_rewrite(const GroupContext& ctx, const std::vector<RewriteInput>& inputs);

/// 1-based i <= j with w_i ... w_j = e, by collision of prefix products.
std::pair<std::size_t, std::size_t> pigeonhole_window(const GroupPtr& w_group, const std::vector<Element>& ws);

/// b = t(beta)^{-1} beta, checking that t(beta) is central and [alpha, beta] = [alpha, b].
Element central_section_reduce(const GroupContext& ctx, const Element& alpha, const Element& beta,
                               const std::function<Element(const Element&)>& t);

struct SectionCheck {
  Element x;
  std::size_t cl_mixed = 0;
  std::size_t cl_plain = 0;
};

struct SectionData {
  std::map<Element, Element, ElementLess> section;
  std::vector<Element> generated;          // G(s)
  std::vector<Element> generated_derived;  // [G(s), G(s)]
  std::vector<Element> mixed;              // [G,N]
  std::size_t ms = 0;
  Rational cs = 0;
  /// k and commutator product attaining C(s).
  std::size_t argmax_k = 0;
  std::optional<Element> argmax_product;
  std::vector<SectionCheck> checks;
  bool verified = false;
};

/// Constants for a set-theoretic section s: Q -> G of a finite group, and the
/// check cl_{G,N}(x) <= (C(s)+3) cl_G(x) on all of [G,N].
SectionData compute_section_constants(const GroupContext& ctx, const std::map<Element, Element, ElementLess>& section,
                                      std::size_t cap = kDefaultElementCap);

}  // namespace gqm
