#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace gqm {

/// One generator occurrence: a generator index and an exponent sign of +1 or -1.
struct Letter {
  std::uint32_t gen = 0;
  std::int8_t sign = 1;

  friend bool operator==(Letter, Letter) = default;
};

using Word = std::vector<Letter>;

inline Letter inverse(Letter l) { return {l.gen, static_cast<std::int8_t>(-l.sign)}; }
Word inverse(std::span<const Letter> w);

/// Letter order used for every tie-break: a < a^-1 < b < b^-1 < ...
inline bool letter_less(Letter x, Letter y) {
  return x.gen != y.gen ? x.gen < y.gen : x.sign > y.sign;
}

/// Shortlex: shorter words first, then lexicographic in letter_less.
bool shortlex_less(std::span<const Letter> x, std::span<const Letter> y);

struct WordHash {
  std::size_t operator()(std::span<const Letter> w) const noexcept;
  std::size_t operator()(const Word& w) const noexcept { return (*this)(std::span<const Letter>(w)); }
};

class GroupSpec;
using GroupPtr = std::shared_ptr<const GroupSpec>;

enum class GroupKind { Free, Finite, FreeProduct, Direct, Semidirect };

inline constexpr std::size_t kDefaultElementCap = 2'000'000;

/// An immutable group description with a terminating canonical-form procedure.
///
/// Generators of composite groups are numbered by concatenating the
/// generator lists of the factors (fiber before acting group for
/// semidirect products). Canonical forms:
///   - Free: freely reduced word.
///   - Finite: shortlex-least word over the declared generators.
///   - FreeProduct: alternating nontrivial syllables, each canonical in its factor.
///   - Direct: canonical words of the components, in factor order.
///   - Semidirect: canonical fiber word n followed by the canonical acting
///     word of gamma, representing n * gamma.
class GroupSpec {
 public:
  static GroupPtr free(std::vector<std::string> generator_names);
  /// Free group with default names a, b, c, ... (x1, x2, ... beyond 26).
  static GroupPtr free(std::size_t rank);
  static GroupPtr trivial();
  /// `table[i][j]` is the index of elements[i] * elements[j]. Empty `generators`
  /// means every non-identity element; empty `identity` means auto-detect.
  static GroupPtr finite(std::vector<std::string> elements,
                         std::vector<std::vector<std::size_t>> table,
                         std::vector<std::string> generators = {},
                         std::string identity = {});
  static GroupPtr free_product(std::vector<GroupPtr> factors);
  static GroupPtr direct(std::vector<GroupPtr> factors);
  /// `action[j][i]` is the fiber-local word t_j x_i t_j^-1 for acting generator
  /// t_j and fiber generator x_i. The acting group must be finite.
  static GroupPtr semidirect(GroupPtr fiber, GroupPtr acting, std::vector<std::vector<Word>> action);

  GroupKind kind() const { return kind_; }
  std::size_t generator_count() const { return names_.size(); }
  const std::vector<std::string>& generator_names() const { return names_; }

  /// Canonical form of `w`. Throws InvalidGenerator for out-of-range letters.
  Word normalize(std::span<const Letter> w) const;

  bool is_finite() const;

  /// Resolves a name (generator, or element of a finite factor) to a word.
  const Word* lookup_name(std::string_view name) const;

  // Free
  std::size_t rank() const;

  // Finite
  std::size_t order() const;
  const std::vector<std::string>& element_names() const;
  const std::vector<std::vector<std::size_t>>& table() const;
  std::size_t identity_index() const;
  const std::vector<std::size_t>& generator_elements() const;
  std::size_t finite_index(std::span<const Letter> w) const;
  const Word& canonical_of_index(std::size_t i) const;

  // FreeProduct / Direct
  const std::vector<GroupPtr>& factors() const;
  const std::vector<std::size_t>& offsets() const;

  // Semidirect
  const GroupPtr& fiber() const;
  const GroupPtr& acting() const;
  const std::vector<std::vector<Word>>& action() const;
  /// Image of a fiber-local word under conjugation by acting element `gamma`.
  Word act(std::size_t gamma, std::span<const Letter> fiber_word) const;

  GroupSpec(const GroupSpec&) = delete;
  GroupSpec& operator=(const GroupSpec&) = delete;

 private:
  struct FreeData {
    std::size_t rank = 0;
  };
  struct FiniteData {
    std::vector<std::string> elements;
    std::vector<std::vector<std::size_t>> table;
    std::size_t identity = 0;
    std::vector<std::size_t> inverse;
    std::vector<std::size_t> generators;
    std::vector<Word> canonical;
  };
  struct ProductData {
    std::vector<GroupPtr> factors;
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> factor_of_gen;
  };
  struct SemidirectData {
    GroupPtr fiber;
    GroupPtr acting;
    std::vector<std::vector<Word>> action;
    // images of fiber generators for every acting element (by table index)
    std::vector<std::vector<Word>> element_action;
  };

  GroupSpec();
  void build_name_index();
  Word normalize_free(std::span<const Letter> w) const;
  Word normalize_finite(std::span<const Letter> w) const;
  Word normalize_free_product(std::span<const Letter> w) const;
  Word normalize_direct(std::span<const Letter> w) const;
  Word normalize_semidirect(std::span<const Letter> w) const;
  void check_letters(std::span<const Letter> w) const;

  GroupKind kind_ = GroupKind::Free;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Word> name_words_;
  std::variant<FreeData, FiniteData, ProductData, SemidirectData> data_;
};

/// A group element held in canonical form.
class Element {
 public:
  Element() = default;
  /// `canonical` must already be a fixed point of `group->normalize`.
  Element(GroupPtr group, Word canonical) : group_(std::move(group)), word_(std::move(canonical)) {}

  static Element identity(GroupPtr group) { return Element(std::move(group), {}); }

  const GroupSpec& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const Word& word() const { return word_; }
  bool is_identity() const { return word_.empty(); }

  friend bool operator==(const Element& a, const Element& b) {
    return a.group_ == b.group_ && a.word_ == b.word_;
  }

 private:
  GroupPtr group_;
  Word word_;
};

/// Shortlex order on canonical words; the order used wherever ties are broken.
struct ElementLess {
  bool operator()(const Element& a, const Element& b) const { return shortlex_less(a.word(), b.word()); }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept { return WordHash{}(e.word()); }
};

Element canonicalize(const GroupPtr& group, std::span<const Letter> w);
Element mul(const Element& a, const Element& b);
Element inv(const Element& a);
/// g h g^-1 h^-1.
Element commutator(const Element& g, const Element& h);
Element power(const Element& a, long long n);
/// c x c^-1.
Element conjugate(const Element& c, const Element& x);
Element generator(const GroupPtr& group, std::size_t index);

/// A homomorphism given by the images of the domain generators.
/// Construction verifies that the defining relations of the domain map to the identity.
class Homomorphism {
 public:
  Homomorphism(GroupPtr domain, GroupPtr codomain, std::vector<Element> images);

  const GroupPtr& domain() const { return domain_; }
  const GroupPtr& codomain() const { return codomain_; }
  const std::vector<Element>& images() const { return images_; }

  Element operator()(const Element& g) const;
  Element apply(std::span<const Letter> w) const;

 private:
  GroupPtr domain_;
  GroupPtr codomain_;
  std::vector<Element> images_;
};

Element eval_hom(const Homomorphism& phi, const Element& g);

/// The pair (G, N) with N = ker(q: G -> Q).
class GroupContext {
 public:
  GroupContext(GroupPtr group, Homomorphism quotient);
  /// N = G, with q mapping to the trivial group.
  static GroupContext full(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  const Homomorphism& quotient() const { return quotient_; }
  const GroupPtr& quotient_group() const { return quotient_.codomain(); }
  bool is_full() const { return full_; }

  Element project(const Element& g) const;
  bool in_normal_subgroup(const Element& g) const;

 private:
  GroupPtr group_;
  Homomorphism quotient_;
  bool full_ = false;
};

inline bool in_normal_subgroup(const GroupContext& ctx, const Element& g) { return ctx.in_normal_subgroup(g); }

/// Every element of word length <= radius, ordered by distance then shortlex.
/// Throws ResourceLimit when more than `cap` elements are found.
std::vector<Element> enumerate_ball(const GroupPtr& group, std::size_t radius,
                                    std::size_t cap = kDefaultElementCap);

/// All elements of a finite group (BFS closure over the generators).
std::vector<Element> enumerate_group(const GroupPtr& group, std::size_t cap = kDefaultElementCap);

/// Subgroup generated by `gens` inside a finite group, ordered shortlex.
std::vector<Element> subgroup_closure(const GroupPtr& group, const std::vector<Element>& gens,
                                      std::size_t cap = kDefaultElementCap);

/// [G,N] of a finite group, ordered shortlex.
std::vector<Element> mixed_commutator_subgroup(const GroupContext& ctx, std::size_t cap = kDefaultElementCap);

// ---------------------------------------------------------------------------
// Literals: whitespace-separated names, a leading uppercase letter inverts a
// name, `^n` raises to a power, `[g,h]` is the commutator, parentheses group.

Word parse_word(const GroupSpec& group, std::string_view text);
Element parse_element(const GroupPtr& group, std::string_view text);
std::string format_word(const GroupSpec& group, std::span<const Letter> w);
std::string format(const Element& e);

}  // namespace gqm
