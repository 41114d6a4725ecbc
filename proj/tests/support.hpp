#pragma once

#include "gqm/group.hpp"
#include "gqm/small_groups.hpp"

#include <random>

namespace gqm::testing {

inline GroupContext d4_context() {
  auto g = dihedral_group(4);
  auto q = cyclic_group(2, "t");
  return GroupContext(g, Homomorphism(g, q, {Element::identity(q), generator(q, 0)}));
}

inline GroupContext s3_context() {
  auto g = symmetric_group(3);
  auto q = cyclic_group(2, "t");
  // transposition -> t, 3-cycle -> e; N = A3
  return GroupContext(g, Homomorphism(g, q, {generator(q, 0), Element::identity(q)}));
}

/// F2 x| Z/2 with z swapping a and b; generators a, b, z.
inline GroupPtr f2_swap_group() {
  auto fiber = GroupSpec::free(2);
  auto acting = cyclic_group(2, "z");
  return GroupSpec::semidirect(fiber, acting, {{Word{{1, 1}}, Word{{0, 1}}}});
}

/// N = F2, the kernel of the projection to Z/2.
inline GroupContext f2_swap_context() {
  auto g = f2_swap_group();
  auto q = cyclic_group(2, "z");
  return GroupContext(g, Homomorphism(g, q, {Element::identity(q), Element::identity(q), generator(q, 0)}));
}

inline GroupPtr z2_free_z3() { return GroupSpec::free_product({cyclic_group(2, "z"), cyclic_group(3, "c")}); }

inline Word random_word(std::size_t gens, std::size_t len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> gd(0, gens - 1);
  std::uniform_int_distribution<int> sd(0, 1);
  Word w;
  for (std::size_t i = 0; i < len; ++i) {
    w.push_back({static_cast<std::uint32_t>(gd(rng)), static_cast<std::int8_t>(sd(rng) ? 1 : -1)});
  }
  return w;
}

inline Element random_element(const GroupPtr& g, std::size_t max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> ld(0, max_len);
  return canonicalize(g, random_word(g->generator_count(), ld(rng), rng));
}

}  // namespace gqm::testing
