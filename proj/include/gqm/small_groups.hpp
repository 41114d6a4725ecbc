#pragma once

#include "gqm/group.hpp"

#include <string>

namespace gqm {

/// Z/n with elements e, r, r2, ... and generator `gen`.
GroupPtr cyclic_group(std::size_t n, const std::string& gen = "r");

/// Dihedral group of order 2n, generated by r (order n) and s with s r s^-1 = r^-1.
/// Elements are named e, r, r2, ..., s, sr, sr2, ... meaning s^a r^i.
GroupPtr dihedral_group(std::size_t n);

/// Symmetric group on {0..n-1}; elements named p<images>, generated by the
/// transposition (0 1) and the cycle (0 1 ... n-1).
GroupPtr symmetric_group(std::size_t n);

/// Multiplication-table copy of any finite group, elements named by their
/// canonical words (joined with '_'), generators the original generators.
GroupPtr as_finite_table(const GroupPtr& group);

}  // namespace gqm
