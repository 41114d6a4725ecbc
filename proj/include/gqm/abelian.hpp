#pragma once

#include "gqm/group.hpp"
#include "gqm/group_json.hpp"
#include "gqm/rational.hpp"

#include <vector>

namespace gqm {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
  friend bool operator==(const IntMatrix& x, const IntMatrix& y) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> a_;
};

/// Exact determinant by fraction-free elimination.
BigInt determinant(const IntMatrix& m);

struct SmithForm {
  IntMatrix d, u, v;
};

/// U M V = D with D diagonal, nonnegative, d_1 | d_2 | ... (zeros last), U and V unimodular.
SmithForm smith_normal_form(const IntMatrix& m);

/// Diagonal of the Smith form without the transformations.
std::vector<BigInt> smith_diagonal(IntMatrix m);

/// Invariant factors d_1 | d_2 | ..., each > 1 or 0 (an infinite cyclic factor);
/// the trivial group has no factors.
class FinAbGroup {
 public:
  FinAbGroup() = default;
  /// Direct sum of cyclic groups Z/n_i (0 for Z), normalized through SNF.
  static FinAbGroup from_cyclic(const std::vector<BigInt>& orders);
  /// Cokernel of the relation matrix (rows are relations on the columns).
  static FinAbGroup cokernel(const IntMatrix& relations);

  const std::vector<BigInt>& invariant_factors() const { return factors_; }
  bool is_trivial() const { return factors_.empty(); }
  /// 0 for infinite groups.
  BigInt order() const;
  std::string to_string() const;

  friend bool operator==(const FinAbGroup&, const FinAbGroup&) = default;

 private:
  std::vector<BigInt> factors_;
};

FinAbGroup abelianization(const GroupPtr& g, std::size_t cap = 4096);
FinAbGroup tensor(const FinAbGroup& a, const FinAbGroup& b);

/// Abelian group on s_{a,b}, (a,b) in A x B, modulo s_{ca,b} = s_{c,b} + s_{a,b}
/// and s_{a,db} = s_{a,d} + s_{a,b}. Throws ResourceLimit when |A||B| exceeds `max_generators`.
FinAbGroup mixed_quotient_presentation(const GroupPtr& a, const GroupPtr& b, std::size_t max_generators = 1024);

struct FreeIndexCheck {
  FinAbGroup presentation;
  FinAbGroup tensor;
  bool agree = false;
};

FreeIndexCheck check_freeindex(const GroupPtr& a, const GroupPtr& b, std::size_t max_generators = 1024);

Json to_json(const FinAbGroup& g);
Json to_json(const FreeIndexCheck& c);

}  // namespace gqm
