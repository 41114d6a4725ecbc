#include "gqm/abelian.hpp"
#include "gqm/error.hpp"
#include "gqm/small_groups.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace gqm;
using namespace gqm::testing;

namespace {

bool is_diagonal_chain(const IntMatrix& d) {
  std::vector<BigInt> diag;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i == j) diag.push_back(d(i, j));
      else if (d(i, j) != 0) return false;
    }
  for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
    if (diag[i] < 0) return false;
    if (diag[i] == 0 && diag[i + 1] != 0) return false;
    if (diag[i] != 0 && diag[i + 1] % diag[i] != 0) return false;
  }
  return diag.empty() || diag.back() >= 0;
}

// gcd of all k x k minors, by brute force over row and column subsets.
BigInt determinantal_divisor(const IntMatrix& m, std::size_t k) {
  BigInt g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t i = start; i < m.rows(); ++i) {
      rows[depth] = i;
      pick_rows(i + 1, depth + 1);
    }
  };
  pick_cols = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      IntMatrix sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
      g = boost::multiprecision::gcd(g, BigInt(abs(determinant(sub))));
      return;
    }
    for (std::size_t j = start; j < m.cols(); ++j) {
      cols[depth] = j;
      pick_cols(j + 1, depth + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

GroupPtr klein() { return GroupSpec::direct({cyclic_group(2, "x"), cyclic_group(2, "y")}); }

std::vector<BigInt> ints(std::initializer_list<long long> xs) {
  std::vector<BigInt> out;
  for (long long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("Smith normal form examples") {
  const auto id = IntMatrix::identity(3);
  CHECK(smith_normal_form(id).d == id);
  const auto f = smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}));
  CHECK(f.d == IntMatrix::from_rows({{1, 0}, {0, 6}}));
  const IntMatrix zero(2, 3);
  CHECK(smith_normal_form(zero).d == zero);
  CHECK(determinant(IntMatrix::from_rows({{2, 1}, {7, 4}})) == 1);
  CHECK(determinant(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}})) == -3);
}

TEST_CASE("Smith normal form round trip and determinantal divisors") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 4), entry(-6, 6), zero(0, 3);
  for (int trial = 0; trial < 150; ++trial) {
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = zero(rng) == 0 ? 0 : entry(rng);
    const auto f = smith_normal_form(m);
    CHECK(f.u * m * f.v == f.d);
    CHECK(abs(determinant(f.u)) == 1);
    CHECK(abs(determinant(f.v)) == 1);
    CHECK(is_diagonal_chain(f.d));
    CHECK(smith_diagonal(m) == [&] {
      std::vector<BigInt> d;
      for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(f.d(i, i));
      return d;
    }());
    // d_1 ... d_k = gcd of the k x k minors
    BigInt prod = 1;
    for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
      prod *= f.d(k - 1, k - 1);
      CHECK(prod == determinantal_divisor(m, k));
    }
  }
}

TEST_CASE("invariant factors") {
  CHECK(FinAbGroup::from_cyclic(ints({2, 3})).invariant_factors() == ints({6}));
  CHECK(FinAbGroup::from_cyclic(ints({4, 6})).invariant_factors() == ints({2, 12}));
  CHECK(FinAbGroup::from_cyclic(ints({1, 0, 2})).invariant_factors() == ints({2, 0}));
  CHECK(FinAbGroup::from_cyclic(ints({1, 1})).is_trivial());
  CHECK(FinAbGroup::from_cyclic(ints({4, 6})).order() == 24);
  CHECK(FinAbGroup::from_cyclic(ints({2, 0})).to_string() == "Z/2 + Z");
}

TEST_CASE("abelianization") {
  CHECK(abelianization(cyclic_group(5)).invariant_factors() == ints({5}));
  CHECK(abelianization(symmetric_group(3)).invariant_factors() == ints({2}));
  CHECK(abelianization(klein()).invariant_factors() == ints({2, 2}));
  CHECK(abelianization(dihedral_group(4)).invariant_factors() == ints({2, 2}));
  CHECK(abelianization(GroupSpec::trivial()).is_trivial());
  std::vector<GroupPtr> groups{cyclic_group(6),    dihedral_group(3), dihedral_group(4), dihedral_group(5),
                               dihedral_group(6),  symmetric_group(3), symmetric_group(4), klein(),
                               GroupSpec::direct({cyclic_group(4, "x"), symmetric_group(3)})};
  for (const auto& g : groups) {
    // |G^ab| = |G| / |[G,G]| by commutator closure
    const auto all = enumerate_group(g);
    std::vector<Element> comms;
    for (const auto& x : all)
      for (const auto& y : all) comms.push_back(commutator(x, y));
    const auto derived = subgroup_closure(g, comms);
    CHECK(abelianization(g).order() * derived.size() == all.size());
  }
  CHECK_THROWS_AS(abelianization(GroupSpec::free(1)), PreconditionViolated);
}

TEST_CASE("tensor products") {
  auto z = [](long long n) { return FinAbGroup::from_cyclic(ints({n})); };
  CHECK(tensor(z(2), z(3)).is_trivial());
  CHECK(tensor(z(2), z(2)) == z(2));
  CHECK(tensor(z(4), z(6)) == z(2));
  CHECK(tensor(z(0), z(5)) == z(5));
  CHECK(tensor(z(0), z(0)) == z(0));
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> ord(0, 12), len(0, 3);
  auto random_group = [&] {
    std::vector<BigInt> o;
    for (int i = len(rng); i > 0; --i) o.emplace_back(ord(rng));
    return FinAbGroup::from_cyclic(o);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_group(), b = random_group(), c = random_group();
    CHECK(tensor(a, b) == tensor(b, a));
    std::vector<BigInt> bc = b.invariant_factors();
    bc.insert(bc.end(), c.invariant_factors().begin(), c.invariant_factors().end());
    std::vector<BigInt> sum = tensor(a, b).invariant_factors();
    const auto ac = tensor(a, c).invariant_factors();
    sum.insert(sum.end(), ac.begin(), ac.end());
    CHECK(tensor(a, FinAbGroup::from_cyclic(bc)) == FinAbGroup::from_cyclic(sum));
  }
}

TEST_CASE("mixed quotient presentation") {
  auto z = [](std::size_t n) { return cyclic_group(n); };
  CHECK(mixed_quotient_presentation(z(2), z(2)).invariant_factors() == ints({2}));
  CHECK(mixed_quotient_presentation(z(2), z(3)).is_trivial());
  CHECK(mixed_quotient_presentation(z(4), z(6)).invariant_factors() == ints({2}));
  CHECK(mixed_quotient_presentation(symmetric_group(3), z(2)).invariant_factors() == ints({2}));
  CHECK_THROWS_AS(mixed_quotient_presentation(z(40), z(40), 1000), ResourceLimit);
}

TEST_CASE("free-product quotient sweep") {
  std::vector<GroupPtr> groups{cyclic_group(2), cyclic_group(3),  cyclic_group(4),  cyclic_group(6),
                               symmetric_group(3), klein(), dihedral_group(4), cyclic_group(5)};
  for (const auto& a : groups)
    for (const auto& b : groups) {
      const auto c = check_freeindex(a, b);
      CHECK(c.agree);
    }
  CHECK(check_freeindex(cyclic_group(4), cyclic_group(6)).tensor.invariant_factors() == ints({2}));
  CHECK(check_freeindex(cyclic_group(2), cyclic_group(3)).presentation.is_trivial());
  CHECK(check_freeindex(klein(), klein()).presentation.invariant_factors() == ints({2, 2, 2, 2}));
  const Json j = to_json(check_freeindex(cyclic_group(4), cyclic_group(6)));
  CHECK(j["agree"] == true);
  CHECK(j["tensor"]["invariant_factors"] == Json::array({"2"}));
}
