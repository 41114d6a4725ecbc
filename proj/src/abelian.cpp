#include "gqm/abelian.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace gqm {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw PreconditionViolated("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols() != y.rows()) throw PreconditionViolated("matrix dimensions do not match");
  IntMatrix out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) out(i, j) += x(i, k) * y(k, j);
    }
  return out;
}

BigInt determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionViolated("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  IntMatrix a = m;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

// In-place Smith reduction; u and v are updated when non-null.
void reduce(IntMatrix& a, IntMatrix* u, IntMatrix* v) {
  const std::size_t m = a.rows(), n = a.cols();
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    if (u)
      for (std::size_t c = 0; c < m; ++c) std::swap((*u)(i, c), (*u)(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(a(r, i), a(r, j));
    if (v)
      for (std::size_t r = 0; r < n; ++r) std::swap((*v)(r, i), (*v)(r, j));
  };
  // row i -= q * row j
  auto row_op = [&](std::size_t i, std::size_t j, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < n; ++c)
      if (a(j, c) != 0) a(i, c) -= q * a(j, c);
    if (u)
      for (std::size_t c = 0; c < m; ++c)
        if ((*u)(j, c) != 0) (*u)(i, c) -= q * (*u)(j, c);
  };
  // col i -= q * col j
  auto col_op = [&](std::size_t i, std::size_t j, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < m; ++r)
      if (a(r, j) != 0) a(r, i) -= q * a(r, j);
    if (v)
      for (std::size_t r = 0; r < n; ++r)
        if ((*v)(r, j) != 0) (*v)(r, i) -= q * (*v)(r, j);
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the remaining block becomes the pivot
    auto find_pivot = [&]() -> std::pair<std::size_t, std::size_t> {
      std::pair<std::size_t, std::size_t> best{m, n};
      BigInt bv = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a(i, j) != 0 && (bv == 0 || abs(a(i, j)) < bv)) {
            bv = abs(a(i, j));
            best = {i, j};
            if (bv == 1) return best;
          }
      return best;
    };
    auto [pi, pj] = find_pivot();
    if (pi == m) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    while (true) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        row_op(i, t, a(i, t) / a(t, t));
        if (a(i, t) != 0) {
          swap_rows(t, i);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        col_op(j, t, a(t, j) / a(t, t));
        if (a(t, j) != 0) {
          swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // divisibility: fold in a row with an entry the pivot does not divide
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_op(t, bad, BigInt(-1));
    }
    if (a(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) a(t, c) = -a(t, c);
      if (u)
        for (std::size_t c = 0; c < m; ++c) (*u)(t, c) = -(*u)(t, c);
    }
  }
}

BigInt gcd_big(const BigInt& x, const BigInt& y) { return boost::multiprecision::gcd(x, y); }

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm f{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  reduce(f.d, &f.u, &f.v);
  return f;
}

std::vector<BigInt> smith_diagonal(IntMatrix m) {
  reduce(m, nullptr, nullptr);
  std::vector<BigInt> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(m(i, i));
  return d;
}

FinAbGroup FinAbGroup::cokernel(const IntMatrix& relations) {
  const auto diag = smith_diagonal(relations);
  FinAbGroup g;
  for (const auto& d : diag)
    if (d != 1 && d != 0) g.factors_.push_back(d);
  // columns beyond the nonzero diagonal are free
  std::size_t nonzero = 0;
  for (const auto& d : diag) nonzero += d != 0;
  for (std::size_t i = nonzero; i < relations.cols(); ++i) g.factors_.push_back(0);
  return g;
}

FinAbGroup FinAbGroup::from_cyclic(const std::vector<BigInt>& orders) {
  IntMatrix m(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) m(i, i) = orders[i];
  return cokernel(m);
}

BigInt FinAbGroup::order() const {
  BigInt n = 1;
  for (const auto& d : factors_) n *= d;
  return n;
}

std::string FinAbGroup::to_string() const {
  if (factors_.empty()) return "0";
  std::string s;
  for (const auto& d : factors_) {
    if (!s.empty()) s += " + ";
    s += d == 0 ? "Z" : "Z/" + d.str();
  }
  return s;
}

FinAbGroup abelianization(const GroupPtr& g, std::size_t cap) {
  if (!g->is_finite()) throw PreconditionViolated("abelianization needs a finite group");
  const auto elements = enumerate_group(g, cap);
  std::map<Element, std::size_t, ElementLess> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);
  const std::size_t n = elements.size();
  // x_{gh} = x_g + x_h for all g, h
  IntMatrix rel(n * n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = i * n + j;
      rel(r, index.at(mul(elements[i], elements[j]))) += 1;
      rel(r, i) -= 1;
      rel(r, j) -= 1;
    }
  return FinAbGroup::cokernel(rel);
}

FinAbGroup tensor(const FinAbGroup& a, const FinAbGroup& b) {
  std::vector<BigInt> orders;
  for (const auto& x : a.invariant_factors())
    for (const auto& y : b.invariant_factors()) orders.push_back(gcd_big(x, y));
  return FinAbGroup::from_cyclic(orders);
}

FinAbGroup mixed_quotient_presentation(const GroupPtr& a, const GroupPtr& b, std::size_t max_generators) {
  if (!a->is_finite() || !b->is_finite()) throw PreconditionViolated("free-product quotient needs finite factors");
  const auto as = enumerate_group(a, max_generators + 1), bs = enumerate_group(b, max_generators + 1);
  const std::size_t na = as.size(), nb = bs.size();
  if (na * nb > max_generators) {
    throw ResourceLimit(std::to_string(na * nb) + " generators exceed the budget of " + std::to_string(max_generators));
  }
  std::map<Element, std::size_t, ElementLess> ia, ib;
  for (std::size_t i = 0; i < na; ++i) ia.emplace(as[i], i);
  for (std::size_t j = 0; j < nb; ++j) ib.emplace(bs[j], j);
  auto col = [&](std::size_t i, std::size_t j) { return i * nb + j; };
  IntMatrix rel(na * na * nb + na * nb * nb, na * nb);
  std::size_t r = 0;
  for (std::size_t c = 0; c < na; ++c)
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = 0; y < nb; ++y, ++r) {
        rel(r, col(ia.at(mul(as[c], as[x])), y)) += 1;
        rel(r, col(c, y)) -= 1;
        rel(r, col(x, y)) -= 1;
      }
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t d = 0; d < nb; ++d)
      for (std::size_t y = 0; y < nb; ++y, ++r) {
        rel(r, col(x, ib.at(mul(bs[d], bs[y])))) += 1;
        rel(r, col(x, d)) -= 1;
        rel(r, col(x, y)) -= 1;
      }
  return FinAbGroup::cokernel(rel);
}

FreeIndexCheck check_freeindex(const GroupPtr& a, const GroupPtr& b, std::size_t max_generators) {
  FreeIndexCheck c;
  c.presentation = mixed_quotient_presentation(a, b, max_generators);
  c.tensor = tensor(abelianization(a), abelianization(b));
  c.agree = c.presentation == c.tensor;
  return c;
}

Json to_json(const FinAbGroup& g) {
  Json f = Json::array();
  for (const auto& d : g.invariant_factors()) f.push_back(d.str());
  return {{"invariant_factors", f}, {"description", g.to_string()}};
}

Json to_json(const FreeIndexCheck& c) {
  return {{"presentation", to_json(c.presentation)}, {"tensor", to_json(c.tensor)}, {"agree", c.agree}};
}

}  // namespace gqm
