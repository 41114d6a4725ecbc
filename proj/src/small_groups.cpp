#include "gqm/small_groups.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace gqm {

GroupPtr cyclic_group(std::size_t n, const std::string& gen) {
  if (n == 0) throw InvalidGroupSpec("cyclic group of order 0");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(i == 0 ? "e" : i == 1 ? gen : gen + std::to_string(i));
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  if (n == 1) return GroupSpec::finite(names, table, {}, "e");
  return GroupSpec::finite(names, table, {gen}, "e");
}

GroupPtr dihedral_group(std::size_t n) {
  if (n < 2) throw InvalidGroupSpec("dihedral group needs n >= 2");
  // index a*n + i stands for s^a r^i
  std::vector<std::string> names;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = a ? "s" : "";
      if (i == 1) name += "r";
      if (i > 1) name += "r" + std::to_string(i);
      names.push_back(name.empty() ? "e" : name);
    }
  }
  std::vector<std::vector<std::size_t>> table(2 * n, std::vector<std::size_t>(2 * n));
  for (std::size_t x = 0; x < 2 * n; ++x) {
    for (std::size_t y = 0; y < 2 * n; ++y) {
      const std::size_t a = x / n, i = x % n, b = y / n, j = y % n;
      const std::size_t ri = b ? (n - i) % n : i;
      table[x][y] = ((a + b) % 2) * n + (ri + j) % n;
    }
  }
  return GroupSpec::finite(names, table, {"r", "s"}, "e");
}

GroupPtr symmetric_group(std::size_t n) {
  if (n < 2 || n > 6) throw InvalidGroupSpec("symmetric group supported for 2 <= n <= 6");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    index[perms[i]] = i;
    std::string name = "p";
    for (auto v : perms[i]) name += std::to_string(v);
    names.push_back(name);
  }
  std::vector<std::vector<std::size_t>> table(perms.size(), std::vector<std::size_t>(perms.size()));
  for (std::size_t i = 0; i < perms.size(); ++i) {
    for (std::size_t j = 0; j < perms.size(); ++j) {
      // (pq)(k) = p(q(k))
      std::vector<std::size_t> r(n);
      for (std::size_t k = 0; k < n; ++k) r[k] = perms[i][perms[j][k]];
      table[i][j] = index[r];
    }
  }
  std::vector<std::size_t> t(n), c(n);
  std::iota(t.begin(), t.end(), 0);
  std::swap(t[0], t[1]);
  for (std::size_t k = 0; k < n; ++k) c[k] = (k + 1) % n;
  std::vector<std::string> gens{names[index[t]]};
  if (n > 2) gens.push_back(names[index[c]]);
  return GroupSpec::finite(names, table, gens, names[0]);
}

GroupPtr as_finite_table(const GroupPtr& group) {
  if (group->kind() == GroupKind::Finite) return group;
  const auto elements = enumerate_group(group);
  std::unordered_map<Word, std::size_t, WordHash> index;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    index[elements[i].word()] = i;
    if (elements[i].is_identity()) {
      names.push_back("e");
      continue;
    }
    std::string name = format(elements[i]);
    std::replace(name.begin(), name.end(), ' ', '_');
    names.push_back(name);
  }
  std::vector<std::vector<std::size_t>> table(elements.size(), std::vector<std::size_t>(elements.size()));
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = 0; j < elements.size(); ++j) table[i][j] = index.at(mul(elements[i], elements[j]).word());
  std::vector<std::string> gens;
  for (std::size_t g = 0; g < group->generator_count(); ++g) {
    const Element x = generator(group, g);
    if (x.is_identity()) continue;
    const std::string& n = names[index.at(x.word())];
    if (std::find(gens.begin(), gens.end(), n) == gens.end()) gens.push_back(n);
  }
  if (gens.empty() && elements.size() > 1) throw InvalidGroupSpec("group has no nontrivial generators");
  return GroupSpec::finite(names, table, gens, "e");
}

}  // namespace gqm
