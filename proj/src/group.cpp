#include "gqm/group.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <optional>
#include <unordered_set>

namespace gqm {

Word inverse(std::span<const Letter> w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

bool shortlex_less(std::span<const Letter> x, std::span<const Letter> y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == y[i]) continue;
    return letter_less(x[i], y[i]);
  }
  return false;
}

std::size_t WordHash::operator()(std::span<const Letter> w) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (const Letter& l : w) {
    h ^= (static_cast<std::uint64_t>(l.gen) << 1) | (l.sign < 0 ? 1u : 0u);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

namespace {

Word shifted(std::span<const Letter> w, std::size_t offset) {
  Word out(w.begin(), w.end());
  for (auto& l : out) l.gen += static_cast<std::uint32_t>(offset);
  return out;
}

void append(Word& dst, std::span<const Letter> src) { dst.insert(dst.end(), src.begin(), src.end()); }

std::string default_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "x" + std::to_string(i - 25);
}

void check_generator_name(const std::string& name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) {
    throw InvalidGroupSpec("generator name '" + name + "' must start with a lowercase letter");
  }
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') {
      throw InvalidGroupSpec("generator name '" + name + "' has an invalid character");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

GroupSpec::GroupSpec() : data_(FreeData{}) {}

GroupPtr GroupSpec::free(std::vector<std::string> generator_names) {
  std::shared_ptr<GroupSpec> g(new GroupSpec());
  g->kind_ = GroupKind::Free;
  for (const auto& n : generator_names) check_generator_name(n);
  g->data_ = FreeData{generator_names.size()};
  g->names_ = std::move(generator_names);
  g->build_name_index();
  return g;
}

GroupPtr GroupSpec::free(std::size_t rank) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rank; ++i) names.push_back(default_name(i));
  return free(std::move(names));
}

GroupPtr GroupSpec::trivial() { return free(std::size_t{0}); }

GroupPtr GroupSpec::finite(std::vector<std::string> elements, std::vector<std::vector<std::size_t>> table,
                           std::vector<std::string> generators, std::string identity) {
  const std::size_t n = elements.size();
  if (n == 0) throw InvalidGroupSpec("finite group with no elements");
  if (table.size() != n) throw InvalidGroupSpec("table has wrong number of rows");
  for (const auto& row : table) {
    if (row.size() != n) throw InvalidGroupSpec("table row has wrong length");
    std::vector<bool> seen(n, false);
    for (auto v : row) {
      if (v >= n) throw InvalidGroupSpec("table entry out of range");
      if (seen[v]) throw InvalidGroupSpec("table is not a Latin square");
      seen[v] = true;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[table[i][j]]) throw InvalidGroupSpec("table is not a Latin square");
      seen[table[i][j]] = true;
    }
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (elements[i].empty()) throw InvalidGroupSpec("empty element name");
    if (!index.emplace(elements[i], i).second) throw InvalidGroupSpec("duplicate element name '" + elements[i] + "'");
  }

  FiniteData d;
  if (identity.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) ok = table[i][j] == j && table[j][i] == j;
      if (ok) {
        d.identity = i;
        found = true;
      }
    }
    if (!found) throw InvalidGroupSpec("table has no identity");
  } else {
    auto it = index.find(identity);
    if (it == index.end()) throw InvalidGroupSpec("unknown identity '" + identity + "'");
    d.identity = it->second;
    for (std::size_t j = 0; j < n; ++j) {
      if (table[d.identity][j] != j || table[j][d.identity] != j) {
        throw InvalidGroupSpec("declared identity '" + identity + "' is not an identity");
      }
    }
  }
  d.inverse.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (table[i][j] == d.identity) {
        if (table[j][i] != d.identity) throw InvalidGroupSpec("one-sided inverse in table");
        d.inverse[i] = j;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (table[table[i][j]][k] != table[i][table[j][k]]) {
          throw InvalidGroupSpec("table is not associative at (" + elements[i] + ", " + elements[j] + ", " +
                                 elements[k] + ")");
        }
      }
    }
  }

  if (generators.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != d.identity) generators.push_back(elements[i]);
    }
  }
  for (const auto& gname : generators) {
    check_generator_name(gname);
    auto it = index.find(gname);
    if (it == index.end()) throw InvalidGroupSpec("generator '" + gname + "' is not an element");
    if (std::find(d.generators.begin(), d.generators.end(), it->second) != d.generators.end()) {
      throw InvalidGroupSpec("duplicate generator '" + gname + "'");
    }
    d.generators.push_back(it->second);
  }

  // shortlex-least words by breadth-first search in letter order
  d.canonical.assign(n, Word{});
  std::vector<bool> reached(n, false);
  reached[d.identity] = true;
  std::deque<std::size_t> queue{d.identity};
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t gi = 0; gi < d.generators.size(); ++gi) {
      for (int sign : {1, -1}) {
        const std::size_t g = sign > 0 ? d.generators[gi] : d.inverse[d.generators[gi]];
        const std::size_t next = table[cur][g];
        if (reached[next]) continue;
        reached[next] = true;
        d.canonical[next] = d.canonical[cur];
        d.canonical[next].push_back({static_cast<std::uint32_t>(gi), static_cast<std::int8_t>(sign)});
        queue.push_back(next);
      }
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    throw InvalidGroupSpec("declared generators do not generate the group");
  }

  std::shared_ptr<GroupSpec> g(new GroupSpec());
  g->kind_ = GroupKind::Finite;
  g->names_ = std::move(generators);
  d.elements = std::move(elements);
  d.table = std::move(table);
  g->data_ = std::move(d);
  g->build_name_index();
  return g;
}

namespace {

void collect_names(const std::vector<GroupPtr>& factors, std::vector<std::string>& names,
                   std::vector<std::size_t>& offsets, std::vector<std::size_t>& factor_of_gen) {
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (!factors[f]) throw InvalidGroupSpec("null factor");
    offsets.push_back(names.size());
    for (const auto& n : factors[f]->generator_names()) {
      names.push_back(n);
      factor_of_gen.push_back(f);
    }
  }
}

}  // namespace

GroupPtr GroupSpec::free_product(std::vector<GroupPtr> factors) {
  std::shared_ptr<GroupSpec> g(new GroupSpec());
  g->kind_ = GroupKind::FreeProduct;
  ProductData d;
  collect_names(factors, g->names_, d.offsets, d.factor_of_gen);
  d.factors = std::move(factors);
  g->data_ = std::move(d);
  g->build_name_index();
  return g;
}

GroupPtr GroupSpec::direct(std::vector<GroupPtr> factors) {
  std::shared_ptr<GroupSpec> g(new GroupSpec());
  g->kind_ = GroupKind::Direct;
  ProductData d;
  collect_names(factors, g->names_, d.offsets, d.factor_of_gen);
  d.factors = std::move(factors);
  g->data_ = std::move(d);
  g->build_name_index();
  return g;
}

GroupPtr GroupSpec::semidirect(GroupPtr fiber, GroupPtr acting, std::vector<std::vector<Word>> action) {
  if (!fiber || !acting) throw InvalidGroupSpec("null factor");
  if (acting->kind() != GroupKind::Finite) throw InvalidGroupSpec("acting group must be finite");
  const std::size_t kf = fiber->generator_count();
  if (action.size() != acting->generator_count()) {
    throw InvalidGroupSpec("action needs one image list per acting generator");
  }
  for (auto& images : action) {
    if (images.size() != kf) throw InvalidGroupSpec("action image list must cover every fiber generator");
    for (auto& w : images) w = fiber->normalize(w);
  }
  // each generator action must be an endomorphism of the fiber
  for (const auto& images : action) {
    std::vector<Element> els;
    for (const auto& w : images) els.emplace_back(fiber, w);
    Homomorphism check(fiber, fiber, els);
    (void)check;
  }

  std::shared_ptr<GroupSpec> g(new GroupSpec());
  g->kind_ = GroupKind::Semidirect;
  g->names_ = fiber->generator_names();
  for (const auto& n : acting->generator_names()) g->names_.push_back(n);

  SemidirectData d;
  d.fiber = fiber;
  d.acting = acting;
  d.action = std::move(action);

  const std::size_t order = acting->order();
  const auto& tab = acting->table();
  const auto& gens = acting->generator_elements();
  auto compose = [&](const std::vector<Word>& outer, const std::vector<Word>& inner) {
    std::vector<Word> out;
    out.reserve(kf);
    for (const auto& w : inner) {
      Word buf;
      for (const Letter& l : w) {
        if (l.sign > 0) append(buf, outer[l.gen]);
        else append(buf, inverse(outer[l.gen]));
      }
      out.push_back(fiber->normalize(buf));
    }
    return out;
  };
  std::vector<Word> id_images;
  for (std::size_t i = 0; i < kf; ++i) id_images.push_back(Word{{static_cast<std::uint32_t>(i), 1}});

  std::vector<std::optional<std::vector<Word>>> phi(order);
  phi[acting->identity_index()] = id_images;
  std::deque<std::size_t> queue{acting->identity_index()};
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < gens.size(); ++a) {
      const std::size_t next = tab[cur][gens[a]];
      auto candidate = compose(*phi[cur], d.action[a]);
      if (!phi[next]) {
        phi[next] = std::move(candidate);
        queue.push_back(next);
      } else if (*phi[next] != candidate) {
        throw InvalidGroupSpec("action is not a homomorphism from the acting group");
      }
    }
  }
  for (std::size_t i = 0; i < order; ++i) {
    if (!phi[i]) throw InvalidGroupSpec("acting group not generated as a monoid");
    d.element_action.push_back(std::move(*phi[i]));
  }
  if (d.element_action[acting->identity_index()] != id_images) {
    throw InvalidGroupSpec("action of the identity is not the identity");
  }
  // inverse images compose to the identity on generators
  for (std::size_t a = 0; a < gens.size(); ++a) {
    std::size_t inv_idx = 0;
    for (std::size_t j = 0; j < order; ++j) {
      if (tab[gens[a]][j] == acting->identity_index()) inv_idx = j;
    }
    if (compose(d.element_action[inv_idx], d.action[a]) != id_images ||
        compose(d.action[a], d.element_action[inv_idx]) != id_images) {
      throw InvalidGroupSpec("action of generator '" + acting->generator_names()[a] + "' is not an automorphism");
    }
  }

  g->data_ = std::move(d);
  g->build_name_index();
  return g;
}

void GroupSpec::build_name_index() {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!name_words_.emplace(names_[i], Word{{static_cast<std::uint32_t>(i), 1}}).second) {
      throw InvalidGroupSpec("duplicate generator name '" + names_[i] + "'");
    }
  }
  // element names of finite parts, when unambiguous
  std::unordered_map<std::string, int> counts;
  std::vector<std::pair<std::string, Word>> extra;
  auto visit = [&](const GroupSpec& part, std::size_t offset) {
    for (const auto& [name, w] : part.name_words_) {
      extra.emplace_back(name, shifted(w, offset));
      ++counts[name];
    }
  };
  if (auto* f = std::get_if<FiniteData>(&data_)) {
    for (std::size_t i = 0; i < f->elements.size(); ++i) {
      extra.emplace_back(f->elements[i], f->canonical[i]);
      ++counts[f->elements[i]];
    }
  } else if (auto* p = std::get_if<ProductData>(&data_)) {
    for (std::size_t k = 0; k < p->factors.size(); ++k) visit(*p->factors[k], p->offsets[k]);
  } else if (auto* s = std::get_if<SemidirectData>(&data_)) {
    visit(*s->fiber, 0);
    visit(*s->acting, s->fiber->generator_count());
  }
  for (auto& [name, w] : extra) {
    if (counts[name] == 1 && !name_words_.contains(name)) name_words_.emplace(name, std::move(w));
  }
}

// ---------------------------------------------------------------------------
// accessors

bool GroupSpec::is_finite() const {
  switch (kind_) {
    case GroupKind::Free: return rank() == 0;
    case GroupKind::Finite: return true;
    case GroupKind::FreeProduct: {
      std::size_t nontrivial = 0;
      for (const auto& f : factors()) {
        if (!f->is_finite()) return false;
        if (f->generator_count() > 0 && !(f->kind() == GroupKind::Finite && f->order() == 1)) ++nontrivial;
      }
      return nontrivial <= 1;
    }
    case GroupKind::Direct:
      return std::all_of(factors().begin(), factors().end(), [](const GroupPtr& f) { return f->is_finite(); });
    case GroupKind::Semidirect: return fiber()->is_finite();
  }
  return false;
}

const Word* GroupSpec::lookup_name(std::string_view name) const {
  auto it = name_words_.find(std::string(name));
  return it == name_words_.end() ? nullptr : &it->second;
}

std::size_t GroupSpec::rank() const {
  if (auto* f = std::get_if<FreeData>(&data_)) return f->rank;
  throw InvalidGroupSpec("not a free group");
}

namespace {
template <class T, class V>
const T& expect(const V& v, const char* what) {
  if (auto* p = std::get_if<T>(&v)) return *p;
  throw InvalidGroupSpec(std::string("not a ") + what);
}
}  // namespace

std::size_t GroupSpec::order() const { return expect<FiniteData>(data_, "finite group").elements.size(); }
const std::vector<std::string>& GroupSpec::element_names() const {
  return expect<FiniteData>(data_, "finite group").elements;
}
const std::vector<std::vector<std::size_t>>& GroupSpec::table() const {
  return expect<FiniteData>(data_, "finite group").table;
}
std::size_t GroupSpec::identity_index() const { return expect<FiniteData>(data_, "finite group").identity; }
const std::vector<std::size_t>& GroupSpec::generator_elements() const {
  return expect<FiniteData>(data_, "finite group").generators;
}
const Word& GroupSpec::canonical_of_index(std::size_t i) const {
  return expect<FiniteData>(data_, "finite group").canonical.at(i);
}

std::size_t GroupSpec::finite_index(std::span<const Letter> w) const {
  const auto& d = expect<FiniteData>(data_, "finite group");
  check_letters(w);
  std::size_t idx = d.identity;
  for (const Letter& l : w) {
    const std::size_t g = d.generators[l.gen];
    idx = d.table[idx][l.sign > 0 ? g : d.inverse[g]];
  }
  return idx;
}

const std::vector<GroupPtr>& GroupSpec::factors() const { return expect<ProductData>(data_, "product").factors; }
const std::vector<std::size_t>& GroupSpec::offsets() const { return expect<ProductData>(data_, "product").offsets; }
const GroupPtr& GroupSpec::fiber() const { return expect<SemidirectData>(data_, "semidirect product").fiber; }
const GroupPtr& GroupSpec::acting() const { return expect<SemidirectData>(data_, "semidirect product").acting; }
const std::vector<std::vector<Word>>& GroupSpec::action() const {
  return expect<SemidirectData>(data_, "semidirect product").action;
}

Word GroupSpec::act(std::size_t gamma, std::span<const Letter> fiber_word) const {
  const auto& d = expect<SemidirectData>(data_, "semidirect product");
  const auto& images = d.element_action.at(gamma);
  Word buf;
  for (const Letter& l : fiber_word) {
    if (l.gen >= images.size()) throw InvalidGenerator("fiber generator index out of range");
    if (l.sign > 0) append(buf, images[l.gen]);
    else append(buf, inverse(images[l.gen]));
  }
  return d.fiber->normalize(buf);
}

// ---------------------------------------------------------------------------
// normal forms

void GroupSpec::check_letters(std::span<const Letter> w) const {
  for (const Letter& l : w) {
    if (l.gen >= names_.size()) {
      throw InvalidGenerator("generator index " + std::to_string(l.gen) + " out of range (group has " +
                             std::to_string(names_.size()) + ")");
    }
    if (l.sign != 1 && l.sign != -1) throw InvalidGenerator("exponent sign must be +1 or -1");
  }
}

Word GroupSpec::normalize(std::span<const Letter> w) const {
  check_letters(w);
  switch (kind_) {
    case GroupKind::Free: return normalize_free(w);
    case GroupKind::Finite: return normalize_finite(w);
    case GroupKind::FreeProduct: return normalize_free_product(w);
    case GroupKind::Direct: return normalize_direct(w);
    case GroupKind::Semidirect: return normalize_semidirect(w);
  }
  return {};
}

Word GroupSpec::normalize_free(std::span<const Letter> w) const {
  Word out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty() && out.back() == inverse(l)) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

Word GroupSpec::normalize_finite(std::span<const Letter> w) const {
  return std::get<FiniteData>(data_).canonical[finite_index(w)];
}

Word GroupSpec::normalize_free_product(std::span<const Letter> w) const {
  const auto& d = std::get<ProductData>(data_);
  struct Syllable {
    std::size_t factor;
    Word local;
  };
  std::vector<Syllable> stack;
  std::size_t i = 0;
  while (i < w.size()) {
    const std::size_t f = d.factor_of_gen[w[i].gen];
    std::size_t j = i;
    while (j < w.size() && d.factor_of_gen[w[j].gen] == f) ++j;
    Word run = shifted(w.subspan(i, j - i), 0);
    for (auto& l : run) l.gen -= static_cast<std::uint32_t>(d.offsets[f]);
    if (!stack.empty() && stack.back().factor == f) {
      Word merged = std::move(stack.back().local);
      append(merged, run);
      stack.pop_back();
      merged = d.factors[f]->normalize(merged);
      if (!merged.empty()) stack.push_back({f, std::move(merged)});
    } else {
      Word local = d.factors[f]->normalize(run);
      if (!local.empty()) stack.push_back({f, std::move(local)});
    }
    i = j;
  }
  Word out;
  for (const auto& s : stack) append(out, shifted(s.local, d.offsets[s.factor]));
  return out;
}

Word GroupSpec::normalize_direct(std::span<const Letter> w) const {
  const auto& d = std::get<ProductData>(data_);
  std::vector<Word> parts(d.factors.size());
  for (const Letter& l : w) {
    const std::size_t f = d.factor_of_gen[l.gen];
    parts[f].push_back({static_cast<std::uint32_t>(l.gen - d.offsets[f]), l.sign});
  }
  Word out;
  for (std::size_t f = 0; f < parts.size(); ++f) append(out, shifted(d.factors[f]->normalize(parts[f]), d.offsets[f]));
  return out;
}

Word GroupSpec::normalize_semidirect(std::span<const Letter> w) const {
  const auto& d = std::get<SemidirectData>(data_);
  const std::size_t kf = d.fiber->generator_count();
  const auto& tab = d.acting->table();
  const auto& gens = d.acting->generator_elements();
  const std::size_t id = d.acting->identity_index();
  // n * gamma * x = n * (gamma x gamma^-1) * gamma
  Word buf;
  std::size_t gamma = id;
  for (const Letter& l : w) {
    if (l.gen < kf) {
      const Word& img = d.element_action[gamma][l.gen];
      if (l.sign > 0) append(buf, img);
      else append(buf, inverse(img));
    } else {
      const std::size_t g = gens[l.gen - kf];
      std::size_t gi = g;
      if (l.sign < 0) {
        for (std::size_t j = 0; j < tab.size(); ++j) {
          if (tab[g][j] == id) gi = j;
        }
      }
      gamma = tab[gamma][gi];
    }
  }
  Word out = d.fiber->normalize(buf);
  append(out, shifted(d.acting->canonical_of_index(gamma), kf));
  return out;
}

// ---------------------------------------------------------------------------
// elements

Element canonicalize(const GroupPtr& group, std::span<const Letter> w) { return Element(group, group->normalize(w)); }

namespace {
void same_group(const Element& a, const Element& b) {
  if (a.group_ptr() != b.group_ptr() || !a.group_ptr()) throw GroupMismatch("elements belong to different groups");
}
}  // namespace

Element mul(const Element& a, const Element& b) {
  same_group(a, b);
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;
  Word w = a.word();
  append(w, b.word());
  return canonicalize(a.group_ptr(), w);
}

Element inv(const Element& a) { return canonicalize(a.group_ptr(), inverse(a.word())); }

Element commutator(const Element& g, const Element& h) {
  same_group(g, h);
  Word w = g.word();
  append(w, h.word());
  append(w, inverse(g.word()));
  append(w, inverse(h.word()));
  return canonicalize(g.group_ptr(), w);
}

Element power(const Element& a, long long n) {
  Element base = n < 0 ? inv(a) : a;
  unsigned long long k = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
  Element result = Element::identity(a.group_ptr());
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

Element conjugate(const Element& c, const Element& x) {
  same_group(c, x);
  Word w = c.word();
  append(w, x.word());
  append(w, inverse(c.word()));
  return canonicalize(c.group_ptr(), w);
}

Element generator(const GroupPtr& group, std::size_t index) {
  return canonicalize(group, Word{{static_cast<std::uint32_t>(index), 1}});
}

// ---------------------------------------------------------------------------
// homomorphisms

namespace {

void verify_relations(const GroupSpec& domain, const std::vector<Element>& images, std::size_t offset);

Element apply_images(const std::vector<Element>& images, std::size_t offset, std::span<const Letter> w,
                     const GroupPtr& codomain) {
  Word buf;
  for (const Letter& l : w) {
    const Element& img = images[l.gen + offset];
    if (l.sign > 0) append(buf, img.word());
    else append(buf, inverse(img.word()));
  }
  return canonicalize(codomain, buf);
}

void verify_relations(const GroupSpec& domain, const std::vector<Element>& images, std::size_t offset) {
  if (images.empty()) return;
  const GroupPtr& cod = images.front().group_ptr();
  switch (domain.kind()) {
    case GroupKind::Free: return;
    case GroupKind::Finite: {
      const std::size_t n = domain.order();
      std::vector<Element> el;
      el.reserve(n);
      for (std::size_t i = 0; i < n; ++i) el.push_back(apply_images(images, offset, domain.canonical_of_index(i), cod));
      const auto& tab = domain.table();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!(mul(el[i], el[j]) == el[tab[i][j]])) {
            throw InvalidHomomorphism("relation " + domain.element_names()[i] + " * " + domain.element_names()[j] +
                                      " = " + domain.element_names()[tab[i][j]] + " is not preserved");
          }
        }
      }
      return;
    }
    case GroupKind::FreeProduct:
      for (std::size_t f = 0; f < domain.factors().size(); ++f) {
        verify_relations(*domain.factors()[f], images, offset + domain.offsets()[f]);
      }
      return;
    case GroupKind::Direct: {
      const auto& fs = domain.factors();
      for (std::size_t f = 0; f < fs.size(); ++f) verify_relations(*fs[f], images, offset + domain.offsets()[f]);
      for (std::size_t f1 = 0; f1 < fs.size(); ++f1) {
        for (std::size_t f2 = f1 + 1; f2 < fs.size(); ++f2) {
          for (std::size_t x = 0; x < fs[f1]->generator_count(); ++x) {
            for (std::size_t y = 0; y < fs[f2]->generator_count(); ++y) {
              const Element& a = images[offset + domain.offsets()[f1] + x];
              const Element& b = images[offset + domain.offsets()[f2] + y];
              if (!commutator(a, b).is_identity()) {
                throw InvalidHomomorphism("images of different direct factors do not commute");
              }
            }
          }
        }
      }
      return;
    }
    case GroupKind::Semidirect: {
      const std::size_t kf = domain.fiber()->generator_count();
      verify_relations(*domain.fiber(), images, offset);
      verify_relations(*domain.acting(), images, offset + kf);
      const auto& act = domain.action();
      for (std::size_t t = 0; t < act.size(); ++t) {
        for (std::size_t x = 0; x < kf; ++x) {
          const Element lhs = conjugate(images[offset + kf + t], images[offset + x]);
          const Element rhs = apply_images(images, offset, act[t][x], cod);
          if (!(lhs == rhs)) throw InvalidHomomorphism("conjugation relation of the semidirect product not preserved");
        }
      }
      return;
    }
  }
}

}  // namespace

Homomorphism::Homomorphism(GroupPtr domain, GroupPtr codomain, std::vector<Element> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
  if (!domain_ || !codomain_) throw InvalidHomomorphism("null group");
  if (images_.size() != domain_->generator_count()) {
    throw InvalidHomomorphism("expected " + std::to_string(domain_->generator_count()) + " generator images, got " +
                              std::to_string(images_.size()));
  }
  for (const auto& img : images_) {
    if (img.group_ptr() != codomain_) throw InvalidHomomorphism("generator image not in the codomain");
  }
  verify_relations(*domain_, images_, 0);
}

Element Homomorphism::apply(std::span<const Letter> w) const {
  domain_->normalize(w);  // validates letters
  return apply_images(images_, 0, w, codomain_);
}

Element Homomorphism::operator()(const Element& g) const {
  if (g.group_ptr() != domain_) throw GroupMismatch("element is not in the homomorphism domain");
  return apply_images(images_, 0, g.word(), codomain_);
}

Element eval_hom(const Homomorphism& phi, const Element& g) { return phi(g); }

// ---------------------------------------------------------------------------
// contexts

GroupContext::GroupContext(GroupPtr group, Homomorphism quotient)
    : group_(std::move(group)), quotient_(std::move(quotient)) {
  if (quotient_.domain() != group_) throw GroupMismatch("quotient map is not defined on the group");
  full_ = std::all_of(quotient_.images().begin(), quotient_.images().end(),
                      [](const Element& e) { return e.is_identity(); });
}

GroupContext GroupContext::full(GroupPtr group) {
  auto q = GroupSpec::trivial();
  std::vector<Element> images(group->generator_count(), Element::identity(q));
  Homomorphism hom(group, q, std::move(images));
  return GroupContext(std::move(group), std::move(hom));
}

Element GroupContext::project(const Element& g) const { return quotient_(g); }

bool GroupContext::in_normal_subgroup(const Element& g) const {
  if (g.group_ptr() != group_) throw GroupMismatch("element is not in the context group");
  return full_ || quotient_(g).is_identity();
}

// ---------------------------------------------------------------------------
// enumeration

std::vector<Element> enumerate_ball(const GroupPtr& group, std::size_t radius, std::size_t cap) {
  std::unordered_set<Word, WordHash> seen;
  std::vector<Element> result{Element::identity(group)};
  seen.insert(Word{});
  std::vector<Word> layer{Word{}};
  const std::size_t k = group->generator_count();
  for (std::size_t r = 0; r < radius && !layer.empty(); ++r) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (std::uint32_t g = 0; g < k; ++g) {
        for (std::int8_t s : {std::int8_t{1}, std::int8_t{-1}}) {
          Word cand = w;
          cand.push_back({g, s});
          cand = group->normalize(cand);
          if (seen.insert(cand).second) {
            if (seen.size() > cap) {
              throw ResourceLimit("ball of radius " + std::to_string(radius) + " exceeds the element cap of " +
                                  std::to_string(cap));
            }
            next.push_back(std::move(cand));
          }
        }
      }
    }
    std::sort(next.begin(), next.end(), [](const Word& a, const Word& b) { return shortlex_less(a, b); });
    for (const auto& w : next) result.emplace_back(group, w);
    layer = std::move(next);
  }
  return result;
}

std::vector<Element> enumerate_group(const GroupPtr& group, std::size_t cap) {
  if (!group->is_finite()) throw PreconditionViolated("group is not finite");
  return enumerate_ball(group, static_cast<std::size_t>(-1), cap);
}

std::vector<Element> mixed_commutator_subgroup(const GroupContext& ctx, std::size_t cap) {
  const auto all = enumerate_group(ctx.group(), cap);
  std::unordered_set<Element, ElementHash> gens;
  for (const auto& h : all) {
    if (!ctx.in_normal_subgroup(h)) continue;
    for (const auto& g : all) gens.insert(commutator(g, h));
  }
  std::vector<Element> list(gens.begin(), gens.end());
  std::sort(list.begin(), list.end(), ElementLess{});
  return subgroup_closure(ctx.group(), list, cap);
}

std::vector<Element> subgroup_closure(const GroupPtr& group, const std::vector<Element>& gens, std::size_t cap) {
  if (!group->is_finite()) throw PreconditionViolated("group is not finite");
  std::unordered_set<Element, ElementHash> seen{Element::identity(group)};
  std::deque<Element> queue{Element::identity(group)};
  while (!queue.empty()) {
    Element cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      Element next = mul(cur, g);
      if (seen.insert(next).second) {
        if (seen.size() > cap) throw ResourceLimit("subgroup closure exceeds the element cap");
        queue.push_back(std::move(next));
      }
    }
  }
  std::vector<Element> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), ElementLess{});
  return out;
}

// ---------------------------------------------------------------------------
// literals

namespace {

class LiteralParser {
 public:
  LiteralParser(const GroupSpec& group, std::string_view text) : group_(group), text_(text) {}

  Word parse() {
    Word w = sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*' ||
                                   text_[pos_] == '.')) {
      ++pos_;
    }
  }

  static bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  Word sequence() {
    Word out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      if (c == ')' || c == ']' || c == ',') break;
      append(out, factor());
    }
    return out;
  }

  Word factor() {
    Word base = atom();
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      skip_space();
      long long n = exponent();
      Word p;
      const Word unit = n < 0 ? inverse(base) : base;
      for (long long i = 0; i < (n < 0 ? -n : n); ++i) append(p, unit);
      base = std::move(p);
      skip_space();
    }
    return base;
  }

  long long exponent() {
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 9) fail("exponent too large");
    long long n = std::stoll(std::string(text_.substr(start, pos_ - start)));
    return neg ? -n : n;
  }

  Word atom() {
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = sequence();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word g = sequence();
      expect(',');
      Word h = sequence();
      expect(']');
      Word w = g;
      append(w, h);
      append(w, inverse(g));
      append(w, inverse(h));
      return w;
    }
    if (!name_char(c)) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    return resolve(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::optional<Word> resolve_token(std::string_view tok) const {
    if (const Word* w = group_.lookup_name(tok)) return *w;
    if (std::isupper(static_cast<unsigned char>(tok[0]))) {
      std::string lower(tok);
      lower[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(lower[0])));
      if (const Word* w = group_.lookup_name(lower)) return inverse(*w);
    }
    if (tok == "1") return Word{};
    return std::nullopt;
  }

  Word resolve(std::string_view tok) {
    if (auto w = resolve_token(tok)) return *w;
    // fall back to juxtaposed single-character names such as "abAB"
    Word out;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      auto w = resolve_token(tok.substr(i, 1));
      if (!w) fail("unknown generator '" + std::string(tok) + "'");
      append(out, *w);
    }
    return out;
  }

  const GroupSpec& group_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(const GroupSpec& group, std::string_view text) { return LiteralParser(group, text).parse(); }

Element parse_element(const GroupPtr& group, std::string_view text) {
  return canonicalize(group, parse_word(*group, text));
}

std::string format_word(const GroupSpec& group, std::span<const Letter> w) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w) {
    if (l.gen >= group.generator_count()) throw InvalidGenerator("generator index out of range");
    std::string name = group.generator_names()[l.gen];
    if (l.sign < 0) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (!out.empty()) out += ' ';
    out += name;
  }
  return out;
}

std::string format(const Element& e) { return format_word(e.group(), e.word()); }

}  // namespace gqm
