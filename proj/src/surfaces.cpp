#include "gqm/surfaces.hpp"

#include "gqm/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace gqm {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::size_t classes() {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) n += find(i) == i;
    return n;
  }
};

// Endpoints (tail, head) of face i among the vertex slots 0, 1, 2.
constexpr std::array<std::pair<int, int>, 3> kFaceEnds{{{1, 2}, {0, 2}, {0, 1}}};

struct Slot {
  std::size_t triangle;
  int face;
};

}  // namespace

SurfaceReport validate(const DeltaSurface& surface, const GroupContext& ctx) {
  const std::size_t s = surface.triangles.size(), e = surface.edges.size();
  for (const auto& label : surface.edges) {
    if (label.group_ptr() != ctx.group()) throw GroupMismatch("edge label not in the context group");
  }
  std::vector<std::vector<Slot>> occurrences(e);
  SurfaceReport rep;
  rep.gn_labelled = true;
  for (std::size_t k = 0; k < s; ++k) {
    const auto& t = surface.triangles[k];
    if (t.sign != 1 && t.sign != -1) throw MalformedComplex("triangle " + std::to_string(k) + " has sign other than +-1");
    for (int i = 0; i < 3; ++i) {
      if (t.faces[i] >= e) throw MalformedComplex("triangle " + std::to_string(k) + " names a missing edge");
      occurrences[t.faces[i]].push_back({k, i});
    }
    const Element& l0 = surface.edges[t.faces[0]];
    const Element& l1 = surface.edges[t.faces[1]];
    const Element& l2 = surface.edges[t.faces[2]];
    if (mul(l2, l0) != l1) {
      throw MalformedComplex("triangle " + std::to_string(k) + ": " + format(l1) + " != " + format(l2) + " * " +
                             format(l0));
    }
    if (!ctx.in_normal_subgroup(l0) && !ctx.in_normal_subgroup(l2)) rep.gn_labelled = false;
  }
  std::vector<std::size_t> boundary;
  for (std::size_t id = 0; id < e; ++id) {
    const std::size_t n = occurrences[id].size();
    if (n == 0 || n > 2) {
      throw MalformedComplex("edge " + std::to_string(id) + " is a face of " + std::to_string(n) + " triangles");
    }
    if (n == 1) boundary.push_back(id);
  }
  std::vector<std::size_t> declared = surface.boundary;
  std::sort(declared.begin(), declared.end());
  if (declared != boundary) throw MalformedComplex("declared boundary edges differ from the edges used once");

  rep.s = s;
  rep.e = e;
  rep.boundary_edge_count = boundary.size();
  rep.orientable = true;
  UnionFind tri(s), vert(3 * s);
  for (std::size_t id = 0; id < e; ++id) {
    const auto& occ = occurrences[id];
    const Slot& a = occ[0];
    for (const Slot& b : occ) {
      tri.unite(a.triangle, b.triangle);
      vert.unite(3 * a.triangle + kFaceEnds[a.face].first, 3 * b.triangle + kFaceEnds[b.face].first);
      vert.unite(3 * a.triangle + kFaceEnds[a.face].second, 3 * b.triangle + kFaceEnds[b.face].second);
    }
    if (occ.size() == 2) {
      auto induced = [&](const Slot& x) { return surface.triangles[x.triangle].sign * (x.face == 1 ? -1 : 1); };
      if (induced(occ[0]) + induced(occ[1]) != 0) rep.orientable = false;
    }
  }
  rep.p = s == 0 ? 0 : vert.classes();
  rep.connected = s > 0 && tri.classes() == 1;
  if (rep.connected && rep.boundary_edge_count == 1) {
    const long long chi = static_cast<long long>(rep.s) - static_cast<long long>(rep.e) + static_cast<long long>(rep.p);
    if ((1 - chi) % 2 == 0 && 1 - chi >= 0) {
      rep.genus = (1 - chi) / 2;
      rep.euler_identities = chi == 1 - 2 * *rep.genus && 1 + 2 * (static_cast<long long>(rep.e) - 1) == 3 * static_cast<long long>(rep.s);
    }
  }
  return rep;
}

DeltaSurface build_from_chain(const GroupContext& ctx, const Chain2& c, const Element& x) {
  if (!c.is_integral()) throw NonIntegral("chain has non-integral coefficients");
  for (const auto& [p, coeff] : c.terms()) {
    if (!is_admissible(ctx, p)) throw PreconditionViolated("chain pair is not admissible");
  }
  if (boundary2(c) != single(x)) throw BoundaryMismatch("boundary of the chain is not " + format(x));

  struct Tri {
    Pair2 pair;
    int sign;
  };
  std::vector<Tri> tris;
  for (const auto& [p, coeff] : c.terms()) {
    const int sign = coeff > 0 ? 1 : -1;
    const long long n = static_cast<long long>(boost::multiprecision::numerator(abs(coeff)));
    for (long long i = 0; i < n; ++i) tris.push_back({p, sign});
  }
  auto label = [&](std::size_t k, int i) {
    const Pair2& p = tris[k].pair;
    return i == 0 ? p.second : i == 1 ? mul(p.first, p.second) : p.first;
  };
  // positive and negative face occurrences per label, in (triangle, face) order
  std::map<Element, std::pair<std::vector<Slot>, std::vector<Slot>>, ElementLess> occ;
  for (std::size_t k = 0; k < tris.size(); ++k) {
    for (int i = 0; i < 3; ++i) {
      const int s = tris[k].sign * (i == 1 ? -1 : 1);
      auto& [pos, neg] = occ[label(k, i)];
      (s > 0 ? pos : neg).push_back({k, i});
    }
  }
  DeltaSurface full;
  full.triangles.resize(tris.size());
  for (std::size_t k = 0; k < tris.size(); ++k) full.triangles[k].sign = tris[k].sign;
  for (const auto& [z, lists] : occ) {
    const auto& [pos, neg] = lists;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      const std::size_t id = full.edges.size();
      full.edges.push_back(z);
      full.triangles[pos[j].triangle].faces[pos[j].face] = id;
      if (j < neg.size()) full.triangles[neg[j].triangle].faces[neg[j].face] = id;
      else full.boundary.push_back(id);
    }
  }
  if (full.boundary.size() != 1) throw BoundaryMismatch("gluing left " + std::to_string(full.boundary.size()) + " boundary edges");

  // keep the component of the boundary edge
  UnionFind uf(tris.size());
  std::vector<std::vector<std::size_t>> users(full.edges.size());
  for (std::size_t k = 0; k < tris.size(); ++k)
    for (int i = 0; i < 3; ++i) users[full.triangles[k].faces[i]].push_back(k);
  for (const auto& u : users)
    for (std::size_t k : u) uf.unite(u[0], k);
  const std::size_t root = uf.find(users[full.boundary[0]][0]);
  DeltaSurface out;
  std::vector<std::size_t> edge_map(full.edges.size(), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < tris.size(); ++k) {
    if (uf.find(k) != root) {
      ++out.pruned_triangles;
      continue;
    }
    SurfaceTriangle t = full.triangles[k];
    for (auto& f : t.faces) {
      if (edge_map[f] == static_cast<std::size_t>(-1)) {
        edge_map[f] = out.edges.size();
        out.edges.push_back(full.edges[f]);
      }
      f = edge_map[f];
    }
    out.triangles.push_back(t);
  }
  out.boundary.push_back(edge_map[full.boundary[0]]);
  if (out.pruned_triangles > 0) {
    out.warnings.push_back("pruned " + std::to_string(out.pruned_triangles) + " triangles in closed components");
  }
  return out;
}

DeltaSurface build_from_decomposition(const GroupContext& ctx, const std::vector<CommutatorPair>& pairs,
                                      const Element& x) {
  if (pairs.empty()) throw PreconditionViolated("decomposition needs at least one commutator");
  const GroupPtr& g = ctx.group();
  for (const auto& [a, h] : pairs) {
    if (a.group_ptr() != g || h.group_ptr() != g) throw GroupMismatch("decomposition not in the context group");
    if (!ctx.in_normal_subgroup(h)) throw NonNormalArgument(format(h) + " is not in N");
  }
  if (multiply_commutators(g, pairs) != x) throw ProductMismatch("commutator product differs from " + format(x));

  DeltaSurface out;
  auto edge = [&](const Element& label) {
    out.edges.push_back(label);
    return out.edges.size() - 1;
  };
  auto tri = [&](int sign, std::size_t d0, std::size_t d1, std::size_t d2) {
    out.triangles.push_back({sign, {d0, d1, d2}});
  };
  std::vector<std::size_t> comm_edges;
  for (const auto& [a, h] : pairs) {
    // (g,h), ([g,h], hg), (h,g) with signs -1, +1, +1
    const std::size_t eg = edge(a), eh = edge(h);
    const std::size_t egh = edge(mul(a, h)), ehg = edge(mul(h, a));
    const std::size_t ec = edge(commutator(a, h));
    tri(-1, eh, egh, eg);
    tri(1, ehg, egh, ec);
    tri(1, eg, ehg, eh);
    comm_edges.push_back(ec);
  }
  // fan: P_{j-1} * c_j = P_j
  std::size_t prev = comm_edges[0];
  Element partial = commutator(pairs[0].first, pairs[0].second);
  for (std::size_t j = 1; j < pairs.size(); ++j) {
    partial = mul(partial, commutator(pairs[j].first, pairs[j].second));
    const std::size_t next = edge(partial);
    tri(-1, comm_edges[j], next, prev);
    prev = next;
  }
  out.boundary.push_back(prev);
  return out;
}

GenusReport genus_vs_cl_check(const GroupContext& ctx, const Element& x, const SearchConfig& cfg,
                              std::optional<long long> lower) {
  GenusReport rep;
  rep.cl = cl_mixed(ctx, x, cfg);
  if (x.is_identity()) {
    rep.decomposition_genus = 0;
    rep.consistent = true;
    return rep;
  }
  rep.lower = lower.value_or(1);
  if (!rep.cl.value) throw PreconditionViolated("no commutator decomposition of " + format(x) + " within the search budget");
  const DeltaSurface s = build_from_decomposition(ctx, rep.cl.witness, x);
  const SurfaceReport sr = validate(s, ctx);
  rep.decomposition_genus = sr.genus;
  rep.consistent = sr.gn_labelled && sr.euler_identities && sr.genus == static_cast<long long>(*rep.cl.value) &&
                   *sr.genus >= rep.lower;
  const auto support = ctx.group()->is_finite() ? full_support(ctx) : ball_support(ctx, cfg.ball_radius, cfg.element_cap);
  try {
    const auto integral = integral_fill_norm(ctx, x, support);
    const DeltaSurface cs = build_from_chain(ctx, integral.witness, x);
    const SurfaceReport cr = validate(cs, ctx);
    if (cr.genus) {
      rep.chain_genus = cr.genus;
      if (*cr.genus < rep.lower) rep.consistent = false;
    }
  } catch (const Infeasible&) {
  } catch (const ResourceLimit&) {
  }
  return rep;
}

Json surface_to_json(const DeltaSurface& s) {
  Json j;
  j["triangles"] = Json::array();
  for (const auto& t : s.triangles) j["triangles"].push_back({{"sign", t.sign}, {"faces", t.faces}});
  j["edges"] = Json::array();
  for (const auto& e : s.edges) j["edges"].push_back({{"label", format(e)}});
  j["boundary"] = s.boundary;
  if (s.pruned_triangles) j["pruned_triangles"] = s.pruned_triangles;
  if (!s.warnings.empty()) j["warnings"] = s.warnings;
  return j;
}

DeltaSurface surface_from_json(const GroupContext& ctx, const Json& j) {
  DeltaSurface s;
  try {
    for (const auto& t : j.at("triangles")) {
      SurfaceTriangle tri;
      tri.sign = t.at("sign").get<int>();
      const auto faces = t.at("faces").get<std::vector<std::size_t>>();
      if (faces.size() != 3) throw MalformedComplex("a triangle needs three faces");
      std::copy(faces.begin(), faces.end(), tri.faces.begin());
      s.triangles.push_back(tri);
    }
    for (const auto& e : j.at("edges")) s.edges.push_back(element_from_json(ctx.group(), e.at("label")));
    s.boundary = j.at("boundary").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("surface JSON: ") + ex.what());
  }
  return s;
}

Json report_to_json(const SurfaceReport& r) {
  Json j{{"connected", r.connected},   {"orientable", r.orientable},
         {"gn_labelled", r.gn_labelled}, {"boundary_edge_count", r.boundary_edge_count},
         {"p", r.p},                   {"e", r.e},
         {"s", r.s},                   {"euler_identities", r.euler_identities}};
  j["genus"] = r.genus ? Json(*r.genus) : Json(nullptr);
  return j;
}

}  // namespace gqm
