#pragma once

#include "gqm/chains.hpp"
#include "gqm/commlength.hpp"
#include "gqm/group.hpp"
#include "gqm/group_json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gqm {

/// A triangle (v0, v1, v2) with faces d0 = [v1,v2], d1 = [v0,v2], d2 = [v0,v1].
/// Edges are oriented from the lower to the higher vertex, so a coherent
/// labelling has label(d1) = label(d2) * label(d0).
struct SurfaceTriangle {
  int sign = 1;
  std::array<std::size_t, 3> faces{};
};

struct DeltaSurface {
  std::vector<SurfaceTriangle> triangles;
  std::vector<Element> edges;
  std::vector<std::size_t> boundary;
  /// Triangles dropped as closed components while gluing a chain.
  std::size_t pruned_triangles = 0;
  std::vector<std::string> warnings;
};

struct SurfaceReport {
  bool connected = false;
  bool orientable = false;
  bool gn_labelled = false;
  std::size_t boundary_edge_count = 0;
  std::size_t p = 0, e = 0, s = 0;
  /// From the Euler characteristic; set for connected surfaces with one boundary edge.
  std::optional<long long> genus;
  /// s - e + p = 1 - 2g and 1 + 2(e - 1) = 3s, when the genus is defined.
  bool euler_identities = false;
};

/// Throws MalformedComplex on the first structural or coherence violation.
SurfaceReport validate(const DeltaSurface& surface, const GroupContext& ctx);

/// Glues one triangle per unit coefficient of an integral chain with boundary x.
/// Components without the boundary edge are pruned (and reported in warnings).
DeltaSurface build_from_chain(const GroupContext& ctx, const Chain2& c, const Element& x);

/// Genus-m surface with boundary x = [g_1,h_1]...[g_m,h_m]: three triangles per
/// handle and a fan of m-1 triangles on the partial products.
DeltaSurface build_from_decomposition(const GroupContext& ctx, const std::vector<CommutatorPair>& pairs,
                                      const Element& x);

struct GenusReport {
  ClResult cl;
  std::optional<long long> decomposition_genus;
  /// Genus of the surface glued from a minimal integral chain, when one was found.
  std::optional<long long> chain_genus;
  long long lower = 0;
  bool consistent = false;
};

/// Builds the surface of a cl_mixed witness and checks its genus against the
/// witness length; the glued surface of a minimal integral chain must have
/// genus at least `lower` (a certified lower bound for cl, 1 when omitted and x != e).
GenusReport genus_vs_cl_check(const GroupContext& ctx, const Element& x, const SearchConfig& cfg,
                              std::optional<long long> lower = std::nullopt);

Json surface_to_json(const DeltaSurface& s);
DeltaSurface surface_from_json(const GroupContext& ctx, const Json& j);
Json report_to_json(const SurfaceReport& r);

}  // namespace gqm
