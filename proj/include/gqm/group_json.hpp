#pragma once

#include "gqm/group.hpp"

#include <json.hpp>

namespace gqm {

using Json = nlohmann::json;

/// Accepts kinds free, finite, free_product, direct, semidirect, and the
/// shorthands cyclic {"n", "generator"}, dihedral {"n"}, symmetric {"n"}.
GroupPtr group_from_json(const Json& j);
/// Always emits one of the five primary kinds.
Json group_to_json(const GroupSpec& g);

/// {"group": spec, "quotient": {"group": spec, "images": [word, ...]}};
/// a missing quotient means N = G.
GroupContext context_from_json(const Json& j);
Json context_to_json(const GroupContext& ctx);

Json word_to_json(const GroupSpec& g, std::span<const Letter> w);
Word word_from_json(const GroupSpec& g, const Json& j);
Element element_from_json(const GroupPtr& g, const Json& j);

Json load_json_file(const std::string& path);

}  // namespace gqm
