#include "gqm/group_json.hpp"

#include "gqm/error.hpp"
#include "gqm/small_groups.hpp"

#include <fstream>
#include <sstream>

namespace gqm {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<GroupPtr> factor_list(const Json& j) {
  std::vector<GroupPtr> out;
  const Json& fs = field(j, "factors");
  if (!fs.is_array()) throw ParseError("'factors' must be an array");
  for (const auto& f : fs) out.push_back(group_from_json(f));
  return out;
}

}  // namespace

GroupPtr group_from_json(const Json& j) {
  try {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "free") {
      if (j.contains("generators")) return GroupSpec::free(j.at("generators").get<std::vector<std::string>>());
      return GroupSpec::free(field(j, "rank").get<std::size_t>());
    }
    if (kind == "finite") {
      auto elements = field(j, "elements").get<std::vector<std::string>>();
      auto table = field(j, "table").get<std::vector<std::vector<std::size_t>>>();
      std::vector<std::string> gens;
      if (j.contains("generators")) gens = j.at("generators").get<std::vector<std::string>>();
      std::string identity = j.value("identity", std::string{});
      return GroupSpec::finite(std::move(elements), std::move(table), std::move(gens), std::move(identity));
    }
    if (kind == "free_product") return GroupSpec::free_product(factor_list(j));
    if (kind == "direct") return GroupSpec::direct(factor_list(j));
    if (kind == "semidirect") {
      GroupPtr fiber = group_from_json(field(j, "fiber"));
      GroupPtr acting = group_from_json(field(j, "acting"));
      std::vector<std::vector<Word>> action;
      for (const auto& row : field(j, "action")) {
        std::vector<Word> images;
        for (const auto& w : row) images.push_back(word_from_json(*fiber, w));
        action.push_back(std::move(images));
      }
      return GroupSpec::semidirect(fiber, acting, std::move(action));
    }
    if (kind == "cyclic") return cyclic_group(field(j, "n").get<std::size_t>(), j.value("generator", std::string("r")));
    if (kind == "dihedral") return dihedral_group(field(j, "n").get<std::size_t>());
    if (kind == "symmetric") return symmetric_group(field(j, "n").get<std::size_t>());
    throw ParseError("unknown group kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed group spec: ") + e.what());
  }
}

Json group_to_json(const GroupSpec& g) {
  Json j;
  switch (g.kind()) {
    case GroupKind::Free:
      j["kind"] = "free";
      j["generators"] = g.generator_names();
      break;
    case GroupKind::Finite:
      j["kind"] = "finite";
      j["elements"] = g.element_names();
      j["table"] = g.table();
      j["generators"] = g.generator_names();
      j["identity"] = g.element_names()[g.identity_index()];
      break;
    case GroupKind::FreeProduct:
    case GroupKind::Direct: {
      j["kind"] = g.kind() == GroupKind::Direct ? "direct" : "free_product";
      Json fs = Json::array();
      for (const auto& f : g.factors()) fs.push_back(group_to_json(*f));
      j["factors"] = fs;
      break;
    }
    case GroupKind::Semidirect: {
      j["kind"] = "semidirect";
      j["fiber"] = group_to_json(*g.fiber());
      j["acting"] = group_to_json(*g.acting());
      Json act = Json::array();
      for (const auto& row : g.action()) {
        Json r = Json::array();
        for (const auto& w : row) r.push_back(word_to_json(*g.fiber(), w));
        act.push_back(r);
      }
      j["action"] = act;
      break;
    }
  }
  return j;
}

GroupContext context_from_json(const Json& j) {
  GroupPtr g = group_from_json(j.contains("group") ? j.at("group") : j);
  if (!j.contains("quotient")) return GroupContext::full(g);
  const Json& q = j.at("quotient");
  GroupPtr qg = group_from_json(field(q, "group"));
  std::vector<Element> images;
  for (const auto& w : field(q, "images")) images.push_back(element_from_json(qg, w));
  return GroupContext(g, Homomorphism(g, qg, std::move(images)));
}

Json context_to_json(const GroupContext& ctx) {
  Json j;
  j["group"] = group_to_json(*ctx.group());
  if (!ctx.is_full()) {
    Json q;
    q["group"] = group_to_json(*ctx.quotient_group());
    Json images = Json::array();
    for (const auto& e : ctx.quotient().images()) images.push_back(word_to_json(e.group(), e.word()));
    q["images"] = images;
    j["quotient"] = q;
  }
  return j;
}

Json word_to_json(const GroupSpec& g, std::span<const Letter> w) { return format_word(g, w); }

Word word_from_json(const GroupSpec& g, const Json& j) {
  if (!j.is_string()) throw ParseError("word must be a string");
  return parse_word(g, j.get<std::string>());
}

Element element_from_json(const GroupPtr& g, const Json& j) { return canonicalize(g, word_from_json(*g, j)); }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace gqm
