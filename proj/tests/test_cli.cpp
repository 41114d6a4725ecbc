#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

using Json = nlohmann::json;

namespace {

const std::string kFixtures = GQM_FIXTURE_DIR;

struct Run {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

Run gqm(const std::vector<std::string>& args) {
  std::string cmd = quote(GQM_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name + ".json"; }

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/gqm_cli_test_" + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("cl reports kinds and witnesses") {
  Run r = gqm({"cl", "--ctx", fixture("d4"), "r r", "--mixed"});
  CHECK(r.code == 0);
  Json j = r.json();
  CHECK(j["results"]["cl"]["value"] == "1");
  CHECK(j["results"]["cl"]["kind"] == "exact");
  CHECK(j["certificates"]["witness_verified"] == true);

  j = gqm({"cl", "--ctx", fixture("f2"), ""}).json();
  CHECK(j["results"]["cl"]["value"] == "0");
  CHECK(j["results"]["cl"]["kind"] == "exact");

  r = gqm({"cl", "--ctx", fixture("f2"), "[a,b]", "--plain"});
  CHECK(r.code == 0);
  j = r.json();
  CHECK(j["results"]["cl"]["value"] == "1");
  CHECK(j["results"]["cl"]["kind"] == "upper-bound");
  CHECK(j["results"]["mode"] == "plain");

  // d4 "r" is outside [G,N]
  r = gqm({"cl", "--ctx", fixture("d4"), "r"});
  CHECK(r.code == 0);
  CHECK(r.json()["budget"]["not_found"] == true);
}

TEST_CASE("scl brackets [a,b] in F2 and collapses on finite groups") {
  Run r = gqm({"scl", "--ctx", fixture("f2"), "[a,b]", "--support-radius", "4"});
  REQUIRE(r.code == 0);
  Json j = r.json();
  CHECK(j["results"]["interval"]["lower"]["value"] == "1/2");
  CHECK(j["results"]["interval"]["lower"]["kind"] == "lower-bound");
  CHECK(j["results"]["interval"]["upper"]["kind"] == "upper-bound");
  bool lp = false;
  for (const auto& u : j["results"]["upper_bounds"]) {
    if (u["source"] == "lp:n=2,radius=4") {
      lp = true;
      CHECK(u["value"] == "1");
    }
  }
  CHECK(lp);

  j = gqm({"scl", "--ctx", fixture("d4"), "r r"}).json();
  CHECK(j["results"]["scl"]["value"] == "0");
  CHECK(j["results"]["scl"]["kind"] == "exact");
}

TEST_CASE("scl with a falsified quasimorphism exits 4") {
  // f([a,b]) = 1 with a claimed defect of 1/10 would force scl([a,b]) >= 5
  const std::string qm = temp_file("bad_qm.json", R"({"kind": "combination", "terms": [
      {"coefficient": "1/2", "qm": {"kind": "counting", "pattern": "a b", "homogenized": true}},
      {"coefficient": "-1/2", "qm": {"kind": "counting", "pattern": "b a", "homogenized": true}}],
      "d_upper": "1/10", "homogeneous": true, "g_invariant": true})");
  Run r = gqm({"scl", "--ctx", fixture("f2"), "[a,b]", "--qm-file", qm});
  CHECK(r.code == 4);
  CHECK(r.json()["results"]["falsified"] == true);
  CHECK(gqm({"qm", "defect", "--ctx", fixture("f2"), "--qm-file", qm}).code == 4);
}

TEST_CASE("fill carries re-verified primal and dual certificates") {
  Run r = gqm({"fill", "--ctx", fixture("d4"), "r r"});
  REQUIRE(r.code == 0);
  Json j = r.json();
  CHECK(j["results"]["norm"]["kind"] == "exact");
  CHECK(j["certificates"]["primal_verified"] == true);
  CHECK(j["certificates"]["dual_verified"] == true);

  j = gqm({"fill", "--ctx", fixture("z2_z3"), "[z,c]", "--support-radius", "4"}).json();
  CHECK(j["results"]["norm"]["kind"] == "upper-bound");
  CHECK(j["results"]["norm"]["value"] == "1");

  j = gqm({"fill", "--ctx", fixture("f2"), "[a,b]", "--support-radius", "2"}).json();
  CHECK(j["results"]["norm"]["value"] == "3");

  r = gqm({"fill", "--ctx", fixture("f2"), "[a,b]^2", "--support-radius", "2"});
  CHECK(r.code == 0);
  CHECK(r.json()["results"]["feasible"] == false);
}

TEST_CASE("surface commands") {
  Run r = gqm({"surface", "--ctx", fixture("f2"), "from-decomp", "--pairs", R"([["a", "b"]])"});
  REQUIRE(r.code == 0);
  Json j = r.json();
  CHECK(j["results"]["genus"]["value"] == "1");
  CHECK(j["results"]["report"]["euler_identities"] == true);
  CHECK(j["results"]["report"]["s"] == 3);
  CHECK(j["certificates"]["surface_verified"] == true);

  j = gqm({"surface", "--ctx", fixture("f2"), "from-decomp", "--pairs", R"([["a", "b"], ["b", "a a"]])"}).json();
  CHECK(j["results"]["genus"]["value"] == "2");

  // from a cl witness found by search
  j = gqm({"surface", "--ctx", fixture("d4"), "from-decomp", "r r"}).json();
  CHECK(j["results"]["genus"]["value"] == "1");

  const std::string surf = temp_file("surface.json", j["certificates"]["surface"].dump());
  CHECK(gqm({"surface", "--ctx", fixture("d4"), "validate", "--surface", surf}).code == 0);
  Json flipped = j["certificates"]["surface"];
  flipped["triangles"][0]["sign"] = -flipped["triangles"][0]["sign"].get<int>();
  r = gqm({"surface", "--ctx", fixture("d4"), "validate", "--surface", temp_file("surface_flipped.json", flipped.dump())});
  CHECK(r.code == 0);
  CHECK(r.json()["results"]["report"]["orientable"] == false);
  Json incoherent = j["certificates"]["surface"];
  incoherent["edges"][4]["label"] = "r";
  r = gqm({"surface", "--ctx", fixture("d4"), "validate", "--surface", temp_file("surface_bad.json", incoherent.dump())});
  CHECK(r.code == 4);
  CHECK(r.json()["results"]["valid"] == false);

  // an integral fill witness glued into a surface
  Json fill = gqm({"fill", "--ctx", fixture("f2"), "[a,b]", "--support-radius", "2"}).json();
  const std::string chain = temp_file("chain.json", fill["certificates"]["primal"].dump());
  r = gqm({"surface", "--ctx", fixture("f2"), "from-chain", "[a,b]", "--chain", chain});
  CHECK(r.code == 0);
  CHECK(r.json()["results"]["genus"]["value"] == "1");
}

TEST_CASE("freeproduct-quotient") {
  Json j = gqm({"freeproduct-quotient", "--a", "Z4", "--b", "Z6"}).json();
  CHECK(j["results"]["quotient"]["value"] == "Z/2");
  CHECK(j["results"]["agree"] == true);
  j = gqm({"freeproduct-quotient", "--a", "Z2", "--b", "Z3"}).json();
  CHECK(j["results"]["presentation"]["invariant_factors"].empty());
  j = gqm({"freeproduct-quotient", "--a", "S3", "--b", "Z2"}).json();
  CHECK(j["results"]["quotient"]["value"] == "Z/2");
  CHECK(gqm({"freeproduct-quotient", "--a", "Q8", "--b", "Z2"}).code == 2);
}

TEST_CASE("qm eval, bavard and extend") {
  Json j = gqm({"qm", "bavard", "--ctx", fixture("f2"), "--qm-file", temp_file("antisym.json", R"({
      "kind": "combination", "d_upper": "1", "homogeneous": true, "g_invariant": true, "terms": [
      {"coefficient": "1/2", "qm": {"kind": "counting", "pattern": "a b", "homogenized": true}},
      {"coefficient": "-1/2", "qm": {"kind": "counting", "pattern": "b a", "homogenized": true}}]})"),
               "[a,b]"})
               .json();
  CHECK(j["results"]["values"][0]["value"]["value"] == "1");
  CHECK(j["results"]["values"][0]["scl_lower"]["value"] == "1/2");

  const std::string base = temp_file("sym.json", R"({"kind": "symmetrized", "autos": ["", "z"], "d_upper": "2",
      "base": {"kind": "counting", "pattern": "a b", "homogenized": true}})");
  Run r = gqm({"qm", "extend", "--ctx", fixture("f2_swap"), "--qm-file", base, "--method", "section", "--extension",
               R"({"section": [{"rep": "", "value": "0"}, {"rep": "z", "value": "0"}]})"});
  CHECK(r.code == 0);
  j = r.json();
  CHECK(j["results"]["restricts"] == true);
  CHECK(j["results"]["qm"]["bounds"]["D_double_prime"]["value"] == "2");
}

TEST_CASE("section constants") {
  Run r = gqm({"section-constants", "--ctx", fixture("d4")});
  REQUIRE(r.code == 0);
  Json j = r.json();
  CHECK(j["results"]["sections"].size() == 4);
  CHECK(j["results"]["verified"] == true);
  j = gqm({"section-constants", "--ctx", fixture("s3"), "--section", R"([{"q": "t", "g": "p102"}])"}).json();
  CHECK(j["results"]["sections"].size() == 1);
}

TEST_CASE("exit codes") {
  CHECK(gqm({"cl", "--ctx", fixture("f2"), "a q"}).code == 2);
  CHECK(gqm({"cl", "--ctx", "/nonexistent/ctx.json", "a"}).code == 2);
  CHECK(gqm({"nonsense"}).code == 2);
  CHECK(gqm({"cl"}).code == 2);
  CHECK(gqm({"cl", "--ctx", fixture("f2"), "a", "--plain", "--mixed"}).code == 2);
  Run r = gqm({"cl", "--ctx", fixture("f2"), "[a,b]^3", "--ball-radius", "3", "--max-factors", "3", "--budget-ms", "1"});
  CHECK(r.code == 3);
  CHECK(r.json()["budget"]["exhausted"] == true);
}

TEST_CASE("reports are deterministic apart from timing") {
  const std::vector<std::string> args{"scl", "--ctx", fixture("f2"), "[a,b]", "--support-radius", "2"};
  Json a = gqm(args).json(), b = gqm(args).json();
  a.erase("timing_ms");
  b.erase("timing_ms");
  CHECK(a == b);
}

TEST_CASE("verify runs acceptance criteria") {
  Run r = gqm({"verify", "C1"});
  CHECK(r.code == 0);
  Json j = r.json();
  CHECK(j["results"]["passed"] == 1);
  CHECK(j["results"]["criteria"][0]["pass"] == true);
  CHECK(gqm({"verify", "C99"}).code == 2);
}
