#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "osf/cli.hpp"
#include "osf/formats.hpp"

using namespace osf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(OSF_TEST_DATA) + "/" + name; }

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "osf_forge_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> crossing_inputs(std::vector<std::string> head) {
  for (const char* s : {"--gene", "crossing.gene.nwk", "--forest", "crossing.forest.nwk", "--map", "crossing.map.tsv"})
    head.push_back(s[0] == '-' ? s : data(s));
  return head;
}

}  // namespace

TEST_CASE("build prints the optimum") {
  const Run r = run(crossing_inputs({"build"}));
  CHECK(r.code == kOk);
  CHECK(r.out == "t=3 contact_arcs=2\n");

  const std::string g = write("one.gene.nwk", "((a,b),c);\n");
  const std::string f = write("one.forest.nwk", "((A,B),C);\n");
  const std::string m = write("one.map.tsv", "a\tA\nb\tB\nc\tC\n");
  const Run single = run({"build", "--gene", g, "--forest", f, "--map", m});
  CHECK(single.out == "t=0 contact_arcs=0\n");
}

TEST_CASE("malformed input exits 1 with a position") {
  const std::string g = write("bad.gene.nwk", "((a,b),c;\n");
  const Run r = run({"build", "--gene", g, "--forest", data("crossing.forest.nwk"), "--map", data("crossing.map.tsv")});
  CHECK(r.code == kParseFailure);
  CHECK(r.err.find("line 1, column") != std::string::npos);
  CHECK(run({"build"}).code == kParseFailure);
  CHECK(run({"nonsense"}).code == kParseFailure);
  CHECK(run({"build", "--gene", "/nonexistent/file"}).code == kParseFailure);
}

TEST_CASE("build output verifies") {
  const std::string prefix = (scratch_dir() / "crossing").string();
  REQUIRE(run(crossing_inputs({"build", "--out", prefix, "--format", "json"})).code == kOk);
  CHECK(fs::exists(prefix + ".intro.tsv"));
  CHECK(slurp(prefix + ".network.json").find("contact_arcs") != std::string::npos);
  const Run v = run(crossing_inputs({"verify", "--strict", "--osf", prefix + ".osf.tsv"}));
  CHECK(v.code == kOk);
  CHECK(v.out.find("\"pass\": true") != std::string::npos);

  const std::string osf = slurp(prefix + ".osf.tsv");
  const std::string cut = write("crossing.truncated.osf.tsv", osf.substr(0, osf.size() / 2));
  CHECK(run(crossing_inputs({"verify", "--osf", cut})).code == kParseFailure);

  REQUIRE(run(crossing_inputs({"build", "--out", prefix, "--format", "dot"})).code == kOk);
  CHECK(slurp(prefix + ".network.dot").find("style=dashed") != std::string::npos);
}

TEST_CASE("nonstrict map fails the strict check") {
  const Run plain = run({"verify", "--gene", data("nonstrict.gene.nwk"), "--forest", data("nonstrict.forest.nwk"), "--map",
                         data("nonstrict.map.tsv"), "--osf", data("nonstrict.osf.tsv")});
  CHECK(plain.code == kOk);
  const Run strict = run({"verify", "--strict", "--gene", data("nonstrict.gene.nwk"), "--forest", data("nonstrict.forest.nwk"),
                          "--map", data("nonstrict.map.tsv"), "--osf", data("nonstrict.osf.tsv")});
  CHECK(strict.code == kSemanticFailure);
  const auto j = nlohmann::json::parse(strict.out);
  CHECK(j["verdicts"].back()["axiom"] == "S3");
  CHECK(j["verdicts"].back()["vertices"] == nlohmann::json::array({0}));
}

TEST_CASE("validate, unfold and resolve") {
  const std::string prefix = (scratch_dir() / "crossingv").string();
  REQUIRE(run(crossing_inputs({"build", "--out", prefix})).code == kOk);
  const std::string net = prefix + ".network.json";
  const Run v = run({"validate", "--network", net});
  CHECK(v.code == kOk);
  CHECK(v.out.find("\"valid\": true") != std::string::npos);
  CHECK(run({"validate", "--network", net, "--search"}).code == kOk);
  CHECK(run({"validate", "--network", net, "--search", "--cap-search", "4"}).code == kCapFailure);

  const std::string tree = write("tree.network.json", write_network_json(to_network(parse_tree("((A,B),C);"))));
  const Run t = run({"validate", "--network", tree});
  CHECK(t.code == kSemanticFailure);
  CHECK(t.out.rfind("invalid: (V1)", 0) == 0);

  const Run u = run({"unfold", "--network", net, "--out", prefix + ".unf"});
  CHECK(u.code == kOk);
  CHECK(u.out.rfind("trails=", 0) == 0);
  const Run back = run({"verify", "--strict", "--gene", prefix + ".unf.gene.nwk", "--forest", prefix + ".unf.forest.nwk",
                        "--map", prefix + ".unf.map.tsv", "--osf", prefix + ".unf.osf.tsv"});
  CHECK(back.code == kOk);

  const Run r = run(crossing_inputs({"resolve"}));
  CHECK(r.code == kOk);
  CHECK(nlohmann::json::parse(r.out)["contact_origin"].size() == 3);
  CHECK(run(crossing_inputs({"resolve", "--osf", data("nonstrict.osf.tsv")})).code != kOk);
}

TEST_CASE("gen, perturb and oracle") {
  const std::string a = (scratch_dir() / "gen_a").string(), b = (scratch_dir() / "gen_b").string();
  CHECK(run({"gen", "--seed", "42", "--out", a}).out == "seed=42\n");
  REQUIRE(run({"gen", "--seed", "42", "--out", b}).code == kOk);
  CHECK(slurp(a + ".gene.nwk") == slurp(b + ".gene.nwk"));
  CHECK(slurp(a + ".map.tsv") == slurp(b + ".map.tsv"));
  CHECK(run({"gen", "--seed", "1"}).code == kParseFailure);

  const std::vector<std::string> inputs{"--gene", a + ".gene.nwk", "--forest", a + ".forest.nwk", "--map", a + ".map.tsv"};
  auto with = [&](std::vector<std::string> head) {
    head.insert(head.end(), inputs.begin(), inputs.end());
    return head;
  };
  const Run p = run(with({"perturb", "--seed", "3", "--k", "2", "--trials", "5", "--out", a}));
  CHECK(p.code == kOk);
  CHECK(slurp(a + ".csv").rfind("trial,k,", 0) == 0);
  CHECK(nlohmann::json::parse(slurp(a + ".summary.json"))["n_trials"] == 5);
  CHECK(run(with({"perturb", "--seed", "3", "--mode", "forest", "--trials", "3"})).code == kOk);

  CHECK(run(crossing_inputs({"oracle"})).out == "t=3\n");
  CHECK(run(crossing_inputs({"oracle", "--cap-oracle", "10"})).code == kCapFailure);
}

TEST_CASE("CI mode requires seeds") {
  setenv("OSF_FORGE_CI", "1", 1);
  const Run r = run({"gen", "--out", (scratch_dir() / "ci").string()});
  unsetenv("OSF_FORGE_CI");
  CHECK(r.code == kParseFailure);
}
