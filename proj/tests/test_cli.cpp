#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tqt/instances.hpp"
#include "tqt/io.hpp"

using namespace tqt;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(TQT_TEST_WORKDIR) / "cli";

std::string path(const std::string& name) { return (kWork / name).string(); }

/// Runs the CLI with stdout redirected to `out` (relative to the work dir); returns the exit code.
int run(const std::string& args, const std::string& out = "stdout.txt") {
  fs::create_directories(kWork);
  const std::string cmd = std::string(TQT_BIN) + " " + args + " > " + path(out) + " 2> " + path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
  std::ifstream in(path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  std::ofstream(path(name)) << text;
}

}  // namespace

TEST_CASE("gen → verify → trace on T1") {
  REQUIRE(run("gen --preset T1 --out " + path("t1.json")) == 0);
  REQUIRE(run("verify --instance " + path("t1.json")) == 0);
  const std::string text = slurp("stdout.txt");
  CHECK(text.find("ainfinity-k3") != std::string::npos);
  CHECK(text.find("0 failed") != std::string::npos);

  write("chains.json", R"({"chains": [{"name": "id", "terms": [{"coefficient": 1, "slots": ["Id"]}]},
                                      {"name": "e2", "terms": [{"coefficient": "1/2", "slots": ["e2<-e2"]}]}]})");
  REQUIRE(run("trace --instance " + path("t1.json") + " --chain " + path("chains.json") + " --output json", "trace.json") == 0);
  const Json j = Json::parse(slurp("trace.json"));
  const auto& chains = j.at("results");
  REQUIRE(chains.size() == 2);
  CHECK(chains[0].at("name") == "id");
  CHECK(chains[0].at("upsilon") == "1");
  CHECK(chains[1].at("upsilon") == "1/2");
}

TEST_CASE("verify reports Q² ≠ 0 with witness e1") {
  const auto m = make_space({{0, 2}, {1, 1}, {2, 1}}, {{0, {"e1", "e2"}}, {1, {"f"}}, {2, {"g"}}});
  Json j = instance_to_json(Instance<Rational>{
      gen_matrix_instance(m->dims(), {{0, {"e1", "e2"}}, {1, {"f"}}, {2, {"g"}}}), std::nullopt, Json::object()});
  j["Q"] = Json::array({Json::array({"e1", "f", 1}), Json::array({"f", "g", 1})});
  write("bad.json", j.dump());
  CHECK(run("verify --instance " + path("bad.json") + " --output json", "bad_report.json") == 1);
  const Json r = Json::parse(slurp("bad_report.json"));
  bool found = false;
  for (const auto& c : r.at("checks"))
    if (c.at("name") == "Q-squared") {
      found = true;
      CHECK(c.at("pass") == false);
      CHECK(c.at("witness") == "e1");
    }
  CHECK(found);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("verify --instance " + path("missing.json")) == 2);
  write("garbage.json", "{not json");
  CHECK(run("verify --instance " + path("garbage.json")) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("gen --kind torus --N 0") == 2);
  REQUIRE(run("gen --preset T1 --out " + path("t1b.json")) == 0);
  write("badchain.json", R"([{"slots": ["no-such-element"]}])");
  CHECK(run("trace --instance " + path("t1b.json") + " --chain " + path("badchain.json")) == 2);
  write("mixed.json", R"([{"slots": ["Id"]}, {"slots": ["Id", "Id"]}])");
  CHECK(run("trace --instance " + path("t1b.json") + " --chain " + path("mixed.json")) == 2);
  CHECK(slurp("stderr.txt").find("degree mismatch") != std::string::npos);
}

TEST_CASE("seeded pipeline is byte-identical across runs") {
  std::string outputs[2];
  for (int rep = 0; rep < 2; ++rep) {
    const std::string inst = "rand" + std::to_string(rep) + ".json";
    REQUIRE(run("gen --kind random --dims 2,2,1 --seed 7 --out " + path(inst)) == 0);
    REQUIRE(run("verify --instance " + path(inst) + " --seed 3 --output json", "v.json") == 0);
    write("idchain.json", R"([{"slots": ["Id"]}])");
    REQUIRE(run("trace --instance " + path(inst) + " --chain " + path("idchain.json") + " --seed 3 --output json",
                "t.json") == 0);
    outputs[rep] = slurp(inst) + slurp("v.json") + slurp("t.json");
  }
  CHECK(!outputs[0].empty());
  CHECK(outputs[0] == outputs[1]);
}
