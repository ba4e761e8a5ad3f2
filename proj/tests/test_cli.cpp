#include "auction/scenario.hpp"
#include "auction/trace_io.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace auction;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result lab(const std::string& args) {
  std::string cmd = std::string(AUCTION_LAB_BINARY) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / ("auction_lab_cli_" + std::to_string(getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& p, const std::string& body) {
  std::ofstream(p) << body;
  return p;
}

const char* kMinimal =
    R"({"instance": {"items": 2, "bidders": [{"kind": "additive", "weights": ["1", "1/2"]},
                                           {"kind": "unit_demand", "weights": [2, "3/4"]}]},
        "strategies": "xos_update"})";

Value q(const char* s) { return parse_rational(s); }

}  // namespace

TEST_CASE("fixture scenario matches the tightness table") {
  Scenario s = load_scenario(fixtures_dir() + "/tightness.json");
  const Value eps = q("1/1000");
  REQUIRE(s.instance->n() == 3);
  REQUIRE(s.instance->m() == 3);
  const auto& v2 = s.instance->valuation(1);
  CHECK(v2.value(make_set(3, {0})) == 1 + eps);
  CHECK(v2.value(make_set(3, {1})) == 1 + 2 * eps);
  CHECK(v2.value(make_set(3, {2})) == 1 + 3 * eps);
  CHECK(v2.value(full_set(3)) == 1 + 3 * eps);
  CHECK(s.instance->valuation(0).value(full_set(3)) == 1);
  CHECK(s.instance->valuation(2).value(make_set(3, {2})) == 1);
  CHECK(s.config.initial->rows[1] == BidRow{1 + eps, 0, 0});
  CHECK(s.config.steps == 3);
  CHECK(s.config.allocate_zero_bids == std::optional<bool>(false));
}

TEST_CASE("negative bids are rejected with the field path") {
  std::string body = R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                         "strategies": "xos_update", "initial_bids": [["-1/2"]]})";
  try {
    parse_scenario_text(body);
    FAIL("expected a ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).rfind("initial_bids[0][0]", 0) == 0);
    CHECK(std::string(e.what()).find("-1/2") != std::string::npos);
  }
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                                                "strategies": "xos_update", "colour": 1})"),
                       doctest::Contains("colour: unknown field"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": [0.5]}]},
                                                "strategies": "xos_update"})"),
                       doctest::Contains("instance.bidders[0].weights[0]"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"instance": {"items": 2, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                                                "strategies": "xos_update"})"),
                       doctest::Contains("expected 2 entries"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario_text("{\n  \"instance\": {,\n}"), doctest::Contains("line 2"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"strategies": "xos_update"})"), doctest::Contains("instance"),
                       ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                                          "strategies": "bogus"})"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                                          "strategies": "xos_update", "tie_break": [[2]]})"),
                  ScenarioError);
}

TEST_CASE("defaults are echoed") {
  Scenario s = parse_scenario_text(kMinimal);
  json j = serialize_scenario(s);
  CHECK(j["steps"] == 20);
  CHECK(j["seed"] == 0);
  CHECK(j["lazy"] == false);
  CHECK(j["allocate_zero_bids"] == true);
  CHECK(j["tie_break"] == "ascending");
  CHECK(j["schedule"]["kind"] == "round_robin");
  CHECK(j["initial_bids"] == json::parse(R"([["0", "0"], ["0", "0"]])"));
  CHECK(j["instance"]["bidders"][1]["weights"] == json::parse(R"(["2", "3/4"])"));
}

TEST_CASE("serialization round-trips") {
  std::vector<std::string> bodies = {
      kMinimal,
      slurp(fixtures_dir() + "/tightness.json"),
      R"({"name": "gen", "seed": 9, "instance": {"kind": "generated", "generator": "coverage", "bidders": 3, "items": 4},
          "strategies": ["subadditive_no_overbid", "subadditive_aggressive", "hold"],
          "schedule": {"kind": "uniform_random"}, "lazy": true, "steps": 7})",
      R"({"instance": {"kind": "hard_instance", "k": 2}, "strategies": "subadditive_no_overbid",
          "schedule": {"kind": "scripted", "order": [2, 1, 1]}, "tie_break": [[2, 1], [1, 2], [2, 1]],
          "outputs": {"trace": "x.jsonl"}})",
      R"({"instance": {"items": 3, "bidders": [
            {"kind": "xos", "clauses": [["1", "0", "2"], ["1/3", "1/3", "1/3"]]},
            {"kind": "budgeted_additive", "weights": ["1", "1", "1"], "budget": "3/2"},
            {"kind": "coverage", "ground_weights": ["1", "2"], "covers": [[1], [1, 2], []]},
            {"kind": "explicit_table", "table": ["0", "1", "1", "1", "1", "1", "1", "2"]},
            {"kind": "mph", "rank": 2, "clauses": [[{"items": [1, 2], "weight": "3"}]]}]},
          "strategies": [{"kind": "scripted", "script": [["1", "0", "0"]]}, "hold",
                         {"kind": "potential_procedure", "demand_script": [[1], []]}, "hold", "hold"]})",
  };
  for (const auto& body : bodies) {
    Scenario s = parse_scenario_text(body);
    json once = serialize_scenario(s);
    Scenario again = parse_scenario(once);
    CHECK(serialize_scenario(again) == once);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s.instance->m()); ++mask)
      for (std::size_t i = 0; i < s.instance->n(); ++i)
        CHECK(s.instance->valuation(i).value_mask(mask) == again.instance->valuation(i).value_mask(mask));
  }
}

TEST_CASE("fixtures directory can be overridden") {
  const char* old = std::getenv("AUCTION_LAB_FIXTURES");
  std::string saved = old ? old : "";
  setenv("AUCTION_LAB_FIXTURES", "/tmp/elsewhere", 1);
  CHECK(fixtures_dir() == "/tmp/elsewhere");
  if (old)
    setenv("AUCTION_LAB_FIXTURES", saved.c_str(), 1);
  else
    unsetenv("AUCTION_LAB_FIXTURES");
  CHECK(fs::exists(fixtures_dir() + "/tightness.json"));
}

TEST_CASE("reproduce tightness-xos") {
  auto r = lab("reproduce --name tightness-xos");
  CHECK(r.code == 0);
  // (1 + 3/100) / (3 + 2/100)
  CHECK(r.out.find("ratio = 103/302") != std::string::npos);
  auto j = lab("reproduce --name tightness-xos --param eps=1/1000 --json");
  CHECK(j.code == 0);
  CHECK(json::parse(j.out)["params"]["ratio"] == "1003/3002");
}

TEST_CASE("reproduce hard-instance-k4") {
  auto r = lab("reproduce --name hard-instance-k4 --param samples=100");
  CHECK(r.code == 0);
  CHECK(r.out.find("proof_bound = 94/15") != std::string::npos);
}

TEST_CASE("run then verify passes on untampered traces") {
  fs::path dir = scratch();
  std::vector<fs::path> scenarios = {
      fs::path(fixtures_dir()) / "tightness.json",
      write(dir / "gen.json",
            R"({"instance": {"kind": "generated", "generator": "xos", "bidders": 3, "items": 4}, "seed": 3,
                "strategies": "xos_update"})"),
      write(dir / "sub.json",
            R"({"instance": {"kind": "generated", "generator": "budgeted_additive", "bidders": 3, "items": 5},
                "strategies": "subadditive_aggressive", "steps": 6})"),
  };
  for (const auto& sc : scenarios) {
    fs::path trace = dir / (sc.stem().string() + ".jsonl");
    auto run = lab("run --scenario " + sc.string() + " --trace " + trace.string());
    REQUIRE(run.code == 0);
    CHECK(fs::exists(dir / (sc.stem().string() + ".csv")));
    for (const char* theorem : {"pointwise", "average", "lemmas", "safety"}) {
      auto v = lab("verify --trace " + trace.string() + " --theorem " + theorem);
      CAPTURE(sc);
      CAPTURE(theorem);
      CHECK(v.code == 0);
      CHECK(json::parse(v.out)["status"] == "pass");
    }
  }
}

TEST_CASE("golden trace is reproduced byte for byte") {
  fs::path dir = scratch();
  auto r = lab("run --scenario " + fixtures_dir() + "/tightness.json --trace " + (dir / "golden.jsonl").string() +
               " --summary " + (dir / "golden.csv").string());
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "golden.jsonl") == slurp(fixtures_dir() + "/tightness.trace.jsonl"));
  CHECK(slurp(dir / "golden.csv") == slurp(fixtures_dir() + "/tightness.trace.csv"));
}

TEST_CASE("corrupted traces fail verification") {
  fs::path dir = scratch();
  std::istringstream lines(slurp(fixtures_dir() + "/tightness.trace.jsonl"));
  std::string line, out;
  for (int i = 0; std::getline(lines, line); ++i) {
    if (i == 2) {
      json j = json::parse(line);
      j["sw"] = "2";
      line = j.dump();
    }
    out += line + "\n";
  }
  fs::path bad = write(dir / "corrupted.jsonl", out);
  auto v = lab("verify --trace " + bad.string() + " --theorem lemmas");
  CHECK(v.code == 1);
  json j = json::parse(v.out);
  CHECK(j["status"] == "fail");
  CHECK(j["first_bad_step"] == 2);
}

TEST_CASE("exit codes") {
  fs::path dir = scratch();
  CHECK(lab("").code == 2);
  CHECK(lab("frobnicate").code == 2);
  CHECK(lab("verify --trace x.jsonl --theorem nonsense").code == 2);
  CHECK(lab("reproduce --name no-such-experiment").code == 2);
  CHECK(lab("reproduce --name tightness-xos --param eps").code == 2);
  CHECK(lab("run --scenario " + (dir / "missing.json").string()).code == 2);
  fs::path neg = write(dir / "neg.json", R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                                             "strategies": "xos_update", "initial_bids": [["-1/2"]]})");
  auto r = lab("run --scenario " + neg.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("initial_bids[0][0]") != std::string::npos);
  fs::path junk = write(dir / "junk.jsonl", "not json\n");
  CHECK(lab("verify --trace " + junk.string() + " --theorem lemmas").code == 2);

  // a trace with no aggressive update does not qualify for the pointwise theorem
  fs::path hold = write(dir / "hold.json", R"({"instance": {"items": 1, "bidders": [{"kind": "additive", "weights": ["1"]}]},
                                              "strategies": "hold", "steps": 2})");
  REQUIRE(lab("run --scenario " + hold.string() + " --trace " + (dir / "hold.jsonl").string()).code == 0);
  CHECK(lab("verify --trace " + (dir / "hold.jsonl").string() + " --theorem pointwise").code == 2);

  // a literal sub-check that does not hold gives a bound-violation exit
  auto mph = lab("reproduce --name mph3");
  CHECK(mph.code == 1);
  CHECK(mph.out.find("\"failed_checks\"") != std::string::npos);
}

TEST_CASE("list prints every experiment") {
  auto r = lab("list");
  CHECK(r.code == 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 15);
  CHECK(r.out.find("tightness-xos\t") != std::string::npos);
}
