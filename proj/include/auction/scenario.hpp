#pragma once

#include "auction/core.hpp"
#include "auction/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace auction {

// Bad scenario input. The message starts with the offending field path.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  std::string name;
  nlohmann::json instance_spec;  // canonical, defaults filled in
  std::shared_ptr<const Instance> instance;
  RunConfig config;              // every optional resolved
  std::uint64_t seed = 0;
  std::optional<std::string> trace_path;
  std::optional<std::string> summary_path;
};

// Strict parse: unknown fields are rejected, rationals are "p/q" strings or integers.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Echo with all defaults made explicit; parse_scenario(serialize_scenario(s)) reproduces s.
nlohmann::json serialize_scenario(const Scenario& scenario);

std::shared_ptr<const Instance> build_instance(const nlohmann::json& node, std::uint64_t default_seed,
                                               nlohmann::json* canonical = nullptr);

// Directory holding the bundled scenarios: $AUCTION_LAB_FIXTURES or the build default.
std::string fixtures_dir();

}  // namespace auction
