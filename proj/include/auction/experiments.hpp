#pragma once

#include "auction/core.hpp"
#include "auction/dynamics.hpp"
#include "auction/gf2.hpp"
#include "auction/rational.hpp"
#include "auction/trace.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace auction {

struct OptResult {
  Value value;
  std::vector<ItemSet> allocation;
};

// Exact welfare optimum by a subset dynamic program (m <= 14).
OptResult compute_opt(const Instance& instance);

struct BoundCheck {
  std::string label;
  std::size_t t = 0;
  Value lhs;
  std::string relation;  // ">=", "<=", "==", "<"
  Value rhs;
  bool pass = true;
};

struct BoundReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<BoundCheck> checks;
  std::vector<std::string> notes;
  std::optional<Value> worst_ratio;  // smallest lhs/rhs over the headline bound
  std::size_t failures = 0;
  bool pass = true;

  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, const Value& value);
  // Records an exact comparison and returns whether it holds.
  bool check(const std::string& label, std::size_t t, const Value& lhs, const std::string& relation,
             const Value& rhs);
  bool check_true(const std::string& label, std::size_t t, bool ok);
  void note(const std::string& text) { notes.push_back(text); }
  void track_ratio(const Value& lhs, const Value& rhs);
  void absorb(const BoundReport& other, const std::string& prefix);
  const BoundCheck* first_failure() const;

  // Failures are always listed; passing checks only when verbose.
  nlohmann::json to_json(bool verbose = false) const;
};

// Smallest measured aggressiveness over non-lazy steps in [from, to], clamped to
// at most 1; steps with U* = 0 impose nothing. Returns 1 when no step constrains.
Value alpha_min(const Trace& trace, std::size_t from, std::size_t to);
bool has_aggressive_update(const Trace& trace);
// First time at which every bidder has made a non-lazy update.
std::optional<std::size_t> first_all_updated(const Trace& trace);

// Pointwise welfare bound with measured alpha (per window) and beta (whole trace),
// plus the per-window sandwich lemmas. Lazy traces use the lazy constants and start
// once every bidder has made a non-lazy update. Throws std::domain_error on
// non-qualifying traces.
BoundReport check_pointwise(const Trace& trace, const Value& opt);
BoundReport check_average(const Trace& trace, const Value& opt);
// aux, initial-low, initial-high, declared-vs-actual on every window of n steps.
BoundReport check_round_lemmas(const Trace& trace, const Value& opt);
// aux-variant and max-low on every prefix; valid for any schedule.
BoundReport check_prefix_lemmas(const Trace& trace, const OptResult& opt);

struct HardInstanceOptions {
  std::size_t samples = 1000;
  std::size_t player2_updates = 20;
  std::uint64_t seed = 2024;
  bool simulate = true;  // full dynamics (k <= 4)
};

BoundReport check_hard_instance(std::size_t k, const HardInstanceOptions& options = {});

struct MonteCarloConfig {
  std::size_t steps = 0;  // T; 0 means n
  std::size_t trials = 2000;
  std::uint64_t seed = 7;
};

struct MonteCarloSummary {
  double mean_sw = 0;
  double se_sw = 0;
  double bound = 0;
  double opt = 0;
  std::vector<double> mean_y, se_y, mean_p, se_p;
};

// Random initial strong-no-overbidding bids, uniform random activation, XOS updates.
BoundReport monte_carlo_random_activation(const Instance& instance, const MonteCarloConfig& config,
                                          MonteCarloSummary* summary = nullptr);

using ExperimentParams = std::map<std::string, std::string>;

struct ExperimentResult {
  BoundReport report;
  std::optional<Trace> trace;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
};

const std::vector<ExperimentInfo>& list_experiments();
ExperimentResult run_named_experiment(const std::string& name, const ExperimentParams& params = {});

// Seeded suites over random instances. Check labels are "#<instance>/<label>";
// lemma checks carry a "lemma:" label prefix.
BoundReport xos_pointwise_suite(std::size_t count, std::uint64_t seed);
BoundReport subadditive_pointwise_suite(std::size_t count, std::uint64_t seed);
BoundReport average_suite(std::size_t count, std::uint64_t seed);
BoundReport lazy_xos_suite(std::size_t count, std::uint64_t seed);
BoundReport random_activation_experiment(std::size_t trials, std::uint64_t seed);
BoundReport oracle_equivalence(std::size_t price_vectors, std::size_t functions, std::uint64_t seed);
BoundReport no_pne_lemmas(std::size_t k, std::size_t samples, std::uint64_t seed);

// Building blocks reused by the acceptance suite.
std::shared_ptr<const Instance> tightness_instance(const Value& eps);
BidProfile tightness_initial_bids(const Value& eps);
std::shared_ptr<const Instance> adversarial_cycle_instance(std::size_t n, const Value& eps);
RunConfig adversarial_cycle_config(std::size_t n, std::size_t steps);

struct MphSetup {
  std::shared_ptr<const Instance> instance;
  RunConfig config;
  std::size_t k = 0;
};
MphSetup mph3_setup(std::size_t k, std::size_t cycles);

// Deterministic parallel map: results[i] = fn(i).
template <class F>
auto parallel_map(std::size_t count, F fn) -> std::vector<decltype(fn(std::size_t{0}))>;

}  // namespace auction

#include "auction/parallel.hpp"
