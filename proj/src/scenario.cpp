#include "auction/scenario.hpp"

#include "auction/gf2.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#ifndef AUCTION_LAB_DEFAULT_FIXTURES
#define AUCTION_LAB_DEFAULT_FIXTURES "fixtures"
#endif

namespace auction {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ScenarioError(path + ": " + what); }

std::string field(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "scenario" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!known) fail(field(path, it.key()), "unknown field");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(field(path, key), "missing required field");
  return j.at(key);
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Value rational(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return parse_rational(j.dump());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational string \"p/q\" or an integer");
}

Value nonneg(const json& j, const std::string& path, const std::string& what) {
  Value v = rational(j, path);
  if (sgn(v) < 0) fail(path, "negative " + what + " " + to_string(v));
  return v;
}

std::vector<Value> nonneg_array(const json& j, const std::string& path, std::optional<std::size_t> length,
                                const std::string& what) {
  require_array(j, path);
  if (length && j.size() != *length)
    fail(path, "expected " + std::to_string(*length) + " entries, got " + std::to_string(j.size()));
  std::vector<Value> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(nonneg(j[i], at(path, i), what));
  return out;
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// 1-based indices in [1, limit].
std::vector<std::size_t> indices(const json& j, const std::string& path, std::size_t limit, const std::string& what) {
  require_array(j, path);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::size_t x = count(j[i], at(path, i));
    if (x < 1 || x > limit) fail(at(path, i), what + " " + std::to_string(x) + " out of range 1.." + std::to_string(limit));
    out.push_back(x - 1);
  }
  return out;
}

json encode(const std::vector<Value>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_string(x));
  return a;
}

json encode_items(const ItemSet& s) {
  json a = json::array();
  for (auto j : members(s)) a.push_back(j + 1);
  return a;
}

template <class F>
auto wrap(const std::string& path, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

Valuation parse_valuation(const json& j, const std::string& path, std::size_t m, json& canon) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = text(require(j, path, "kind"), field(path, "kind"));
  canon = json{{"kind", kind}};
  if (kind == "additive" || kind == "unit_demand") {
    expect_object(j, path, {"kind", "weights"});
    auto w = nonneg_array(require(j, path, "weights"), field(path, "weights"), m, "weight");
    canon["weights"] = encode(w);
    return wrap(path, [&] { return kind == "additive" ? Valuation::additive(w) : Valuation::unit_demand(w); });
  }
  if (kind == "xos") {
    expect_object(j, path, {"kind", "clauses"});
    const auto& cj = require_array(require(j, path, "clauses"), field(path, "clauses"));
    std::vector<std::vector<Value>> clauses;
    canon["clauses"] = json::array();
    for (std::size_t c = 0; c < cj.size(); ++c) {
      clauses.push_back(nonneg_array(cj[c], at(field(path, "clauses"), c), m, "clause weight"));
      canon["clauses"].push_back(encode(clauses.back()));
    }
    return wrap(path, [&] { return Valuation::xos(m, clauses); });
  }
  if (kind == "budgeted_additive") {
    expect_object(j, path, {"kind", "weights", "budget"});
    auto w = nonneg_array(require(j, path, "weights"), field(path, "weights"), m, "weight");
    Value budget = nonneg(require(j, path, "budget"), field(path, "budget"), "budget");
    canon["weights"] = encode(w);
    canon["budget"] = to_string(budget);
    return wrap(path, [&] { return Valuation::budgeted_additive(w, budget); });
  }
  if (kind == "coverage") {
    expect_object(j, path, {"kind", "ground_weights", "covers"});
    auto g = nonneg_array(require(j, path, "ground_weights"), field(path, "ground_weights"), std::nullopt, "weight");
    const auto& cj = require_array(require(j, path, "covers"), field(path, "covers"));
    if (cj.size() != m) fail(field(path, "covers"), "expected one cover per item (" + std::to_string(m) + ")");
    std::vector<ItemSet> covers;
    canon["ground_weights"] = encode(g);
    canon["covers"] = json::array();
    for (std::size_t i = 0; i < m; ++i) {
      covers.push_back(make_set(g.size(), indices(cj[i], at(field(path, "covers"), i), g.size(), "ground element")));
      canon["covers"].push_back(encode_items(covers.back()));
    }
    return wrap(path, [&] { return Valuation::coverage(m, g, covers); });
  }
  if (kind == "explicit_table") {
    expect_object(j, path, {"kind", "table"});
    if (m > Valuation::kTableLimit) fail(path, "explicit tables limited to 16 items");
    auto t = nonneg_array(require(j, path, "table"), field(path, "table"), std::size_t{1} << m, "value");
    canon["table"] = encode(t);
    return wrap(path, [&] { return Valuation::explicit_table(m, t); });
  }
  if (kind == "mph") {
    expect_object(j, path, {"kind", "rank", "clauses"});
    std::size_t rank = count(require(j, path, "rank"), field(path, "rank"));
    const auto& cj = require_array(require(j, path, "clauses"), field(path, "clauses"));
    std::vector<std::vector<Hyperedge>> clauses;
    canon["rank"] = rank;
    canon["clauses"] = json::array();
    for (std::size_t c = 0; c < cj.size(); ++c) {
      std::string cpath = at(field(path, "clauses"), c);
      require_array(cj[c], cpath);
      clauses.emplace_back();
      json cc = json::array();
      for (std::size_t e = 0; e < cj[c].size(); ++e) {
        std::string epath = at(cpath, e);
        expect_object(cj[c][e], epath, {"items", "weight"});
        ItemSet items = make_set(m, indices(require(cj[c][e], epath, "items"), field(epath, "items"), m, "item"));
        Value w = nonneg(require(cj[c][e], epath, "weight"), field(epath, "weight"), "weight");
        clauses.back().push_back({items, w});
        cc.push_back(json{{"items", encode_items(items)}, {"weight", to_string(w)}});
      }
      canon["clauses"].push_back(cc);
    }
    return wrap(path, [&] { return Valuation::mph(m, rank, clauses); });
  }
  fail(field(path, "kind"), "unknown valuation kind \"" + kind + "\"");
}

GeneratedKind generator_kind(const std::string& name, const std::string& path) {
  static const std::pair<const char*, GeneratedKind> table[] = {
      {"xos", GeneratedKind::xos},
      {"budgeted_additive", GeneratedKind::budgeted_additive},
      {"coverage", GeneratedKind::coverage},
      {"set_cover_cost", GeneratedKind::set_cover_cost},
      {"unit_demand", GeneratedKind::unit_demand},
      {"additive", GeneratedKind::additive},
  };
  for (const auto& [n, k] : table)
    if (name == n) return k;
  fail(path, "unknown generator \"" + name + "\"");
}

Strategy parse_strategy(const json& j, const std::string& path, std::size_t m) {
  Strategy s;
  if (j.is_string()) {
    s.kind = wrap(path, [&] { return parse_strategy_kind(j.get<std::string>()); });
  } else {
    expect_object(j, path, {"kind", "script", "demand_script"});
    s.kind = wrap(field(path, "kind"),
                  [&] { return parse_strategy_kind(text(require(j, path, "kind"), field(path, "kind"))); });
    if (j.contains("script")) {
      const auto& sj = require_array(j["script"], field(path, "script"));
      for (std::size_t r = 0; r < sj.size(); ++r)
        s.script.push_back(nonneg_array(sj[r], at(field(path, "script"), r), m, "bid"));
    }
    if (j.contains("demand_script")) {
      const auto& dj = require_array(j["demand_script"], field(path, "demand_script"));
      for (std::size_t r = 0; r < dj.size(); ++r)
        s.demand_script.push_back(make_set(m, indices(dj[r], at(field(path, "demand_script"), r), m, "item")));
    }
  }
  if (s.kind == StrategyKind::scripted && s.script.empty()) fail(path, "scripted strategy needs a nonempty script");
  if (s.kind == StrategyKind::potential_procedure && s.demand_script.empty())
    fail(path, "potential_procedure needs a nonempty demand_script");
  return s;
}

json encode_strategy(const Strategy& s) {
  json j{{"kind", to_string(s.kind)}};
  if (!s.script.empty()) {
    j["script"] = json::array();
    for (const auto& row : s.script) j["script"].push_back(encode(row));
  }
  if (!s.demand_script.empty()) {
    j["demand_script"] = json::array();
    for (const auto& set : s.demand_script) j["demand_script"].push_back(encode_items(set));
  }
  return j;
}

}  // namespace

std::shared_ptr<const Instance> build_instance(const json& node, std::uint64_t default_seed, json* canonical) {
  const std::string path = "instance";
  if (!node.is_object()) fail(path, "expected an object");
  std::string kind = node.contains("kind") ? text(node["kind"], field(path, "kind")) : "inline";
  json canon;
  std::shared_ptr<const Instance> inst;
  if (kind == "inline") {
    expect_object(node, path, {"kind", "items", "bidders"});
    std::size_t m = count(require(node, path, "items"), field(path, "items"));
    if (m == 0) fail(field(path, "items"), "need at least one item");
    const auto& bj = require_array(require(node, path, "bidders"), field(path, "bidders"));
    if (bj.empty()) fail(field(path, "bidders"), "need at least one bidder");
    std::vector<Valuation> vals;
    canon = json{{"kind", "inline"}, {"items", m}, {"bidders", json::array()}};
    for (std::size_t i = 0; i < bj.size(); ++i) {
      json c;
      vals.push_back(parse_valuation(bj[i], at(field(path, "bidders"), i), m, c));
      canon["bidders"].push_back(c);
    }
    inst = wrap(path, [&] { return std::make_shared<const Instance>(m, std::move(vals)); });
  } else if (kind == "generated") {
    expect_object(node, path, {"kind", "generator", "bidders", "items", "clauses", "ground", "seed"});
    std::string gen = text(require(node, path, "generator"), field(path, "generator"));
    GeneratedKind gk = generator_kind(gen, field(path, "generator"));
    std::size_t n = count(require(node, path, "bidders"), field(path, "bidders"));
    GeneratorParams p;
    p.m = count(require(node, path, "items"), field(path, "items"));
    if (node.contains("clauses")) p.clauses = count(node["clauses"], field(path, "clauses"));
    if (node.contains("ground")) p.ground = count(node["ground"], field(path, "ground"));
    std::uint64_t seed = node.contains("seed") ? node["seed"].is_number_unsigned()
                                                     ? node["seed"].get<std::uint64_t>()
                                                     : (fail(field(path, "seed"), "expected a nonnegative integer"), 0)
                                               : default_seed;
    if (n == 0) fail(field(path, "bidders"), "need at least one bidder");
    if (p.m == 0) fail(field(path, "items"), "need at least one item");
    std::vector<Valuation> vals;
    for (std::size_t i = 0; i < n; ++i)
      vals.push_back(wrap(path, [&] { return generate(gk, p, seed * 1000003ULL + i); }));
    inst = wrap(path, [&] { return std::make_shared<const Instance>(p.m, std::move(vals)); });
    canon = json{{"kind", "generated"}, {"generator", gen}, {"bidders", n},       {"items", p.m},
                 {"clauses", p.clauses}, {"ground", p.ground}, {"seed", seed}};
  } else if (kind == "hard_instance") {
    expect_object(node, path, {"kind", "k"});
    std::size_t k = count(require(node, path, "k"), field(path, "k"));
    inst = wrap(field(path, "k"), [&] { return std::make_shared<const Instance>(gf2::build_hard_instance(k).instance()); });
    canon = json{{"kind", "hard_instance"}, {"k", k}};
  } else {
    fail(field(path, "kind"), "unknown instance kind \"" + kind + "\"");
  }
  if (canonical) *canonical = canon;
  return inst;
}

Scenario parse_scenario(const json& doc) {
  expect_object(doc, "", {"name", "instance", "initial_bids", "strategies", "schedule", "tie_break", "steps", "lazy",
                          "allocate_zero_bids", "stop_on_fixed_point", "seed", "outputs"});
  Scenario s;
  if (doc.contains("name")) s.name = text(doc["name"], "name");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  s.instance = build_instance(require(doc, "", "instance"), s.seed, &s.instance_spec);
  const std::size_t n = s.instance->n();
  const std::size_t m = s.instance->m();
  RunConfig& c = s.config;

  const auto& sj = require(doc, "", "strategies");
  if (sj.is_string() || sj.is_object()) {
    c.strategies.push_back(parse_strategy(sj, "strategies", m));
  } else {
    require_array(sj, "strategies");
    if (sj.size() != 1 && sj.size() != n)
      fail("strategies", "expected 1 or " + std::to_string(n) + " strategies, got " + std::to_string(sj.size()));
    for (std::size_t i = 0; i < sj.size(); ++i) c.strategies.push_back(parse_strategy(sj[i], at("strategies", i), m));
  }

  BidProfile initial = BidProfile::zeros(n, m);
  if (doc.contains("initial_bids")) {
    const auto& bj = require_array(doc["initial_bids"], "initial_bids");
    if (bj.size() != n) fail("initial_bids", "expected " + std::to_string(n) + " rows, got " + std::to_string(bj.size()));
    for (std::size_t i = 0; i < n; ++i) initial.rows[i] = nonneg_array(bj[i], at("initial_bids", i), m, "bid");
  }
  c.initial = initial;

  c.schedule = Schedule::round_robin();
  if (doc.contains("schedule")) {
    const auto& sc = doc["schedule"];
    std::string kind;
    if (sc.is_string()) {
      kind = sc.get<std::string>();
    } else {
      expect_object(sc, "schedule", {"kind", "seed", "order"});
      kind = text(require(sc, "schedule", "kind"), "schedule.kind");
    }
    if (kind == "round_robin") {
      if (sc.is_object() && (sc.contains("seed") || sc.contains("order")))
        fail("schedule", "round_robin takes no seed or order");
    } else if (kind == "uniform_random") {
      std::uint64_t seed = s.seed;
      if (sc.is_object() && sc.contains("seed")) {
        if (!sc["seed"].is_number_unsigned()) fail("schedule.seed", "expected a nonnegative integer");
        seed = sc["seed"].get<std::uint64_t>();
      }
      if (sc.is_object() && sc.contains("order")) fail("schedule.order", "only scripted schedules take an order");
      c.schedule = Schedule::uniform_random(seed);
    } else if (kind == "scripted") {
      if (!sc.is_object() || !sc.contains("order")) fail("schedule.order", "missing required field");
      auto order = indices(sc["order"], "schedule.order", n, "bidder");
      if (order.empty()) fail("schedule.order", "must not be empty");
      c.schedule = Schedule::scripted(order);
    } else {
      fail("schedule.kind", "unknown schedule \"" + kind + "\"");
    }
  }

  c.tie = TieBreak::ascending(n, m);
  if (doc.contains("tie_break")) {
    const auto& tj = doc["tie_break"];
    if (tj.is_string()) {
      if (tj.get<std::string>() != "ascending") fail("tie_break", "expected \"ascending\" or per-item orders");
    } else {
      require_array(tj, "tie_break");
      if (tj.size() != m) fail("tie_break", "expected " + std::to_string(m) + " per-item orders");
      std::vector<std::vector<std::size_t>> order;
      for (std::size_t j = 0; j < m; ++j) {
        order.push_back(indices(tj[j], at("tie_break", j), n, "bidder"));
        std::set<std::size_t> distinct(order.back().begin(), order.back().end());
        if (order.back().size() != n || distinct.size() != n)
          fail(at("tie_break", j), "must list every bidder exactly once");
      }
      c.tie = wrap("tie_break", [&] { return TieBreak(order); });
    }
  }

  c.steps = 10 * n;
  if (doc.contains("steps")) {
    c.steps = count(doc["steps"], "steps");
    if (c.steps == 0) fail("steps", "must be at least 1");
  }
  c.lazy = doc.contains("lazy") ? boolean(doc["lazy"], "lazy") : false;
  c.allocate_zero_bids =
      doc.contains("allocate_zero_bids") ? boolean(doc["allocate_zero_bids"], "allocate_zero_bids") : !c.lazy;
  c.stop_on_fixed_point =
      doc.contains("stop_on_fixed_point") ? boolean(doc["stop_on_fixed_point"], "stop_on_fixed_point") : false;

  if (doc.contains("outputs")) {
    expect_object(doc["outputs"], "outputs", {"trace", "summary"});
    if (doc["outputs"].contains("trace")) s.trace_path = text(doc["outputs"]["trace"], "outputs.trace");
    if (doc["outputs"].contains("summary")) s.summary_path = text(doc["outputs"]["summary"], "outputs.summary");
  }
  return s;
}

Scenario parse_scenario_text(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("parse error: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario_text(buffer.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

json serialize_scenario(const Scenario& s) {
  const auto& c = s.config;
  const std::size_t n = s.instance->n();
  const std::size_t m = s.instance->m();
  json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["instance"] = s.instance_spec;
  j["seed"] = s.seed;
  j["steps"] = c.steps == 0 ? 10 * n : c.steps;
  j["lazy"] = c.lazy;
  j["allocate_zero_bids"] = c.allocate_zero_bids.value_or(!c.lazy);
  j["stop_on_fixed_point"] = c.stop_on_fixed_point;

  TieBreak tie = c.tie ? *c.tie : TieBreak::ascending(n, m);
  if (tie == TieBreak::ascending(n, m)) {
    j["tie_break"] = "ascending";
  } else {
    j["tie_break"] = json::array();
    for (const auto& order : tie.order()) {
      json o = json::array();
      for (auto b : order) o.push_back(b + 1);
      j["tie_break"].push_back(o);
    }
  }

  switch (c.schedule.kind) {
    case ScheduleKind::round_robin: j["schedule"] = json{{"kind", "round_robin"}}; break;
    case ScheduleKind::uniform_random: j["schedule"] = json{{"kind", "uniform_random"}, {"seed", c.schedule.seed}}; break;
    case ScheduleKind::scripted: {
      json o = json::array();
      for (auto b : c.schedule.order) o.push_back(b + 1);
      j["schedule"] = json{{"kind", "scripted"}, {"order", o}};
      break;
    }
  }

  j["strategies"] = json::array();
  for (const auto& st : c.strategies) j["strategies"].push_back(encode_strategy(st));

  BidProfile initial = c.initial ? *c.initial : BidProfile::zeros(n, m);
  j["initial_bids"] = json::array();
  for (const auto& row : initial.rows) j["initial_bids"].push_back(encode(row));

  if (s.trace_path || s.summary_path) {
    j["outputs"] = json::object();
    if (s.trace_path) j["outputs"]["trace"] = *s.trace_path;
    if (s.summary_path) j["outputs"]["summary"] = *s.summary_path;
  }
  return j;
}

std::string fixtures_dir() {
  if (const char* env = std::getenv("AUCTION_LAB_FIXTURES"); env && *env) return env;
  return AUCTION_LAB_DEFAULT_FIXTURES;
}

}  // namespace auction
