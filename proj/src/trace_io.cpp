#include "auction/trace_io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace auction {

namespace {

using json = nlohmann::json;

constexpr const char* kFormat = "auction-lab-trace/1";

json values(const std::vector<Value>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_string(x));
  return a;
}

json optional_flag(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

std::vector<Value> read_values(const json& j, const char* key) {
  const json& a = j.at(key);
  if (!a.is_array()) throw std::invalid_argument(std::string(key) + ": expected an array");
  std::vector<Value> out;
  for (const auto& x : a) {
    if (!x.is_string()) throw std::invalid_argument(std::string(key) + ": expected rational strings");
    out.push_back(parse_rational(x.get<std::string>()));
  }
  return out;
}

std::optional<bool> read_flag(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<bool>();
}

Outcome read_outcome(const json& j, std::size_t n, std::size_t m) {
  Outcome o;
  const json& w = j.at("winners");
  if (!w.is_array() || w.size() != m) throw std::invalid_argument("winners: expected one entry per item");
  o.allocation.assign(n, empty_set(m));
  for (std::size_t item = 0; item < m; ++item) {
    if (w[item].is_null()) {
      o.winner.push_back(std::nullopt);
      continue;
    }
    auto b = w[item].get<std::size_t>();
    if (b < 1 || b > n) throw std::invalid_argument("winners: bidder out of range");
    o.winner.push_back(b - 1);
    o.allocation[b - 1].set(item);
  }
  o.price = read_values(j, "prices");
  o.utility = read_values(j, "utilities");
  o.declared_utility = read_values(j, "declared_utilities");
  o.sw = parse_rational(j.at("sw").get<std::string>());
  o.dw = parse_rational(j.at("dw").get<std::string>());
  if (o.price.size() != m || o.utility.size() != n || o.declared_utility.size() != n)
    throw std::invalid_argument("outcome vectors have the wrong length");
  return o;
}

std::string decimal(const Value& v) {
  std::ostringstream s;
  s << std::setprecision(12) << to_double(v);
  return s.str();
}

}  // namespace

json outcome_to_json(const Outcome& o) {
  json winners = json::array();
  for (const auto& w : o.winner) winners.push_back(w ? json(*w + 1) : json(nullptr));
  return json{{"winners", winners},
              {"prices", values(o.price)},
              {"sw", to_string(o.sw)},
              {"dw", to_string(o.dw)},
              {"utilities", values(o.utility)},
              {"declared_utilities", values(o.declared_utility)}};
}

void write_trace_jsonl(std::ostream& out, const Trace& trace, const json& scenario) {
  json header{{"type", "header"},
              {"format", kFormat},
              {"scenario", scenario},
              {"initial_outcome", outcome_to_json(trace.initial_outcome)}};
  out << header.dump() << '\n';
  for (const auto& s : trace.steps) {
    json line{{"type", "step"}, {"t", s.t}, {"bidder", s.bidder + 1}, {"lazy", s.lazy}};
    line["row_before"] = values(s.row_before);
    line["row_after"] = values(s.row_after);
    line.update(outcome_to_json(s.outcome));
    line["alpha"] = s.alpha ? json(to_string(*s.alpha)) : json(nullptr);
    line["strong"] = optional_flag(s.strong);
    line["weak"] = optional_flag(s.weak);
    line["grand"] = optional_flag(s.grand);
    line["running_max"] = values(s.running_max);
    out << line.dump() << '\n';
  }
}

void write_summary_csv(std::ostream& out, const Trace& trace) {
  out << "t,bidder,sw,dw,sw_decimal,dw_decimal,alpha,lazy\n";
  const auto& o0 = trace.initial_outcome;
  out << "0,," << to_string(o0.sw) << ',' << to_string(o0.dw) << ',' << decimal(o0.sw) << ',' << decimal(o0.dw)
      << ",,\n";
  for (const auto& s : trace.steps) {
    out << s.t << ',' << s.bidder + 1 << ',' << to_string(s.outcome.sw) << ',' << to_string(s.outcome.dw) << ','
        << decimal(s.outcome.sw) << ',' << decimal(s.outcome.dw) << ',' << (s.alpha ? to_string(*s.alpha) : "")
        << ',' << (s.lazy ? "true" : "false") << '\n';
  }
}

LoadedTrace read_trace_jsonl(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](json& j) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw TraceFormatError(lineno, e.what());
      }
      return true;
    }
    return false;
  };

  json header;
  if (!next(header)) throw TraceFormatError(lineno, "empty trace file");
  if (!header.is_object() || header.value("type", "") != "header")
    throw TraceFormatError(lineno, "first line must be the header");
  if (header.value("format", "") != kFormat)
    throw TraceFormatError(lineno, "unsupported trace format \"" + header.value("format", "") + "\"");

  LoadedTrace out;
  try {
    out.scenario = parse_scenario(header.at("scenario"));
  } catch (const std::exception& e) {
    throw TraceFormatError(lineno, std::string("scenario: ") + e.what());
  }
  const auto& inst = out.scenario.instance;
  const auto& cfg = out.scenario.config;
  const std::size_t n = inst->n();
  const std::size_t m = inst->m();
  Trace& tr = out.trace;
  tr.instance = inst;
  tr.tie = cfg.tie ? *cfg.tie : TieBreak::ascending(n, m);
  tr.allocation.allocate_zero_bids = cfg.allocate_zero_bids.value_or(!cfg.lazy);
  tr.schedule = cfg.schedule.kind;
  tr.lazy_mode = cfg.lazy;
  tr.initial = cfg.initial ? *cfg.initial : BidProfile::zeros(n, m);
  tr.profiles.push_back(tr.initial);
  try {
    tr.initial_outcome = read_outcome(header.at("initial_outcome"), n, m);
  } catch (const std::exception& e) {
    throw TraceFormatError(lineno, std::string("initial_outcome: ") + e.what());
  }

  json j;
  while (next(j)) {
    try {
      if (!j.is_object() || j.value("type", "") != "step") throw std::invalid_argument("expected a step record");
      StepRecord s;
      s.t = j.at("t").get<std::size_t>();
      if (s.t != tr.steps.size() + 1)
        throw std::invalid_argument("expected t = " + std::to_string(tr.steps.size() + 1));
      auto b = j.at("bidder").get<std::size_t>();
      if (b < 1 || b > n) throw std::invalid_argument("bidder out of range");
      s.bidder = b - 1;
      s.lazy = j.at("lazy").get<bool>();
      s.row_before = read_values(j, "row_before");
      s.row_after = read_values(j, "row_after");
      if (s.row_before.size() != m || s.row_after.size() != m)
        throw std::invalid_argument("rows must have one bid per item");
      s.outcome = read_outcome(j, n, m);
      if (!j.at("alpha").is_null()) s.alpha = parse_ratio(j.at("alpha").get<std::string>());
      s.strong = read_flag(j, "strong");
      s.weak = read_flag(j, "weak");
      s.grand = read_flag(j, "grand");
      s.running_max = read_values(j, "running_max");
      BidProfile p = tr.profiles.back();
      p.rows[s.bidder] = s.row_after;
      tr.profiles.push_back(std::move(p));
      tr.steps.push_back(std::move(s));
    } catch (const TraceFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw TraceFormatError(lineno, e.what());
    }
  }
  return out;
}

}  // namespace auction
