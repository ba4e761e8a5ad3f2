#include "auction/dynamics.hpp"

#include <random>
#include <stdexcept>

namespace auction {

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::round_robin: return "round_robin";
    case ScheduleKind::uniform_random: return "uniform_random";
    case ScheduleKind::scripted: return "scripted";
  }
  return "unknown";
}

std::vector<Value> Trace::running_max(std::size_t t) const {
  if (t == 0) {
    std::vector<Value> y(initial.m(), Value(0));
    for (const auto& row : initial.rows)
      for (std::size_t j = 0; j < y.size(); ++j)
        if (row[j] > y[j]) y[j] = row[j];
    return y;
  }
  return steps.at(t - 1).running_max;
}

std::vector<std::optional<std::size_t>> Trace::last_activation(std::size_t t) const {
  std::vector<std::optional<std::size_t>> last(initial.n());
  for (std::size_t s = 1; s <= t; ++s) last[steps[s - 1].bidder] = s;
  return last;
}

namespace {

std::vector<Value> max_with(std::vector<Value> y, const BidRow& row) {
  for (std::size_t j = 0; j < y.size(); ++j)
    if (row[j] > y[j]) y[j] = row[j];
  return y;
}

bool best_responding(const Instance& instance, const BidProfile& bids, const Outcome& out, std::size_t i) {
  return out.utility[i] == best_utility(instance.valuation(i), opposing_maxima(bids, i));
}

}  // namespace

Trace run(std::shared_ptr<const Instance> instance, const RunConfig& config) {
  if (!instance) throw std::invalid_argument("run needs an instance");
  const std::size_t n = instance->n();
  const std::size_t m = instance->m();
  const std::size_t total = config.steps == 0 ? 10 * n : config.steps;
  if (config.strategies.size() != n && config.strategies.size() != 1)
    throw std::invalid_argument("need one strategy per bidder or a single shared strategy");
  if (config.schedule.kind == ScheduleKind::scripted) {
    if (config.schedule.order.empty()) throw std::invalid_argument("scripted schedule is empty");
    for (auto b : config.schedule.order)
      if (b >= n) throw std::invalid_argument("scripted schedule names bidder " + std::to_string(b + 1));
  }

  Trace trace;
  trace.instance = instance;
  trace.tie = config.tie ? *config.tie : TieBreak::ascending(n, m);
  if (trace.tie.n() != n || trace.tie.m() != m) throw std::invalid_argument("tie-break dimensions do not match");
  trace.lazy_mode = config.lazy;
  trace.allocation.allocate_zero_bids = config.allocate_zero_bids.value_or(!config.lazy);
  trace.schedule = config.schedule.kind;
  trace.initial = config.initial ? *config.initial : BidProfile::zeros(n, m);
  validate_profile(trace.initial, n, m);
  trace.initial_outcome = allocate(*instance, trace.initial, trace.tie, trace.allocation);
  trace.profiles.push_back(trace.initial);

  std::mt19937_64 rng(config.schedule.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> activations(n, 0);
  BidProfile bids = trace.initial;
  Outcome current = trace.initial_outcome;
  std::vector<Value> y = trace.running_max(0);

  for (std::size_t t = 1; t <= total; ++t) {
    std::size_t i = 0;
    switch (config.schedule.kind) {
      case ScheduleKind::round_robin: i = (t - 1) % n; break;
      case ScheduleKind::uniform_random: i = pick(rng); break;
      case ScheduleKind::scripted: i = config.schedule.order[(t - 1) % config.schedule.order.size()]; break;
    }
    const Strategy& strategy = config.strategies.size() == 1 ? config.strategies[0] : config.strategies[i];

    StepRecord step;
    step.t = t;
    step.bidder = i;
    step.row_before = bids.rows[i];
    if (config.lazy && best_responding(*instance, bids, current, i)) {
      step.lazy = true;
      step.row_after = step.row_before;
    } else {
      ++activations[i];
      auto report = apply_strategy(strategy, activations[i], *instance, bids, trace.tie, i, trace.allocation);
      step.row_after = report.row;
      step.alpha = report.alpha;
      step.strong = report.strong;
      step.weak = report.weak;
      step.grand = report.grand;
    }
    bids.rows[i] = step.row_after;
    current = allocate(*instance, bids, trace.tie, trace.allocation);
    step.outcome = current;
    y = max_with(std::move(y), step.row_after);
    step.running_max = y;
    trace.steps.push_back(std::move(step));
    trace.profiles.push_back(bids);

    if (config.stop_on_fixed_point && is_pne(*instance, bids, trace.tie, trace.allocation).is_pne) break;
  }
  return trace;
}

PneCheck is_pne(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                const AllocationOptions& options) {
  auto out = allocate(instance, bids, tie, options);
  PneCheck r;
  r.gain = 0;
  for (std::size_t i = 0; i < instance.n(); ++i) {
    auto prices = opposing_maxima(bids, i);
    auto best = demand(instance.valuation(i), {prices, DemandMode::inclusion_minimal});
    if (best.utility > out.utility[i]) {
      r.is_pne = false;
      r.deviator = i;
      r.improving_set = best.sets.front();
      r.gain = best.utility - out.utility[i];
      return r;
    }
  }
  return r;
}

ValidationReport validate_trace(const Trace& trace) {
  ValidationReport report;
  auto flag = [&](std::size_t t, const std::string& what) {
    if (report.clean) report.first_bad_step = t;
    report.clean = false;
    report.issues.push_back("step " + std::to_string(t) + ": " + what);
  };
  if (!trace.instance) {
    flag(0, "trace has no instance");
    return report;
  }
  const Instance& inst = *trace.instance;
  BidProfile bids = trace.initial;
  try {
    validate_profile(bids, inst.n(), inst.m());
  } catch (const std::exception& e) {
    flag(0, e.what());
    return report;
  }
  if (allocate(inst, bids, trace.tie, trace.allocation) != trace.initial_outcome) flag(0, "initial outcome mismatch");
  std::vector<Value> y = trace.running_max(0);

  for (const auto& step : trace.steps) {
    const std::size_t t = step.t;
    if (step.bidder >= inst.n()) {
      flag(t, "bidder out of range");
      return report;
    }
    if (t != static_cast<std::size_t>(&step - trace.steps.data()) + 1) flag(t, "step numbering out of order");
    if (step.row_before != bids.rows[step.bidder]) flag(t, "row_before differs from the replayed profile");
    if (step.lazy && step.row_after != step.row_before) flag(t, "lazy step changed the bid row");
    BidProfile prev = bids;
    bids.rows[step.bidder] = step.row_after;
    Outcome out;
    try {
      out = allocate(inst, bids, trace.tie, trace.allocation);
    } catch (const std::exception& e) {
      flag(t, e.what());
      return report;
    }
    if (out != step.outcome) flag(t, "recorded outcome differs from the replayed allocation");
    for (const auto& ud : out.declared_utility)
      if (sgn(ud) < 0) flag(t, "negative declared utility");
    if (!step.lazy && step.alpha) {
      auto alpha = measure_aggressiveness(inst, prev, step.row_after, trace.tie, step.bidder, trace.allocation);
      if (!(alpha == *step.alpha)) flag(t, "recorded aggressiveness differs from the replayed value");
    }
    y = max_with(std::move(y), step.row_after);
    if (y != step.running_max) flag(t, "running maxima bookkeeping mismatch");
    if (t < trace.profiles.size() && trace.profiles[t] != bids) flag(t, "stored profile differs from replay");
  }
  return report;
}

}  // namespace auction
