#include "auction/experiments.hpp"

#include "auction/demand.hpp"
#include "auction/strategies.hpp"
#include "auction/underapprox.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace auction {

namespace {

Value from_size(std::size_t x) { return Value(static_cast<unsigned long>(x)); }

class Params {
 public:
  Params(const ExperimentParams& raw, std::set<std::string> allowed) : raw_(raw) {
    for (const auto& [key, value] : raw_)
      if (!allowed.count(key)) throw std::invalid_argument("unknown parameter \"" + key + "\"");
  }
  std::size_t size(const std::string& key, std::size_t fallback) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != it->second.size() || it->second[0] == '-')
      throw std::invalid_argument("parameter " + key + " must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  Value value(const std::string& key, const Value& fallback) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : parse_rational(it->second);
  }

 private:
  const ExperimentParams& raw_;
};

void absorb_numbered(BoundReport& into, const BoundReport& part, std::size_t index) {
  into.absorb(part, "#" + std::to_string(index) + "/");
  if (part.worst_ratio && (!into.worst_ratio || *part.worst_ratio < *into.worst_ratio))
    into.worst_ratio = part.worst_ratio;
}

// u_i(b^t) equals the best utility against b^{t-1}_{-i}.
void check_best_responses(BoundReport& r, const Trace& trace, std::size_t limit_bidders = SIZE_MAX) {
  for (const auto& step : trace.steps) {
    if (step.bidder >= limit_bidders) continue;
    const auto& v = trace.instance->valuation(step.bidder);
    auto prices = opposing_maxima(trace.profile(step.t - 1), step.bidder);
    r.check("best response", step.t, step.outcome.utility[step.bidder], "==", best_utility(v, prices));
  }
}

struct SuiteInstance {
  std::shared_ptr<const Instance> instance;
  OptResult opt;
};

SuiteInstance xos_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t n = 2 + rng() % 4;
  std::size_t m = 2 + rng() % 7;
  std::vector<Valuation> vals;
  for (std::size_t i = 0; i < n; ++i) {
    GeneratorParams p;
    p.m = m;
    p.clauses = 1 + rng() % 4;
    vals.push_back(generate(GeneratedKind::xos, p, rng()));
  }
  auto inst = std::make_shared<const Instance>(m, std::move(vals));
  return {inst, compute_opt(*inst)};
}

SuiteInstance subadditive_instance(std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(seed);
  std::size_t n = 2 + rng() % 4;
  std::size_t m = 2 + rng() % 7;
  GeneratedKind kind = index % 2 == 0 ? GeneratedKind::budgeted_additive : GeneratedKind::coverage;
  std::vector<Valuation> vals;
  for (std::size_t i = 0; i < n; ++i) {
    GeneratorParams p;
    p.m = m;
    p.ground = 4 + rng() % 9;
    vals.push_back(generate(kind, p, rng()));
  }
  auto inst = std::make_shared<const Instance>(m, std::move(vals));
  return {inst, compute_opt(*inst)};
}

RunConfig simple_config(StrategyKind kind, std::size_t steps) {
  RunConfig c;
  c.steps = steps;
  c.strategies = {Strategy{kind, {}, {}}};
  return c;
}

}  // namespace

BoundReport xos_pointwise_suite(std::size_t count, std::uint64_t seed) {
  auto parts = parallel_map(count, [&](std::size_t idx) {
    auto si = xos_instance(seed + idx);
    const std::size_t n = si.instance->n();
    auto trace = run(si.instance, simple_config(StrategyKind::xos_update, 10 * n));
    auto r = check_pointwise(trace, si.opt.value);
    for (std::size_t t = n; t <= trace.length(); ++t)
      r.check("SW >= OPT/3", t, trace.outcome(t).sw, ">=", si.opt.value / 3);
    r.check("alpha-hat min", 0, alpha_min(trace, 1, trace.length()), "==", Value(1));
    r.check("beta min", 0, check_safety(trace, Value(1)).beta_min, "==", Value(1));
    return r;
  });
  BoundReport r;
  r.id = "xos-pointwise";
  r.param("instances", std::to_string(count));
  r.param("seed", std::to_string(seed));
  for (std::size_t i = 0; i < parts.size(); ++i) absorb_numbered(r, parts[i], i);
  return r;
}

BoundReport subadditive_pointwise_suite(std::size_t count, std::uint64_t seed) {
  auto parts = parallel_map(count, [&](std::size_t idx) {
    auto si = subadditive_instance(seed + idx, idx);
    const std::size_t n = si.instance->n();
    auto trace = run(si.instance, simple_config(StrategyKind::subadditive_no_overbid, 10 * n));
    BoundReport r;
    if (!has_aggressive_update(trace)) {
      r.note("no aggressive update; pointwise bound not applicable");
      r.absorb(check_round_lemmas(trace, si.opt.value), "lemma:");
      return r;
    }
    r = check_pointwise(trace, si.opt.value);
    Value a = alpha_min(trace, 1, trace.length());
    Value bound = a / (1 + a + 1) * si.opt.value;
    for (std::size_t t = n; t <= trace.length(); ++t) r.check("SW >= a/(2+a) OPT", t, trace.outcome(t).sw, ">=", bound);
    r.check("beta min", 0, check_safety(trace, Value(1)).beta_min, "==", Value(1));
    return r;
  });
  BoundReport r;
  r.id = "subadditive-pointwise";
  r.param("instances", std::to_string(count));
  r.param("seed", std::to_string(seed));
  for (std::size_t i = 0; i < parts.size(); ++i) absorb_numbered(r, parts[i], i);
  return r;
}

BoundReport average_suite(std::size_t count, std::uint64_t seed) {
  auto parts = parallel_map(count, [&](std::size_t idx) {
    auto si = subadditive_instance(seed + idx, idx);
    const std::size_t n = si.instance->n();
    auto trace = run(si.instance, simple_config(StrategyKind::subadditive_aggressive, 2 * n));
    auto r = check_average(trace, si.opt.value);
    auto safety = check_safety(trace, Value(1));
    r.check_true("beta finite", 0, safety.feasible);
    if (safety.feasible) r.check("beta min <= H_m", 0, safety.beta_min, "<=", harmonic(si.instance->m()));
    r.absorb(check_round_lemmas(trace, si.opt.value), "lemma:");
    return r;
  });
  BoundReport r;
  r.id = "average-subadditive";
  r.param("instances", std::to_string(count));
  r.param("seed", std::to_string(seed));
  for (std::size_t i = 0; i < parts.size(); ++i) absorb_numbered(r, parts[i], i);
  return r;
}

BoundReport lazy_xos_suite(std::size_t count, std::uint64_t seed) {
  auto parts = parallel_map(count, [&](std::size_t idx) {
    auto si = xos_instance(seed + 100000 + idx);
    const auto& inst = *si.instance;
    const std::size_t n = inst.n();
    const std::size_t m = inst.m();
    std::mt19937_64 rng(seed * 31 + idx);
    AllocationOptions lazy_alloc{false};
    BidProfile initial = BidProfile::zeros(n, m);
    // Rows are scaled clauses on random supports, so strong no-overbidding holds;
    // redraw until the row is not a best response (bounded attempts).
    std::size_t best_responding = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto clauses = xos_clauses(inst.valuation(i));
      for (int attempt = 0; attempt < 50; ++attempt) {
        BidRow row(m, Value(0));
        const auto& c = clauses[rng() % clauses.size()];
        Value q(static_cast<long>(1 + rng() % 1000), 1000);
        q.canonicalize();
        for (std::size_t j = 0; j < m; ++j)
          if (rng() % 2 == 0) row[j] = q * c[j];
        initial.rows[i] = row;
        auto prices = opposing_maxima(initial, i);
        auto u = utility(inst, initial, TieBreak::ascending(n, m), i, lazy_alloc);
        if (u != best_utility(inst.valuation(i), prices)) break;
        if (attempt == 49) ++best_responding;
      }
    }
    RunConfig config = simple_config(StrategyKind::xos_update, 10 * n);
    config.lazy = true;
    config.initial = initial;
    auto trace = run(si.instance, config);
    BoundReport r;
    if (best_responding) r.note(std::to_string(best_responding) + " initial rows are best responses");
    auto t0 = first_all_updated(trace);
    if (!t0) {
      r.note("some bidder never updated; lazy bound not applicable");
      return r;
    }
    r = check_pointwise(trace, si.opt.value);
    for (std::size_t t = std::max(*t0, n); t <= trace.length(); ++t)
      r.check("SW >= OPT/4", t, trace.outcome(t).sw, ">=", si.opt.value / 4);
    return r;
  });
  BoundReport r;
  r.id = "lazy-xos";
  r.param("instances", std::to_string(count));
  r.param("seed", std::to_string(seed));
  std::size_t vacuous = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].checks.empty()) ++vacuous;
    absorb_numbered(r, parts[i], i);
  }
  r.param("vacuous_traces", std::to_string(vacuous));
  return r;
}

BoundReport random_activation_experiment(std::size_t trials, std::uint64_t seed) {
  std::vector<Valuation> vals;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 4; ++i) vals.push_back(generate(GeneratedKind::xos, {6, 3, 10}, rng()));
  Instance inst(6, std::move(vals));
  MonteCarloConfig config;
  config.steps = 4;
  config.trials = trials;
  config.seed = seed;
  MonteCarloSummary s;
  auto r = monte_carlo_random_activation(inst, config, &s);
  Value opt = compute_opt(inst).value;
  r.check("mean SW(b^T) >= OPT/10", 4, Value(s.mean_sw), ">=", Value(to_double(opt / 10)));
  r.check("mean - 3 SE >= 0.9 OPT/10", 4, Value(s.mean_sw - 3 * s.se_sw), ">=", Value(0.9 * to_double(opt / 10)));
  return r;
}

BoundReport oracle_equivalence(std::size_t price_vectors, std::size_t functions, std::uint64_t seed) {
  BoundReport r;
  r.id = "oracle-equivalence";
  r.param("price_vectors", std::to_string(price_vectors));
  r.param("functions", std::to_string(functions));
  r.param("seed", std::to_string(seed));

  auto hard = gf2::build_hard_instance(2);
  Instance inst = hard.instance();
  const auto& v2 = inst.valuation(1);
  std::mt19937_64 rng(seed);
  std::size_t agree = 0, utility_agree = 0;
  for (std::size_t s = 0; s < price_vectors; ++s) {
    std::vector<Value> prices(hard.m);
    for (auto& p : prices) {
      p = Value(static_cast<long>(rng() % 13), 3);
      p.canonicalize();
    }
    ItemSet fast = gf2::v2_demand_set(hard, prices);
    auto all = demand(v2, {prices, DemandMode::all});
    // sets are sorted by mask_less; the first is the canonical minimal maximizer
    if (!all.sets.empty() && all.sets.front() == fast) ++agree;
    if (residual_utility(v2, prices, fast) == all.utility) ++utility_agree;
  }
  r.check("structured v2 demand equals exhaustive", 0, from_size(agree), "==", from_size(price_vectors));
  r.check("structured v2 utility equals exhaustive", 0, from_size(utility_agree), "==", from_size(price_vectors));

  const GeneratedKind kinds[] = {GeneratedKind::budgeted_additive, GeneratedKind::coverage,
                                 GeneratedKind::set_cover_cost, GeneratedKind::unit_demand};
  std::size_t produced = 0, feasible = 0, ratio_ok = 0, positive = 0, skipped = 0;
  for (std::uint64_t draw = 0; produced < functions; ++draw) {
    std::size_t d = 1 + draw % 8;
    GeneratorParams p;
    p.m = d;
    p.ground = 3 + draw % 7;
    auto v = generate(kinds[draw % 4], p, seed * 7777 + draw);
    const auto& f = v.table();
    bool strictly_positive = true;
    for (std::size_t mask = 1; mask < f.size(); ++mask) strictly_positive = strictly_positive && sgn(f[mask]) > 0;
    if (!strictly_positive) {
      ++skipped;
      continue;
    }
    ++produced;
    auto approx = additive_underapprox(f, d);
    // Independent re-check of every constraint, written out here.
    bool ok = true;
    for (std::size_t mask = 0; mask < f.size(); ++mask) {
      Value sum = 0;
      for (std::size_t j = 0; j < d; ++j)
        if ((mask >> j) & 1U) sum += approx.weights[j];
      if (sum > f[mask]) ok = false;
    }
    if (ok) ++feasible;
    bool pos = std::all_of(approx.weights.begin(), approx.weights.end(), [](const Value& a) { return sgn(a) > 0; });
    if (pos) ++positive;
    Value total = 0;
    for (const auto& a : approx.weights) total += a;
    if (total / f.back() >= 1 / harmonic(d) && total / f.back() == approx.ratio) ++ratio_ok;
  }
  r.param("functions_skipped_nonpositive", std::to_string(skipped));
  r.check("underapprox feasible on all subsets", 0, from_size(feasible), "==", from_size(functions));
  r.check("underapprox weights positive", 0, from_size(positive), "==", from_size(functions));
  r.check("underapprox ratio >= 1/H_d", 0, from_size(ratio_ok), "==", from_size(functions));
  return r;
}

BoundReport no_pne_lemmas(std::size_t k, std::size_t samples, std::uint64_t seed) {
  auto hard = gf2::build_hard_instance(k);
  const std::size_t m = hard.m;
  const std::size_t d = hard.d;
  const Value kv = from_size(k);
  const Value mv = from_size(m);
  const Value max_v2 = hard.max_v2();
  std::size_t log2k = k - d;
  BoundReport r;
  r.id = "no-pne-lemmas";
  r.param("k", std::to_string(k));
  r.param("m", std::to_string(m));
  r.param("d", std::to_string(d));
  r.param("rho", hard.rho);
  r.param("rho_2^d", hard.rho_two_to_d());
  r.param("max_v2", max_v2);

  r.check("rho*2^d", 0, hard.rho_two_to_d(), "==", Value(4));
  // Average bound: sum_M b1 <= v1(M) + v2(M), and every item lies in equally many D.
  r.check("average bound (k+4)/m < 1/2", 0, (kv + 4) / mv, "<", Value(1, 2));
  r.check("average bound (k + max v2)/m < rho/2", 0, (kv + max_v2) / mv, "<", hard.rho / 2);
  // Cover bound: v2(D') + 1 + v1(M \ D') <= k with v1(M \ D') <= max basis cover size.
  std::size_t worst_cover = 0;
  for (const auto& sub : *hard.family) worst_cover = std::max(worst_cover, gf2::basis_cover(k, sub).size());
  r.param("max_basis_cover", std::to_string(worst_cover));
  r.check("cover bound 4 + 1 + log2 k <= k", 0, Value(4 + 1) + from_size(log2k), "<=", kv);
  r.check("cover bound max v2 + 1 + max cover <= k", 0, max_v2 + 1 + from_size(worst_cover), "<=", kv);
  // Gain bound.
  r.check("gain bound d - 4 >= 1", 0, from_size(d) - 4, ">=", Value(1));
  r.check("gain bound d - max v2 >= 1", 0, from_size(d) - max_v2, ">=", Value(1));

  // Constructive deviations from sampled weakly no-overbidding profiles in which
  // player 2 best responds on a demand set.
  std::mt19937_64 rng(seed);
  auto tie = TieBreak::ascending(2, m);
  std::size_t wins = 0, weak = 0, gain = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<long> w(m);
    long total = 0;
    for (auto& x : w) {
      x = (rng() % 3 == 0) ? static_cast<long>(rng() % 1000) : 0;
      total += x;
    }
    BidRow b1(m, Value(0));
    if (total > 0) {
      // sum b1 <= 1 <= v1(T) for every nonempty T
      Value scale(static_cast<long>(rng() % 1001), 1000 * total);
      scale.canonicalize();
      for (std::size_t j = 0; j < m; ++j) b1[j] = scale * Value(w[j]);
    }
    ItemSet demand_d = gf2::v2_demand_set(hard, b1);
    Value on_d = 0;
    for (auto j = demand_d.find_first(); j != ItemSet::npos; j = demand_d.find_next(j)) on_d += b1[j];
    Value delta = (max_v2 - on_d) / (2 * from_size(demand_d.count()));
    BidRow b2(m, Value(0));
    for (auto j = demand_d.find_first(); j != ItemSet::npos; j = demand_d.find_next(j)) b2[j] = b1[j] + delta;
    BidProfile bids{{b1, b2}};
    auto dev = gf2::construct_deviation(hard, bids, tie);
    if (dev.wins_everything) ++wins;
    if (dev.weakly_no_overbidding && dev.bid_sum <= kv) ++weak;
    if (dev.gain_lower_bound >= 1) ++gain;
  }
  r.param("deviation_samples", std::to_string(samples));
  r.check("deviation wins every item", 0, from_size(wins), "==", from_size(samples));
  r.check("deviation is weakly no-overbidding", 0, from_size(weak), "==", from_size(samples));
  r.check("deviation gain >= 1", 0, from_size(gain), "==", from_size(samples));
  r.note("non-existence of a weakly no-overbidding pure Nash equilibrium is certified by the lemma chain, "
         "not by search");
  return r;
}

std::shared_ptr<const Instance> tightness_instance(const Value& eps) {
  std::vector<Valuation> vals;
  vals.push_back(Valuation::unit_demand({Value(1), Value(0), Value(0)}));
  vals.push_back(Valuation::unit_demand({1 + eps, 1 + 2 * eps, 1 + 3 * eps}));
  vals.push_back(Valuation::unit_demand({Value(0), Value(0), Value(1)}));
  return std::make_shared<const Instance>(3, std::move(vals));
}

BidProfile tightness_initial_bids(const Value& eps) {
  BidProfile b = BidProfile::zeros(3, 3);
  b.rows[1][0] = 1 + eps;
  return b;
}

std::shared_ptr<const Instance> adversarial_cycle_instance(std::size_t n, const Value& eps) {
  if (n < 2) throw std::invalid_argument("adversarial cycle needs n >= 2");
  const std::size_t m = n - 1;
  std::vector<Valuation> vals;
  vals.push_back(Valuation::unit_demand(std::vector<Value>(m, 1 + eps)));
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<Value> w(m, Value(0));
    w[i - 1] = 1;
    vals.push_back(Valuation::unit_demand(w));
  }
  return std::make_shared<const Instance>(m, std::move(vals));
}

RunConfig adversarial_cycle_config(std::size_t n, std::size_t steps) {
  const std::size_t m = n - 1;
  RunConfig c;
  c.steps = steps;
  Strategy first{StrategyKind::potential_procedure, {}, {}};
  for (std::size_t j = 0; j < m; ++j) first.demand_script.push_back(make_set(m, {j}));
  Strategy others{StrategyKind::potential_procedure, {}, {empty_set(m)}};
  c.strategies.push_back(first);
  for (std::size_t i = 1; i < n; ++i) c.strategies.push_back(others);
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i < n; ++i) {
    order.push_back(0);
    order.push_back(i);
  }
  c.schedule = Schedule::scripted(order);
  return c;
}

MphSetup mph3_setup(std::size_t k, std::size_t cycles) {
  if (k < 2) throw std::invalid_argument("mph3 needs k >= 2");
  const std::size_t m = k + 4;
  const std::size_t n = 2 * k + 4;
  auto item = [](std::size_t one_based) { return one_based - 1; };
  auto bundle = [&](std::size_t a, std::size_t b, std::size_t c) {
    return make_set(m, {item(a), item(b), item(c)});
  };
  std::vector<ItemSet> odd(k), even(k);
  for (std::size_t i = 1; i < k; ++i) {
    odd[i - 1] = bundle(i, k + 1, k + 2);
    even[i - 1] = bundle(i, k + 3, k + 4);
  }
  odd[k - 1] = bundle(k, k + 1, k + 4);
  even[k - 1] = bundle(k, k + 2, k + 3);

  std::vector<Valuation> vals;
  for (std::size_t i = 0; i < k; ++i)
    vals.push_back(Valuation::mph(m, 3, {{Hyperedge{odd[i], Value(3)}}, {Hyperedge{even[i], Value(3)}}}));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Value> w(m, Value(0));
    w[j] = 1;
    vals.push_back(Valuation::additive(w));
  }

  std::vector<std::vector<std::size_t>> order(m);
  for (std::size_t j = 1; j <= m; ++j) {
    auto& o = order[item(j)];
    if (j == k + 2 || j == k + 4) {
      for (std::size_t i = k - 1; i >= 1; --i) o.push_back(i - 1);
      o.push_back(k - 1);
    } else {
      for (std::size_t i = k; i >= 1; --i) o.push_back(i - 1);
    }
    for (std::size_t u = k; u < n; ++u) o.push_back(u);
  }

  auto row_on = [&](const ItemSet& s) {
    BidRow row(m, Value(0));
    for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) row[j] = 1;
    return row;
  };
  BidProfile initial = BidProfile::zeros(n, m);
  for (std::size_t i = 0; i < k; ++i) initial.rows[i] = row_on(even[i]);
  for (std::size_t j = 0; j < m; ++j) initial.rows[k + j][j] = 1;

  MphSetup setup;
  setup.k = k;
  setup.instance = std::make_shared<const Instance>(m, std::move(vals));
  setup.config.steps = cycles * n;
  setup.config.lazy = false;
  setup.config.tie = TieBreak(order);
  setup.config.initial = initial;
  for (std::size_t i = 0; i < k; ++i)
    setup.config.strategies.push_back(Strategy{StrategyKind::scripted, {row_on(odd[i]), row_on(even[i])}, {}});
  for (std::size_t u = k; u < n; ++u) setup.config.strategies.push_back(Strategy{StrategyKind::hold, {}, {}});
  return setup;
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> list = {
      {"gross-underbidding", "single item, bidders raise the winning bid by eps each turn (n, C, eps, rounds)"},
      {"gross-overbidding", "single item, the last bidder overbids C+eps and the dynamics stop (n, C, eps)"},
      {"tightness-xos", "three unit-demand bidders; one round reaches SW = (1+3eps)/(3+2eps) OPT (eps)"},
      {"adversarial-cycle", "activation 1,2,1,3,...,1,n keeps SW at 1+eps while OPT = n-1+eps (n, eps, steps)"},
      {"mph3", "MPH-3 bundles with scripted tie-breaks; welfare stays constant while OPT = k+4 (k, cycles)"},
      {"hard-instance-k2", "set-cover versus subspace bidder, k=2: simulation and lemma chain (samples, updates)"},
      {"hard-instance-k4", "set-cover versus subspace bidder, k=4: simulation and lemma chain (samples, updates)"},
      {"hard-instance-k8", "set-cover versus subspace bidder, k=8: lemma chain (samples)"},
      {"no-pne-lemmas", "certified inequalities ruling out weakly no-overbidding equilibria (k, samples, seed)"},
      {"lazy-xos", "lazy XOS updates from non-best-response starts; SW >= OPT/4 (count, seed)"},
      {"xos-pointwise", "random XOS instances, round-robin XOS updates; SW >= OPT/3 (count, seed)"},
      {"subadditive-pointwise", "random subadditive instances, no-overbidding updates (count, seed)"},
      {"average-subadditive", "random subadditive instances, aggressive updates, T = 2n (count, seed)"},
      {"random-activation", "Monte Carlo over uniform random activation, n=4, m=6 (trials, seed)"},
      {"oracle-equivalence", "structured oracles versus exhaustive enumeration (prices, functions, seed)"},
  };
  return list;
}

namespace {

ExperimentResult gross_underbidding(const Params& p) {
  const std::size_t n = p.size("n", 3);
  const Value C = p.value("C", Value(10));
  const Value eps = p.value("eps", Value(1, 100));
  const std::size_t rounds = p.size("rounds", 5);
  if (n < 2) throw std::invalid_argument("gross-underbidding needs n >= 2");
  std::vector<Valuation> vals;
  vals.push_back(Valuation::additive({C}));
  for (std::size_t i = 1; i < n; ++i) vals.push_back(Valuation::additive({Value(1)}));
  auto inst = std::make_shared<const Instance>(1, std::move(vals));
  RunConfig c;
  c.steps = rounds * n;
  for (std::size_t i = 0; i < n; ++i) {
    Strategy s{StrategyKind::scripted, {}, {}};
    for (std::size_t r = 0; r < rounds; ++r) s.script.push_back({eps * from_size(r * n + i + 1)});
    c.strategies.push_back(s);
  }
  auto trace = run(inst, c);
  BoundReport r;
  r.id = "gross-underbidding";
  r.param("n", std::to_string(n));
  r.param("C", C);
  r.param("eps", eps);
  r.param("rounds", std::to_string(rounds));
  r.param("opt", C);
  r.check("initial winner is bidder 1", 0, trace.initial_outcome.sw, "==", C);
  for (std::size_t t = n; t <= trace.length(); t += n) {
    r.check("SW after round", t, trace.outcome(t).sw, "==", Value(1));
    r.track_ratio(trace.outcome(t).sw, C);
  }
  check_best_responses(r, trace);
  r.param("alpha_min", alpha_min(trace, 1, trace.length()));
  return {r, trace};
}

ExperimentResult gross_overbidding(const Params& p) {
  const std::size_t n = p.size("n", 3);
  const Value C = p.value("C", Value(10));
  const Value eps = p.value("eps", Value(1, 100));
  if (n < 2) throw std::invalid_argument("gross-overbidding needs n >= 2");
  std::vector<Valuation> vals;
  vals.push_back(Valuation::additive({C}));
  for (std::size_t i = 1; i < n; ++i) vals.push_back(Valuation::additive({Value(1)}));
  auto inst = std::make_shared<const Instance>(1, std::move(vals));
  RunConfig c;
  c.steps = 2 * n;
  for (std::size_t i = 0; i + 1 < n; ++i) c.strategies.push_back({StrategyKind::scripted, {{eps * from_size(i + 1)}}, {}});
  c.strategies.push_back({StrategyKind::scripted, {{C + eps}}, {}});
  auto trace = run(inst, c);
  BoundReport r;
  r.id = "gross-overbidding";
  r.param("n", std::to_string(n));
  r.param("C", C);
  r.param("eps", eps);
  r.param("opt", C);
  for (std::size_t t = n; t <= trace.length(); ++t) {
    r.check("SW after the overbid", t, trace.outcome(t).sw, "==", Value(1));
    r.track_ratio(trace.outcome(t).sw, C);
  }
  r.check_true("overbid violates grand-bundle no-overbidding", n, trace.steps[n - 1].grand == false);
  r.check_true("dynamics stop after the first round", 2 * n, trace.profile(2 * n) == trace.profile(n));
  r.check_true("terminal profile is a pure Nash equilibrium", 2 * n,
               is_pne(*inst, trace.profile(2 * n), trace.tie, trace.allocation).is_pne);
  check_best_responses(r, trace);
  return {r, trace};
}

ExperimentResult tightness(const Params& p) {
  const Value eps = p.value("eps", Value(1, 100));
  if (sgn(eps) <= 0) throw std::invalid_argument("eps must be positive");
  auto inst = tightness_instance(eps);
  RunConfig c;
  c.steps = 3;
  c.strategies = {Strategy{}};
  c.initial = tightness_initial_bids(eps);
  c.allocate_zero_bids = false;
  auto trace = run(inst, c);
  auto opt = compute_opt(*inst);
  BoundReport r;
  r.id = "tightness-xos";
  r.param("eps", eps);
  r.param("opt", opt.value);
  r.param("SW(b^3)", trace.outcome(3).sw);
  r.param("ratio", trace.outcome(3).sw / opt.value);
  r.check_true("b^1 = b^0", 1, trace.profile(1) == trace.profile(0));
  r.check_true("player 2 moves to item 3", 2,
               trace.profile(2).rows[1] == BidRow{Value(0), Value(0), 1 + 3 * eps});
  r.check_true("b^3 = b^2", 3, trace.profile(3) == trace.profile(2));
  r.check("SW(b^3)", 3, trace.outcome(3).sw, "==", 1 + 3 * eps);
  r.check("DW(b^3)", 3, trace.outcome(3).dw, "==", 1 + 3 * eps);
  r.check("OPT", 0, opt.value, "==", 3 + 2 * eps);
  r.check("SW/OPT", 3, trace.outcome(3).sw / opt.value, "==", (1 + 3 * eps) / (3 + 2 * eps));
  r.absorb(check_pointwise(trace, opt.value), "pointwise:");
  r.track_ratio(trace.outcome(3).sw, opt.value);
  return {r, trace};
}

ExperimentResult adversarial(const Params& p) {
  const std::size_t n = p.size("n", 6);
  const Value eps = p.value("eps", Value(1, 100));
  const std::size_t steps = p.size("steps", 100);
  auto inst = adversarial_cycle_instance(n, eps);
  auto trace = run(inst, adversarial_cycle_config(n, steps));
  auto opt = compute_opt(*inst);
  BoundReport r;
  r.id = "adversarial-cycle";
  r.param("n", std::to_string(n));
  r.param("eps", eps);
  r.param("steps", std::to_string(steps));
  r.param("opt", opt.value);
  r.param("ratio", (1 + eps) / opt.value);
  r.check("OPT", 0, opt.value, "==", from_size(n - 1) + eps);
  for (std::size_t t = 1; t <= trace.length(); ++t) {
    r.check("SW", t, trace.outcome(t).sw, "==", 1 + eps);
    r.track_ratio(trace.outcome(t).sw, opt.value);
  }
  std::vector<bool> active(n, false);
  for (const auto& step : trace.steps) active[step.bidder] = true;
  r.check_true("every bidder activated", 0, std::all_of(active.begin(), active.end(), [](bool b) { return b; }));
  check_best_responses(r, trace);
  return {r, trace};
}

ExperimentResult mph3(const Params& p) {
  const std::size_t k = p.size("k", 5);
  const std::size_t cycles = p.size("cycles", 3);
  auto setup = mph3_setup(k, cycles);
  const auto& inst = *setup.instance;
  auto trace = run(setup.instance, setup.config);
  auto opt = compute_opt(inst);
  BoundReport r;
  r.id = "mph3";
  r.param("k", std::to_string(k));
  r.param("items", std::to_string(inst.m()));
  r.param("bidders", std::to_string(inst.n()));
  r.param("cycles", std::to_string(cycles));
  r.param("opt", opt.value);
  r.check("OPT = k+4", 0, opt.value, "==", from_size(k + 4));

  const auto& tie = trace.tie;
  auto item = [](std::size_t one_based) { return one_based - 1; };
  for (std::size_t i = 2; i <= k; ++i) {
    for (std::size_t j : {k + 1, k + 3})
      r.check_true("bidder " + std::to_string(i) + " preferred to " + std::to_string(i - 1) + " on item " +
                       std::to_string(j),
                   0, tie.rank(item(j), i - 1) < tie.rank(item(j), i - 2));
  }
  for (std::size_t j : {k + 2, k + 4}) {
    for (std::size_t i = 2; i < k; ++i)
      r.check_true("bidder " + std::to_string(i) + " preferred to " + std::to_string(i - 1) + " on item " +
                       std::to_string(j),
                   0, tie.rank(item(j), i - 1) < tie.rank(item(j), i - 2));
    r.check_true("bidders 1..k-1 preferred to k on item " + std::to_string(j), 0,
                 tie.rank(item(j), k - 2) < tie.rank(item(j), k - 1) &&
                     tie.rank(item(j), 0) < tie.rank(item(j), k - 1));
  }
  for (std::size_t j = 0; j < inst.m(); ++j)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t u = k; u < inst.n(); ++u)
        if (tie.rank(j, u) < tie.rank(j, i)) r.check_true("unit bidders rank last", 0, false);

  check_best_responses(r, trace);
  Value worst = 0;
  for (const auto& step : trace.steps) {
    const Value& sw = step.outcome.sw;
    if (sw > worst) worst = sw;
    if (step.bidder < k) r.check("SW after update step", step.t, sw, "==", Value(3));
    r.check("SW <= 4", step.t, sw, "<=", Value(4));
    r.track_ratio(sw, opt.value);
  }
  r.param("max_SW", worst);
  r.note("bidder k bundles are {k,k+1,k+4} and {k,k+2,k+3} so that every scripted move is a best response");
  return {r, trace};
}

}  // namespace

ExperimentResult run_named_experiment(const std::string& name, const ExperimentParams& params) {
  if (name == "gross-underbidding") return gross_underbidding(Params(params, {"n", "C", "eps", "rounds"}));
  if (name == "gross-overbidding") return gross_overbidding(Params(params, {"n", "C", "eps"}));
  if (name == "tightness-xos") return tightness(Params(params, {"eps"}));
  if (name == "adversarial-cycle") return adversarial(Params(params, {"n", "eps", "steps"}));
  if (name == "mph3") return mph3(Params(params, {"k", "cycles"}));
  if (name == "hard-instance-k2" || name == "hard-instance-k4" || name == "hard-instance-k8") {
    Params p(params, {"samples", "updates", "seed"});
    HardInstanceOptions o;
    o.samples = p.size("samples", o.samples);
    o.player2_updates = p.size("updates", o.player2_updates);
    o.seed = p.size("seed", o.seed);
    std::size_t k = static_cast<std::size_t>(name.back() - '0');
    return {check_hard_instance(k, o), std::nullopt};
  }
  if (name == "no-pne-lemmas") {
    Params p(params, {"k", "samples", "seed"});
    return {no_pne_lemmas(p.size("k", 8), p.size("samples", 200), p.size("seed", 11)), std::nullopt};
  }
  if (name == "lazy-xos") {
    Params p(params, {"count", "seed"});
    return {lazy_xos_suite(p.size("count", 100), p.size("seed", 4000)), std::nullopt};
  }
  if (name == "xos-pointwise") {
    Params p(params, {"count", "seed"});
    return {xos_pointwise_suite(p.size("count", 200), p.size("seed", 1000)), std::nullopt};
  }
  if (name == "subadditive-pointwise") {
    Params p(params, {"count", "seed"});
    return {subadditive_pointwise_suite(p.size("count", 100), p.size("seed", 2000)), std::nullopt};
  }
  if (name == "average-subadditive") {
    Params p(params, {"count", "seed"});
    return {average_suite(p.size("count", 100), p.size("seed", 2000)), std::nullopt};
  }
  if (name == "random-activation") {
    Params p(params, {"trials", "seed"});
    return {random_activation_experiment(p.size("trials", 2000), p.size("seed", 7)), std::nullopt};
  }
  if (name == "oracle-equivalence") {
    Params p(params, {"prices", "functions", "seed"});
    return {oracle_equivalence(p.size("prices", 1000), p.size("functions", 200), p.size("seed", 5)), std::nullopt};
  }
  throw std::invalid_argument("unknown experiment \"" + name + "\"");
}

}  // namespace auction
