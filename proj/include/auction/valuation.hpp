#pragma once

#include "auction/item_set.hpp"
#include "auction/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace auction {

// Set functions whose representation lives outside this module (the hard-instance
// valuations). They may supply a fast demand oracle.
class StructuredValuation {
 public:
  virtual ~StructuredValuation() = default;
  virtual std::string kind_name() const = 0;
  virtual std::size_t items() const = 0;
  virtual Value value(const ItemSet& s) const = 0;
  // Smallest-bitmask inclusion-minimal maximizer of v(S) - p(S), or nullopt when
  // no structured oracle exists.
  virtual std::optional<ItemSet> demand(const std::vector<Value>& prices) const {
    (void)prices;
    return std::nullopt;
  }
};

struct Hyperedge {
  ItemSet items;
  Value weight;
};

struct AdditiveKind {
  std::vector<Value> weights;
};
struct UnitDemandKind {
  std::vector<Value> weights;
};
struct XosKind {
  std::vector<std::vector<Value>> clauses;
};
struct BudgetedAdditiveKind {
  std::vector<Value> weights;
  Value budget;
};
// covers[j] is the set of ground elements covered by item j.
struct CoverageKind {
  std::vector<Value> ground_weights;
  std::vector<ItemSet> covers;
};
// table[mask] = v(S) with item j at bit j.
struct ExplicitTableKind {
  std::vector<Value> table;
};
struct MphKind {
  std::size_t rank = 1;
  std::vector<std::vector<Hyperedge>> clauses;
};
struct StructuredKind {
  std::shared_ptr<const StructuredValuation> impl;
};

enum class ValuationClass { monotone, subadditive, xos_consistent };

struct ClassCheck {
  bool holds = true;
  ItemSet witness_s;
  ItemSet witness_t;
};

class Valuation {
 public:
  using Data = std::variant<AdditiveKind, UnitDemandKind, XosKind, BudgetedAdditiveKind, CoverageKind,
                            ExplicitTableKind, MphKind, StructuredKind>;

  static Valuation additive(std::vector<Value> weights);
  static Valuation unit_demand(std::vector<Value> weights);
  static Valuation xos(std::size_t m, std::vector<std::vector<Value>> clauses);
  static Valuation budgeted_additive(std::vector<Value> weights, Value budget);
  static Valuation coverage(std::size_t m, std::vector<Value> ground_weights, std::vector<ItemSet> covers);
  static Valuation explicit_table(std::size_t m, std::vector<Value> table);
  static Valuation mph(std::size_t m, std::size_t rank, std::vector<std::vector<Hyperedge>> clauses);
  static Valuation structured(std::shared_ptr<const StructuredValuation> impl);

  std::size_t items() const { return m_; }
  const Data& data() const { return *data_; }
  std::string kind_name() const;

  Value value(const ItemSet& s) const;
  Value value_mask(std::uint64_t mask) const;

  // True for kinds that are an explicit maximum of additive clauses.
  bool has_clauses() const;

  // Lazily built table of all 2^m values (m <= 16).
  const std::vector<Value>& table() const;

  static constexpr std::size_t kTableLimit = 16;

 private:
  struct Cache;
  Valuation(std::size_t m, Data data);

  std::size_t m_ = 0;
  std::shared_ptr<const Data> data_;
  std::shared_ptr<Cache> cache_;
};

// Exhaustive class check (m <= 16; xos-consistent for non-clause kinds m <= 10).
ClassCheck check_class(const Valuation& v, ValuationClass cls);

// The clauses of an Additive, UnitDemand or XOS valuation.
std::vector<std::vector<Value>> xos_clauses(const Valuation& v);

// Supporting clause on S: first maximizing clause, zeroed outside S.
std::vector<Value> xos_clause(const Valuation& v, const ItemSet& s);

// Residual utility v(S) - sum_{j in S} p_j.
Value residual_utility(const Valuation& v, const std::vector<Value>& prices, const ItemSet& s);

struct GeneratorParams {
  std::size_t m = 4;
  std::size_t clauses = 3;
  std::size_t ground = 10;
};

enum class GeneratedKind { xos, budgeted_additive, coverage, set_cover_cost, unit_demand, additive };

// Deterministic in seed; denominators at most 1000.
Valuation generate(GeneratedKind kind, const GeneratorParams& params, std::uint64_t seed);

}  // namespace auction
