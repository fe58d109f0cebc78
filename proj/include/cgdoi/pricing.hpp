#pragma once

#include <optional>

#include "cgdoi/column_pool.hpp"
#include "cgdoi/instance.hpp"

namespace cgdoi {

struct PricingOptions {
  bool use_dominance = true;      // label dominance on/off (value-invariant)
  int max_bruteforce_items = 10;  // refusal bound for the enumeration oracle
};

struct PricingResult {
  // The minimum-reduced-cost column. A route with no visits stands for the
  // "do nothing" candidate (reduced cost pi_0); callers never pool it.
  std::optional<Column> column;
  double reduced_cost = 0.0;
  long labels_expanded = 0;  // diagnostic: states expanded / cells filled
};

/// c_l + pi_0 - sum of covered pi_u. Throws for artificial columns or
/// missing dual entries.
double reduced_cost(const CvrpInstance& inst, const Column& col,
                    const DualSolution& duals);

/// c_l + pi_f(l) - sum of covered pi_u.
double reduced_cost(const SscflpInstance& inst, const Column& col,
                    const DualSolution& duals);

/// Exact minimum-reduced-cost elementary route: best-first label search
/// over (node, visited set, load) with a capacity-indexed walk relaxation
/// as admissible completion bound. Ties prefer fewer items, then the
/// lexicographically smallest visit order; the empty route wins only when
/// strictly cheapest.
PricingResult price_cvrp(const CvrpInstance& inst, const DualSolution& duals,
                         const PricingOptions& options = {});

/// Enumerates every duplicate-free capacity-feasible ordered route.
/// Refuses instances above options.max_bruteforce_items.
PricingResult price_cvrp_bruteforce(const CvrpInstance& inst,
                                    const DualSolution& duals,
                                    const PricingOptions& options = {});

/// One exact knapsack per facility over customer weight d_u and value
/// pi_u - c_fu; returns the best facility's assignment.
PricingResult price_sscflp(const SscflpInstance& inst,
                           const DualSolution& duals);

/// Subset enumeration per facility. Refuses instances above
/// options.max_bruteforce_items customers.
PricingResult price_sscflp_bruteforce(const SscflpInstance& inst,
                                      const DualSolution& duals,
                                      const PricingOptions& options = {});

}  // namespace cgdoi
