#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "cgdoi/instance.hpp"

namespace cgdoi {

enum class ColumnKind { Route, FacilityAssignment, Artificial };

/// One master-problem column: a vehicle route, a single-facility customer
/// assignment, or a per-item high-cost slack.
struct Column {
  ColumnKind kind = ColumnKind::Route;
  std::vector<int> visit_order;  // routes only; consecutive pairs are arcs
  std::vector<int> covers;       // sorted; equals set(visit_order) for routes
  int facility = -1;             // facility assignments only
  std::int64_t cost = 0;
  std::int64_t open_cost_only = 0;  // facility assignments: just the open cost

  bool covers_item(int u) const;
  bool operator==(const Column&) const = default;
};

/// Route leg sum: depot -> visit_order... -> depot. Throws on repeats.
std::int64_t route_cost(const CvrpInstance& inst,
                        const std::vector<int>& visit_order);

/// Builds a validated route column (exact cost, sorted covers). Throws on
/// duplicate items or loads above vehicle capacity.
Column make_route(const CvrpInstance& inst, std::vector<int> visit_order);

/// Builds a validated facility-assignment column: cost = open cost plus the
/// service costs of `customers`. Throws on duplicates or capacity overflow.
Column make_assignment(const SscflpInstance& inst, int facility,
                       std::vector<int> customers);

Column make_artificial(int item, std::int64_t big_m);

/// For each demand level d in the instance's demand set (ascending): how
/// many covered items have demand >= d. All-zero for artificial columns.
std::vector<int> demand_profile(const CvrpInstance& inst, const Column& col);
std::vector<int> demand_profile(const SscflpInstance& inst, const Column& col);

/// Twice the distance from item u to the nearest covered node or the depot:
/// the cost of serving u by an out-and-back detour from route `col`.
/// Zero whenever u is covered. Throws for non-route columns.
std::int64_t detour_cost(const CvrpInstance& inst, const Column& col, int u);

/// SSCFLP analog: the service cost of u at the column's facility, for
/// covered and uncovered customers alike — the open cost and the per-
/// customer service costs decompose the assignment cost exactly. Throws
/// for non-assignment columns.
std::int64_t detour_cost(const SscflpInstance& inst, const Column& col, int u);

/// Ordered pairs (u, v), u != v, with d_u >= d_v: u's seat on a route can
/// hold v instead.
std::vector<std::pair<int, int>> smooth_swap_set(const CvrpInstance& inst);

/// Cost of covering v by a detour through u's seat: 2 c_uv + epsilon. The
/// strictly positive offset keeps swap variables out of final optima.
/// Throws when (u, v) is not a swap pair.
double smooth_rho(const CvrpInstance& inst, int u, int v, double epsilon);

/// Append-only column store with stable ids and duplicate detection.
/// Routes are considered equal up to reversal (distances are symmetric).
class ColumnPool {
 public:
  struct AddResult {
    int id;
    bool inserted;
  };

  /// Idempotent: a duplicate returns the existing id.
  AddResult add(const Column& col);

  int size() const { return static_cast<int>(cols_.size()); }
  const Column& operator[](int id) const { return cols_.at(id); }
  const std::vector<Column>& columns() const { return cols_; }

  /// One JSON object per line.
  void dump_jsonl(std::ostream& out) const;

 private:
  std::vector<Column> cols_;
  std::map<std::vector<int>, int> index_;
};

/// The duals of one master solve, normalized to the paper-facing signs
/// (all nonnegative). Keys of pi_ul / pi_dl are (item id, column id) and
/// (demand level, column id).
struct DualSolution {
  std::vector<double> pi_u;
  double pi_0 = 0.0;
  std::map<std::pair<int, int>, double> pi_ul;
  std::map<std::pair<int, int>, double> pi_dl;
  std::vector<double> pi_f;
};

}  // namespace cgdoi
