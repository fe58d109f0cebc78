#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cgdoi {

// Node ids: items are 0..n-1, the start depot is -1 and the end depot -2.
// Both depots share one coordinate pair.
inline constexpr int kStartDepot = -1;
inline constexpr int kEndDepot = -2;

struct GridPoint {
  int x = 0;
  int y = 0;
  bool operator==(const GridPoint&) const = default;
};

/// Ceiling of the Euclidean distance between two integer grid points.
std::int64_t ceil_l2(const GridPoint& a, const GridPoint& b);

struct CvrpItem {
  GridPoint pos;
  int demand = 1;
  bool operator==(const CvrpItem&) const = default;
};

struct DemandRule {
  enum class Kind { Unit, Uniform } kind = Kind::Unit;
  int lo = 1;
  int hi = 1;

  static DemandRule unit() { return {}; }
  static DemandRule uniform(int lo, int hi) {
    return {Kind::Uniform, lo, hi};
  }
  bool is_unit() const { return kind == Kind::Unit; }
};

class CvrpInstance {
 public:
  CvrpInstance(GridPoint depot, std::vector<CvrpItem> items, int capacity,
               int n_vehicles);

  int n_items() const { return static_cast<int>(items_.size()); }
  int capacity() const { return capacity_; }
  int n_vehicles() const { return n_vehicles_; }
  const GridPoint& depot() const { return depot_; }
  const CvrpItem& item(int u) const;
  int demand(int u) const { return item(u).demand; }
  std::int64_t total_demand() const { return total_demand_; }

  /// Distinct item demands, ascending.
  const std::vector<int>& demand_set() const { return demand_set_; }

  /// Ceil-L2 distance between two nodes (item ids or depot ids).
  std::int64_t distance(int a, int b) const;

  /// Cost of the per-item slack columns used to seed the master.
  std::int64_t artificial_cost() const { return artificial_cost_; }

  bool operator==(const CvrpInstance&) const = default;

 private:
  const GridPoint& coord(int node) const;

  GridPoint depot_;
  std::vector<CvrpItem> items_;
  int capacity_ = 0;
  int n_vehicles_ = 0;
  std::int64_t total_demand_ = 0;
  std::vector<int> demand_set_;
  std::int64_t artificial_cost_ = 0;
};

struct SscflpFacility {
  int capacity = 0;
  std::int64_t open_cost = 0;
  bool operator==(const SscflpFacility&) const = default;
};

class SscflpInstance {
 public:
  SscflpInstance(std::vector<int> customer_demands,
                 std::vector<SscflpFacility> facilities,
                 std::vector<std::vector<std::int64_t>> service_cost);

  int n_customers() const { return static_cast<int>(demands_.size()); }
  int n_facilities() const { return static_cast<int>(facilities_.size()); }
  int demand(int u) const { return demands_.at(u); }
  const SscflpFacility& facility(int f) const { return facilities_.at(f); }
  std::int64_t service_cost(int f, int u) const {
    return service_cost_.at(f).at(u);
  }
  std::int64_t total_demand() const { return total_demand_; }
  const std::vector<int>& demand_set() const { return demand_set_; }
  std::int64_t artificial_cost() const { return artificial_cost_; }

  bool operator==(const SscflpInstance&) const = default;

 private:
  std::vector<int> demands_;
  std::vector<SscflpFacility> facilities_;
  std::vector<std::vector<std::int64_t>> service_cost_;
  std::int64_t total_demand_ = 0;
  std::vector<int> demand_set_;
  std::int64_t artificial_cost_ = 0;
};

/// Seeded instance generator: depot then items are placed on integer
/// coordinates uniform in [0, grid_size], demands per `rule`. Deterministic in
/// `seed` (mt19937_64 with rejection-sampled uniforms, portable across
/// platforms). Throws std::invalid_argument for parameter sets that cannot
/// yield a fleet-feasible instance.
CvrpInstance generate_cvrp(std::uint64_t seed, int n_items, int grid_size,
                           int capacity, int n_vehicles,
                           const DemandRule& rule = DemandRule::unit());

struct IntRange {
  int lo = 1;
  int hi = 1;
};

/// Customers and facilities placed uniformly on the grid; service costs are
/// ceil-L2 distances; capacities/demands/open costs uniform integers in the
/// given ranges. Deterministic in `seed`.
SscflpInstance generate_sscflp(std::uint64_t seed, int n_customers,
                               int n_facilities, int grid_size,
                               IntRange capacity_range, IntRange demand_range,
                               IntRange open_cost_range);

// JSON instance files. CVRP:
//   {"type":"cvrp","depot":[x,y],"capacity":D0,"vehicles":K,
//    "items":[[x,y,demand],...]}
// SSCFLP:
//   {"type":"sscflp","customers":[d,...],"facilities":[[capacity,open],...],
//    "service_cost":[[...per customer...] per facility]}
// Integers only; load(save(x)) == x exactly.
void save_instance(const CvrpInstance& inst, const std::string& path);
void save_instance(const SscflpInstance& inst, const std::string& path);
CvrpInstance load_cvrp_instance(const std::string& path);
SscflpInstance load_sscflp_instance(const std::string& path);

/// Peeks at the "type" field of an instance file.
std::string instance_file_type(const std::string& path);

}  // namespace cgdoi
