#include "cgdoi/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cgdoi {

namespace {

using json = nlohmann::json;

// Uniform integer in [lo, hi] by rejection; bit-identical on every platform,
// unlike std::uniform_int_distribution.
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<int>(draw % range);
}

std::vector<int> distinct_sorted(const std::vector<int>& values) {
  std::set<int> s(values.begin(), values.end());
  return {s.begin(), s.end()};
}

}  // namespace

std::int64_t ceil_l2(const GridPoint& a, const GridPoint& b) {
  const std::int64_t dx = a.x - b.x;
  const std::int64_t dy = a.y - b.y;
  const std::int64_t s = dx * dx + dy * dy;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(s)));
  while (r > 0 && r * r > s) --r;
  while ((r + 1) * (r + 1) <= s) ++r;
  return r * r == s ? r : r + 1;  // exact floor, then ceil
}

CvrpInstance::CvrpInstance(GridPoint depot, std::vector<CvrpItem> items,
                           int capacity, int n_vehicles)
    : depot_(depot),
      items_(std::move(items)),
      capacity_(capacity),
      n_vehicles_(n_vehicles) {
  if (items_.empty()) throw std::invalid_argument("instance has no items");
  if (capacity_ <= 0) throw std::invalid_argument("capacity must be positive");
  if (n_vehicles_ <= 0) throw std::invalid_argument("vehicles must be positive");
  std::vector<int> demands;
  demands.reserve(items_.size());
  for (const CvrpItem& it : items_) {
    if (it.demand < 1 || it.demand > capacity_)
      throw std::invalid_argument("item demand outside [1, capacity]");
    demands.push_back(it.demand);
    total_demand_ += it.demand;
  }
  if (static_cast<std::int64_t>(n_vehicles_) * capacity_ < total_demand_)
    throw std::invalid_argument(
        "fleet capacity K*D0 smaller than total demand");
  demand_set_ = distinct_sorted(demands);

  std::int64_t max_dist = 1;
  for (int u = 0; u < n_items(); ++u) {
    max_dist = std::max(max_dist, distance(kStartDepot, u));
    for (int v = u + 1; v < n_items(); ++v)
      max_dist = std::max(max_dist, distance(u, v));
  }
  artificial_cost_ = 10 * static_cast<std::int64_t>(n_items()) * max_dist;
}

const CvrpItem& CvrpInstance::item(int u) const {
  if (u < 0 || u >= n_items())
    throw std::out_of_range("item id out of range: " + std::to_string(u));
  return items_[u];
}

const GridPoint& CvrpInstance::coord(int node) const {
  if (node == kStartDepot || node == kEndDepot) return depot_;
  return item(node).pos;
}

std::int64_t CvrpInstance::distance(int a, int b) const {
  return ceil_l2(coord(a), coord(b));
}

SscflpInstance::SscflpInstance(
    std::vector<int> customer_demands, std::vector<SscflpFacility> facilities,
    std::vector<std::vector<std::int64_t>> service_cost)
    : demands_(std::move(customer_demands)),
      facilities_(std::move(facilities)),
      service_cost_(std::move(service_cost)) {
  if (demands_.empty()) throw std::invalid_argument("no customers");
  if (facilities_.empty()) throw std::invalid_argument("no facilities");
  if (service_cost_.size() != facilities_.size())
    throw std::invalid_argument("service_cost must have one row per facility");

  int max_capacity = 0;
  std::int64_t total_capacity = 0;
  std::int64_t max_service = 0;
  std::int64_t total_open = 0;
  for (const SscflpFacility& f : facilities_) {
    if (f.capacity <= 0) throw std::invalid_argument("facility capacity <= 0");
    if (f.open_cost < 0) throw std::invalid_argument("negative open cost");
    max_capacity = std::max(max_capacity, f.capacity);
    total_capacity += f.capacity;
    total_open += f.open_cost;
  }
  for (int d : demands_) {
    if (d < 1) throw std::invalid_argument("customer demand < 1");
    if (d > max_capacity)
      throw std::invalid_argument("customer fits in no facility");
    total_demand_ += d;
  }
  if (total_capacity < total_demand_)
    throw std::invalid_argument("total facility capacity below total demand");
  for (const auto& row : service_cost_) {
    if (row.size() != demands_.size())
      throw std::invalid_argument("service_cost row size != customer count");
    for (std::int64_t c : row) {
      if (c < 0) throw std::invalid_argument("negative service cost");
      max_service = std::max(max_service, c);
    }
  }
  demand_set_ = distinct_sorted(demands_);
  artificial_cost_ =
      10 * (static_cast<std::int64_t>(n_customers()) *
                std::max<std::int64_t>(max_service, 1) +
            total_open);
}

CvrpInstance generate_cvrp(std::uint64_t seed, int n_items, int grid_size,
                           int capacity, int n_vehicles,
                           const DemandRule& rule) {
  if (n_items < 1) throw std::invalid_argument("n_items must be positive");
  if (grid_size < 1) throw std::invalid_argument("grid_size must be positive");
  if (capacity < 1) throw std::invalid_argument("capacity must be positive");
  if (n_vehicles < 1) throw std::invalid_argument("n_vehicles must be positive");

  const std::int64_t fleet =
      static_cast<std::int64_t>(n_vehicles) * capacity;
  int lo = 1, hi = 1;
  if (!rule.is_unit()) {
    lo = rule.lo;
    hi = rule.hi;
    if (lo < 1 || hi < lo)
      throw std::invalid_argument("bad demand range");
    if (hi > capacity)
      throw std::invalid_argument("demand range exceeds vehicle capacity");
  }
  if (static_cast<std::int64_t>(n_items) * lo > fleet)
    throw std::invalid_argument(
        "infeasible parameters: minimum total demand exceeds fleet capacity "
        "K*D0");

  std::mt19937_64 rng(seed);
  GridPoint depot{uniform_int(rng, 0, grid_size), uniform_int(rng, 0, grid_size)};
  std::vector<CvrpItem> items(n_items);
  for (CvrpItem& it : items) {
    it.pos.x = uniform_int(rng, 0, grid_size);
    it.pos.y = uniform_int(rng, 0, grid_size);
    it.demand = 1;
  }
  if (!rule.is_unit()) {
    // Coordinates stay fixed; demands are re-drawn until fleet-feasible.
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw std::invalid_argument(
            "could not draw a fleet-feasible demand vector");
      std::int64_t total = 0;
      for (CvrpItem& it : items) {
        it.demand = uniform_int(rng, lo, hi);
        total += it.demand;
      }
      if (total <= fleet) break;
    }
  }
  return CvrpInstance(depot, std::move(items), capacity, n_vehicles);
}

SscflpInstance generate_sscflp(std::uint64_t seed, int n_customers,
                               int n_facilities, int grid_size,
                               IntRange capacity_range, IntRange demand_range,
                               IntRange open_cost_range) {
  if (n_customers < 1 || n_facilities < 1 || grid_size < 1)
    throw std::invalid_argument("bad size parameters");
  auto check_range = [](IntRange r, const char* what, int min_lo) {
    if (r.lo < min_lo || r.hi < r.lo)
      throw std::invalid_argument(std::string("bad range for ") + what);
  };
  check_range(capacity_range, "capacity", 1);
  check_range(demand_range, "demand", 1);
  check_range(open_cost_range, "open cost", 0);
  if (demand_range.lo > capacity_range.hi)
    throw std::invalid_argument("no facility can fit any customer");
  if (static_cast<std::int64_t>(n_customers) * demand_range.lo >
      static_cast<std::int64_t>(n_facilities) * capacity_range.hi)
    throw std::invalid_argument(
        "infeasible ranges: minimum demand exceeds maximum capacity");

  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<GridPoint> customer_pos(n_customers);
    std::vector<int> demands(n_customers);
    for (int u = 0; u < n_customers; ++u) {
      customer_pos[u] = {uniform_int(rng, 0, grid_size),
                         uniform_int(rng, 0, grid_size)};
      demands[u] = uniform_int(rng, demand_range.lo, demand_range.hi);
    }
    std::vector<GridPoint> facility_pos(n_facilities);
    std::vector<SscflpFacility> facilities(n_facilities);
    for (int f = 0; f < n_facilities; ++f) {
      facility_pos[f] = {uniform_int(rng, 0, grid_size),
                         uniform_int(rng, 0, grid_size)};
      facilities[f].capacity =
          uniform_int(rng, capacity_range.lo, capacity_range.hi);
      facilities[f].open_cost =
          uniform_int(rng, open_cost_range.lo, open_cost_range.hi);
    }
    std::int64_t total_demand = 0;
    int max_demand = 0;
    for (int d : demands) {
      total_demand += d;
      max_demand = std::max(max_demand, d);
    }
    std::int64_t total_capacity = 0;
    int max_capacity = 0;
    for (const SscflpFacility& f : facilities) {
      total_capacity += f.capacity;
      max_capacity = std::max(max_capacity, f.capacity);
    }
    if (total_capacity < total_demand || max_capacity < max_demand) continue;

    std::vector<std::vector<std::int64_t>> cost(n_facilities);
    for (int f = 0; f < n_facilities; ++f) {
      cost[f].resize(n_customers);
      for (int u = 0; u < n_customers; ++u)
        cost[f][u] = ceil_l2(facility_pos[f], customer_pos[u]);
    }
    return SscflpInstance(std::move(demands), std::move(facilities),
                          std::move(cost));
  }
  throw std::invalid_argument("could not draw a feasible instance");
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

const json& require_field(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end())
    throw std::runtime_error(std::string("instance file missing field \"") +
                             field + "\"");
  return *it;
}

int require_int(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_number_integer())
    throw std::runtime_error(std::string("field \"") + field +
                             "\" must be an integer");
  return v.get<int>();
}

}  // namespace

void save_instance(const CvrpInstance& inst, const std::string& path) {
  json items = json::array();
  for (int u = 0; u < inst.n_items(); ++u) {
    const CvrpItem& it = inst.item(u);
    items.push_back({it.pos.x, it.pos.y, it.demand});
  }
  json j{{"type", "cvrp"},
         {"depot", {inst.depot().x, inst.depot().y}},
         {"capacity", inst.capacity()},
         {"vehicles", inst.n_vehicles()},
         {"items", items}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << j.dump(2) << "\n";
}

void save_instance(const SscflpInstance& inst, const std::string& path) {
  json customers = json::array();
  for (int u = 0; u < inst.n_customers(); ++u)
    customers.push_back(inst.demand(u));
  json facilities = json::array();
  json cost = json::array();
  for (int f = 0; f < inst.n_facilities(); ++f) {
    facilities.push_back(
        {inst.facility(f).capacity, inst.facility(f).open_cost});
    json row = json::array();
    for (int u = 0; u < inst.n_customers(); ++u)
      row.push_back(inst.service_cost(f, u));
    cost.push_back(row);
  }
  json j{{"type", "sscflp"},
         {"customers", customers},
         {"facilities", facilities},
         {"service_cost", cost}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << j.dump(2) << "\n";
}

std::string instance_file_type(const std::string& path) {
  const json j = parse_file(path);
  const json& t = require_field(j, "type");
  if (!t.is_string()) throw std::runtime_error("field \"type\" must be a string");
  return t.get<std::string>();
}

CvrpInstance load_cvrp_instance(const std::string& path) {
  const json j = parse_file(path);
  if (require_field(j, "type") != "cvrp")
    throw std::runtime_error("not a cvrp instance file: " + path);
  const json& depot = require_field(j, "depot");
  if (!depot.is_array() || depot.size() != 2 || !depot[0].is_number_integer() ||
      !depot[1].is_number_integer())
    throw std::runtime_error("field \"depot\" must be [x, y] integers");
  const int capacity = require_int(j, "capacity");
  const int vehicles = require_int(j, "vehicles");
  const json& items = require_field(j, "items");
  if (!items.is_array())
    throw std::runtime_error("field \"items\" must be an array");
  std::vector<CvrpItem> parsed;
  parsed.reserve(items.size());
  for (const json& it : items) {
    if (!it.is_array() || it.size() != 3 || !it[0].is_number_integer() ||
        !it[1].is_number_integer() || !it[2].is_number_integer())
      throw std::runtime_error(
          "each entry of \"items\" must be [x, y, demand] integers");
    parsed.push_back({{it[0].get<int>(), it[1].get<int>()}, it[2].get<int>()});
  }
  return CvrpInstance({depot[0].get<int>(), depot[1].get<int>()},
                      std::move(parsed), capacity, vehicles);
}

SscflpInstance load_sscflp_instance(const std::string& path) {
  const json j = parse_file(path);
  if (require_field(j, "type") != "sscflp")
    throw std::runtime_error("not an sscflp instance file: " + path);
  const json& customers = require_field(j, "customers");
  const json& facilities = require_field(j, "facilities");
  const json& cost = require_field(j, "service_cost");
  if (!customers.is_array() || !facilities.is_array() || !cost.is_array())
    throw std::runtime_error("malformed sscflp instance file");
  std::vector<int> demands;
  for (const json& d : customers) {
    if (!d.is_number_integer())
      throw std::runtime_error("field \"customers\" must hold integer demands");
    demands.push_back(d.get<int>());
  }
  std::vector<SscflpFacility> parsed_fac;
  for (const json& f : facilities) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() ||
        !f[1].is_number_integer())
      throw std::runtime_error(
          "each entry of \"facilities\" must be [capacity, open_cost]");
    parsed_fac.push_back({f[0].get<int>(), f[1].get<std::int64_t>()});
  }
  std::vector<std::vector<std::int64_t>> parsed_cost;
  for (const json& row : cost) {
    if (!row.is_array())
      throw std::runtime_error("field \"service_cost\" must be a matrix");
    std::vector<std::int64_t> r;
    for (const json& c : row) {
      if (!c.is_number_integer())
        throw std::runtime_error("service costs must be integers");
      r.push_back(c.get<std::int64_t>());
    }
    parsed_cost.push_back(std::move(r));
  }
  return SscflpInstance(std::move(demands), std::move(parsed_fac),
                        std::move(parsed_cost));
}

}  // namespace cgdoi
