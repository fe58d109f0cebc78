#include "cgdoi/column_pool.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace cgdoi {

bool Column::covers_item(int u) const {
  return std::binary_search(covers.begin(), covers.end(), u);
}

std::int64_t route_cost(const CvrpInstance& inst,
                        const std::vector<int>& visit_order) {
  std::set<int> seen;
  for (int u : visit_order)
    if (!seen.insert(u).second)
      throw std::invalid_argument("route visits an item twice");
  if (visit_order.empty()) return 0;
  std::int64_t c = inst.distance(kStartDepot, visit_order.front());
  for (size_t i = 1; i < visit_order.size(); ++i)
    c += inst.distance(visit_order[i - 1], visit_order[i]);
  c += inst.distance(visit_order.back(), kEndDepot);
  return c;
}

Column make_route(const CvrpInstance& inst, std::vector<int> visit_order) {
  Column col;
  col.kind = ColumnKind::Route;
  std::int64_t load = 0;
  for (int u : visit_order) {
    if (u < 0 || u >= inst.n_items())
      throw std::invalid_argument("route visits an unknown item");
    load += inst.demand(u);
  }
  col.cost = route_cost(inst, visit_order);  // also rejects duplicates
  if (load > inst.capacity())
    throw std::invalid_argument("route load exceeds vehicle capacity");
  col.covers = visit_order;
  std::sort(col.covers.begin(), col.covers.end());
  col.visit_order = std::move(visit_order);
  return col;
}

Column make_assignment(const SscflpInstance& inst, int facility,
                       std::vector<int> customers) {
  if (facility < 0 || facility >= inst.n_facilities())
    throw std::invalid_argument("unknown facility");
  std::set<int> seen;
  std::int64_t load = 0;
  Column col;
  col.kind = ColumnKind::FacilityAssignment;
  col.facility = facility;
  col.open_cost_only = inst.facility(facility).open_cost;
  col.cost = col.open_cost_only;
  for (int u : customers) {
    if (u < 0 || u >= inst.n_customers())
      throw std::invalid_argument("unknown customer");
    if (!seen.insert(u).second)
      throw std::invalid_argument("customer assigned twice");
    load += inst.demand(u);
    col.cost += inst.service_cost(facility, u);
  }
  if (load > inst.facility(facility).capacity)
    throw std::invalid_argument("assignment exceeds facility capacity");
  col.covers = std::move(customers);
  std::sort(col.covers.begin(), col.covers.end());
  return col;
}

Column make_artificial(int item, std::int64_t big_m) {
  Column col;
  col.kind = ColumnKind::Artificial;
  col.covers = {item};
  col.cost = big_m;
  return col;
}

namespace {

template <typename Inst>
std::vector<int> profile_impl(const Inst& inst, const Column& col) {
  const auto& levels = inst.demand_set();
  std::vector<int> prof(levels.size(), 0);
  if (col.kind == ColumnKind::Artificial) return prof;
  for (size_t i = 0; i < levels.size(); ++i)
    for (int u : col.covers)
      if (inst.demand(u) >= levels[i]) ++prof[i];
  return prof;
}

}  // namespace

std::vector<int> demand_profile(const CvrpInstance& inst, const Column& col) {
  return profile_impl(inst, col);
}

std::vector<int> demand_profile(const SscflpInstance& inst,
                                const Column& col) {
  return profile_impl(inst, col);
}

std::int64_t detour_cost(const CvrpInstance& inst, const Column& col, int u) {
  if (col.kind != ColumnKind::Route)
    throw std::invalid_argument("detour cost needs a route column");
  std::int64_t best = inst.distance(u, kStartDepot);
  best = std::min(best, inst.distance(u, kEndDepot));
  for (int v : col.covers) best = std::min(best, inst.distance(u, v));
  return 2 * best;
}

std::int64_t detour_cost(const SscflpInstance& inst, const Column& col,
                         int u) {
  if (col.kind != ColumnKind::FacilityAssignment)
    throw std::invalid_argument("detour cost needs an assignment column");
  return inst.service_cost(col.facility, u);
}

std::vector<std::pair<int, int>> smooth_swap_set(const CvrpInstance& inst) {
  std::vector<std::pair<int, int>> s;
  for (int u = 0; u < inst.n_items(); ++u)
    for (int v = 0; v < inst.n_items(); ++v)
      if (u != v && inst.demand(u) >= inst.demand(v)) s.emplace_back(u, v);
  return s;
}

double smooth_rho(const CvrpInstance& inst, int u, int v, double epsilon) {
  if (u == v || inst.demand(u) < inst.demand(v))
    throw std::invalid_argument("not a swap pair");
  return 2.0 * static_cast<double>(inst.distance(u, v)) + epsilon;
}

namespace {

// Dedup key: routes canonicalized up to reversal; assignments by facility
// plus covered set; artificials by item.
std::vector<int> dedup_key(const Column& col) {
  std::vector<int> key;
  switch (col.kind) {
    case ColumnKind::Route: {
      key.push_back(0);
      std::vector<int> rev(col.visit_order.rbegin(), col.visit_order.rend());
      const auto& canon = rev < col.visit_order ? rev : col.visit_order;
      key.insert(key.end(), canon.begin(), canon.end());
      break;
    }
    case ColumnKind::Artificial:
      key.push_back(1);
      key.push_back(col.covers.at(0));
      break;
    case ColumnKind::FacilityAssignment:
      key.push_back(2);
      key.push_back(col.facility);
      key.insert(key.end(), col.covers.begin(), col.covers.end());
      break;
  }
  return key;
}

void check_structure(const Column& col) {
  if (col.kind == ColumnKind::Artificial) {
    if (col.covers.size() != 1 || !col.visit_order.empty())
      throw std::invalid_argument("artificial column must cover one item");
    return;
  }
  if (!std::is_sorted(col.covers.begin(), col.covers.end()))
    throw std::invalid_argument("covers must be sorted");
  if (std::adjacent_find(col.covers.begin(), col.covers.end()) !=
      col.covers.end())
    throw std::invalid_argument("covers has repeats");
  if (col.kind == ColumnKind::Route) {
    std::vector<int> check = col.visit_order;
    std::sort(check.begin(), check.end());
    if (check != col.covers)
      throw std::invalid_argument("covers does not match visit order");
  } else if (col.facility < 0) {
    throw std::invalid_argument("assignment without facility");
  }
}

}  // namespace

ColumnPool::AddResult ColumnPool::add(const Column& col) {
  check_structure(col);
  auto key = dedup_key(col);
  auto it = index_.find(key);
  if (it != index_.end()) return {it->second, false};
  const int id = static_cast<int>(cols_.size());
  cols_.push_back(col);
  index_.emplace(std::move(key), id);
  return {id, true};
}

void ColumnPool::dump_jsonl(std::ostream& out) const {
  for (int id = 0; id < size(); ++id) {
    const Column& c = cols_[id];
    nlohmann::json j;
    j["id"] = id;
    j["cost"] = c.cost;
    switch (c.kind) {
      case ColumnKind::Route:
        j["kind"] = "route";
        j["visit_order"] = c.visit_order;
        break;
      case ColumnKind::FacilityAssignment:
        j["kind"] = "facility_assignment";
        j["facility"] = c.facility;
        j["covers"] = c.covers;
        j["open_cost"] = c.open_cost_only;
        break;
      case ColumnKind::Artificial:
        j["kind"] = "artificial";
        j["item"] = c.covers.at(0);
        break;
    }
    out << j.dump() << "\n";
  }
}

}  // namespace cgdoi
