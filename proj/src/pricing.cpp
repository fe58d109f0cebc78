#include "cgdoi/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cgdoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cvrp_duals(const CvrpInstance& inst, const DualSolution& duals) {
  if (static_cast<int>(duals.pi_u.size()) != inst.n_items()) {
    throw std::invalid_argument("item dual vector has size " +
                                std::to_string(duals.pi_u.size()) +
                                ", expected " + std::to_string(inst.n_items()));
  }
  if (!std::isfinite(duals.pi_0)) {
    throw std::invalid_argument("fleet dual is not finite");
  }
  for (double p : duals.pi_u) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("item dual is not finite");
    }
  }
}

void check_sscflp_duals(const SscflpInstance& inst, const DualSolution& duals) {
  if (static_cast<int>(duals.pi_u.size()) != inst.n_customers()) {
    throw std::invalid_argument("customer dual vector has size " +
                                std::to_string(duals.pi_u.size()) +
                                ", expected " +
                                std::to_string(inst.n_customers()));
  }
  if (static_cast<int>(duals.pi_f.size()) != inst.n_facilities()) {
    throw std::invalid_argument("facility dual vector has size " +
                                std::to_string(duals.pi_f.size()) +
                                ", expected " +
                                std::to_string(inst.n_facilities()));
  }
  for (double p : duals.pi_u) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("customer dual is not finite");
    }
  }
  for (double p : duals.pi_f) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("facility dual is not finite");
    }
  }
}

// Lower bounds on the cost-to-go of a partial route: cheapest walk from item
// u to the end depot whose extra capacity use is at most r, where stepping
// onto item v costs dist(u,v) - pi_v and finishing costs dist(u,end) + pi_0.
// Walks may repeat items, so the bound relaxes elementary completions.
// Immediate backtracking (u -> v -> u) is excluded by keeping, per state, the
// best value together with its first step and the best value over walks with
// a different first step.
class CompletionBound {
 public:
  CompletionBound(const CvrpInstance& inst, const DualSolution& duals)
      : n_(inst.n_items()), cap_(inst.capacity()) {
    best_.assign(static_cast<size_t>(n_) * (cap_ + 1), kInf);
    second_.assign(best_.size(), kInf);
    first_.assign(best_.size(), kEndDepot);
    for (int r = 0; r <= cap_; ++r) {
      for (int u = 0; u < n_; ++u) {
        double b1 = static_cast<double>(inst.distance(u, kEndDepot)) +
                    duals.pi_0;
        int f1 = kEndDepot;
        double b2 = kInf;
        for (int v = 0; v < n_; ++v) {
          if (v == u || inst.demand(v) > r) continue;
          double tail = at(v, r - inst.demand(v), u);
          if (tail == kInf) continue;
          double val = static_cast<double>(inst.distance(u, v)) -
                       duals.pi_u[v] + tail;
          if (val < b1) {
            b2 = b1;
            b1 = val;
            f1 = v;
          } else if (val < b2) {
            b2 = val;
          }
        }
        size_t k = idx(u, r);
        best_[k] = b1;
        second_[k] = b2;
        first_[k] = f1;
      }
    }
  }

  // Bound from item u with spare capacity r, for a path that arrived via
  // `prev` (the walk may not step straight back onto prev).
  double at(int u, int r, int prev) const {
    size_t k = idx(u, r);
    return first_[k] == prev ? second_[k] : best_[k];
  }

 private:
  size_t idx(int u, int r) const {
    return static_cast<size_t>(u) * (cap_ + 1) + r;
  }

  int n_ = 0;
  int cap_ = 0;
  std::vector<double> best_;
  std::vector<double> second_;
  std::vector<int> first_;
};

struct Label {
  double cost = 0.0;
  std::uint64_t mask = 0;
  int node = kStartDepot;
  int load = 0;
  int parent = -1;
  bool alive = true;
};

// Keeps, per node, only labels not covered by a cheaper one with a subset of
// the visited items. Returns false if the candidate is covered; otherwise
// drops every stored label the candidate covers. Ties keep the earlier label.
bool admit_label(std::vector<int>& stored, std::vector<Label>& arena,
                 std::uint64_t mask, double cost) {
  size_t i = 0;
  while (i < stored.size()) {
    Label& e = arena[stored[i]];
    if (!e.alive) {
      stored[i] = stored.back();
      stored.pop_back();
      continue;
    }
    if ((e.mask & ~mask) == 0 && e.cost <= cost) return false;
    if ((mask & ~e.mask) == 0 && cost <= e.cost) {
      e.alive = false;
      stored[i] = stored.back();
      stored.pop_back();
      continue;
    }
    ++i;
  }
  return true;
}

// True if (a_count, a_seq) should replace (b_count, b_seq) at an exact value
// tie: fewer items first, then lexicographically smaller visit order.
bool tie_prefers(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double bound_root(const CvrpInstance& inst, const DualSolution& duals,
                  const CompletionBound& bound) {
  // Cheapest completion of the root: either stop at once (the empty route)
  // or step onto some first item.
  double best = duals.pi_0;
  for (int v = 0; v < inst.n_items(); ++v) {
    if (inst.demand(v) > inst.capacity()) continue;
    double val = static_cast<double>(inst.distance(kStartDepot, v)) -
                 duals.pi_u[v] +
                 bound.at(v, inst.capacity() - inst.demand(v), kStartDepot);
    best = std::min(best, val);
  }
  return best;
}

PricingResult finish_cvrp(const CvrpInstance& inst, const DualSolution& duals,
                          bool have_route, const std::vector<int>& route,
                          double route_value, long expanded) {
  PricingResult res;
  res.labels_expanded = expanded;
  // The empty route wins only when strictly cheaper than every real route.
  if (have_route && route_value <= duals.pi_0) {
    res.column = make_route(inst, route);
  } else {
    res.column = make_route(inst, {});
  }
  res.reduced_cost = reduced_cost(inst, *res.column, duals);
  return res;
}

}  // namespace

double reduced_cost(const CvrpInstance& inst, const Column& col,
                    const DualSolution& duals) {
  if (col.kind == ColumnKind::Artificial) {
    throw std::invalid_argument("artificial columns have no reduced cost");
  }
  if (col.kind != ColumnKind::Route) {
    throw std::invalid_argument("expected a route column");
  }
  check_cvrp_duals(inst, duals);
  double rc = static_cast<double>(col.cost) + duals.pi_0;
  for (int u : col.covers) {
    if (u < 0 || u >= inst.n_items()) {
      throw std::invalid_argument("column covers unknown item " +
                                  std::to_string(u));
    }
    rc -= duals.pi_u[u];
  }
  return rc;
}

double reduced_cost(const SscflpInstance& inst, const Column& col,
                    const DualSolution& duals) {
  if (col.kind == ColumnKind::Artificial) {
    throw std::invalid_argument("artificial columns have no reduced cost");
  }
  if (col.kind != ColumnKind::FacilityAssignment) {
    throw std::invalid_argument("expected a facility assignment column");
  }
  check_sscflp_duals(inst, duals);
  if (col.facility < 0 || col.facility >= inst.n_facilities()) {
    throw std::invalid_argument("column uses unknown facility " +
                                std::to_string(col.facility));
  }
  double rc = static_cast<double>(col.cost) + duals.pi_f[col.facility];
  for (int u : col.covers) {
    if (u < 0 || u >= inst.n_customers()) {
      throw std::invalid_argument("column covers unknown customer " +
                                  std::to_string(u));
    }
    rc -= duals.pi_u[u];
  }
  return rc;
}

PricingResult price_cvrp(const CvrpInstance& inst, const DualSolution& duals,
                         const PricingOptions& options) {
  check_cvrp_duals(inst, duals);
  int n = inst.n_items();
  if (n > 64) {
    throw std::invalid_argument(
        "more than 64 items exceeds the visited-set word");
  }
  int cap = inst.capacity();
  CompletionBound bound(inst, duals);

  std::vector<Label> arena;
  arena.push_back(Label{});  // start-depot root: nothing visited, load 0
  // Min-heap on (bound-augmented cost, creation order); the id tiebreak makes
  // the pop order deterministic.
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  queue.emplace(bound_root(inst, duals, bound), 0);

  std::vector<std::vector<int>> stored(n);
  double best_value = duals.pi_0;  // value of the empty route
  bool have_route = false;
  double route_value = kInf;
  std::vector<int> route;
  std::vector<int> seq;
  long expanded = 0;

  while (!queue.empty()) {
    auto [f, id] = queue.top();
    queue.pop();
    if (!arena[id].alive) continue;
    if (f > best_value) break;
    ++expanded;
    Label lab = arena[id];  // copy: arena may grow below

    if (lab.node != kStartDepot) {
      double done = lab.cost +
                    static_cast<double>(inst.distance(lab.node, kEndDepot)) +
                    duals.pi_0;
      if (done <= route_value) {
        seq.clear();
        for (int k = id; arena[k].node != kStartDepot; k = arena[k].parent) {
          seq.push_back(arena[k].node);
        }
        std::reverse(seq.begin(), seq.end());
        if (done < route_value || !have_route || tie_prefers(seq, route)) {
          route = seq;
          route_value = done;
          have_route = true;
          best_value = std::min(best_value, done);
        }
      }
    }

    for (int v = 0; v < n; ++v) {
      if ((lab.mask >> v) & 1) continue;
      int load = lab.load + inst.demand(v);
      if (load > cap) continue;
      double cost = lab.cost +
                    static_cast<double>(inst.distance(lab.node, v)) -
                    duals.pi_u[v];
      double child_f = cost + bound.at(v, cap - load, lab.node);
      if (child_f > best_value) continue;  // keep ties alive
      std::uint64_t mask = lab.mask | (std::uint64_t{1} << v);
      if (options.use_dominance && !admit_label(stored[v], arena, mask, cost)) {
        continue;
      }
      int child = static_cast<int>(arena.size());
      arena.push_back(Label{cost, mask, v, load, id, true});
      if (options.use_dominance) stored[v].push_back(child);
      queue.emplace(child_f, child);
    }
  }
  return finish_cvrp(inst, duals, have_route, route, route_value, expanded);
}

namespace {

void enumerate_routes(const CvrpInstance& inst, const DualSolution& duals,
                      std::vector<int>& seq, std::uint64_t mask, int load,
                      double partial, bool& have_route, std::vector<int>& route,
                      double& route_value, long& count) {
  int n = inst.n_items();
  int last = seq.empty() ? kStartDepot : seq.back();
  for (int v = 0; v < n; ++v) {
    if ((mask >> v) & 1) continue;
    int next_load = load + inst.demand(v);
    if (next_load > inst.capacity()) continue;
    double next_partial = partial +
                          static_cast<double>(inst.distance(last, v)) -
                          duals.pi_u[v];
    seq.push_back(v);
    ++count;
    double done = next_partial +
                  static_cast<double>(inst.distance(v, kEndDepot)) +
                  duals.pi_0;
    if (done < route_value ||
        (done == route_value && have_route && tie_prefers(seq, route))) {
      route = seq;
      route_value = done;
      have_route = true;
    }
    enumerate_routes(inst, duals, seq, mask | (std::uint64_t{1} << v),
                     next_load, next_partial, have_route, route, route_value,
                     count);
    seq.pop_back();
  }
}

}  // namespace

PricingResult price_cvrp_bruteforce(const CvrpInstance& inst,
                                    const DualSolution& duals,
                                    const PricingOptions& options) {
  check_cvrp_duals(inst, duals);
  if (inst.n_items() > options.max_bruteforce_items) {
    throw std::invalid_argument(
        "instance too large for route enumeration: " +
        std::to_string(inst.n_items()) + " items, bound " +
        std::to_string(options.max_bruteforce_items));
  }
  bool have_route = false;
  std::vector<int> route;
  double route_value = kInf;
  std::vector<int> seq;
  long count = 0;
  enumerate_routes(inst, duals, seq, 0, 0, 0.0, have_route, route, route_value,
                   count);
  return finish_cvrp(inst, duals, have_route, route, route_value, count);
}

PricingResult price_sscflp(const SscflpInstance& inst,
                           const DualSolution& duals) {
  check_sscflp_duals(inst, duals);
  int n = inst.n_customers();
  PricingResult res;
  double best_value = kInf;
  int best_facility = -1;
  std::vector<int> best_covers;
  std::vector<double> dp;
  for (int f = 0; f < inst.n_facilities(); ++f) {
    int cap = inst.facility(f).capacity;
    // dp[u][w]: cheapest selection among the first u customers using at most
    // w capacity; selections only happen on strict improvement, so a changed
    // value exactly marks "customer u-1 taken" during backtracking.
    dp.assign(static_cast<size_t>(n + 1) * (cap + 1), 0.0);
    auto cell = [&](int u, int w) -> double& {
      return dp[static_cast<size_t>(u) * (cap + 1) + w];
    };
    for (int u = 1; u <= n; ++u) {
      int d = inst.demand(u - 1);
      double step = static_cast<double>(inst.service_cost(f, u - 1)) -
                    duals.pi_u[u - 1];
      for (int w = 0; w <= cap; ++w) {
        double keep = cell(u - 1, w);
        if (d <= w) {
          double take = cell(u - 1, w - d) + step;
          if (take < keep) keep = take;
        }
        cell(u, w) = keep;
      }
    }
    res.labels_expanded += static_cast<long>(n) * (cap + 1);
    double value = static_cast<double>(inst.facility(f).open_cost) +
                   duals.pi_f[f] + cell(n, cap);
    if (value < best_value) {
      best_value = value;
      best_facility = f;
      best_covers.clear();
      int w = cap;
      for (int u = n; u >= 1; --u) {
        if (cell(u, w) != cell(u - 1, w)) {
          best_covers.push_back(u - 1);
          w -= inst.demand(u - 1);
        }
      }
      std::reverse(best_covers.begin(), best_covers.end());
    }
  }
  res.column = make_assignment(inst, best_facility, best_covers);
  res.reduced_cost = reduced_cost(inst, *res.column, duals);
  return res;
}

PricingResult price_sscflp_bruteforce(const SscflpInstance& inst,
                                      const DualSolution& duals,
                                      const PricingOptions& options) {
  check_sscflp_duals(inst, duals);
  int n = inst.n_customers();
  if (n > options.max_bruteforce_items) {
    throw std::invalid_argument(
        "instance too large for subset enumeration: " + std::to_string(n) +
        " customers, bound " + std::to_string(options.max_bruteforce_items));
  }
  PricingResult res;
  double best_value = kInf;
  int best_facility = -1;
  std::uint64_t best_mask = 0;
  for (int f = 0; f < inst.n_facilities(); ++f) {
    int cap = inst.facility(f).capacity;
    double base = static_cast<double>(inst.facility(f).open_cost) +
                  duals.pi_f[f];
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      int load = 0;
      double value = base;
      for (int u = 0; u < n; ++u) {
        if ((mask >> u) & 1) {
          load += inst.demand(u);
          value += static_cast<double>(inst.service_cost(f, u)) -
                   duals.pi_u[u];
        }
      }
      ++res.labels_expanded;
      if (load <= cap && value < best_value) {
        best_value = value;
        best_facility = f;
        best_mask = mask;
      }
    }
  }
  std::vector<int> covers;
  for (int u = 0; u < n; ++u) {
    if ((best_mask >> u) & 1) covers.push_back(u);
  }
  res.column = make_assignment(inst, best_facility, covers);
  res.reduced_cost = reduced_cost(inst, *res.column, duals);
  return res;
}

}  // namespace cgdoi
