#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cgdoi/column_pool.hpp"
#include "cgdoi/instance.hpp"
#include "cgdoi/pricing.hpp"

using namespace cgdoi;

namespace {

DualSolution cvrp_duals(std::vector<double> pi_u, double pi_0) {
  DualSolution d;
  d.pi_u = std::move(pi_u);
  d.pi_0 = pi_0;
  return d;
}

DualSolution random_cvrp_duals(std::mt19937_64& rng, int n, int grid) {
  std::uniform_real_distribution<double> item(0.0, 3.0 * grid);
  std::uniform_real_distribution<double> fleet(0.0, grid);
  DualSolution d;
  for (int u = 0; u < n; ++u) d.pi_u.push_back(item(rng));
  d.pi_0 = fleet(rng);
  return d;
}

DualSolution random_sscflp_duals(std::mt19937_64& rng, int n_cust, int n_fac,
                                 int grid) {
  std::uniform_real_distribution<double> cust(0.0, 3.0 * grid);
  std::uniform_real_distribution<double> fac(0.0, grid);
  DualSolution d;
  for (int u = 0; u < n_cust; ++u) d.pi_u.push_back(cust(rng));
  for (int f = 0; f < n_fac; ++f) d.pi_f.push_back(fac(rng));
  return d;
}

}  // namespace

TEST_CASE("route reduced cost recomputation") {
  CvrpInstance inst({0, 0}, {{{3, 4}, 1}, {{6, 8}, 1}}, 2, 2);
  auto col = make_route(inst, {0});
  auto d = cvrp_duals({7.0, 1.0}, 2.5);
  // cost 10, plus fleet dual, minus the covered item's dual
  CHECK(reduced_cost(inst, col, d) == doctest::Approx(10.0 + 2.5 - 7.0));

  auto both = make_route(inst, {0, 1});
  CHECK(reduced_cost(inst, both, d) ==
        doctest::Approx(static_cast<double>(both.cost) + 2.5 - 8.0));

  auto empty = make_route(inst, {});
  CHECK(reduced_cost(inst, empty, d) == doctest::Approx(2.5));

  CHECK_THROWS_AS(reduced_cost(inst, make_artificial(0, 100), d),
                  std::invalid_argument);
  DualSolution short_duals = cvrp_duals({1.0}, 0.0);
  CHECK_THROWS_AS(reduced_cost(inst, col, short_duals), std::invalid_argument);
}

TEST_CASE("zero duals give the empty route") {
  auto inst = generate_cvrp(3, 6, 50, 3, 3, DemandRule::unit());
  auto d = cvrp_duals(std::vector<double>(6, 0.0), 0.0);
  for (bool dom : {true, false}) {
    PricingOptions opt;
    opt.use_dominance = dom;
    auto res = price_cvrp(inst, d, opt);
    REQUIRE(res.column.has_value());
    CHECK(res.column->visit_order.empty());
    CHECK(res.reduced_cost == 0.0);
  }
  auto bf = price_cvrp_bruteforce(inst, d);
  CHECK(bf.column->visit_order.empty());
  CHECK(bf.reduced_cost == 0.0);
}

TEST_CASE("positive fleet dual alone still yields the empty route") {
  // Every real route costs at least its legs, so with zero item duals the
  // empty candidate is strictly cheapest.
  auto inst = generate_cvrp(4, 5, 50, 3, 2, DemandRule::unit());
  auto d = cvrp_duals(std::vector<double>(5, 0.0), 7.25);
  auto res = price_cvrp(inst, d);
  CHECK(res.column->visit_order.empty());
  CHECK(res.reduced_cost == doctest::Approx(7.25));
}

TEST_CASE("single rewarding item attracts a one-stop route") {
  CvrpInstance inst({0, 0}, {{{3, 4}, 1}, {{30, 40}, 1}}, 1, 2);
  auto d = cvrp_duals({25.0, 0.0}, 0.0);
  auto res = price_cvrp(inst, d);
  REQUIRE(res.column.has_value());
  CHECK(res.column->visit_order == std::vector<int>{0});
  CHECK(res.reduced_cost == doctest::Approx(10.0 - 25.0));
  auto bf = price_cvrp_bruteforce(inst, d);
  CHECK(bf.column->visit_order == std::vector<int>{0});
  CHECK(bf.reduced_cost == doctest::Approx(res.reduced_cost));
}

TEST_CASE("exact ties prefer fewer items then lexicographic order") {
  // Four items on a symmetric cross; capacity 2 makes adjacent pairs the
  // optimum, and all four adjacent pairs tie exactly.
  CvrpInstance inst({0, 0},
                    {{{10, 0}, 1}, {{0, 10}, 1}, {{-10, 0}, 1}, {{0, -10}, 1}},
                    2, 2);
  auto d = cvrp_duals(std::vector<double>(4, 30.0), 0.0);
  auto res = price_cvrp(inst, d);
  REQUIRE(res.column.has_value());
  CHECK(res.column->visit_order == std::vector<int>{0, 1});
  CHECK(res.reduced_cost == doctest::Approx(10 + 15 + 10 - 60.0));
  auto bf = price_cvrp_bruteforce(inst, d);
  CHECK(bf.column->visit_order == std::vector<int>{0, 1});
  CHECK(bf.reduced_cost == doctest::Approx(res.reduced_cost));
}

TEST_CASE("labeling matches enumeration on random duals") {
  std::mt19937_64 rng(991);
  for (int seed = 1; seed <= 10; ++seed) {
    int n = 4 + (seed % 5);
    DemandRule rule = (seed % 2) ? DemandRule::unit() : DemandRule::uniform(1, 3);
    auto inst = generate_cvrp(seed, n, 50, 4, n, rule);
    for (int trial = 0; trial < 50; ++trial) {
      auto d = random_cvrp_duals(rng, n, 50);
      auto fast = price_cvrp(inst, d);
      auto slow = price_cvrp_bruteforce(inst, d);
      CHECK(std::abs(fast.reduced_cost - slow.reduced_cost) <= 1e-9);
      // reported value always recomputes exactly from the returned column
      CHECK(fast.reduced_cost == reduced_cost(inst, *fast.column, d));
      CHECK(slow.reduced_cost == reduced_cost(inst, *slow.column, d));
    }
  }
}

TEST_CASE("dominance never changes the optimal value") {
  std::mt19937_64 rng(4242);
  for (int seed = 21; seed <= 25; ++seed) {
    int n = 5 + (seed % 4);
    auto inst = generate_cvrp(seed, n, 60, 4, n, DemandRule::uniform(1, 4));
    for (int trial = 0; trial < 20; ++trial) {
      auto d = random_cvrp_duals(rng, n, 60);
      PricingOptions with, without;
      with.use_dominance = true;
      without.use_dominance = false;
      auto a = price_cvrp(inst, d, with);
      auto b = price_cvrp(inst, d, without);
      CHECK(std::abs(a.reduced_cost - b.reduced_cost) <= 1e-9);
      CHECK(a.labels_expanded <= b.labels_expanded);
    }
  }
}

TEST_CASE("raising one item dual lowers the minimum by at most that amount") {
  auto inst = generate_cvrp(7, 7, 50, 3, 3, DemandRule::unit());
  std::mt19937_64 rng(55);
  auto d = random_cvrp_duals(rng, 7, 50);
  double base = price_cvrp(inst, d).reduced_cost;
  for (int u = 0; u < 7; ++u) {
    for (double delta : {0.5, 5.0, 40.0}) {
      auto bumped = d;
      bumped.pi_u[u] += delta;
      double after = price_cvrp(inst, bumped).reduced_cost;
      CHECK(after <= base + 1e-9);
      CHECK(after >= base - delta - 1e-9);
    }
  }
}

TEST_CASE("optimal value certifies against sampled routes") {
  // Beyond the enumeration bound: spot-check optimality against many random
  // feasible routes.
  auto inst = generate_cvrp(11, 14, 80, 4, 11, DemandRule::uniform(1, 3));
  std::mt19937_64 rng(77);
  auto d = random_cvrp_duals(rng, 14, 80);
  auto res = price_cvrp(inst, d);
  std::vector<int> ids(14);
  for (int u = 0; u < 14; ++u) ids[u] = u;
  for (int trial = 0; trial < 2000; ++trial) {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> seq;
    int load = 0;
    for (int u : ids) {
      if (load + inst.demand(u) > inst.capacity()) break;
      seq.push_back(u);
      load += inst.demand(u);
    }
    auto col = make_route(inst, seq);
    CHECK(reduced_cost(inst, col, d) >= res.reduced_cost - 1e-9);
  }
  CHECK(res.reduced_cost <= d.pi_0 + 1e-12);
}

TEST_CASE("labeling is deterministic across repeated calls") {
  auto inst = generate_cvrp(13, 10, 60, 3, 4, DemandRule::unit());
  std::mt19937_64 rng(9001);
  auto d = random_cvrp_duals(rng, 10, 60);
  auto a = price_cvrp(inst, d);
  auto b = price_cvrp(inst, d);
  CHECK(a.reduced_cost == b.reduced_cost);
  CHECK(a.column->visit_order == b.column->visit_order);
  CHECK(a.labels_expanded == b.labels_expanded);
}

TEST_CASE("enumeration refuses oversized instances") {
  auto inst = generate_cvrp(5, 11, 50, 3, 5, DemandRule::unit());
  std::mt19937_64 rng(31);
  auto d = random_cvrp_duals(rng, 11, 50);
  CHECK_THROWS_AS(price_cvrp_bruteforce(inst, d), std::invalid_argument);
  PricingOptions wide;
  wide.max_bruteforce_items = 11;
  CHECK_NOTHROW(price_cvrp_bruteforce(inst, d, wide));
}

TEST_CASE("assignment reduced cost recomputation") {
  SscflpInstance inst({1, 1, 1}, {{3, 10}}, {{2, 3, 4}});
  auto col = make_assignment(inst, 0, {0, 2});
  DualSolution d;
  d.pi_u = {5.0, 1.0, 2.0};
  d.pi_f = {0.5};
  // cost 10+2+4, plus facility dual, minus covered customer duals
  CHECK(reduced_cost(inst, col, d) == doctest::Approx(16.0 + 0.5 - 7.0));
  CHECK_THROWS_AS(reduced_cost(inst, make_artificial(0, 10), d),
                  std::invalid_argument);
}

TEST_CASE("zero duals price to the cheapest empty facility") {
  SscflpInstance inst({2, 1}, {{3, 12}, {4, 7}}, {{5, 6}, {8, 9}});
  DualSolution d;
  d.pi_u = {0.0, 0.0};
  d.pi_f = {0.0, 0.0};
  auto res = price_sscflp(inst, d);
  REQUIRE(res.column.has_value());
  CHECK(res.column->facility == 1);
  CHECK(res.column->covers.empty());
  CHECK(res.reduced_cost == doctest::Approx(7.0));
  auto bf = price_sscflp_bruteforce(inst, d);
  CHECK(bf.reduced_cost == doctest::Approx(7.0));
}

TEST_CASE("knapsack pricing picks rewarding customers under capacity") {
  SscflpInstance inst({1, 1, 1}, {{3, 10}}, {{2, 3, 4}});
  DualSolution d;
  d.pi_u = {5.0, 5.0, 5.0};
  d.pi_f = {0.0};
  auto res = price_sscflp(inst, d);
  CHECK(res.column->covers == std::vector<int>{0, 1, 2});
  CHECK(res.reduced_cost == doctest::Approx(10.0 - 3.0 - 2.0 - 1.0));

  // Second facility only restores instance feasibility; its duals make it
  // unattractive, so the binding knapsack at facility 0 decides.
  SscflpInstance tight({1, 1, 1}, {{2, 10}, {5, 1000}},
                       {{2, 3, 4}, {50, 50, 50}});
  DualSolution d2 = d;
  d2.pi_f = {0.0, 0.0};
  auto res2 = price_sscflp(tight, d2);
  CHECK(res2.column->facility == 0);
  CHECK(res2.column->covers == std::vector<int>{0, 1});
  CHECK(res2.reduced_cost == doctest::Approx(10.0 - 3.0 - 2.0));
}

TEST_CASE("knapsack pricing matches subset enumeration on random duals") {
  std::mt19937_64 rng(1717);
  for (int seed = 1; seed <= 10; ++seed) {
    int nc = 4 + (seed % 5);
    int nf = 1 + (seed % 3);
    auto inst = generate_sscflp(seed, nc, nf, 50, {40, 60}, {1, 4}, {10, 60});
    for (int trial = 0; trial < 50; ++trial) {
      auto d = random_sscflp_duals(rng, nc, nf, 50);
      auto fast = price_sscflp(inst, d);
      auto slow = price_sscflp_bruteforce(inst, d);
      CHECK(std::abs(fast.reduced_cost - slow.reduced_cost) <= 1e-9);
      CHECK(fast.reduced_cost == reduced_cost(inst, *fast.column, d));
    }
  }
}

TEST_CASE("subset enumeration refuses oversized instances") {
  auto inst = generate_sscflp(2, 11, 2, 50, {8, 14}, {1, 3}, {5, 40});
  DualSolution d;
  d.pi_u.assign(11, 1.0);
  d.pi_f.assign(2, 0.0);
  CHECK_THROWS_AS(price_sscflp_bruteforce(inst, d), std::invalid_argument);
  CHECK_NOTHROW(price_sscflp(inst, d));
}
