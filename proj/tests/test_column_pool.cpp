#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "cgdoi/column_pool.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cgdoi;

namespace {

CvrpInstance two_points() {
  // depot (0,0), items at (3,4) and (6,8)
  return CvrpInstance({0, 0}, {{{3, 4}, 1}, {{6, 8}, 1}}, 2, 2);
}

}  // namespace

TEST_CASE("route cost sums the legs") {
  auto inst = two_points();
  CHECK(route_cost(inst, {}) == 0);
  CHECK(route_cost(inst, {0}) == 10);
  CHECK(route_cost(inst, {0, 1}) == 5 + 5 + 10);
  CHECK(route_cost(inst, {1, 0}) == 10 + 5 + 5);
  CHECK_THROWS_AS(route_cost(inst, {0, 0}), std::invalid_argument);
}

TEST_CASE("make_route validates and fills covers") {
  auto inst = two_points();
  auto col = make_route(inst, {1, 0});
  CHECK(col.kind == ColumnKind::Route);
  CHECK(col.cost == 20);
  CHECK(col.visit_order == std::vector<int>{1, 0});
  CHECK(col.covers == std::vector<int>{0, 1});
  CHECK(col.covers_item(0));
  CHECK(col.covers_item(1));
  CHECK_FALSE(col.covers_item(2));

  CvrpInstance tight({0, 0}, {{{1, 0}, 2}, {{2, 0}, 2}}, 2, 2);
  CHECK_THROWS_AS(make_route(tight, {0, 1}),
                  std::invalid_argument);  // load 4 > capacity 2
  CHECK_THROWS_AS(make_route(inst, {0, 5}), std::invalid_argument);

  // Nonempty routes go out and come back: at least twice the nearest
  // depot-item distance.
  CHECK(col.cost >= 2 * 5);
}

TEST_CASE("demand profile counts items at or above each level") {
  CvrpInstance inst({0, 0},
                    {{{1, 0}, 1}, {{2, 0}, 1}, {{3, 0}, 3}, {{4, 0}, 2}}, 7,
                    2);
  CHECK(inst.demand_set() == std::vector<int>{1, 2, 3});
  auto col = make_route(inst, {0, 1, 2});  // covered demands 1, 1, 3
  CHECK(demand_profile(inst, col) == std::vector<int>{3, 1, 1});

  auto all = make_route(inst, {0, 1, 2, 3});
  auto prof = demand_profile(inst, all);
  CHECK(prof == std::vector<int>{4, 2, 1});
  for (size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] <= prof[i - 1]);
  CHECK(prof[0] == static_cast<int>(all.covers.size()));

  CHECK(demand_profile(inst, make_artificial(1, 1000)) ==
        std::vector<int>{0, 0, 0});
}

TEST_CASE("unit-demand profile is the route size") {
  auto gen = generate_cvrp(2, 7, 50, 10, 3);
  std::vector<int> order;
  for (int u = 0; u < 7; ++u) order.push_back(u);
  auto col = make_route(gen, order);
  CHECK(demand_profile(gen, col) == std::vector<int>{7});
}

TEST_CASE("detour cost doubles the nearest-anchor distance") {
  CvrpInstance inst({5, 5}, {{{0, 0}, 1}, {{10, 0}, 1}, {{2, 0}, 1}}, 2, 2);
  auto col = make_route(inst, {0, 1});
  CHECK(detour_cost(inst, col, 2) == 4);  // nearest anchor is (0,0)
  CHECK(detour_cost(inst, col, 0) == 0);  // covered
  CHECK(detour_cost(inst, col, 1) == 0);

  auto empty = make_route(inst, {});
  CvrpInstance d0({0, 0}, {{{3, 4}, 1}}, 1, 1);
  CHECK(detour_cost(d0, make_route(d0, {}), 0) == 10);  // only the depot

  for (int u = 0; u < inst.n_items(); ++u)
    CHECK(detour_cost(inst, empty, u) <= 2 * inst.distance(u, kStartDepot));

  CHECK_THROWS_AS(detour_cost(inst, make_artificial(0, 9), 1),
                  std::invalid_argument);
}

TEST_CASE("swap set orders pairs by demand") {
  CvrpInstance unit({0, 0}, {{{1, 0}, 1}, {{2, 0}, 1}, {{3, 0}, 1}}, 3, 1);
  CHECK(smooth_swap_set(unit).size() == 6);

  CvrpInstance skew({0, 0}, {{{1, 0}, 5}, {{2, 0}, 1}}, 6, 1);
  auto s = smooth_swap_set(skew);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == std::pair<int, int>{0, 1});

  CvrpInstance solo({0, 0}, {{{1, 0}, 1}}, 1, 1);
  CHECK(smooth_swap_set(solo).empty());
}

TEST_CASE("swap detour price is twice the distance plus the offset") {
  CvrpInstance inst({0, 0}, {{{0, 0}, 1}, {{3, 4}, 1}, {{3, 4}, 1}}, 3, 1);
  CHECK(smooth_rho(inst, 0, 1, 1e-4) == doctest::Approx(10.0001));
  CHECK(smooth_rho(inst, 1, 2, 1e-4) == doctest::Approx(1e-4));
  CHECK(smooth_rho(inst, 1, 0, 0.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(smooth_rho(inst, 1, 1, 1e-4), std::invalid_argument);

  CvrpInstance skew({0, 0}, {{{1, 0}, 5}, {{2, 0}, 1}}, 6, 1);
  CHECK_THROWS_AS(smooth_rho(skew, 1, 0, 1e-4), std::invalid_argument);
}

TEST_CASE("pool deduplicates, including reversed routes") {
  CvrpInstance inst({0, 0},
                    {{{1, 0}, 1}, {{2, 0}, 1}, {{3, 0}, 1}}, 3, 2);
  ColumnPool pool;
  auto a = pool.add(make_route(inst, {0, 1, 2}));
  CHECK(a.id == 0);
  CHECK(a.inserted);
  auto b = pool.add(make_route(inst, {0, 1, 2}));
  CHECK(b.id == 0);
  CHECK_FALSE(b.inserted);
  auto c = pool.add(make_route(inst, {2, 1, 0}));  // reversal
  CHECK(c.id == 0);
  CHECK_FALSE(c.inserted);
  auto d = pool.add(make_route(inst, {0, 2, 1}));  // different tour
  CHECK(d.id == 1);
  CHECK(d.inserted);
  CHECK(pool.size() == 2);

  auto e = pool.add(make_artificial(0, 500));
  auto f = pool.add(make_artificial(0, 500));
  CHECK(e.id == f.id);
  CHECK(pool.size() == 3);
}

TEST_CASE("pool rejects malformed columns") {
  ColumnPool pool;
  Column bad;
  bad.kind = ColumnKind::Route;
  bad.visit_order = {1, 0};
  bad.covers = {1, 0};  // unsorted
  CHECK_THROWS_AS(pool.add(bad), std::invalid_argument);
  bad.covers = {0};  // mismatch with visit_order
  CHECK_THROWS_AS(pool.add(bad), std::invalid_argument);
}

TEST_CASE("assignments price open plus service") {
  auto inst = generate_sscflp(3, 6, 3, 50, {20, 40}, {1, 4}, {10, 60});
  std::vector<int> everyone;
  std::int64_t load = 0;
  for (int u = 0; u < inst.n_customers() && load < 15; ++u) {
    load += inst.demand(u);
    everyone.push_back(u);
  }
  // Trim to the first facility's capacity.
  while (!everyone.empty()) {
    std::int64_t l = 0;
    for (int u : everyone) l += inst.demand(u);
    if (l <= inst.facility(0).capacity) break;
    everyone.pop_back();
  }
  auto col = make_assignment(inst, 0, everyone);
  std::int64_t expect = inst.facility(0).open_cost;
  for (int u : everyone) expect += inst.service_cost(0, u);
  CHECK(col.cost == expect);
  CHECK(col.open_cost_only == inst.facility(0).open_cost);
  // Open cost plus per-customer detour prices rebuild the full cost.
  std::int64_t decomposed = col.open_cost_only;
  for (int u : col.covers) decomposed += detour_cost(inst, col, u);
  CHECK(decomposed == col.cost);

  CHECK_THROWS_AS(make_assignment(inst, 9, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_assignment(inst, 0, {0, 0}), std::invalid_argument);
}

TEST_CASE("jsonl dump round-trips the essentials") {
  CvrpInstance inst({0, 0}, {{{1, 0}, 1}, {{2, 0}, 1}}, 2, 2);
  ColumnPool pool;
  pool.add(make_artificial(0, 123));
  pool.add(make_route(inst, {1, 0}));
  std::ostringstream out;
  pool.dump_jsonl(out);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  auto j0 = nlohmann::json::parse(line);
  CHECK(j0["kind"] == "artificial");
  CHECK(j0["item"] == 0);
  CHECK(j0["cost"] == 123);
  REQUIRE(std::getline(in, line));
  auto j1 = nlohmann::json::parse(line);
  CHECK(j1["kind"] == "route");
  CHECK(j1["visit_order"] == nlohmann::json::array({1, 0}));
  CHECK_FALSE(std::getline(in, line));
}
