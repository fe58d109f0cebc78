// Release gate: end-to-end checks of solver correctness and of the
// stabilization speedups on the reference 14-seed benchmark. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cgdoi/bench.hpp"
#include "cgdoi/cg_driver.hpp"
#include "cgdoi/instance.hpp"
#include "cgdoi/pricing.hpp"
#include "oracles.hpp"

using namespace cgdoi;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- criterion 1: all stabilizations reach the same relaxation value ------

bool check_equivalence(std::string& detail) {
  const Stabilization regimes[] = {Stabilization::None, Stabilization::Sdoi,
                                   Stabilization::DtDoiFull,
                                   Stabilization::DtDoiReduced};
  int done = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 8 + i % 8;          // 8..15
    int k = 2 + i % 2;                // 2 or 3
    int d0 = 4 + (i / 8) % 4;         // 4..7
    while (k * d0 < n && d0 < 7) ++d0;  // unit demands need K*D0 >= n
    if (k * d0 < n) k = 3;
    double lo = 1e300, hi = -1e300;
    const auto inst = generate_cvrp(100 + i, n, 60, d0, k);
    for (Stabilization s : regimes) {
      CgConfig cfg;
      cfg.stab = s;
      const CgResult res = run_cg(inst, cfg);
      if (res.termination != CgTermination::Optimal) {
        detail = "non-optimal termination on instance " + std::to_string(i);
        return false;
      }
      lo = std::min(lo, res.objective);
      hi = std::max(hi, res.objective);
    }
    if (!rel_close(lo, hi, 1e-6)) {
      detail = "objectives spread " + std::to_string(hi - lo) +
               " on instance " + std::to_string(i);
      return false;
    }
    ++done;
  }
  detail = std::to_string(done) + " instances, 4 regimes each, agree";
  return true;
}

// --- criterion 2: CG equals the one-shot LP over every feasible route -----

bool check_full_enumeration(std::string& detail) {
  for (int i = 0; i < 10; ++i) {
    const int n = 6 + i % 5;  // 6..10
    const auto inst = generate_cvrp(200 + i, n, 40, 4, 3);
    const double direct = oracle::full_master_objective(inst);
    CgConfig cfg;
    const CgResult res = run_cg(inst, cfg);
    if (res.termination != CgTermination::Optimal ||
        !rel_close(direct, res.objective, 1e-6)) {
      detail = "mismatch on instance " + std::to_string(i) + ": direct " +
               std::to_string(direct) + " vs cg " +
               std::to_string(res.objective);
      return false;
    }
  }
  detail = "10 instances, one-shot LP matches generated LP";
  return true;
}

// --- criterion 3: labeling equals route enumeration under random duals ----

bool check_pricing_exactness(std::string& detail) {
  std::mt19937_64 rng(733);
  const int grid = 50;
  std::uniform_real_distribution<double> item(0.0, 3.0 * grid);
  std::uniform_real_distribution<double> fleet(0.0, grid);
  long checked = 0;
  for (int i = 0; i < 10; ++i) {
    const int n = 4 + i % 5;  // 4..8
    const DemandRule rule =
        (i % 2) ? DemandRule::unit() : DemandRule::uniform(1, 3);
    const auto inst = generate_cvrp(300 + i, n, grid, 4, n, rule);
    for (int trial = 0; trial < 50; ++trial) {
      DualSolution d;
      for (int u = 0; u < n; ++u) d.pi_u.push_back(item(rng));
      d.pi_0 = fleet(rng);
      const auto fast = price_cvrp(inst, d);
      const auto slow = price_cvrp_bruteforce(inst, d);
      if (std::abs(fast.reduced_cost - slow.reduced_cost) > 1e-9) {
        detail = "value gap " +
                 std::to_string(fast.reduced_cost - slow.reduced_cost) +
                 " on instance " + std::to_string(i);
        return false;
      }
      ++checked;
    }
  }
  detail = std::to_string(checked) + " dual vectors, labeling == enumeration";
  return true;
}

// --- criterion 4: bound sandwich in every benchmark convergence log -------

bool check_bounds(const BenchResult& bench, std::string& detail) {
  long rows = 0;
  for (const BenchRun& run : bench.runs) {
    std::ifstream in(run.csv_path);
    if (!in) {
      detail = "missing log " + run.csv_path;
      return false;
    }
    std::string line;
    std::getline(in, line);  // header
    double prev_best = -1e300, prev_rmp = 1e300;
    while (std::getline(in, line)) {
      std::istringstream f(line);
      std::string cell;
      std::vector<double> vals;
      while (std::getline(f, cell, ',')) vals.push_back(std::stod(cell));
      if (vals.size() != 7) {
        detail = "malformed row in " + run.csv_path;
        return false;
      }
      const double rmp = vals[2], best = vals[5];
      if (best < prev_best - 1e-12) {
        detail = "best bound decreased in " + run.csv_path;
        return false;
      }
      if (rmp > prev_rmp + 1e-9) {
        detail = "RMP objective increased in " + run.csv_path;
        return false;
      }
      if (run.termination == CgTermination::Optimal &&
          best > run.objective + 1e-6) {
        detail = "best bound exceeds final objective in " + run.csv_path;
        return false;
      }
      prev_best = best;
      prev_rmp = rmp;
      ++rows;
    }
  }
  detail = std::to_string(rows) + " logged iterations over " +
           std::to_string(bench.runs.size()) + " runs stay sandwiched";
  return true;
}

// --- criteria 5/6: iteration and wall-clock speedup medians ---------------

bool collect_speedups(const BenchResult& bench, std::vector<double>& dt_it,
                      std::vector<double>& sd_it, std::vector<double>& dt_t,
                      std::vector<double>& sd_t, std::string& detail) {
  for (const SummaryRow& row : bench.rows) {
    if (!row.complete || !row.dtdoi_iter_speedup || !row.sdoi_iter_speedup ||
        !row.dtdoi_speedup || !row.sdoi_speedup) {
      detail = "incomplete row for " + row.instance;
      return false;
    }
    dt_it.push_back(*row.dtdoi_iter_speedup);
    sd_it.push_back(*row.sdoi_iter_speedup);
    dt_t.push_back(*row.dtdoi_speedup);
    sd_t.push_back(*row.sdoi_speedup);
  }
  return true;
}

// --- criterion 7: stabilization columns idle in optimal smooth runs -------

bool check_sdoi_clean(const BenchResult& bench, std::string& detail) {
  int seen = 0;
  for (const BenchRun& run : bench.runs) {
    if (run.stab != Stabilization::Sdoi ||
        run.termination != CgTermination::Optimal)
      continue;
    ++seen;
    if (run.max_swap_primal > 1e-7) {
      detail = "swap variable active (" + std::to_string(run.max_swap_primal) +
               ") in seed " + std::to_string(run.seed);
      return false;
    }
    if (run.max_artificial_primal > 1e-7) {
      detail = "artificial active (" +
               std::to_string(run.max_artificial_primal) + ") in seed " +
               std::to_string(run.seed);
      return false;
    }
  }
  if (seen == 0) {
    detail = "no optimal smooth-stabilized runs to inspect";
    return false;
  }
  detail = std::to_string(seen) + " optimal runs, swap and artificial idle";
  return true;
}

// --- criterion 8: facility-location parity and pricing exactness ----------

bool check_sscflp(std::string& detail) {
  std::mt19937_64 rng(881);
  for (int i = 0; i < 10; ++i) {
    const int n_cust = 8 + i % 5;  // 8..12
    const int n_fac = 2 + i % 3;   // 2..4
    // Two facilities at 30+ capacity already cover 12 customers of demand
    // <= 4, so every drawn instance is feasible without artificials.
    const auto inst = generate_sscflp(700 + i, n_cust, n_fac, 60, {30, 60},
                                      {1, 4}, {50, 200});
    CgConfig plain, detoured;
    detoured.stab = Stabilization::DtDoiFull;
    const CgResult a = run_cg(inst, plain);
    const CgResult b = run_cg(inst, detoured);
    if (a.termination != CgTermination::Optimal ||
        b.termination != CgTermination::Optimal ||
        !rel_close(a.objective, b.objective, 1e-6)) {
      detail = "objective mismatch on instance " + std::to_string(i) + ": " +
               std::to_string(a.objective) + " vs " +
               std::to_string(b.objective);
      return false;
    }
    std::uniform_real_distribution<double> cust(0.0, 180.0);
    std::uniform_real_distribution<double> fac(0.0, 60.0);
    for (int trial = 0; trial < 20; ++trial) {
      DualSolution d;
      for (int u = 0; u < n_cust; ++u) d.pi_u.push_back(cust(rng));
      for (int f = 0; f < n_fac; ++f) d.pi_f.push_back(fac(rng));
      const auto fast = price_sscflp(inst, d);
      const auto slow = price_sscflp_bruteforce(inst, d);
      if (std::abs(fast.reduced_cost - slow.reduced_cost) > 1e-9) {
        detail = "knapsack/enumeration gap on instance " + std::to_string(i);
        return false;
      }
    }
  }
  detail = "10 instances: regimes agree, knapsack == enumeration";
  return true;
}

}  // namespace

int main() {
  std::string detail;

  report(1, check_equivalence(detail), detail);
  report(2, check_full_enumeration(detail), detail);
  report(3, check_pricing_exactness(detail), detail);

  // One sequential pass over the reference seeds feeds criteria 4-7.
  BenchConfig cfg;
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  cfg.sequential_timing = true;
  const fs::path dir =
      fs::temp_directory_path() / "cgdoi_acceptance_bench";
  fs::remove_all(dir);
  fs::create_directories(dir);
  cfg.out_dir = dir.string();
  std::printf("running the 14-seed reference benchmark (sequential)...\n");
  std::fflush(stdout);
  const BenchResult bench = run_benchmark(cfg);

  report(4, check_bounds(bench, detail), detail);

  std::vector<double> dt_it, sd_it, dt_t, sd_t;
  if (!collect_speedups(bench, dt_it, sd_it, dt_t, sd_t, detail)) {
    report(5, false, detail);
    report(6, false, detail);
  } else {
    const double m_dt_it = median(dt_it), m_sd_it = median(sd_it);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "median iteration speedup dtdoi %.2f (>= 2.0), sdoi %.2f "
                  "(>= 1.3), dtdoi >= sdoi",
                  m_dt_it, m_sd_it);
    report(5, m_dt_it >= 2.0 && m_sd_it >= 1.3 && m_dt_it >= m_sd_it, buf);

    const double m_dt_t = median(dt_t), m_sd_t = median(sd_t);
    std::snprintf(buf, sizeof buf,
                  "median time speedup dtdoi %.2f, sdoi %.2f (both > 1.0)",
                  m_dt_t, m_sd_t);
    report(6, m_dt_t > 1.0 && m_sd_t > 1.0, buf);
  }

  report(7, check_sdoi_clean(bench, detail), detail);
  report(8, check_sscflp(detail), detail);

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
