#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgdoi/column_pool.hpp"
#include "cgdoi/instance.hpp"
#include "cgdoi/lp.hpp"
#include "cgdoi/master_builder.hpp"
#include "cgdoi/pricing.hpp"

namespace cgdoi {

enum class Stabilization { None, Sdoi, DtDoiFull, DtDoiReduced };

std::string to_string(Stabilization stab);
Stabilization stabilization_from_string(const std::string& name);

struct CgConfig {
  Stabilization stab = Stabilization::None;
  double rho_epsilon = 1e-4;   // swap-column cost margin above 2*c_uv
  double tolerance = 1e-6;     // stop once min reduced cost >= -tolerance
  int max_iterations = 5000;
  double max_seconds = 600.0;  // wall-clock cap on the loop
  PricingOptions pricing;
};

struct IterationRecord {
  int iteration = 0;        // 1-based
  double elapsed_sec = 0.0; // since the loop started
  double rmp_obj = 0.0;
  double min_reduced_cost = 0.0;
  double lagrangian_lb = 0.0;
  double best_lb = 0.0;
  long num_columns = 0;     // generated (non-artificial) columns in this RMP
};

enum class CgTermination { Optimal, IterationCap, TimeCap };

std::string to_string(CgTermination t);

/// Raised when a master solve or a pricing call fails mid-run; carries the
/// iteration records completed before the failure.
struct CgError : std::runtime_error {
  CgError(const std::string& msg, std::vector<IterationRecord> partial_log)
      : std::runtime_error(msg), log(std::move(partial_log)) {}
  std::vector<IterationRecord> log;
};

struct CgResult {
  CgTermination termination = CgTermination::Optimal;
  double objective = 0.0;        // final restricted master objective
  double best_lower_bound = 0.0; // max Lagrangian bound seen
  std::vector<IterationRecord> log;
  ColumnPool pool;
  DualSolution duals;            // from the final master solve
  MasterModel final_master;
  LpSolution final_solution;
  double solve_seconds = 0.0;    // loop wall time, excludes setup and IO
  long total_lp_iterations = 0;
};

/// One artificial cover column per item / customer, priced at the instance's
/// artificial cost.
ColumnPool initial_pool(const CvrpInstance& inst);
ColumnPool initial_pool(const SscflpInstance& inst);

/// rmp_obj + k * min(min_reduced_cost, 0): a valid bound on the full master
/// optimum because at most k columns can enter at the best reduced cost.
double lagrangian_bound(double rmp_obj, double min_reduced_cost, int k);

CgResult run_cg(const CvrpInstance& inst, const CgConfig& config = {});

/// Facility instances support Stabilization::None and DtDoiFull.
CgResult run_cg(const SscflpInstance& inst, const CgConfig& config = {});

/// Header: iteration,elapsed_sec,rmp_obj,min_reduced_cost,lagrangian_lb,
/// best_lb,num_columns — one row per record.
void write_convergence_csv(std::ostream& out,
                           const std::vector<IterationRecord>& log);

}  // namespace cgdoi
