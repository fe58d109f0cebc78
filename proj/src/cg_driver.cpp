#include "cgdoi/cg_driver.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cgdoi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

MasterModel build_master(const CvrpInstance& inst, const ColumnPool& pool,
                         const CgConfig& cfg) {
  switch (cfg.stab) {
    case Stabilization::None:
      return build_unstabilized(inst, pool);
    case Stabilization::Sdoi:
      return build_sdoi(inst, pool, cfg.rho_epsilon);
    case Stabilization::DtDoiFull:
      return build_dtdoi_full(inst, pool);
    case Stabilization::DtDoiReduced:
      return build_dtdoi_reduced(inst, pool);
  }
  throw std::logic_error("unhandled stabilization");
}

MasterModel build_master(const SscflpInstance& inst, const ColumnPool& pool,
                         const CgConfig& cfg) {
  switch (cfg.stab) {
    case Stabilization::None:
      return build_sscflp_unstab(inst, pool);
    case Stabilization::DtDoiFull:
      return build_sscflp_dtdoi(inst, pool);
    default:
      throw std::invalid_argument("stabilization " + to_string(cfg.stab) +
                                  " is not supported for facility instances");
  }
}

PricingResult price(const CvrpInstance& inst, const DualSolution& duals,
                    const CgConfig& cfg) {
  return price_cvrp(inst, duals, cfg.pricing);
}

PricingResult price(const SscflpInstance& inst, const DualSolution& duals,
                    const CgConfig&) {
  return price_sscflp(inst, duals);
}

int bound_multiplier(const CvrpInstance& inst) { return inst.n_vehicles(); }
int bound_multiplier(const SscflpInstance& inst) { return inst.n_facilities(); }

void check_supported(const CvrpInstance&, Stabilization) {}

void check_supported(const SscflpInstance&, Stabilization stab) {
  if (stab != Stabilization::None && stab != Stabilization::DtDoiFull) {
    throw std::invalid_argument("stabilization " + to_string(stab) +
                                " is not supported for facility instances");
  }
}

template <class Inst>
CgResult drive(const Inst& inst, const CgConfig& cfg) {
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be positive");
  }
  if (!(cfg.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  check_supported(inst, cfg.stab);
  CgResult res;
  res.pool = initial_pool(inst);
  const long n_artificial = res.pool.size();
  IncrementalLp lp;
  res.termination = CgTermination::IterationCap;
  const auto t0 = Clock::now();
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    MasterModel master = build_master(inst, res.pool, cfg);
    LpSolution sol = lp.solve(master.lp);
    if (sol.status != LpStatus::Optimal) {
      throw CgError("restricted master solve " + std::to_string(it) +
                        " ended " + to_string(sol.status),
                    res.log);
    }
    res.total_lp_iterations += sol.iterations;
    DualSolution duals = extract_duals(master, sol);
    PricingResult priced;
    try {
      priced = price(inst, duals, cfg);
    } catch (const std::exception& e) {
      throw CgError(std::string("pricing failed at iteration ") +
                        std::to_string(it) + ": " + e.what(),
                    res.log);
    }

    IterationRecord rec;
    rec.iteration = it;
    rec.rmp_obj = sol.objective;
    rec.min_reduced_cost = priced.reduced_cost;
    rec.lagrangian_lb = lagrangian_bound(sol.objective, priced.reduced_cost,
                                         bound_multiplier(inst));
    rec.best_lb = res.log.empty()
                      ? rec.lagrangian_lb
                      : std::max(res.log.back().best_lb, rec.lagrangian_lb);
    rec.num_columns = res.pool.size() - n_artificial;
    rec.elapsed_sec = seconds_since(t0);
    res.log.push_back(rec);

    res.objective = sol.objective;
    res.best_lower_bound = rec.best_lb;
    res.duals = std::move(duals);
    res.final_master = std::move(master);
    res.final_solution = std::move(sol);

    if (priced.reduced_cost >= -cfg.tolerance) {
      res.termination = CgTermination::Optimal;
      break;
    }
    if (rec.elapsed_sec >= cfg.max_seconds) {
      res.termination = CgTermination::TimeCap;
      break;
    }
    if (!priced.column || priced.column->covers.empty()) {
      // A do-nothing candidate prices at a nonnegative dual and must have
      // been caught by the stop test above.
      throw std::logic_error("negative reduced cost on an empty column");
    }
    auto added = res.pool.add(*priced.column);
    if (!added.inserted) {
      throw std::logic_error("pricing returned a column already in the pool "
                             "(iteration " +
                             std::to_string(it) + ")");
    }
  }
  res.solve_seconds = seconds_since(t0);
  return res;
}

}  // namespace

std::string to_string(Stabilization stab) {
  switch (stab) {
    case Stabilization::None:
      return "none";
    case Stabilization::Sdoi:
      return "sdoi";
    case Stabilization::DtDoiFull:
      return "dtdoi_full";
    case Stabilization::DtDoiReduced:
      return "dtdoi_reduced";
  }
  throw std::logic_error("unhandled stabilization");
}

Stabilization stabilization_from_string(const std::string& name) {
  if (name == "none") return Stabilization::None;
  if (name == "sdoi") return Stabilization::Sdoi;
  if (name == "dtdoi_full") return Stabilization::DtDoiFull;
  if (name == "dtdoi_reduced") return Stabilization::DtDoiReduced;
  throw std::invalid_argument("unknown stabilization: " + name);
}

std::string to_string(CgTermination t) {
  switch (t) {
    case CgTermination::Optimal:
      return "optimal";
    case CgTermination::IterationCap:
      return "iteration_cap";
    case CgTermination::TimeCap:
      return "time_cap";
  }
  throw std::logic_error("unhandled termination");
}

ColumnPool initial_pool(const CvrpInstance& inst) {
  ColumnPool pool;
  for (int u = 0; u < inst.n_items(); ++u) {
    pool.add(make_artificial(u, inst.artificial_cost()));
  }
  return pool;
}

ColumnPool initial_pool(const SscflpInstance& inst) {
  ColumnPool pool;
  for (int u = 0; u < inst.n_customers(); ++u) {
    pool.add(make_artificial(u, inst.artificial_cost()));
  }
  return pool;
}

double lagrangian_bound(double rmp_obj, double min_reduced_cost, int k) {
  return rmp_obj + k * std::min(min_reduced_cost, 0.0);
}

CgResult run_cg(const CvrpInstance& inst, const CgConfig& config) {
  return drive(inst, config);
}

CgResult run_cg(const SscflpInstance& inst, const CgConfig& config) {
  return drive(inst, config);
}

void write_convergence_csv(std::ostream& out,
                           const std::vector<IterationRecord>& log) {
  const auto old_precision = out.precision(12);
  out << "iteration,elapsed_sec,rmp_obj,min_reduced_cost,lagrangian_lb,"
         "best_lb,num_columns\n";
  for (const IterationRecord& r : log) {
    out << r.iteration << ',' << r.elapsed_sec << ',' << r.rmp_obj << ','
        << r.min_reduced_cost << ',' << r.lagrangian_lb << ',' << r.best_lb
        << ',' << r.num_columns << '\n';
  }
  out.precision(old_precision);
}

}  // namespace cgdoi
