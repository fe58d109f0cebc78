#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgdoi/bench.hpp"
#include "cgdoi/cg_driver.hpp"
#include "cgdoi/instance.hpp"

using namespace cgdoi;

namespace {

std::vector<Stabilization> parse_stabs(const std::vector<std::string>& names) {
  std::vector<Stabilization> out;
  out.reserve(names.size());
  for (const std::string& n : names) out.push_back(stabilization_from_string(n));
  return out;
}

std::string instance_type(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return j.at("type").get<std::string>();
}

int cmd_gen(std::uint64_t seed, const std::string& type, int n_items,
            int n_facilities, int grid, int capacity, int vehicles,
            const std::string& out) {
  if (type == "cvrp") {
    save_instance(
        generate_cvrp(seed, n_items, grid, capacity, vehicles), out);
  } else if (type == "sscflp") {
    save_instance(generate_sscflp(seed, n_items, n_facilities, grid,
                                  {3 * n_items / n_facilities,
                                   5 * n_items / n_facilities},
                                  {1, 3}, {grid, 3 * grid}),
                  out);
  } else {
    std::cerr << "unknown instance type: " << type << "\n";
    return 1;
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_run(const std::string& instance, const std::string& stab_name,
            const std::string& out) {
  CgConfig cfg;
  cfg.stab = stabilization_from_string(stab_name);
  CgResult res;
  if (instance_type(instance) == "cvrp")
    res = run_cg(load_cvrp_instance(instance), cfg);
  else
    res = run_cg(load_sscflp_instance(instance), cfg);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    write_convergence_csv(os, res.log);
  }
  std::cout << "termination=" << to_string(res.termination)
            << " objective=" << res.objective
            << " iterations=" << res.log.size()
            << " seconds=" << res.solve_seconds << "\n";
  return res.termination == CgTermination::Optimal ? 0 : 1;
}

int cmd_bench(const BenchConfig& cfg, const std::string& format) {
  BenchResult res = run_benchmark(cfg);
  const std::string table = emit_summary(res.rows, format);
  std::cout << table;
  if (!cfg.out_dir.empty()) {
    const auto path = std::filesystem::path(cfg.out_dir) / "summary.csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << emit_summary(res.rows, "csv");
    std::cerr << "summary written to " << path.string() << "\n";
  }
  if (!res.all_optimal) {
    std::cerr << "error: not all runs reached optimality\n";
    return 1;
  }
  if (!res.objectives_agree) {
    std::cerr << "error: stabilized objectives disagree beyond tolerance\n";
    return 1;
  }
  return 0;
}

int cmd_summarize(const std::string& dir, const std::string& format) {
  std::vector<BenchRun> runs = fold_runs_from_dir(dir);
  if (runs.empty()) {
    std::cerr << "no convergence logs found in " << dir << "\n";
    return 1;
  }
  std::cout << emit_summary(summarize_runs(runs), format);
  bool all_optimal = true;
  for (const BenchRun& r : runs)
    all_optimal = all_optimal && r.termination == CgTermination::Optimal;
  return all_optimal && runs_objectives_agree(runs) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Column generation stabilization benchmark"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::uint64_t g_seed = 1;
  std::string g_type = "cvrp", g_out;
  int g_n = 40, g_fac = 4, g_grid = 100, g_cap = 10, g_veh = 5;
  gen->add_option("--seed", g_seed, "Generator seed");
  gen->add_option("--type", g_type, "cvrp or sscflp")
      ->check(CLI::IsMember({"cvrp", "sscflp"}));
  gen->add_option("--n-items", g_n, "Items (or customers)");
  gen->add_option("--n-facilities", g_fac, "Facilities (sscflp only)");
  gen->add_option("--grid", g_grid, "Grid side length");
  gen->add_option("--capacity", g_cap, "Vehicle capacity (cvrp only)");
  gen->add_option("--vehicles", g_veh, "Fleet size (cvrp only)");
  gen->add_option("--out", g_out, "Output path")->required();

  // run
  auto* run = app.add_subcommand("run", "Solve one instance file");
  std::string r_instance, r_stab = "none", r_out;
  run->add_option("--instance", r_instance, "Instance file")->required();
  run->add_option("--stab", r_stab,
                  "none, sdoi, dtdoi_full, or dtdoi_reduced");
  run->add_option("--out", r_out, "Convergence CSV path");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the seed-by-method matrix");
  BenchConfig bcfg;
  bcfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  bcfg.out_dir = "bench_out";
  std::vector<std::string> b_stabs = {"none", "sdoi", "dtdoi_reduced"};
  std::string b_format = "markdown";
  bench->add_option("--seeds", bcfg.seeds, "Instance seeds");
  bench->add_option("--n-items", bcfg.n_items, "Items per instance");
  bench->add_option("--grid", bcfg.grid_size, "Grid side length");
  bench->add_option("--capacity", bcfg.capacity, "Vehicle capacity");
  bench->add_option("--vehicles", bcfg.n_vehicles, "Fleet size");
  bench->add_option("--stabs", b_stabs, "Stabilizations to compare");
  bench->add_option("--out-dir", bcfg.out_dir, "Directory for CSV logs");
  bench->add_flag("--sequential-timing", bcfg.sequential_timing,
                  "One run at a time, for clean wall clocks");
  bench->add_option("--jobs", bcfg.jobs, "Parallel workers (0 = hardware)");
  bench->add_option("--format", b_format, "Summary format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  bench->add_option("--max-seconds", bcfg.cg.max_seconds,
                    "Per-run wall clock cap");

  // summarize
  auto* summ = app.add_subcommand("summarize", "Fold CSV logs into a table");
  std::string s_dir, s_format = "markdown";
  summ->add_option("--dir", s_dir, "Directory with convergence CSVs")
      ->required();
  summ->add_option("--format", s_format, "Summary format")
      ->check(CLI::IsMember({"csv", "markdown"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed())
      return cmd_gen(g_seed, g_type, g_n, g_fac, g_grid, g_cap, g_veh, g_out);
    if (run->parsed()) return cmd_run(r_instance, r_stab, r_out);
    if (bench->parsed()) {
      bcfg.stabs = parse_stabs(b_stabs);
      return cmd_bench(bcfg, b_format);
    }
    if (summ->parsed()) return cmd_summarize(s_dir, s_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
