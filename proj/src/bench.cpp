#include "cgdoi/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cgdoi/column_pool.hpp"
#include "cgdoi/master_builder.hpp"

namespace cgdoi {
namespace {

constexpr double kObjAgreeTol = 1e-6;   // relative, across methods per seed
constexpr double kFoldedOptMrc = -1e-6; // folded runs: converged reduced cost

std::string csv_name(std::uint64_t seed, Stabilization stab) {
  return "inst" + std::to_string(seed) + "_" + to_string(stab) + ".csv";
}

long generated_columns(const ColumnPool& pool) {
  long n = 0;
  for (const Column& c : pool.columns())
    if (c.kind != ColumnKind::Artificial) ++n;
  return n;
}

BenchRun make_run(std::uint64_t seed, Stabilization stab, const CgResult& res) {
  BenchRun run;
  run.seed = seed;
  run.stab = stab;
  run.termination = res.termination;
  run.objective = res.objective;
  run.iterations = static_cast<long>(res.log.size());
  run.seconds = res.solve_seconds;
  run.columns = generated_columns(res.pool);
  for (size_t j = 0; j < res.final_master.var_info.size(); ++j) {
    const MasterVarInfo& info = res.final_master.var_info[j];
    const double x = res.final_solution.primal[j];
    if (info.kind == MasterVarKind::Swap)
      run.max_swap_primal = std::max(run.max_swap_primal, x);
    else if (info.kind == MasterVarKind::ArtificialSlack)
      run.max_artificial_primal = std::max(run.max_artificial_primal, x);
  }
  return run;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

bool runs_objectives_agree(const std::vector<BenchRun>& runs) {
  std::map<std::uint64_t, std::pair<double, double>> range;  // min, max
  for (const BenchRun& r : runs) {
    if (r.termination != CgTermination::Optimal) continue;
    auto [it, inserted] = range.try_emplace(r.seed, r.objective, r.objective);
    if (!inserted) {
      it->second.first = std::min(it->second.first, r.objective);
      it->second.second = std::max(it->second.second, r.objective);
    }
  }
  for (const auto& [seed, mm] : range) {
    const double scale =
        1.0 + std::max(std::abs(mm.first), std::abs(mm.second));
    if (mm.second - mm.first > kObjAgreeTol * scale) return false;
  }
  return true;
}

BenchResult run_benchmark(const BenchConfig& config) {
  if (config.seeds.empty())
    throw std::invalid_argument("run_benchmark: seeds must be nonempty");
  if (config.stabs.empty())
    throw std::invalid_argument("run_benchmark: stabs must be nonempty");

  std::vector<CvrpInstance> instances;
  instances.reserve(config.seeds.size());
  for (std::uint64_t seed : config.seeds)
    instances.push_back(generate_cvrp(seed, config.n_items, config.grid_size,
                                      config.capacity, config.n_vehicles,
                                      config.demand));

  if (!config.out_dir.empty())
    std::filesystem::create_directories(config.out_dir);

  const size_t n_stabs = config.stabs.size();
  const size_t n_tasks = config.seeds.size() * n_stabs;
  std::vector<BenchRun> runs(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);

  auto run_task = [&](size_t t) {
    const size_t si = t / n_stabs;
    const Stabilization stab = config.stabs[t % n_stabs];
    try {
      CgConfig cg = config.cg;
      cg.stab = stab;
      const CgResult res = run_cg(instances[si], cg);
      BenchRun run = make_run(config.seeds[si], stab, res);
      if (!config.out_dir.empty()) {
        const auto path =
            std::filesystem::path(config.out_dir) / csv_name(run.seed, stab);
        std::ofstream out(path);
        if (!out)
          throw std::runtime_error("cannot write " + path.string());
        write_convergence_csv(out, res.log);
        run.csv_path = path.string();
      }
      runs[t] = std::move(run);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (config.sequential_timing) {
    for (size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    unsigned workers = config.jobs > 0
                           ? static_cast<unsigned>(config.jobs)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n_tasks));
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1))
          run_task(t);
      });
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& err : errors)
    if (err) std::rethrow_exception(err);

  BenchResult result;
  result.runs = std::move(runs);
  result.rows = summarize_runs(result.runs);
  result.all_optimal =
      std::all_of(result.runs.begin(), result.runs.end(), [](const BenchRun& r) {
        return r.termination == CgTermination::Optimal;
      });
  result.objectives_agree = runs_objectives_agree(result.runs);
  return result;
}

std::vector<SummaryRow> summarize_runs(const std::vector<BenchRun>& runs) {
  std::vector<std::uint64_t> order;
  std::map<std::uint64_t, std::vector<const BenchRun*>> by_seed;
  for (const BenchRun& r : runs) {
    auto [it, inserted] = by_seed.try_emplace(r.seed);
    if (inserted) order.push_back(r.seed);
    it->second.push_back(&r);
  }

  std::vector<SummaryRow> rows;
  rows.reserve(order.size());
  for (std::uint64_t seed : order) {
    const auto& group = by_seed[seed];
    auto find = [&](Stabilization stab) -> const BenchRun* {
      for (const BenchRun* r : group)
        if (r->stab == stab) return r;
      return nullptr;
    };
    const BenchRun* unstab = find(Stabilization::None);
    const BenchRun* dt = find(Stabilization::DtDoiReduced);
    if (!dt) dt = find(Stabilization::DtDoiFull);
    const BenchRun* sdoi = find(Stabilization::Sdoi);

    SummaryRow row;
    row.instance = "inst" + std::to_string(seed);
    row.complete = std::all_of(group.begin(), group.end(), [](const BenchRun* r) {
      return r->termination == CgTermination::Optimal;
    });
    auto fill = [](const BenchRun* r, std::optional<double>& time,
                   std::optional<long>& iters) {
      if (!r) return;
      time = r->seconds;
      iters = r->iterations;
    };
    fill(unstab, row.unstab_time, row.unstab_iters);
    fill(dt, row.dtdoi_time, row.dtdoi_iters);
    fill(sdoi, row.sdoi_time, row.sdoi_iters);

    auto optimal = [](const BenchRun* r) {
      return r && r->termination == CgTermination::Optimal;
    };
    auto speedups = [&](const BenchRun* method, std::optional<double>& time_up,
                        std::optional<double>& iter_up) {
      if (!optimal(unstab) || !optimal(method)) return;
      if (method->seconds > 0.0) time_up = unstab->seconds / method->seconds;
      if (method->iterations > 0)
        iter_up = static_cast<double>(unstab->iterations) /
                  static_cast<double>(method->iterations);
    };
    speedups(dt, row.dtdoi_speedup, row.dtdoi_iter_speedup);
    speedups(sdoi, row.sdoi_speedup, row.sdoi_iter_speedup);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchRun> fold_runs_from_dir(const std::string& dir) {
  const std::regex pattern(R"(inst(\d+)_([a-z_]+)\.csv)");
  std::vector<BenchRun> runs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    Stabilization stab;
    try {
      stab = stabilization_from_string(m[2].str());
    } catch (const std::invalid_argument&) {
      continue;
    }

    std::ifstream in(entry.path());
    if (!in)
      throw std::runtime_error("cannot read " + entry.path().string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("iteration,", 0) != 0)
      throw std::runtime_error("unrecognized convergence log: " +
                               entry.path().string());
    std::string last;
    while (std::getline(in, line))
      if (!line.empty()) last = line;
    if (last.empty()) continue;  // log without iterations carries no result

    std::istringstream fields(last);
    std::array<std::string, 7> field;
    for (size_t i = 0; i < field.size(); ++i)
      if (!std::getline(fields, field[i], ','))
        throw std::runtime_error("short convergence row in " +
                                 entry.path().string());

    BenchRun run;
    run.seed = std::stoull(m[1].str());
    run.stab = stab;
    run.iterations = std::stol(field[0]);
    run.seconds = std::stod(field[1]);
    run.objective = std::stod(field[2]);
    run.columns = std::stol(field[6]);
    run.termination = std::stod(field[3]) >= kFoldedOptMrc
                          ? CgTermination::Optimal
                          : CgTermination::IterationCap;
    run.csv_path = entry.path().string();
    runs.push_back(std::move(run));
  }
  std::sort(runs.begin(), runs.end(), [](const BenchRun& a, const BenchRun& b) {
    if (a.seed != b.seed) return a.seed < b.seed;
    return static_cast<int>(a.stab) < static_cast<int>(b.stab);
  });
  return runs;
}

std::string emit_summary(const std::vector<SummaryRow>& rows,
                         const std::string& format) {
  if (format != "csv" && format != "markdown")
    throw std::invalid_argument("emit_summary: format must be csv or markdown");

  static constexpr std::array<const char*, 11> kHeaders = {
      "instance",      "unstab_time",  "dtdoi_time",
      "sdoi_time",     "dtdoi_speedup", "sdoi_speedup",
      "unstab_iters",  "dtdoi_iters",  "sdoi_iters",
      "dtdoi_iter_speedup", "sdoi_iter_speedup"};
  // Column indices 5..7 of the numeric block hold iteration counts.
  auto numeric = [](const SummaryRow& r) {
    auto widen = [](const std::optional<long>& v) -> std::optional<double> {
      if (!v) return std::nullopt;
      return static_cast<double>(*v);
    };
    return std::array<std::optional<double>, 10>{
        r.unstab_time,  r.dtdoi_time,       r.sdoi_time,
        r.dtdoi_speedup, r.sdoi_speedup,    widen(r.unstab_iters),
        widen(r.dtdoi_iters), widen(r.sdoi_iters), r.dtdoi_iter_speedup,
        r.sdoi_iter_speedup};
  };
  auto fmt = [](double v, bool as_count) {
    char buf[40];
    if (as_count)
      std::snprintf(buf, sizeof buf, "%ld", std::lround(v));
    else
      std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };

  std::vector<const SummaryRow*> complete;
  for (const SummaryRow& r : rows)
    if (r.complete) complete.push_back(&r);
  if (complete.empty())
    throw std::invalid_argument("emit_summary: no completed instances");

  // Footer aggregates per column over the complete rows that carry a value.
  std::array<std::optional<double>, 10> means, medians;
  for (size_t c = 0; c < 10; ++c) {
    std::vector<double> vals;
    for (const SummaryRow* r : complete) {
      const auto cell = numeric(*r)[c];
      if (cell) vals.push_back(*cell);
    }
    if (vals.empty()) continue;
    double sum = 0.0;
    for (double v : vals) sum += v;
    means[c] = sum / static_cast<double>(vals.size());
    medians[c] = median(vals);
  }

  const bool md = format == "markdown";
  std::ostringstream out;
  auto emit_line = [&](const std::string& label,
                       const std::array<std::optional<double>, 10>& cells,
                       bool counts_as_ints) {
    if (md) out << "| " << label;
    else out << label;
    for (size_t c = 0; c < 10; ++c) {
      const bool as_count = counts_as_ints && c >= 5 && c <= 7;
      const std::string cell = cells[c] ? fmt(*cells[c], as_count) : "";
      if (md) out << " | " << cell;
      else out << ',' << cell;
    }
    out << (md ? " |\n" : "\n");
  };

  if (md) {
    out << "|";
    for (const char* h : kHeaders) out << ' ' << h << " |";
    out << "\n|";
    for (size_t c = 0; c < kHeaders.size(); ++c) out << "---|";
    out << '\n';
  } else {
    for (size_t c = 0; c < kHeaders.size(); ++c)
      out << (c ? "," : "") << kHeaders[c];
    out << '\n';
  }
  for (const SummaryRow& r : rows) emit_line(r.instance, numeric(r), true);
  emit_line("mean", means, false);
  emit_line("median", medians, false);
  return out.str();
}

}  // namespace cgdoi
