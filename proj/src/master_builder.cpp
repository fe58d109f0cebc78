#include "cgdoi/master_builder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cgdoi {
namespace {

std::string n2s(int v) { return std::to_string(v); }

void check_cvrp_pool(const CvrpInstance& inst, const ColumnPool& pool) {
  std::vector<char> covered(inst.n_items(), 0);
  for (const Column& c : pool.columns()) {
    if (c.kind == ColumnKind::FacilityAssignment)
      throw std::invalid_argument("facility column in a routing master");
    for (int u : c.covers) {
      if (u < 0 || u >= inst.n_items())
        throw std::invalid_argument("column covers an unknown item");
      covered[u] = 1;
    }
  }
  for (int u = 0; u < inst.n_items(); ++u)
    if (!covered[u])
      throw std::invalid_argument("item " + n2s(u) + " has no covering column");
}

void check_sscflp_pool(const SscflpInstance& inst, const ColumnPool& pool) {
  std::vector<char> covered(inst.n_customers(), 0);
  for (const Column& c : pool.columns()) {
    if (c.kind == ColumnKind::Route)
      throw std::invalid_argument("route column in a facility master");
    for (int u : c.covers) {
      if (u < 0 || u >= inst.n_customers())
        throw std::invalid_argument("column covers an unknown customer");
      covered[u] = 1;
    }
  }
  for (int u = 0; u < inst.n_customers(); ++u)
    if (!covered[u])
      throw std::invalid_argument("customer " + n2s(u) +
                                  " has no covering column");
}

void add_cover_rows(MasterModel& m, int n) {
  for (int u = 0; u < n; ++u) {
    m.lp.add_row("cov_" + n2s(u), RowSense::GreaterEqual, 1.0);
    m.row_info.push_back({MasterRowKind::Cover, u, -1, 0, -1});
  }
}

int add_fleet_row(MasterModel& m, int k) {
  int r = m.lp.add_row("fleet", RowSense::LessEqual, static_cast<double>(k));
  m.row_info.push_back({MasterRowKind::Fleet, -1, -1, 0, -1});
  return r;
}

int add_theta(MasterModel& m, const Column& c, int id) {
  int j = m.lp.add_column("th_" + n2s(id), static_cast<double>(c.cost));
  MasterVarInfo info;
  info.column = id;
  if (c.kind == ColumnKind::Artificial) {
    info.kind = MasterVarKind::ArtificialSlack;
    info.item = c.covers.at(0);
  } else {
    info.kind = MasterVarKind::Theta;
  }
  m.var_info.push_back(info);
  for (int u : c.covers) m.lp.set_coef(u, j, 1.0);
  return j;
}

}  // namespace

MasterModel build_unstabilized(const CvrpInstance& inst,
                               const ColumnPool& pool) {
  check_cvrp_pool(inst, pool);
  MasterModel m;
  m.n_items = inst.n_items();
  add_cover_rows(m, m.n_items);
  const int fleet = add_fleet_row(m, inst.n_vehicles());
  for (int id = 0; id < pool.size(); ++id) {
    const Column& c = pool[id];
    int j = add_theta(m, c, id);
    if (c.kind != ColumnKind::Artificial) m.lp.set_coef(fleet, j, 1.0);
  }
  return m;
}

MasterModel build_sdoi(const CvrpInstance& inst, const ColumnPool& pool,
                       double epsilon) {
  check_cvrp_pool(inst, pool);
  MasterModel m;
  m.n_items = inst.n_items();
  add_cover_rows(m, m.n_items);
  const int fleet = add_fleet_row(m, inst.n_vehicles());
  // Fixed swap block first so pool growth only appends columns.
  for (auto [u, v] : smooth_swap_set(inst)) {
    int j = m.lp.add_column("om_" + n2s(u) + "_" + n2s(v),
                            smooth_rho(inst, u, v, epsilon));
    MasterVarInfo info;
    info.kind = MasterVarKind::Swap;
    info.swap_from = u;
    info.swap_to = v;
    m.var_info.push_back(info);
    m.lp.set_coef(u, j, -1.0);  // u's seat is given away
    m.lp.set_coef(v, j, 1.0);   // ...and covers v instead
  }
  for (int id = 0; id < pool.size(); ++id) {
    const Column& c = pool[id];
    int j = add_theta(m, c, id);
    if (c.kind != ColumnKind::Artificial) m.lp.set_coef(fleet, j, 1.0);
  }
  return m;
}

namespace {

// Shared layout for the detour masters. Per pool column, in id order:
// the column block (theta and/or psi + y) preceded by its lazy linking and
// demand rows. `with_theta` selects the full form; without it real routes
// live purely on psi/y and artificials become per-item slacks.
MasterModel build_dtdoi(const CvrpInstance& inst, const ColumnPool& pool,
                        bool with_theta) {
  check_cvrp_pool(inst, pool);
  MasterModel m;
  m.n_items = inst.n_items();
  add_cover_rows(m, m.n_items);
  const int fleet = add_fleet_row(m, inst.n_vehicles());
  const auto& levels = inst.demand_set();

  for (int id = 0; id < pool.size(); ++id) {
    const Column& c = pool[id];
    if (c.kind == ColumnKind::Artificial) {
      if (with_theta) {
        add_theta(m, c, id);
      } else {
        const int item = c.covers.at(0);
        int j = m.lp.add_column("art_" + n2s(item),
                                static_cast<double>(c.cost));
        m.var_info.push_back(
            {MasterVarKind::ArtificialSlack, id, item, -1, -1});
        m.lp.set_coef(item, j, 1.0);
      }
      continue;
    }

    // Lazy rows of this route.
    std::vector<int> lnk(m.n_items);
    for (int u = 0; u < m.n_items; ++u) {
      lnk[u] = m.lp.add_row("lnk_" + n2s(u) + "_" + n2s(id),
                            RowSense::LessEqual, 0.0, /*lazy=*/true);
      m.row_info.push_back({MasterRowKind::Linking, u, id, 0, -1});
    }
    const auto profile = demand_profile(inst, c);
    std::vector<int> dem(levels.size());
    for (size_t k = 0; k < levels.size(); ++k) {
      dem[k] = m.lp.add_row("dem_" + n2s(levels[k]) + "_" + n2s(id),
                            RowSense::LessEqual, 0.0, /*lazy=*/true);
      m.row_info.push_back({MasterRowKind::Demand, -1, id, levels[k], -1});
    }

    if (with_theta) {
      int j = add_theta(m, c, id);
      m.lp.set_coef(fleet, j, 1.0);
    }
    int psi = m.lp.add_column("ps_" + n2s(id), static_cast<double>(c.cost));
    m.var_info.push_back({MasterVarKind::DetouredRoute, id, -1, -1, -1});
    m.lp.set_coef(fleet, psi, 1.0);
    for (int u = 0; u < m.n_items; ++u) m.lp.set_coef(lnk[u], psi, -1.0);
    for (size_t k = 0; k < levels.size(); ++k)
      m.lp.set_coef(dem[k], psi, -static_cast<double>(profile[k]));
    for (int u = 0; u < m.n_items; ++u) {
      int y = m.lp.add_column(
          "y_" + n2s(u) + "_" + n2s(id),
          static_cast<double>(detour_cost(inst, c, u)));
      m.var_info.push_back({MasterVarKind::Detour, id, u, -1, -1});
      m.lp.set_coef(u, y, 1.0);
      m.lp.set_coef(lnk[u], y, 1.0);
      for (size_t k = 0; k < levels.size(); ++k)
        if (inst.demand(u) >= levels[k]) m.lp.set_coef(dem[k], y, 1.0);
    }
  }
  return m;
}

}  // namespace

MasterModel build_dtdoi_full(const CvrpInstance& inst,
                             const ColumnPool& pool) {
  return build_dtdoi(inst, pool, /*with_theta=*/true);
}

MasterModel build_dtdoi_reduced(const CvrpInstance& inst,
                                const ColumnPool& pool) {
  return build_dtdoi(inst, pool, /*with_theta=*/false);
}

MasterModel build_sscflp_unstab(const SscflpInstance& inst,
                                const ColumnPool& pool) {
  check_sscflp_pool(inst, pool);
  MasterModel m;
  m.n_items = inst.n_customers();
  add_cover_rows(m, m.n_items);
  for (int f = 0; f < inst.n_facilities(); ++f) {
    m.lp.add_row("fac_" + n2s(f), RowSense::LessEqual, 1.0);
    m.row_info.push_back({MasterRowKind::Facility, -1, -1, 0, f});
  }
  for (int id = 0; id < pool.size(); ++id) {
    const Column& c = pool[id];
    int j = add_theta(m, c, id);
    if (c.kind != ColumnKind::Artificial)
      m.lp.set_coef(m.n_items + c.facility, j, 1.0);
  }
  return m;
}

MasterModel build_sscflp_dtdoi(const SscflpInstance& inst,
                               const ColumnPool& pool) {
  check_sscflp_pool(inst, pool);
  MasterModel m;
  m.n_items = inst.n_customers();
  add_cover_rows(m, m.n_items);
  for (int f = 0; f < inst.n_facilities(); ++f) {
    m.lp.add_row("fac_" + n2s(f), RowSense::LessEqual, 1.0);
    m.row_info.push_back({MasterRowKind::Facility, -1, -1, 0, f});
  }
  const auto& levels = inst.demand_set();
  for (int id = 0; id < pool.size(); ++id) {
    const Column& c = pool[id];
    if (c.kind == ColumnKind::Artificial) {
      add_theta(m, c, id);
      continue;
    }
    std::vector<int> lnk(m.n_items);
    for (int u = 0; u < m.n_items; ++u) {
      lnk[u] = m.lp.add_row("lnk_" + n2s(u) + "_" + n2s(id),
                            RowSense::LessEqual, 0.0, /*lazy=*/true);
      m.row_info.push_back({MasterRowKind::Linking, u, id, 0, -1});
    }
    const auto profile = demand_profile(inst, c);
    std::vector<int> dem(levels.size());
    for (size_t k = 0; k < levels.size(); ++k) {
      dem[k] = m.lp.add_row("dem_" + n2s(levels[k]) + "_" + n2s(id),
                            RowSense::LessEqual, 0.0, /*lazy=*/true);
      m.row_info.push_back({MasterRowKind::Demand, -1, id, levels[k], -1});
    }
    const int fac_row = m.n_items + c.facility;
    int th = add_theta(m, c, id);
    m.lp.set_coef(fac_row, th, 1.0);
    int psi = m.lp.add_column("ps_" + n2s(id),
                              static_cast<double>(c.open_cost_only));
    m.var_info.push_back({MasterVarKind::DetouredRoute, id, -1, -1, -1});
    m.lp.set_coef(fac_row, psi, 1.0);
    for (int u = 0; u < m.n_items; ++u) m.lp.set_coef(lnk[u], psi, -1.0);
    for (size_t k = 0; k < levels.size(); ++k)
      m.lp.set_coef(dem[k], psi, -static_cast<double>(profile[k]));
    for (int u = 0; u < m.n_items; ++u) {
      int y = m.lp.add_column(
          "y_" + n2s(u) + "_" + n2s(id),
          static_cast<double>(detour_cost(inst, c, u)));
      m.var_info.push_back({MasterVarKind::Detour, id, u, -1, -1});
      m.lp.set_coef(u, y, 1.0);
      m.lp.set_coef(lnk[u], y, 1.0);
      for (size_t k = 0; k < levels.size(); ++k)
        if (inst.demand(u) >= levels[k]) m.lp.set_coef(dem[k], y, 1.0);
    }
  }
  return m;
}

DualSolution extract_duals(const MasterModel& master, const LpSolution& sol) {
  if (sol.status != LpStatus::Optimal)
    throw std::invalid_argument("duals need an optimal solution, got " +
                                std::string(to_string(sol.status)));
  DualSolution d;
  d.pi_u.assign(master.n_items, 0.0);
  int n_fac = 0;
  for (const auto& info : master.row_info)
    if (info.kind == MasterRowKind::Facility) ++n_fac;
  d.pi_f.assign(n_fac, 0.0);
  for (size_t i = 0; i < master.row_info.size(); ++i) {
    const auto& info = master.row_info[i];
    const double raw = sol.row_dual[i];
    switch (info.kind) {
      case MasterRowKind::Cover:
        d.pi_u[info.item] = std::max(0.0, raw);
        break;
      case MasterRowKind::Fleet:
        d.pi_0 = std::max(0.0, -raw);
        break;
      case MasterRowKind::Linking:
        if (-raw > 0.0) d.pi_ul[{info.item, info.column}] = -raw;
        break;
      case MasterRowKind::Demand:
        if (-raw > 0.0) d.pi_dl[{info.demand, info.column}] = -raw;
        break;
      case MasterRowKind::Facility:
        d.pi_f[info.facility] = std::max(0.0, -raw);
        break;
    }
  }
  return d;
}

}  // namespace cgdoi
