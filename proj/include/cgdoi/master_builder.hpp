#pragma once

#include <vector>

#include "cgdoi/column_pool.hpp"
#include "cgdoi/instance.hpp"
#include "cgdoi/lp.hpp"

namespace cgdoi {

enum class MasterRowKind { Cover, Fleet, Linking, Demand, Facility };

struct MasterRowInfo {
  MasterRowKind kind = MasterRowKind::Cover;
  int item = -1;     // Cover, Linking
  int column = -1;   // Linking, Demand: pool column id
  int demand = 0;    // Demand: the level
  int facility = -1; // Facility
};

enum class MasterVarKind {
  Theta,           // whole route / assignment selected as-is
  DetouredRoute,   // psi: route selected as a detour host
  Detour,          // y: one item served by a detour on one column
  Swap,            // omega: cover one item through another's seat
  ArtificialSlack  // high-cost per-item cover slack (incl. artificial theta)
};

struct MasterVarInfo {
  MasterVarKind kind = MasterVarKind::Theta;
  int column = -1;               // pool column id where applicable
  int item = -1;                 // Detour, ArtificialSlack
  int swap_from = -1, swap_to = -1;  // Swap
};

/// An LP master plus the bookkeeping to read its rows and variables back in
/// problem terms. Rows and variables are laid out append-only in pool id
/// order so growing the pool only ever appends to the model, which lets
/// IncrementalLp keep its basis between iterations.
struct MasterModel {
  LpModel lp;
  std::vector<MasterRowInfo> row_info;
  std::vector<MasterVarInfo> var_info;
  int n_items = 0;
};

/// Set-cover master: one theta per pooled column, per-item cover rows
/// (>= 1), one fleet row (<= K) over non-artificial columns.
MasterModel build_unstabilized(const CvrpInstance& inst,
                               const ColumnPool& pool);

/// Adds one swap variable per ordered pair (u,v) with d_u >= d_v at cost
/// 2 c_uv + epsilon; the swap drains u's cover row and feeds v's.
MasterModel build_sdoi(const CvrpInstance& inst, const ColumnPool& pool,
                       double epsilon);

/// Full detour form: theta, psi and per-item detour variables y with
/// linking rows y_ul <= psi_l, demand-level rows, and theta+psi sharing the
/// fleet row. Linking and demand rows are lazy.
MasterModel build_dtdoi_full(const CvrpInstance& inst,
                             const ColumnPool& pool);

/// Detour form without theta for real routes: every pooled route is carried
/// by psi/y alone (covered items detour at zero cost), artificial columns
/// become per-item cover slacks.
MasterModel build_dtdoi_reduced(const CvrpInstance& inst,
                                const ColumnPool& pool);

/// Facility-location set cover: cover rows per customer, one row per
/// facility (<= 1) instead of a fleet row.
MasterModel build_sscflp_unstab(const SscflpInstance& inst,
                                const ColumnPool& pool);

/// Facility-location detour form: theta + psi + y per assignment; psi costs
/// only the open cost, detours cost the service distance; facility rows
/// couple theta + psi.
MasterModel build_sscflp_dtdoi(const SscflpInstance& inst,
                               const ColumnPool& pool);

/// Maps raw LP row duals to the nonnegative problem-facing duals. Throws
/// unless the solution is optimal.
DualSolution extract_duals(const MasterModel& master, const LpSolution& sol);

}  // namespace cgdoi
