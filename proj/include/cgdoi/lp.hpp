#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cgdoi {

inline constexpr double kFeasTol = 1e-7;  // absolute, on unit-scaled rows
inline constexpr double kGapTol = 1e-7;   // relative duality gap

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct LpColumn {
  std::string name;
  double objective = 0.0;
  std::optional<double> upper;  // lower bound is fixed at 0
};

struct LpRow {
  std::string name;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> coefs;  // (column index, value)
  // Lazy rows may be left out of the working problem until the current
  // solution violates them; their duals are zero while inactive. The
  // returned solution always satisfies every row.
  bool lazy = false;
};

/// A minimization LP with named rows and columns.
struct LpModel {
  std::vector<LpColumn> columns;
  std::vector<LpRow> rows;

  int add_column(std::string name, double objective,
                 std::optional<double> upper = std::nullopt);
  int add_row(std::string name, RowSense sense, double rhs, bool lazy = false);
  void set_coef(int row, int col, double value);

  /// Throws std::invalid_argument on duplicate names, dangling coefficient
  /// references, or non-finite data.
  void validate() const;

  /// Human-readable LP text format (CPLEX-style) for external cross-checks.
  void write_lp_format(std::ostream& out) const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Failed };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Failed;
  double objective = 0.0;
  std::vector<double> primal;        // per column
  std::vector<double> row_dual;      // per row; >=-rows carry nonnegative
                                     // duals, <=-rows nonpositive
  std::vector<double> reduced_cost;  // per column (diagnostic)
  long iterations = 0;
};

/// Solves from scratch. On Optimal the solution satisfies primal
/// feasibility, dual feasibility and complementary slackness within
/// kFeasTol and a relative duality gap within kGapTol; violations are
/// reported as LpStatus::Failed, never as a silent wrong answer.
LpSolution solve_lp(const LpModel& model);

/// Re-solves a growing model while keeping the previous basis. Rows and
/// columns may be appended between calls (same names must keep identical
/// data); any other change falls back to a cold solve.
class IncrementalLp {
 public:
  IncrementalLp();
  ~IncrementalLp();
  IncrementalLp(IncrementalLp&&) noexcept;
  IncrementalLp& operator=(IncrementalLp&&) noexcept;

  LpSolution solve(const LpModel& model);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cgdoi
