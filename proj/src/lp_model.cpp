#include "cgdoi/lp.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace cgdoi {

int LpModel::add_column(std::string name, double objective,
                        std::optional<double> upper) {
  LpColumn c;
  c.name = std::move(name);
  c.objective = objective;
  c.upper = upper;
  columns.push_back(std::move(c));
  return static_cast<int>(columns.size()) - 1;
}

int LpModel::add_row(std::string name, RowSense sense, double rhs, bool lazy) {
  LpRow r;
  r.name = std::move(name);
  r.sense = sense;
  r.rhs = rhs;
  r.lazy = lazy;
  rows.push_back(std::move(r));
  return static_cast<int>(rows.size()) - 1;
}

void LpModel::set_coef(int row, int col, double value) {
  if (row < 0 || row >= static_cast<int>(rows.size()))
    throw std::out_of_range("set_coef: bad row index");
  if (col < 0 || col >= static_cast<int>(columns.size()))
    throw std::out_of_range("set_coef: bad column index");
  rows[row].coefs.emplace_back(col, value);
}

void LpModel::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& c : columns) {
    if (c.name.empty())
      throw std::invalid_argument("column with empty name");
    if (!seen.insert(c.name).second)
      throw std::invalid_argument("duplicate column name: " + c.name);
    if (!std::isfinite(c.objective))
      throw std::invalid_argument("non-finite objective for " + c.name);
    if (c.upper && (!std::isfinite(*c.upper) || *c.upper < 0.0))
      throw std::invalid_argument("bad upper bound for " + c.name);
  }
  seen.clear();
  for (const auto& r : rows) {
    if (r.name.empty())
      throw std::invalid_argument("row with empty name");
    if (!seen.insert(r.name).second)
      throw std::invalid_argument("duplicate row name: " + r.name);
    if (!std::isfinite(r.rhs))
      throw std::invalid_argument("non-finite rhs for " + r.name);
    for (auto [col, val] : r.coefs) {
      if (col < 0 || col >= static_cast<int>(columns.size()))
        throw std::invalid_argument("row " + r.name +
                                    " references missing column");
      if (!std::isfinite(val))
        throw std::invalid_argument("non-finite coefficient in " + r.name);
    }
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Failed: return "failed";
  }
  return "?";
}

namespace {

void write_term(std::ostream& out, double v, const std::string& name,
                bool first) {
  if (first) {
    if (v < 0) out << "- ";
  } else {
    out << (v < 0 ? " - " : " + ");
  }
  out << std::abs(v) << " " << name;
}

}  // namespace

void LpModel::write_lp_format(std::ostream& out) const {
  out << "Minimize\n obj:";
  bool first = true;
  for (const auto& c : columns) {
    if (c.objective == 0.0) continue;
    out << (first ? " " : "");
    write_term(out, c.objective, c.name, first);
    first = false;
  }
  if (first) out << " 0 " << (columns.empty() ? "x0" : columns[0].name);
  out << "\nSubject To\n";
  for (const auto& r : rows) {
    out << " " << r.name << ":";
    bool rf = true;
    for (auto [col, val] : r.coefs) {
      if (val == 0.0) continue;
      out << (rf ? " " : "");
      write_term(out, val, columns[col].name, rf);
      rf = false;
    }
    if (rf) out << " 0 " << (columns.empty() ? "x0" : columns[0].name);
    const char* op = r.sense == RowSense::LessEqual   ? "<="
                     : r.sense == RowSense::GreaterEqual ? ">="
                                                        : "=";
    out << " " << op << " " << r.rhs << "\n";
  }
  out << "Bounds\n";
  for (const auto& c : columns) {
    if (c.upper)
      out << " 0 <= " << c.name << " <= " << *c.upper << "\n";
    else
      out << " 0 <= " << c.name << "\n";
  }
  out << "End\n";
}

}  // namespace cgdoi
