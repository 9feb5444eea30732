#include "migsched/lp.hpp"

#include <stdexcept>

namespace migsched::lp {

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

int LinearProgram::add_variable(Rational objective, Rational lower, std::optional<Rational> upper) {
  variables_.push_back({std::move(objective), std::move(lower), std::move(upper)});
  return static_cast<int>(variables_.size()) - 1;
}

int LinearProgram::add_row(std::vector<Term> terms, Relation relation, Rational rhs) {
  for (const auto& t : terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= variables_.size()) {
      throw std::invalid_argument("row references unknown variable " + std::to_string(t.var));
    }
  }
  rows_.push_back({std::move(terms), relation, std::move(rhs)});
  return static_cast<int>(rows_.size()) - 1;
}

int LinearProgram::add_column(Rational objective, const std::vector<std::pair<int, Rational>>& entries,
                              Rational lower, std::optional<Rational> upper) {
  for (const auto& [row, coef] : entries) {
    if (row < 0 || static_cast<std::size_t>(row) >= rows_.size()) {
      throw std::invalid_argument("column references unknown row " + std::to_string(row));
    }
  }
  const int var = add_variable(std::move(objective), std::move(lower), std::move(upper));
  for (const auto& [row, coef] : entries) rows_[row].terms.push_back({var, coef});
  return var;
}

Rational LinearProgram::evaluate(const std::vector<Rational>& x) const {
  Rational total = 0;
  for (std::size_t j = 0; j < variables_.size(); ++j) total += variables_[j].objective * x[j];
  return total;
}

Rational LinearProgram::activity(std::size_t row, const std::vector<Rational>& x) const {
  Rational total = 0;
  for (const auto& t : rows_[row].terms) total += t.coef * x[t.var];
  return total;
}

bool LinearProgram::is_feasible(const std::vector<Rational>& x) const {
  if (x.size() != variables_.size()) return false;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (x[j] < variables_[j].lower) return false;
    if (variables_[j].upper && x[j] > *variables_[j].upper) return false;
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rational lhs = activity(i, x);
    switch (rows_[i].relation) {
      case Relation::LessEqual:
        if (lhs > rows_[i].rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < rows_[i].rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != rows_[i].rhs) return false;
        break;
    }
  }
  return true;
}

Simplex::Simplex(LinearProgram program, long pivot_cap) : program_(std::move(program)), pivot_cap_(pivot_cap) {}

void Simplex::build() {
  const std::size_t n = program_.num_variables();
  const auto& vars = program_.variables();

  struct InternalRow {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Relation relation;
    Rational rhs;
    int origin;
    int sign;
  };
  std::vector<InternalRow> rows;
  for (std::size_t k = 0; k < program_.num_rows(); ++k) {
    const Row& row = program_.rows()[k];
    InternalRow r{{}, row.relation, row.rhs, static_cast<int>(k), 1};
    for (const auto& t : row.terms) {
      r.rhs -= t.coef * vars[t.var].lower;
      r.terms.push_back({static_cast<std::size_t>(t.var), t.coef});
    }
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (vars[j].upper) {
      rows.push_back({{{j, Rational(1)}}, Relation::LessEqual, *vars[j].upper - vars[j].lower,
                      -static_cast<int>(j) - 1, 1});
    }
  }
  // Negative right-hand sides are negated; so are ">= 0" rows, which then
  // start with a slack in the basis instead of an artificial.
  for (auto& r : rows) {
    if (r.rhs < 0 || (r.rhs == 0 && r.relation == Relation::GreaterEqual)) {
      r.rhs = -r.rhs;
      for (auto& [col, coef] : r.terms) coef = -coef;
      if (r.relation == Relation::LessEqual) {
        r.relation = Relation::GreaterEqual;
      } else if (r.relation == Relation::GreaterEqual) {
        r.relation = Relation::LessEqual;
      }
      r.sign = -1;
    }
  }

  const std::size_t m = rows.size();
  std::size_t columns = n;
  for (const auto& r : rows) columns += (r.relation == Relation::GreaterEqual) ? 2 : 1;

  tableau_.assign(m, std::vector<Rational>(columns));
  rhs_.assign(m, Rational(0));
  kind_.assign(columns, ColumnKind::Structural);
  column_var_.assign(columns, -1);
  var_column_.assign(n, 0);
  basis_.assign(m, 0);
  identity_.assign(m, 0);
  row_origin_.assign(m, 0);
  row_sign_.assign(m, 1);
  for (std::size_t j = 0; j < n; ++j) {
    column_var_[j] = static_cast<int>(j);
    var_column_[j] = j;
  }

  std::size_t next = n;
  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [col, coef] : rows[i].terms) tableau_[i][col] += coef;
    rhs_[i] = rows[i].rhs;
    row_origin_[i] = rows[i].origin;
    row_sign_[i] = rows[i].sign;
    if (rows[i].relation == Relation::LessEqual) {
      tableau_[i][next] = 1;
      kind_[next] = ColumnKind::Slack;
      identity_[i] = next++;
    } else {
      if (rows[i].relation == Relation::GreaterEqual) {
        tableau_[i][next] = -1;
        kind_[next++] = ColumnKind::Surplus;
      }
      artificial_rows.push_back(i);
    }
  }
  for (std::size_t i : artificial_rows) {
    tableau_[i][next] = 1;
    kind_[next] = ColumnKind::Artificial;
    identity_[i] = next++;
  }
  basis_ = identity_;

  cost_.assign(columns, Rational(0));
  const bool minimize = program_.sense() == Sense::Minimize;
  for (std::size_t j = 0; j < n; ++j) cost_[j] = minimize ? Rational(-vars[j].objective) : vars[j].objective;
}

void Simplex::set_objective(const std::vector<Rational>& costs) {
  reduced_ = costs;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Rational& cb = costs[basis_[i]];
    if (cb == 0) continue;
    const auto& row = tableau_[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0) reduced_[j] -= cb * row[j];
    }
  }
}

void Simplex::pivot(std::size_t r, std::size_t c) {
  auto& prow = tableau_[r];
  const Rational p = prow[c];
  std::vector<std::size_t> nonzero;
  for (std::size_t j = 0; j < prow.size(); ++j) {
    if (prow[j] != 0) {
      prow[j] /= p;
      nonzero.push_back(j);
    }
  }
  rhs_[r] /= p;

  Rational f;
  Rational scratch;
  for (std::size_t i = 0; i < tableau_.size(); ++i) {
    if (i == r) continue;
    auto& row = tableau_[i];
    if (row[c] == 0) continue;
    f = row[c];
    for (std::size_t j : nonzero) {
      mpq_mul(scratch.get_mpq_t(), f.get_mpq_t(), prow[j].get_mpq_t());
      mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), scratch.get_mpq_t());
    }
    rhs_[i] -= f * rhs_[r];
  }
  if (reduced_[c] != 0) {
    f = reduced_[c];
    for (std::size_t j : nonzero) reduced_[j] -= f * prow[j];
  }
  basis_[r] = c;
}

bool Simplex::optimize(bool allow_artificial) {
  // Most positive reduced cost; after a run of degenerate pivots switch to
  // Bland's rule for the rest of this call, which cannot cycle.
  constexpr int degenerate_limit = 50;
  int degenerate_run = 0;
  bool bland = false;
  for (;;) {
    std::size_t enter = reduced_.size();
    for (std::size_t j = 0; j < reduced_.size(); ++j) {
      if (reduced_[j] <= 0 || (!allow_artificial && kind_[j] == ColumnKind::Artificial)) continue;
      if (enter == reduced_.size() || (!bland && reduced_[j] > reduced_[enter])) enter = j;
      if (bland) break;
    }
    if (enter == reduced_.size()) return true;

    std::size_t leave = tableau_.size();
    Rational best;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      const Rational& a = tableau_[i][enter];
      if (a <= 0) continue;
      Rational ratio = rhs_[i] / a;
      if (leave == tableau_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
        best = std::move(ratio);
        leave = i;
      }
    }
    if (leave == tableau_.size()) return false;

    degenerate_run = best == 0 ? degenerate_run + 1 : 0;
    if (degenerate_run > degenerate_limit) bland = true;
    pivot(leave, enter);
    ++solution_.iterations;
    ++total_iterations_;
    if (solution_.iterations > pivot_cap_) throw CyclingError("simplex exceeded the pivot cap");
  }
}

void Simplex::extract() {
  const std::size_t n = program_.num_variables();
  const auto& vars = program_.variables();
  std::vector<Rational> values(reduced_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) values[basis_[i]] = rhs_[i];

  solution_.primal.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) solution_.primal[j] = vars[j].lower + values[var_column_[j]];

  const bool minimize = program_.sense() == Sense::Minimize;
  solution_.duals.assign(program_.num_rows(), Rational(0));
  for (std::size_t i = 0; i < tableau_.size(); ++i) {
    if (row_origin_[i] < 0) continue;
    Rational y = -reduced_[identity_[i]];
    if (row_sign_[i] < 0) y = -y;
    if (minimize) y = -y;
    solution_.duals[row_origin_[i]] = y;
  }
  solution_.reduced_costs.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) solution_.reduced_costs[j] = vars[j].objective;
  for (std::size_t k = 0; k < program_.num_rows(); ++k) {
    const Rational& y = solution_.duals[k];
    if (y == 0) continue;
    for (const auto& t : program_.rows()[k].terms) solution_.reduced_costs[t.var] -= y * t.coef;
  }
  solution_.objective = program_.evaluate(solution_.primal);
}

const LpSolution& Simplex::solve() {
  if (!dirty_) return solution_;
  solution_.iterations = 0;
  dirty_ = false;

  if (warm_) {
    if (!optimize(false)) {
      solution_.status = Status::Unbounded;
      warm_ = false;
      return solution_;
    }
    solution_.status = Status::Optimal;
    extract();
    return solution_;
  }

  for (const auto& v : program_.variables()) {
    if (v.upper && *v.upper < v.lower) {
      solution_ = LpSolution{};
      solution_.status = Status::Infeasible;
      return solution_;
    }
  }

  build();
  std::vector<Rational> phase1(kind_.size(), Rational(0));
  bool has_artificial = false;
  for (std::size_t j = 0; j < kind_.size(); ++j) {
    if (kind_[j] == ColumnKind::Artificial) {
      phase1[j] = -1;
      has_artificial = true;
    }
  }
  if (has_artificial) {
    set_objective(phase1);
    optimize(true);
    Rational infeasibility = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (kind_[basis_[i]] == ColumnKind::Artificial) infeasibility += rhs_[i];
    }
    if (infeasibility > 0) {
      solution_.status = Status::Infeasible;
      solution_.primal.clear();
      solution_.duals.clear();
      solution_.reduced_costs.clear();
      solution_.objective = 0;
      return solution_;
    }
    // Drive zero-valued artificials out where some real column allows it.
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (kind_[basis_[i]] != ColumnKind::Artificial) continue;
      for (std::size_t j = 0; j < kind_.size(); ++j) {
        if (kind_[j] != ColumnKind::Artificial && tableau_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  set_objective(cost_);
  if (!optimize(false)) {
    solution_.status = Status::Unbounded;
    solution_.primal.clear();
    solution_.duals.clear();
    solution_.reduced_costs.clear();
    return solution_;
  }
  solution_.status = Status::Optimal;
  warm_ = true;
  extract();
  return solution_;
}

int Simplex::add_column(Rational objective, const std::vector<std::pair<int, Rational>>& entries, Rational lower,
                        std::optional<Rational> upper) {
  const bool can_warm = warm_ && !dirty_ && lower == 0 && !upper;
  const int var = program_.add_column(objective, entries, lower, upper);
  dirty_ = true;
  if (!can_warm) {
    warm_ = false;
    return var;
  }

  // Column in internal row space, then B^-1 a via the identity-origin columns.
  std::vector<Rational> internal(tableau_.size(), Rational(0));
  std::vector<int> internal_of_row(program_.num_rows(), -1);
  for (std::size_t i = 0; i < tableau_.size(); ++i) {
    if (row_origin_[i] >= 0) internal_of_row[row_origin_[i]] = static_cast<int>(i);
  }
  for (const auto& [row, coef] : entries) {
    const int i = internal_of_row[row];
    internal[i] += row_sign_[i] < 0 ? Rational(-coef) : coef;
  }

  const bool minimize = program_.sense() == Sense::Minimize;
  Rational cost = minimize ? Rational(-objective) : objective;
  Rational reduced = cost;
  std::vector<Rational> column(tableau_.size(), Rational(0));
  for (std::size_t l = 0; l < tableau_.size(); ++l) {
    if (internal[l] == 0) continue;
    const std::size_t id = identity_[l];
    reduced += reduced_[id] * internal[l];
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (tableau_[i][id] != 0) column[i] += tableau_[i][id] * internal[l];
    }
  }
  for (std::size_t i = 0; i < tableau_.size(); ++i) {
    if (kind_[basis_[i]] == ColumnKind::Artificial && column[i] != 0) {
      warm_ = false;  // a redundant row stops being redundant; start over
      return var;
    }
  }

  for (std::size_t i = 0; i < tableau_.size(); ++i) tableau_[i].push_back(column[i]);
  reduced_.push_back(reduced);
  cost_.push_back(cost);
  kind_.push_back(ColumnKind::Structural);
  column_var_.push_back(var);
  var_column_.push_back(kind_.size() - 1);
  return var;
}

LpSolution solve(const LinearProgram& program) {
  Simplex simplex(program);
  return simplex.solve();
}

}  // namespace migsched::lp
