#pragma once

#include "migsched/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace migsched::lp {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status status);

struct Term {
  int var = 0;
  Rational coef;
};

struct Row {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

struct Variable {
  Rational objective;
  Rational lower{0};
  std::optional<Rational> upper;  // nullopt = +infinity
};

/// Linear program over variables with finite lower bounds.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Maximize) : sense_(sense) {}

  Sense sense() const { return sense_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_.size(); }

  int add_variable(Rational objective, Rational lower = 0, std::optional<Rational> upper = std::nullopt);
  /// Throws std::invalid_argument on a term naming an unknown variable.
  int add_row(std::vector<Term> terms, Relation relation, Rational rhs);
  /// New variable with the given (row, coefficient) entries in existing rows.
  /// Throws std::invalid_argument on an unknown row.
  int add_column(Rational objective, const std::vector<std::pair<int, Rational>>& entries, Rational lower = 0,
                 std::optional<Rational> upper = std::nullopt);

  /// Objective value of a point, in the program's own sense.
  Rational evaluate(const std::vector<Rational>& x) const;
  /// Row activity sum_j a_ij x_j.
  Rational activity(std::size_t row, const std::vector<Rational>& x) const;
  /// Exact feasibility check of a point against rows and bounds.
  bool is_feasible(const std::vector<Rational>& x) const;

 private:
  Sense sense_;
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
};

struct LpSolution {
  Status status = Status::Infeasible;
  std::vector<Rational> primal;
  /// d(objective)/d(rhs) per row, in the program's sense.
  std::vector<Rational> duals;
  /// c_j - sum_i y_i a_ij per variable.
  std::vector<Rational> reduced_costs;
  Rational objective;
  long iterations = 0;
};

/// Thrown when the pivot count exceeds the safety cap. The Bland fallback makes
/// this unreachable; the cap exists so that a bug cannot hang a test run.
struct CyclingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two-phase dense tableau simplex in exact arithmetic. Dantzig pricing,
/// switching to Bland's rule after a run of degenerate pivots.
/// Keeps its basis between calls so that columns can be added and the
/// program re-optimized from the previous vertex.
class Simplex {
 public:
  explicit Simplex(LinearProgram program, long pivot_cap = 1'000'000);

  const LinearProgram& program() const { return program_; }

  const LpSolution& solve();
  const LpSolution& solution() const { return solution_; }

  /// Appends a variable. When the last solve was optimal and the column has
  /// lower bound 0 and no upper bound, the tableau is extended in place and
  /// the next solve() continues from the current basis.
  int add_column(Rational objective, const std::vector<std::pair<int, Rational>>& entries, Rational lower = 0,
                 std::optional<Rational> upper = std::nullopt);

  long total_iterations() const { return total_iterations_; }
  bool warm() const { return warm_; }

 private:
  enum class ColumnKind { Structural, Slack, Surplus, Artificial, Bound };

  void build();
  void pivot(std::size_t row, std::size_t col);
  /// Runs the simplex loop on the current objective row. Returns false on
  /// unboundedness.
  bool optimize(bool allow_artificial);
  void set_objective(const std::vector<Rational>& costs);
  void extract();

  LinearProgram program_;
  long pivot_cap_;
  LpSolution solution_;
  long total_iterations_ = 0;
  bool warm_ = false;
  bool dirty_ = true;

  // Internal maximization form: tableau_[i] holds B^-1 A row i; rhs_[i] = B^-1 b.
  std::vector<std::vector<Rational>> tableau_;
  std::vector<Rational> rhs_;
  std::vector<Rational> reduced_;  // c_j - c_B B^-1 A_j
  std::vector<Rational> cost_;     // phase-2 internal costs
  std::vector<ColumnKind> kind_;
  std::vector<int> column_var_;    // structural column -> variable, else -1
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> identity_;  // per internal row: column that started as e_i
  std::vector<int> row_origin_;        // internal row -> program row, or -(var + 1) for a bound row
  std::vector<int> row_sign_;          // -1 when the row was negated for a nonnegative rhs
  std::vector<std::size_t> var_column_;
};

/// Convenience cold solve.
LpSolution solve(const LinearProgram& program);

}  // namespace migsched::lp
