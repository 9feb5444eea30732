#include "migsched/lp_check.hpp"

namespace migsched::lp {

LinearProgram random_program(Rng& rng, int vars, int rows, bool feasible_point) {
  LinearProgram p(rng.coin(1, 2) ? Sense::Maximize : Sense::Minimize);
  std::vector<Rational> x0;
  for (int j = 0; j < vars; ++j) {
    Rational lo(rng.uniform_int(-2, 1));
    Rational hi = lo + rng.uniform_int(0, 5);
    p.add_variable(Rational(rng.uniform_int(-6, 6)), lo, hi);
    x0.push_back(lo + Rational(rng.uniform_int(0, floor_to_int(hi - lo))));
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<Term> terms;
    Rational at_x0 = 0;
    for (int j = 0; j < vars; ++j) {
      if (rng.coin(1, 3)) continue;
      Rational c(rng.uniform_int(-5, 5), rng.uniform_int(1, 3));
      c.canonicalize();
      if (c == 0) continue;
      at_x0 += c * x0[j];
      terms.push_back({j, c});
    }
    const auto rel = static_cast<Relation>(rng.uniform_int(0, 2));
    Rational rhs(rng.uniform_int(-6, 10));
    if (feasible_point) {
      const Rational slack(rng.uniform_int(0, 4));
      rhs = rel == Relation::LessEqual ? at_x0 + slack : rel == Relation::GreaterEqual ? at_x0 - slack : at_x0;
    }
    p.add_row(std::move(terms), rel, rhs);
  }
  return p;
}


std::string certificate_error(const LinearProgram& p, const LpSolution& s) {
  if (!p.is_feasible(s.primal)) return "primal infeasible";
  const int sign = p.sense() == Sense::Maximize ? 1 : -1;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const Rational y = sign * s.duals[i];
    const auto rel = p.rows()[i].relation;
    if (rel == Relation::LessEqual && y < 0) return "dual sign on <= row " + std::to_string(i);
    if (rel == Relation::GreaterEqual && y > 0) return "dual sign on >= row " + std::to_string(i);
    if (y != 0 && p.activity(i, s.primal) != p.rows()[i].rhs) return "slack row with nonzero dual " + std::to_string(i);
  }
  Rational dual_value = 0;
  for (std::size_t i = 0; i < p.num_rows(); ++i) dual_value += s.duals[i] * p.rows()[i].rhs;
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    Rational d = 0;
    d = p.variables()[j].objective;
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
      for (const auto& t : p.rows()[i].terms) {
        if (t.var == static_cast<int>(j)) d -= s.duals[i] * t.coef;
      }
    }
    if (d != s.reduced_costs[j]) return "reduced cost mismatch " + std::to_string(j);
    const Rational dd = sign * d;
    const auto& v = p.variables()[j];
    const bool at_lo = s.primal[j] == v.lower;
    const bool at_hi = v.upper && s.primal[j] == *v.upper;
    if (dd > 0 && !at_hi) return "improvable upward " + std::to_string(j);
    if (dd < 0 && !at_lo) return "improvable downward " + std::to_string(j);
    dual_value += d * s.primal[j];
  }
  if (dual_value != s.objective) return "duality gap";
  if (p.evaluate(s.primal) != s.objective) return "objective mismatch";
  return {};
}

}  // namespace migsched::lp
