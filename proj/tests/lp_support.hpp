#pragma once

#include "migsched/lp_check.hpp"

namespace test {

using namespace migsched;

inline lp::LinearProgram random_lp(Rng& rng, int vars, int rows, bool feasible_point) {
  return lp::random_program(rng, vars, rows, feasible_point);
}

inline std::string certificate_error(const lp::LinearProgram& p, const lp::LpSolution& s) {
  return lp::certificate_error(p, s);
}

}  // namespace test
