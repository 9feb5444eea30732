#pragma once

#include "migsched/lp.hpp"
#include "migsched/rng.hpp"

#include <string>

namespace migsched::lp {

/// Random bounded program with small integer data. With `feasible_point`, the
/// right-hand sides are shifted so that a random integer point satisfies every row.
LinearProgram random_program(Rng& rng, int vars, int rows, bool feasible_point);

/// Optimality certificate: primal feasibility, dual signs, reduced costs,
/// complementary slackness and a zero duality gap. Empty when all hold exactly.
std::string certificate_error(const LinearProgram& program, const LpSolution& solution);

}  // namespace migsched::lp
