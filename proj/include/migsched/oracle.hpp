#pragma once

#include "migsched/core.hpp"
#include "migsched/lp.hpp"

#include <optional>
#include <set>
#include <stdexcept>

namespace migsched {

struct OracleLimits {
  int max_jobs = 6;
  int max_horizon = 6;
  int max_hosts = 2;
  long node_budget = 50'000'000;  // search nodes before giving up
};

/// Raised when an instance is outside the oracle limits or the search budget runs out.
struct OracleRefused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact search for a schedule completing every job of `subset` on m hosts.
/// Slots left to right; per slot only maximal packable sets of pending jobs
/// are tried, jobs that must run now are always included.
std::optional<Schedule> feasible_schedule(const Instance& instance, const std::set<int>& subset, int hosts,
                                          const OracleLimits& limits = {});
bool feasible(const Instance& instance, const std::set<int>& subset, int hosts, const OracleLimits& limits = {});

struct ExactMaxT {
  std::set<int> selected;
  Rational profit;
  Schedule schedule;
};

/// Heaviest feasible subset on instance.hosts() hosts.
ExactMaxT exact_maxt(const Instance& instance, const OracleLimits& limits = {});

/// Smallest host count completing every job. The instance host count is ignored.
int exact_minr(const Instance& instance, const OracleLimits& limits = {});

/// max over windows chi and dimensions of ceil(area inside chi / |chi|), at least 1.
int interval_area_bound(const Instance& instance);

struct VertexOptimum {
  lp::Status status = lp::Status::Infeasible;
  Rational objective;
  std::vector<Rational> point;
};

/// Best basic feasible point by enumerating every choice of n active
/// constraints. Every variable needs a finite upper bound.
VertexOptimum lp_vertex_enumeration(const lp::LinearProgram& program);

}  // namespace migsched
