#pragma once

#include "migsched/core.hpp"
#include "migsched/laminar.hpp"
#include "migsched/parallel.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace migsched {

/// A job set that runs together on one host at one slot.
struct Configuration {
  int slot = 1;
  std::vector<int> jobs;  // ascending ids
  auto operator<=>(const Configuration&) const = default;
};

/// True when every job's window holds the slot and the demands fit in every dimension.
bool is_valid_configuration(const Instance& instance, const Configuration& config);

struct ConfigColumn {
  Configuration config;
  Rational value;
};

struct ConfigLpSolution {
  std::vector<ConfigColumn> columns;  // positive values only
  Rational m_star;
  int m_int = 0;
  int rounds = 0;             // master solves
  int generated = 0;          // columns added by pricing
  long pivots = 0;
};

/// Returns an empty string when the three constraint families hold exactly,
/// otherwise a description of the first violation.
std::string check_config_lp(const Instance& instance, const ConfigLpSolution& solution);

struct PricingProblem;
struct PricedColumn;

struct ConfigLpOptions {
  Execution pricing = Execution::Parallel;
  /// Called after every master solve with that iteration's primal solution.
  std::function<void(const ConfigLpSolution&)> on_round;
  /// Called after every pricing round with the problems and their answers.
  std::function<void(std::span<const PricingProblem>, std::span<const PricedColumn>)> on_price;
};

/// Minimum fractional host count by column generation over configurations.
/// Throws std::invalid_argument when some job has p_j > |chi_j|.
ConfigLpSolution solve_config_lp(const Instance& instance, const ConfigLpOptions& options = {});

struct KnapsackItem {
  int id = 0;
  Rational profit;
  std::vector<Rational> size;
};

struct KnapsackResult {
  std::vector<int> ids;  // ascending
  Rational value;
};

/// Exact multi-dimensional 0/1 knapsack with unit capacity per dimension:
/// depth-first branch and bound, per-dimension fractional bound.
KnapsackResult solve_knapsack(std::span<const KnapsackItem> items);
/// Reference: every subset. Refuses more than 20 items.
KnapsackResult knapsack_exhaustive(std::span<const KnapsackItem> items);

struct PricingProblem {
  int slot = 1;
  std::vector<KnapsackItem> items;  // profits alpha_j - beta_{j,t}
  Rational gamma;                   // slot dual
};

struct PricedColumn {
  Configuration config;
  Rational value;
  bool improving = false;  // value > gamma
};

PricedColumn price_column(const PricingProblem& problem);
/// Prices every slot; the parallel kernel splits slots over threads.
std::vector<PricedColumn> price_all(std::span<const PricingProblem> problems, Execution execution);

struct MinRParams {
  Rational c = 6;
  Rational epsilon{1, 10};
  std::optional<Rational> omega;  // residual-area target; default from slackness
  Rational theta = 1;
  int max_retries = 5;
  int max_escalations = 4;
  Execution execution = Execution::Parallel;
};

/// Draws per slot: ceil(c * m_int * max(1, log2 d)).
int sample_draws(const Rational& c, int m_int, int dim);

struct SampledSlot {
  int slot = 1;
  std::vector<std::vector<int>> draws;  // draw i -> disjoint job set (possibly empty)
};

/// m1 independent draws per slot with probability value / m_star each, then
/// later draws lose jobs already taken by earlier draws of the same slot.
/// Throws std::logic_error when the column values of a slot exceed m_star.
std::vector<SampledSlot> sample_configurations(const Instance& instance, const ConfigLpSolution& lp, int draws,
                                               std::uint64_t seed);

struct ResidualJob {
  int id = 0;
  int length = 0;             // p' = max(p - n, 0)
  Rational height;            // max-norm of the demand
  TimeWindow window;          // original window
  TimeWindow mapped;          // laminar image of the window
  std::set<int> forbidden;    // slots used in the sampling phase
};

/// One residual per job of the instance, in job order.
std::vector<ResidualJob> build_residual(const Instance& instance, std::span<const SampledSlot> chosen,
                                        const LaminarTree& tree);

struct ResidualSchedule {
  Schedule schedule;         // hosts 0 .. hosts + dedicated - 1
  std::vector<int> dedicated;  // job ids placed on their own host
};

/// Pairing allocator on `hosts` fresh hosts over the mapped windows minus the
/// forbidden slots. Jobs with fewer than p' usable mapped slots get a host of
/// their own (placed in their original window). Throws AllocationFailure.
ResidualSchedule schedule_residual(std::span<const ResidualJob> residuals, int hosts, int horizon);

struct IntervalStats {
  long checked = 0;
  long violations = 0;
  Rational max_ratio;  // max residual area / (omega m |chi|)
  double violation_rate() const { return checked ? static_cast<double>(violations) / checked : 0.0; }
};

/// Residual area of the jobs whose original window lies inside chi, against
/// omega * hosts * |chi|. All windows when T <= 64, a strided family otherwise.
IntervalStats residual_area_report(std::span<const ResidualJob> residuals, int horizon, const Rational& omega,
                                   int hosts, Execution execution = Execution::Parallel);

/// (1 - 4 lambda) / 8 when positive, 1/16 otherwise.
Rational default_residual_omega(const Rational& lambda);

struct MinRResult {
  Schedule schedule;
  int hosts_used = 0;  // m1 + m2 + dedicated
  Rational m_star;
  int m_int = 0;
  int m1 = 0;
  int m2 = 0;
  int retries = 0;         // failed residual attempts
  int escalations = 0;     // times c was raised
  Rational final_c;
  int dedicated = 0;
  bool residual_empty = false;
  bool window_condition = false;  // every window meets the large-window size condition
  IntervalStats residual_area;
};

/// Sampling phase plus residual phase, retried with fresh seeds and then with
/// a larger c. Throws std::runtime_error past both limits.
MinRResult solve_minr(const Instance& instance, const MinRParams& params = {}, std::uint64_t seed = 1);

struct PsiTable {
  double gamma = 0;
  std::vector<long> psi;  // psi[0] = 0, psi[kappa] = T
  int kappa = 0;
};

/// gamma = theta d^2 max(1, log2 d); psi(1) = min(T, 4 ceil(gamma^2)),
/// psi(i) = min(T, floor(2^(psi(i-1) / (2 gamma)))), jumping to T if the
/// recursion stops growing.
PsiTable psi_table(long horizon, int dim, double theta);
int log_star(double x);

struct Slab {
  int range = 0;
  bool odd = false;
  TimeWindow span;
  std::vector<int> jobs;
};

/// Jobs by window size into ranges, each range into two staggered slab
/// families of width 2 psi(w+1). A job fitting both families stays in the odd one.
std::vector<Slab> partition_by_window(const Instance& instance, const PsiTable& table);

struct PartitionResult {
  Schedule schedule;
  int hosts_used = 0;
  PsiTable table;
  std::vector<Slab> slabs;
  std::vector<int> slab_hosts;
};

/// Solves every slab as its own instance; slabs of one family share a host
/// pool, pools add up across families and ranges.
PartitionResult solve_minr_partitioned(const Instance& instance, const MinRParams& params = {},
                                       std::uint64_t seed = 1);

}  // namespace migsched
