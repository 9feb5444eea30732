#pragma once

#include "migsched/core.hpp"
#include "migsched/laminar.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace migsched {

/// alpha(m, lambda) = lambda (1 - lambda) / (1 - lambda + lambda / m).
Rational alpha_of(int hosts, const Rational& lambda);
/// (1 - alpha)(1 - lambda) - alpha lambda / m, the small-height LP scale.
Rational omega_split(int hosts, const Rational& lambda);
/// 1/2 - lambda (1/2 + 1/m), the largest scale the pairing scheduler accepts.
Rational omega_pairing(int hosts, const Rational& lambda);

/// Thrown when a bin allocator cannot place a unit of a job.
class AllocationFailure : public std::runtime_error {
 public:
  AllocationFailure(int job, const std::string& what) : std::runtime_error(what), job_(job) {}
  int job() const { return job_; }

 private:
  int job_;
};

struct FractionalSelection {
  std::map<int, Rational> x;  // job id -> value in [0, 1]
  Rational objective;
};

/// max sum w_j x_j  s.t.  sum_{chi_j in chi} a_j x_j <= omega m |chi| for every
/// window chi of the (laminar) instance, 0 <= x <= 1. Throws on non-laminar input.
FractionalSelection solve_relaxation(const Instance& laminar, const Rational& omega);

/// Within every window keep at most one fractional job by moving value to the
/// denser job (ties: lower id). Profit never decreases, window areas are kept.
FractionalSelection normalize_selection(const Instance& laminar, const FractionalSelection& x);

struct RoundingTrace {
  FractionalSelection normalized;
  std::map<int, Rational> transferred;  // x-hat after the bottom-up transfers
  std::set<int> selected;
};

/// Bottom-up rounding on the containment forest of the instance windows.
/// At each node carrying a fractional job j, area moves from j into the
/// fractional jobs strictly below it (densest first) until either x_j = 0 or
/// all of them reach 1. Remaining fractional jobs are then rounded up.
RoundingTrace round_selection_trace(const Instance& laminar, const LaminarTree& tree, const FractionalSelection& x);
std::set<int> round_selection(const Instance& laminar, const LaminarTree& tree, const FractionalSelection& x);

enum class BinColor { White, Gray, Black };

/// Scalar loads and colors of the (host, slot) bins, hosts 0-based.
class BinState {
 public:
  BinState(int hosts, int horizon);

  int hosts() const { return hosts_; }
  int horizon() const { return horizon_; }
  BinColor color(int host, int slot) const { return colors_[index(host, slot)]; }
  const Rational& load(int host, int slot) const { return loads_[index(host, slot)]; }
  const std::vector<int>& residents(int host, int slot) const { return residents_[index(host, slot)]; }
  const std::vector<std::pair<Placement, Placement>>& pairs() const { return pairs_; }

  void add(int job, const Rational& height, Placement p);
  void set_color(Placement p, BinColor c) { colors_[index(p.host, p.slot)] = c; }
  void pair(Placement a, Placement b) { pairs_.push_back({a, b}); }

 private:
  std::size_t index(int host, int slot) const {
    return static_cast<std::size_t>(host) * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(slot - 1);
  }

  int hosts_;
  int horizon_;
  std::vector<BinColor> colors_;
  std::vector<Rational> loads_;
  std::vector<std::vector<int>> residents_;
  std::vector<std::pair<Placement, Placement>> pairs_;
};

/// One unit of the gray/white/black allocator. Bins are scanned by host,
/// then by slot. Returns nullopt when the allocator has to report failure.
std::optional<Placement> allocate_one_slot(int job, const Rational& height, std::span<const int> avail,
                                           BinState& bins);

enum class AllocationMode { Pairing, Smallfit };

/// Places every selected job, windows processed children first and jobs of
/// one window by ascending id. `forbidden` removes slots per job id.
/// Throws AllocationFailure naming the stuck job.
Schedule schedule_selected(const Instance& laminar, const std::set<int>& selected, const LaminarTree& tree,
                           AllocationMode mode, const std::map<int, std::set<int>>& forbidden = {},
                           BinState* bins_out = nullptr);

struct MaxTResult {
  std::set<int> selected;
  Schedule schedule;
  Rational profit;
  std::string path;                 // which candidate won
  std::optional<Rational> omega;    // LP scale of the winning path, if any
  std::optional<Rational> lp_value; // relaxation optimum of that path
  std::vector<int> excluded;        // untransformable job ids
  bool exact_subsolver = true;      // false if a single-host search hit its budget
};

enum class LaminarVariant { Split, Pairing };

/// Laminar instances with p_j <= lambda |chi_j|. Split: small heights through
/// the LP with the smallfit allocator, large heights by height classes, best
/// of both. Pairing: one LP at scale omega, pairing allocator.
MaxTResult solve_maxt_laminar(const Instance& instance, const Rational& lambda,
                              LaminarVariant variant = LaminarVariant::Split,
                              std::optional<Rational> omega = std::nullopt);

/// Arbitrary windows: map to the binary tree, solve the laminar image, lift.
MaxTResult solve_maxt_general(const Instance& instance, const Rational& lambda,
                              LaminarVariant variant = LaminarVariant::Split,
                              std::optional<Rational> omega = std::nullopt);

struct SingleHostResult {
  std::set<int> selected;
  Schedule schedule;  // host 0
  Rational weight;
  bool exact = true;
};

/// Earliest-deadline-first run of the given jobs on one unit-capacity host.
/// Returns the schedule when every job completes, nullopt otherwise.
std::optional<Schedule> edf_schedule(std::span<const Job> jobs, int host = 0);

/// Maximum-weight subset completable on one host with s = 1 for every job.
/// Branch and bound over subsets; past `node_budget` nodes the best greedy
/// completion is returned with exact = false.
SingleHostResult single_host_throughput(std::span<const Job> jobs, long node_budget = 2'000'000);

struct HeightClassReport {
  int k = 0;
  Rational rounded_height;
  long budget = 0;     // m * floor(1 / rounded height)
  long kept = 0;       // virtual hosts kept after mapping back
  int group = 1;       // virtual hosts per real host
  Rational weight;
};

struct LargeHeightsResult {
  MaxTResult result;
  std::vector<HeightClassReport> classes;
};

/// Heights rounded down to delta (1 + eps)^k; class k runs the single-host
/// solver on its unit-height copy, host after host. Each real host then runs
/// floor(1 / max height in class) of those virtual hosts side by side.
LargeHeightsResult solve_large_heights_report(const Instance& instance, const Rational& delta,
                                              const Rational& eps = 1);
MaxTResult solve_large_heights(const Instance& instance, const Rational& delta, const Rational& eps = 1);

/// Better of: height classes on s >= 1/n, and all s < 1/n together on host 0.
MaxTResult solve_maxt_logn(const Instance& instance);

/// Jobs whose length exceeds lambda times their window.
bool is_long(const Job& job, const Rational& lambda);

/// Largest-window-first greedy for long jobs: admit j iff at least p_j slots
/// have a bin loaded strictly below 1 - s_j; take the first p_j such slots.
MaxTResult utilization_greedy(const Instance& instance);

/// Weights are replaced by areas. Short jobs go to solve_maxt_general, long
/// low-height jobs to the greedy, long high-height jobs to height classes.
MaxTResult solve_utilization(const Instance& instance, const Rational& lambda = Rational(1, 5));

/// Area LP over the original windows at scale 1: an upper bound on any
/// feasible profit.
Rational maxt_lp_bound(const Instance& instance);

}  // namespace migsched
