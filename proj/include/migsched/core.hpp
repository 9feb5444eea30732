#pragma once

#include "migsched/rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace migsched {

/// Closed slot interval [start, end]; slots are numbered from 1.
struct TimeWindow {
  int start = 1;
  int end = 1;

  int size() const { return end - start + 1; }
  bool contains(int slot) const { return start <= slot && slot <= end; }
  bool contains(const TimeWindow& other) const { return start <= other.start && other.end <= end; }
  bool intersects(const TimeWindow& other) const { return start <= other.end && other.start <= end; }

  auto operator<=>(const TimeWindow&) const = default;
};

std::string to_string(const TimeWindow& window);

struct Job {
  int id = 0;
  int release = 1;
  int due = 1;
  int length = 1;
  Rational weight;
  std::vector<Rational> demand;

  TimeWindow window() const { return {release, due}; }

  /// Scalar height: the demand itself when d = 1, the max component otherwise.
  Rational height() const;
};

/// A problem instance. Construction checks every job invariant and throws
/// std::invalid_argument on the first violation.
class Instance {
 public:
  Instance() = default;
  /// horizon = 0 means "max due over jobs"; a larger value widens [1, T].
  Instance(std::vector<Job> jobs, int hosts, int dim, int horizon = 0);

  const std::vector<Job>& jobs() const { return jobs_; }
  int hosts() const { return hosts_; }
  int dim() const { return dim_; }
  int horizon() const { return horizon_; }
  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }

  /// Index into jobs() for a job id, or nullopt.
  std::optional<std::size_t> index_of(int id) const;
  const Job& job(int id) const;

  /// Same jobs on a different host count.
  Instance with_hosts(int hosts) const;
  /// Sub-instance with the given ids (order of jobs() preserved), same horizon.
  Instance subset(const std::set<int>& ids) const;
  /// Same hosts, dim and horizon with a different job list (windows may change).
  Instance with_jobs(std::vector<Job> jobs) const;

 private:
  std::vector<Job> jobs_;
  std::map<int, std::size_t> index_;
  int hosts_ = 1;
  int dim_ = 1;
  int horizon_ = 0;
};

struct Placement {
  int host = 0;
  int slot = 1;
  auto operator<=>(const Placement&) const = default;
};

/// Job id -> list of (host, slot). Host indices are 0-based, slots 1-based.
class Schedule {
 public:
  void place(int job_id, int host, int slot) { placements_[job_id].push_back({host, slot}); }
  void place(int job_id, Placement p) { placements_[job_id].push_back(p); }

  const std::map<int, std::vector<Placement>>& placements() const { return placements_; }
  std::map<int, std::vector<Placement>>& placements() { return placements_; }

  const std::vector<Placement>* of(int job_id) const;
  std::size_t placed_units(int job_id) const;

  /// Copies every placement of `other`, shifting host indices by `host_offset`.
  void merge(const Schedule& other, int host_offset = 0);

  /// Sorts each job's placement list so that serialization is canonical.
  void normalize();

  int max_host() const;  // -1 when empty
  bool empty() const { return placements_.empty(); }

 private:
  std::map<int, std::vector<Placement>> placements_;
};

enum class ViolationKind {
  UnknownJob,
  HostOutOfRange,
  SlotOutOfRange,
  OutsideWindow,
  DuplicatePlacement,
  SimultaneousProcessing,
  CapacityExceeded,
  Incomplete,
  ExcessSlots,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int job = -1;
  int host = -1;
  int slot = -1;
  int dimension = -1;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  std::set<int> completed_ids;
  Rational total_weight;
  Rational total_area;

  bool has(ViolationKind kind) const;
};

/// Checks a schedule against every feasibility rule of the model. Structural
/// problems (unknown ids, out-of-range hosts or slots) become violations.
/// With require_all_complete, every job of the instance must be completed.
ValidationReport validate(const Instance& instance, const Schedule& schedule, bool require_all_complete);

/// Same, but requires exactly the jobs in `required` to be completed.
ValidationReport validate_selected(const Instance& instance, const Schedule& schedule,
                                   const std::set<int>& required);

Rational area(const Job& job);
/// weight / area; nullopt when the area is zero.
std::optional<Rational> density(const Job& job);
/// max_j length / |window|; zero for an empty instance.
Rational slackness(const Instance& instance);
Rational slackness(std::span<const Job> jobs);

Rational total_weight(const Instance& instance, const std::set<int>& ids);

}  // namespace migsched
