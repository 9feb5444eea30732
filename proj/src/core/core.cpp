#include "migsched/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace migsched {

std::string to_string(const TimeWindow& window) {
  return "[" + std::to_string(window.start) + "," + std::to_string(window.end) + "]";
}

Rational Job::height() const {
  Rational h = 0;
  for (const auto& s : demand) {
    if (h < s) h = s;
  }
  return h;
}

Instance::Instance(std::vector<Job> jobs, int hosts, int dim, int horizon)
    : jobs_(std::move(jobs)), hosts_(hosts), dim_(dim), horizon_(horizon) {
  if (hosts_ < 1) throw std::invalid_argument("instance needs at least one host");
  if (dim_ < 1) throw std::invalid_argument("instance dimension must be positive");
  int max_due = 0;
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    const Job& j = jobs_[i];
    const std::string tag = "job " + std::to_string(j.id) + ": ";
    if (!index_.emplace(j.id, i).second) throw std::invalid_argument(tag + "duplicate id");
    if (j.release < 1) throw std::invalid_argument(tag + "release must be >= 1");
    if (j.release > j.due) throw std::invalid_argument(tag + "release after due");
    if (j.length < 1 || j.length > j.due - j.release + 1) {
      throw std::invalid_argument(tag + "length must lie in [1, |window|]");
    }
    if (static_cast<int>(j.demand.size()) != dim_) {
      throw std::invalid_argument(tag + "demand has " + std::to_string(j.demand.size()) +
                                  " components, expected " + std::to_string(dim_));
    }
    for (const auto& s : j.demand) {
      if (s <= 0 || s > 1) throw std::invalid_argument(tag + "demand component outside (0,1]");
    }
    if (j.weight < 0) throw std::invalid_argument(tag + "negative weight");
    max_due = std::max(max_due, j.due);
  }
  if (horizon_ == 0) horizon_ = max_due;
  if (horizon_ < max_due) throw std::invalid_argument("horizon shorter than a job window");
}

std::optional<std::size_t> Instance::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Job& Instance::job(int id) const {
  auto idx = index_of(id);
  if (!idx) throw std::out_of_range("unknown job id " + std::to_string(id));
  return jobs_[*idx];
}

Instance Instance::with_hosts(int hosts) const { return Instance(jobs_, hosts, dim_, horizon_); }

Instance Instance::subset(const std::set<int>& ids) const {
  std::vector<Job> kept;
  for (const auto& j : jobs_) {
    if (ids.count(j.id)) kept.push_back(j);
  }
  return Instance(std::move(kept), hosts_, dim_, horizon_);
}

Instance Instance::with_jobs(std::vector<Job> jobs) const {
  return Instance(std::move(jobs), hosts_, dim_, horizon_);
}

const std::vector<Placement>* Schedule::of(int job_id) const {
  auto it = placements_.find(job_id);
  return it == placements_.end() ? nullptr : &it->second;
}

std::size_t Schedule::placed_units(int job_id) const {
  const auto* p = of(job_id);
  return p ? p->size() : 0;
}

void Schedule::merge(const Schedule& other, int host_offset) {
  for (const auto& [id, list] : other.placements_) {
    auto& dst = placements_[id];
    for (const auto& p : list) dst.push_back({p.host + host_offset, p.slot});
  }
}

void Schedule::normalize() {
  for (auto it = placements_.begin(); it != placements_.end();) {
    if (it->second.empty()) {
      it = placements_.erase(it);
      continue;
    }
    std::sort(it->second.begin(), it->second.end(),
              [](const Placement& a, const Placement& b) {
                return a.slot != b.slot ? a.slot < b.slot : a.host < b.host;
              });
    ++it;
  }
}

int Schedule::max_host() const {
  int h = -1;
  for (const auto& [id, list] : placements_) {
    for (const auto& p : list) h = std::max(h, p.host);
  }
  return h;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnknownJob: return "unknown_job";
    case ViolationKind::HostOutOfRange: return "host_out_of_range";
    case ViolationKind::SlotOutOfRange: return "slot_out_of_range";
    case ViolationKind::OutsideWindow: return "outside_window";
    case ViolationKind::DuplicatePlacement: return "duplicate_placement";
    case ViolationKind::SimultaneousProcessing: return "simultaneous_processing";
    case ViolationKind::CapacityExceeded: return "capacity_exceeded";
    case ViolationKind::Incomplete: return "incomplete";
    case ViolationKind::ExcessSlots: return "excess_slots";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

ValidationReport validate_impl(const Instance& instance, const Schedule& schedule,
                               const std::set<int>* required, bool require_all) {
  ValidationReport report;
  auto flag = [&report](Violation v) { report.violations.push_back(v); };

  const int hosts = instance.hosts();
  const int horizon = instance.horizon();
  const int dim = instance.dim();
  std::map<std::pair<int, int>, std::vector<Rational>> load;  // (host, slot)

  for (const auto& [id, list] : schedule.placements()) {
    auto idx = instance.index_of(id);
    if (!idx) {
      flag({ViolationKind::UnknownJob, id});
      continue;
    }
    const Job& job = instance.jobs()[*idx];
    const TimeWindow window = job.window();
    bool job_ok = true;
    std::set<Placement> seen;
    std::map<int, int> host_at_slot;
    std::set<int> good_slots;

    for (const auto& p : list) {
      if (p.host < 0 || p.host >= hosts) {
        flag({ViolationKind::HostOutOfRange, id, p.host, p.slot});
        job_ok = false;
        continue;
      }
      if (p.slot < 1 || p.slot > horizon) {
        flag({ViolationKind::SlotOutOfRange, id, p.host, p.slot});
        job_ok = false;
        continue;
      }
      if (!seen.insert(p).second) {
        flag({ViolationKind::DuplicatePlacement, id, p.host, p.slot});
        job_ok = false;
        continue;
      }
      auto& cell = load[{p.host, p.slot}];
      if (cell.empty()) cell.assign(dim, Rational(0));
      for (int k = 0; k < dim; ++k) cell[k] += job.demand[k];

      if (!window.contains(p.slot)) {
        flag({ViolationKind::OutsideWindow, id, p.host, p.slot});
        job_ok = false;
      }
      auto [it, fresh] = host_at_slot.emplace(p.slot, p.host);
      if (!fresh) {
        flag({ViolationKind::SimultaneousProcessing, id, p.host, p.slot});
        job_ok = false;
      } else if (window.contains(p.slot)) {
        good_slots.insert(p.slot);
      }
    }

    const int units = static_cast<int>(good_slots.size());
    if (units > job.length) {
      flag({ViolationKind::ExcessSlots, id});
      job_ok = false;
    }
    if (job_ok && units == job.length) report.completed_ids.insert(id);
  }

  for (const auto& [cell, sums] : load) {
    for (int k = 0; k < dim; ++k) {
      if (sums[k] > 1) flag({ViolationKind::CapacityExceeded, -1, cell.first, cell.second, k});
    }
  }

  for (const auto& job : instance.jobs()) {
    const bool needed = require_all || (required && required->count(job.id));
    if (needed && !report.completed_ids.count(job.id)) flag({ViolationKind::Incomplete, job.id});
  }
  if (required) {
    for (int id : *required) {
      if (!instance.index_of(id)) flag({ViolationKind::UnknownJob, id});
    }
  }

  for (int id : report.completed_ids) {
    const Job& job = instance.job(id);
    report.total_weight += job.weight;
    report.total_area += area(job);
  }
  report.feasible = report.violations.empty();
  return report;
}

}  // namespace

ValidationReport validate(const Instance& instance, const Schedule& schedule, bool require_all_complete) {
  return validate_impl(instance, schedule, nullptr, require_all_complete);
}

ValidationReport validate_selected(const Instance& instance, const Schedule& schedule,
                                   const std::set<int>& required) {
  return validate_impl(instance, schedule, &required, false);
}

Rational area(const Job& job) { return Rational(job.length) * job.height(); }

std::optional<Rational> density(const Job& job) {
  Rational a = area(job);
  if (a == 0) return std::nullopt;
  return Rational(job.weight / a);
}

Rational slackness(std::span<const Job> jobs) {
  Rational best = 0;
  for (const auto& j : jobs) {
    Rational r(j.length, j.window().size());
    r.canonicalize();
    if (best < r) best = r;
  }
  return best;
}

Rational slackness(const Instance& instance) { return slackness(std::span<const Job>(instance.jobs())); }

Rational total_weight(const Instance& instance, const std::set<int>& ids) {
  Rational w = 0;
  for (int id : ids) w += instance.job(id).weight;
  return w;
}

}  // namespace migsched
