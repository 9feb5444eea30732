#include "migsched/maxt.hpp"
#include "migsched/minr.hpp"
#include "migsched/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace migsched {

int sample_draws(const Rational& c, int m_int, int dim) {
  if (std::has_single_bit(static_cast<unsigned>(dim))) {
    const int lg = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(dim))) - 1);
    return static_cast<int>(ceil_to_int(c * m_int * lg));
  }
  return static_cast<int>(std::ceil(to_double(c) * m_int * std::log2(static_cast<double>(dim))));
}

std::vector<SampledSlot> sample_configurations(const Instance& instance, const ConfigLpSolution& lp, int draws,
                                               std::uint64_t seed) {
  std::map<int, std::vector<const ConfigColumn*>> by_slot;
  for (const auto& col : lp.columns) by_slot[col.config.slot].push_back(&col);

  const mpz_class two64 = mpz_class(1) << 64;
  std::vector<SampledSlot> out;
  for (int t = 1; t <= instance.horizon(); ++t) {
    SampledSlot slot;
    slot.slot = t;
    auto it = by_slot.find(t);
    if (it == by_slot.end() || lp.m_star == 0) {
      slot.draws.assign(static_cast<std::size_t>(draws), {});
      out.push_back(std::move(slot));
      continue;
    }
    Rational total = 0;
    for (const auto* c : it->second) total += c->value;
    if (total > lp.m_star) throw std::logic_error("sampling: column values at slot " + std::to_string(t) + " exceed m");

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::set<int> taken;
    for (int i = 0; i < draws; ++i) {
      // u in [0, 1) with 64 random bits; column k wins when u < (x_1 + .. + x_k) / m.
      const Rational u(mpz_class(std::to_string(rng.next())), two64);
      Rational cum = 0;
      const ConfigColumn* pick = nullptr;
      for (const auto* c : it->second) {
        cum += c->value;
        if (u * lp.m_star < cum) {
          pick = c;
          break;
        }
      }
      std::vector<int> kept;
      if (pick) {
        for (int id : pick->config.jobs) {
          if (taken.insert(id).second) kept.push_back(id);
        }
      }
      slot.draws.push_back(std::move(kept));
    }
    out.push_back(std::move(slot));
  }
  return out;
}

std::vector<ResidualJob> build_residual(const Instance& instance, std::span<const SampledSlot> chosen,
                                        const LaminarTree& tree) {
  std::map<int, std::set<int>> used;
  for (const auto& s : chosen) {
    for (const auto& d : s.draws) {
      for (int id : d) used[id].insert(s.slot);
    }
  }
  std::vector<ResidualJob> out;
  for (const auto& j : instance.jobs()) {
    ResidualJob r;
    r.id = j.id;
    r.forbidden = used[j.id];
    r.length = std::max(j.length - static_cast<int>(r.forbidden.size()), 0);
    r.height = j.height();
    r.window = j.window();
    r.mapped = map_window(tree, j.window());
    out.push_back(std::move(r));
  }
  return out;
}

ResidualSchedule schedule_residual(std::span<const ResidualJob> residuals, int hosts, int horizon) {
  ResidualSchedule out;
  std::vector<Job> jobs;
  std::map<int, std::set<int>> forbidden;
  std::vector<const ResidualJob*> own_host;
  for (const auto& r : residuals) {
    if (r.length == 0) continue;
    int usable = 0;
    for (int t = r.mapped.start; t <= r.mapped.end; ++t) usable += !r.forbidden.count(t);
    if (usable < r.length) {
      own_host.push_back(&r);
      continue;
    }
    Job j;
    j.id = r.id;
    j.release = r.mapped.start;
    j.due = r.mapped.end;
    j.length = r.length;
    j.weight = 1;
    j.demand = {r.height};
    jobs.push_back(std::move(j));
    forbidden[r.id] = r.forbidden;
  }
  if (!jobs.empty()) {
    const Instance inst(std::move(jobs), std::max(hosts, 1), 1, horizon);
    std::set<int> all;
    for (const auto& j : inst.jobs()) all.insert(j.id);
    const LaminarTree tree = LaminarTree::for_instance(inst);
    if (hosts < 1) throw AllocationFailure(inst.jobs()[0].id, "residual phase has no hosts");
    out.schedule = schedule_selected(inst, all, tree, AllocationMode::Pairing, forbidden);
  }
  int host = hosts;
  for (const auto* r : own_host) {
    int left = r->length;
    for (int t = r->window.start; t <= r->window.end && left > 0; ++t) {
      if (r->forbidden.count(t)) continue;
      out.schedule.place(r->id, host, t);
      --left;
    }
    out.dedicated.push_back(r->id);
    ++host;
  }
  return out;
}

namespace {

std::vector<TimeWindow> checked_intervals(int horizon) {
  std::vector<TimeWindow> out;
  if (horizon <= 64) {
    for (int a = 1; a <= horizon; ++a) {
      for (int b = a; b <= horizon; ++b) out.push_back({a, b});
    }
    return out;
  }
  const int stride = (horizon + 63) / 64;
  std::vector<int> points;
  for (int p = 1; p <= horizon; p += stride) points.push_back(p);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = i + 1; k < points.size(); ++k) out.push_back({points[i], points[k] - 1});
    out.push_back({points[i], horizon});
  }
  return out;
}

struct IntervalValue {
  Rational ratio;
  bool violated = false;
};

IntervalValue interval_value(std::span<const ResidualJob> residuals, const TimeWindow& w, const Rational& cap) {
  Rational a = 0;
  for (const auto& r : residuals) {
    if (r.length > 0 && w.contains(r.window)) a += r.height * r.length;
  }
  IntervalValue v;
  if (cap > 0) {
    v.ratio = a / cap;
    v.violated = a > cap;
  } else {
    v.violated = a > 0;
  }
  return v;
}

}  // namespace

IntervalStats residual_area_report(std::span<const ResidualJob> residuals, int horizon, const Rational& omega,
                                   int hosts, Execution execution) {
  const std::vector<TimeWindow> intervals = checked_intervals(horizon);
  std::vector<IntervalValue> values(intervals.size());
  const long n = static_cast<long>(intervals.size());
  auto one = [&](long i) {
    values[i] = interval_value(residuals, intervals[i], omega * hosts * intervals[i].size());
  };
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  IntervalStats stats;
  stats.max_ratio = 0;
  for (const auto& v : values) {
    ++stats.checked;
    stats.violations += v.violated;
    if (v.ratio > stats.max_ratio) stats.max_ratio = v.ratio;
  }
  return stats;
}

Rational default_residual_omega(const Rational& lambda) {
  const Rational w = (1 - 4 * lambda) / 8;
  return w > 0 ? w : Rational(1, 16);
}

}  // namespace migsched
