#include "migsched/maxt.hpp"
#include "migsched/minr.hpp"
#include "migsched/rng.hpp"

#include <algorithm>
#include <cmath>

namespace migsched {

namespace {

double log2_guarded(int dim) { return std::max(1.0, std::log2(static_cast<double>(dim))); }

// |chi_j| >= (1/m) theta d^2 log d log(T / sqrt(eps)) for every job.
bool large_windows(const Instance& instance, const MinRParams& params, int m_int) {
  if (m_int < 1) return true;
  const double d = instance.dim();
  const double need = to_double(params.theta) * d * d * log2_guarded(instance.dim()) *
                      std::log2(instance.horizon() / std::sqrt(to_double(params.epsilon))) / m_int;
  return std::all_of(instance.jobs().begin(), instance.jobs().end(),
                     [need](const Job& j) { return j.window().size() >= need; });
}

// Phase-1 placements: draw i runs on host i. A job keeps at most p_j slots.
Schedule sampled_schedule(const Instance& instance, std::span<const SampledSlot> chosen) {
  std::map<int, int> left;
  for (const auto& j : instance.jobs()) left[j.id] = j.length;
  Schedule s;
  for (const auto& slot : chosen) {
    for (std::size_t i = 0; i < slot.draws.size(); ++i) {
      for (int id : slot.draws[i]) {
        if (left[id] > 0) {
          s.place(id, static_cast<int>(i), slot.slot);
          --left[id];
        }
      }
    }
  }
  return s;
}

}  // namespace

MinRResult solve_minr(const Instance& instance, const MinRParams& params, std::uint64_t seed) {
  if (params.c <= 0 || params.epsilon <= 0 || params.epsilon >= 1 || params.max_retries < 1) {
    throw std::invalid_argument("minr: c > 0, epsilon in (0, 1) and max_retries >= 1 required");
  }
  MinRResult result;
  result.final_c = params.c;
  if (instance.empty()) {
    result.residual_empty = true;
    result.window_condition = true;
    return result;
  }
  ConfigLpOptions lp_options;
  lp_options.pricing = params.execution;
  const ConfigLpSolution lp = solve_config_lp(instance, lp_options);
  result.m_star = lp.m_star;
  result.m_int = lp.m_int;
  result.m2 = lp.m_int;
  result.window_condition = large_windows(instance, params, lp.m_int);

  const Rational omega = params.omega.value_or(default_residual_omega(slackness(instance)));
  const LaminarTree tree = build_tree(instance.horizon());
  Rational c = params.c;
  std::uint64_t counter = 0;
  for (int level = 0; level <= params.max_escalations; ++level) {
    const int m1 = sample_draws(c, lp.m_int, instance.dim());
    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
      const auto chosen = sample_configurations(instance, lp, m1, derive_seed(seed, counter++));
      const auto residuals = build_residual(instance, chosen, tree);
      ResidualSchedule phase2;
      try {
        phase2 = schedule_residual(residuals, lp.m_int, instance.horizon());
      } catch (const AllocationFailure&) {
        ++result.retries;
        continue;
      }
      result.schedule = sampled_schedule(instance, chosen);
      result.schedule.merge(phase2.schedule, m1);
      result.schedule.normalize();
      result.m1 = m1;
      result.dedicated = static_cast<int>(phase2.dedicated.size());
      result.hosts_used = m1 + lp.m_int + result.dedicated;
      result.final_c = c;
      result.residual_empty = std::all_of(residuals.begin(), residuals.end(),
                                          [](const ResidualJob& r) { return r.length == 0; });
      result.residual_area = residual_area_report(residuals, instance.horizon(), omega, lp.m_int, params.execution);
      return result;
    }
    if (level < params.max_escalations) {
      ++result.escalations;
      c += 1;
    }
  }
  throw std::runtime_error("minr: residual scheduling failed after every retry and escalation");
}

int log_star(double x) {
  int k = 0;
  while (x > 1) {
    x = std::log2(x);
    ++k;
  }
  return k;
}

PsiTable psi_table(long horizon, int dim, double theta) {
  if (horizon < 1 || dim < 1 || theta <= 0) throw std::invalid_argument("psi: T, d >= 1 and theta > 0 required");
  PsiTable t;
  t.gamma = theta * dim * dim * log2_guarded(dim);
  t.psi.push_back(0);
  const double first = 4 * std::ceil(t.gamma * t.gamma);
  t.psi.push_back(first >= static_cast<double>(horizon) ? horizon : static_cast<long>(first));
  while (t.psi.back() < horizon) {
    const long prev = t.psi.back();
    const double e = prev / (2 * t.gamma);
    long next = e >= 62 ? horizon : std::min<long>(horizon, static_cast<long>(std::floor(std::exp2(e))));
    if (next <= prev) next = horizon;
    t.psi.push_back(next);
  }
  t.kappa = static_cast<int>(t.psi.size()) - 1;
  return t;
}

namespace {

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

std::vector<Slab> partition_by_window(const Instance& instance, const PsiTable& table) {
  const long horizon = instance.horizon();
  std::map<std::tuple<int, bool, long>, Slab> slabs;
  for (const auto& j : instance.jobs()) {
    const long size = j.window().size();
    int w = 0;
    while (w + 1 < static_cast<int>(table.psi.size()) && size > table.psi[w + 1]) ++w;
    const long len = table.psi[w + 1];
    const long width = 2 * len;
    // Odd slabs start at (2i+1) len + 1, even slabs at 2i len + 1.
    const long odd_a = floor_div(j.release - 1 - len, width);
    const long odd_b = floor_div(j.due - 1 - len, width);
    const long even_a = (j.release - 1) / width;
    const long even_b = (j.due - 1) / width;
    const bool odd = odd_a == odd_b;
    if (!odd && even_a != even_b) throw std::logic_error("partition: window fits neither slab family");
    const long index = odd ? odd_a : even_a;
    auto& slab = slabs[{w, odd, index}];
    if (slab.jobs.empty()) {
      slab.range = w;
      slab.odd = odd;
      const long start = odd ? (2 * index + 1) * len + 1 : 2 * index * len + 1;
      slab.span = {static_cast<int>(std::max(1L, start)), static_cast<int>(std::min(horizon, start + width - 1))};
    }
    slab.jobs.push_back(j.id);
  }
  std::vector<Slab> out;
  for (auto& [key, slab] : slabs) out.push_back(std::move(slab));
  return out;
}

PartitionResult solve_minr_partitioned(const Instance& instance, const MinRParams& params, std::uint64_t seed) {
  PartitionResult result;
  result.table = psi_table(std::max(instance.horizon(), 1), instance.dim(), to_double(params.theta));
  result.slabs = partition_by_window(instance, result.table);

  std::vector<MinRResult> solved;
  for (std::size_t i = 0; i < result.slabs.size(); ++i) {
    const Slab& slab = result.slabs[i];
    std::vector<Job> jobs;
    for (int id : slab.jobs) {
      Job j = instance.job(id);
      j.release -= slab.span.start - 1;
      j.due -= slab.span.start - 1;
      jobs.push_back(std::move(j));
    }
    const Instance sub(std::move(jobs), 1, instance.dim(), slab.span.size());
    solved.push_back(solve_minr(sub, params, derive_seed(seed, i)));
    result.slab_hosts.push_back(solved.back().hosts_used);
  }

  // One pool per (range, family); slabs of a family are time-disjoint.
  std::map<std::pair<int, bool>, int> pool;
  for (std::size_t i = 0; i < result.slabs.size(); ++i) {
    auto& p = pool[{result.slabs[i].range, result.slabs[i].odd}];
    p = std::max(p, solved[i].hosts_used);
  }
  std::map<std::pair<int, bool>, int> offset;
  for (const auto& [key, size] : pool) {
    offset[key] = result.hosts_used;
    result.hosts_used += size;
  }
  for (std::size_t i = 0; i < result.slabs.size(); ++i) {
    const Slab& slab = result.slabs[i];
    const int host0 = offset[{slab.range, slab.odd}];
    for (const auto& [id, ps] : solved[i].schedule.placements()) {
      for (const auto& p : ps) result.schedule.place(id, p.host + host0, p.slot + slab.span.start - 1);
    }
  }
  result.schedule.normalize();
  return result;
}

}  // namespace migsched
