#include "migsched/maxt.hpp"

#include <algorithm>

namespace migsched {

namespace {

Instance pick(const Instance& instance, auto&& keep) {
  std::vector<Job> jobs;
  for (const auto& j : instance.jobs()) {
    if (keep(j)) jobs.push_back(j);
  }
  return instance.with_jobs(std::move(jobs));
}

MaxTResult lp_path(const Instance& laminar, const Rational& omega, AllocationMode mode, const char* name) {
  MaxTResult r;
  r.path = name;
  r.omega = omega;
  if (laminar.empty()) {
    r.lp_value = Rational(0);
    return r;
  }
  const LaminarTree tree = LaminarTree::for_instance(laminar);
  const FractionalSelection x = solve_relaxation(laminar, omega);
  r.lp_value = x.objective;
  r.selected = round_selection(laminar, tree, x);
  r.schedule = schedule_selected(laminar, r.selected, tree, mode);
  r.profit = total_weight(laminar, r.selected);
  return r;
}

// lambda may reach 1 here: the general path feeds in the measured slackness
// of the mapped instance.
MaxTResult laminar_core(const Instance& instance, const Rational& lambda, LaminarVariant variant,
                        std::optional<Rational> omega) {
  const int m = instance.hosts();
  if (variant == LaminarVariant::Pairing) {
    const Rational w = omega.value_or(omega_pairing(m, lambda));
    if (w > 0) return lp_path(instance, w, AllocationMode::Pairing, "pairing");
  }

  const Rational a = alpha_of(m, lambda);
  const Instance small = pick(instance, [&a](const Job& j) { return j.height() <= a; });
  const Instance large = pick(instance, [&a](const Job& j) { return j.height() > a; });

  MaxTResult best = lp_path(small, omega_split(m, lambda), AllocationMode::Smallfit, "small");
  if (!large.empty()) {
    Rational delta = a;
    if (delta <= 0) {
      delta = 1;
      for (const auto& j : large.jobs()) delta = rational_min(delta, j.height());
    }
    MaxTResult big = solve_large_heights(large, delta);
    if (big.profit > best.profit) best = std::move(big);
  }
  return best;
}

void check_lambda(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("lambda must lie in (0, 1)");
}

}  // namespace

MaxTResult solve_maxt_laminar(const Instance& instance, const Rational& lambda, LaminarVariant variant,
                              std::optional<Rational> omega) {
  check_lambda(lambda);
  std::vector<TimeWindow> windows;
  for (const auto& j : instance.jobs()) windows.push_back(j.window());
  if (!is_laminar(windows)) throw std::invalid_argument("instance windows are not laminar");
  return laminar_core(instance, lambda, variant, omega);
}

MaxTResult solve_maxt_general(const Instance& instance, const Rational& lambda, LaminarVariant variant,
                              std::optional<Rational> omega) {
  check_lambda(lambda);
  TransformResult t = transform_instance(instance);
  const Rational lambda_l = slackness(t.laminar);
  MaxTResult r;
  if (variant == LaminarVariant::Pairing) {
    const Rational w =
        omega.value_or(Rational(1, 2) - 4 * lambda * (Rational(1, 2) + Rational(1, instance.hosts())));
    r = laminar_core(t.laminar, lambda_l, LaminarVariant::Pairing, w);
  } else {
    r = laminar_core(t.laminar, lambda_l, LaminarVariant::Split, omega);
  }
  r.excluded = std::move(t.untransformable);
  return r;
}

MaxTResult solve_maxt_logn(const Instance& instance) {
  MaxTResult tiny;
  tiny.path = "tiny";
  if (instance.empty()) return tiny;
  const Rational delta(1, static_cast<long>(instance.size()));
  const Instance large = pick(instance, [&delta](const Job& j) { return j.height() >= delta; });
  for (const auto& j : instance.jobs()) {
    if (j.height() >= delta) continue;
    for (int t = j.release; t < j.release + j.length; ++t) tiny.schedule.place(j.id, 0, t);
    tiny.selected.insert(j.id);
    tiny.profit += j.weight;
  }
  if (large.empty()) return tiny;
  MaxTResult big = solve_large_heights(large, delta);
  return big.profit >= tiny.profit ? big : tiny;
}

bool is_long(const Job& job, const Rational& lambda) { return lambda * job.window().size() < job.length; }

MaxTResult utilization_greedy(const Instance& instance) {
  MaxTResult r;
  r.path = "greedy";
  std::vector<const Job*> order;
  for (const auto& j : instance.jobs()) order.push_back(&j);
  std::stable_sort(order.begin(), order.end(), [](const Job* a, const Job* b) {
    return a->window().size() != b->window().size() ? a->window().size() > b->window().size() : a->id < b->id;
  });

  const int m = instance.hosts();
  BinState bins(m, instance.horizon());
  for (const Job* j : order) {
    const Rational s = j->height();
    const Rational limit = 1 - s;
    std::vector<Placement> good;
    for (int t = j->release; t <= j->due && static_cast<int>(good.size()) < j->length; ++t) {
      for (int h = 0; h < m; ++h) {
        if (bins.load(h, t) < limit) {
          good.push_back({h, t});
          break;
        }
      }
    }
    if (static_cast<int>(good.size()) < j->length) continue;
    for (const auto& p : good) {
      bins.add(j->id, s, p);
      r.schedule.place(j->id, p);
    }
    r.selected.insert(j->id);
    r.profit += j->weight;
  }
  return r;
}

MaxTResult solve_utilization(const Instance& instance, const Rational& lambda) {
  check_lambda(lambda);
  std::vector<Job> jobs = instance.jobs();
  for (auto& j : jobs) j.weight = area(j);
  const Instance util = instance.with_jobs(std::move(jobs));
  const Rational a = alpha_of(util.hosts(), lambda);

  const Instance shorts = pick(util, [&lambda](const Job& j) { return !is_long(j, lambda); });
  const Instance low = pick(util, [&](const Job& j) { return is_long(j, lambda) && j.height() <= a; });
  const Instance high = pick(util, [&](const Job& j) { return is_long(j, lambda) && j.height() > a; });

  MaxTResult best;
  best.path = "short";
  if (!shorts.empty()) {
    best = solve_maxt_general(shorts, lambda);
    best.path = "short-" + best.path;
  }
  if (!low.empty()) {
    MaxTResult g = utilization_greedy(low);
    if (g.profit > best.profit) best = std::move(g);
  }
  if (!high.empty()) {
    MaxTResult big = solve_large_heights(high, a);
    big.path = "long-large";
    if (big.profit > best.profit) best = std::move(big);
  }
  return best;
}

}  // namespace migsched
