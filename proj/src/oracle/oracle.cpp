#include "migsched/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace migsched {

namespace {

struct Item {
  int job;
  const std::vector<Rational>* demand;
};

bool pack(const std::vector<Item>& items, std::size_t next, std::vector<std::vector<Rational>>& loads, int hosts,
          std::vector<int>& where) {
  if (next == items.size()) return true;
  const auto& d = *items[next].demand;
  const int used = static_cast<int>(loads.size());
  for (int b = 0; b <= used && b < hosts; ++b) {
    if (b == used) loads.emplace_back(d.size(), Rational(0));
    bool fits = true;
    for (std::size_t k = 0; k < d.size() && fits; ++k) fits = loads[b][k] + d[k] <= 1;
    if (fits) {
      for (std::size_t k = 0; k < d.size(); ++k) loads[b][k] += d[k];
      where[next] = b;
      if (pack(items, next + 1, loads, hosts, where)) return true;
      for (std::size_t k = 0; k < d.size(); ++k) loads[b][k] -= d[k];
    }
    if (b == used) loads.pop_back();
  }
  return false;
}

/// Host per item, or nullopt. Items are tried largest first.
std::optional<std::vector<int>> pack_items(std::vector<Item> items, int hosts) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&items](std::size_t a, std::size_t b) {
    const auto& da = *items[a].demand;
    const auto& db = *items[b].demand;
    return *std::max_element(da.begin(), da.end()) > *std::max_element(db.begin(), db.end());
  });
  std::vector<Item> sorted;
  for (std::size_t i : order) sorted.push_back(items[i]);
  std::vector<std::vector<Rational>> loads;
  std::vector<int> where(items.size(), -1);
  if (!pack(sorted, 0, loads, hosts, where)) return std::nullopt;
  std::vector<int> out(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = where[i];
  return out;
}

class SlotSearch {
 public:
  SlotSearch(const Instance& instance, std::vector<const Job*> jobs, int hosts, long budget)
      : jobs_(std::move(jobs)), hosts_(hosts), horizon_(instance.horizon()), dim_(instance.dim()), budget_(budget) {}

  std::optional<Schedule> run() {
    std::vector<int> rem;
    for (const Job* j : jobs_) rem.push_back(j->length);
    Schedule schedule;
    if (!search(1, rem, schedule)) return std::nullopt;
    return schedule;
  }

 private:
  bool bounds_ok(int t, const std::vector<int>& rem) const {
    // Per deadline D: remaining area due by D fits into slots t..D.
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      if (rem[i] > 0 && rem[i] > jobs_[i]->due - std::max(t, jobs_[i]->release) + 1) return false;
    }
    for (int D = t; D <= horizon_; ++D) {
      for (int k = 0; k < dim_; ++k) {
        Rational load = 0;
        for (std::size_t i = 0; i < jobs_.size(); ++i) {
          if (rem[i] > 0 && jobs_[i]->due <= D) load += rem[i] * jobs_[i]->demand[k];
        }
        if (load > hosts_ * (D - t + 1)) return false;
      }
    }
    return true;
  }

  bool search(int t, std::vector<int>& rem, Schedule& schedule) {
    if (++nodes_ > budget_) throw OracleRefused("oracle search budget exhausted");
    if (std::all_of(rem.begin(), rem.end(), [](int r) { return r == 0; })) return true;
    if (t > horizon_) return false;
    if (!bounds_ok(t, rem)) return false;
    std::vector<int> key = rem;
    key.push_back(t);
    if (failed_.count(key)) return false;

    std::vector<std::size_t> eligible;
    unsigned forced = 0;
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      const Job& j = *jobs_[i];
      if (rem[i] == 0 || !j.window().contains(t)) continue;
      if (rem[i] == j.due - t + 1) forced |= 1u << eligible.size();
      eligible.push_back(i);
    }
    const unsigned full = (1u << eligible.size()) - 1;

    std::vector<std::optional<std::vector<int>>> packing(full + 1);
    auto items_of = [&](unsigned mask) {
      std::vector<Item> items;
      for (std::size_t b = 0; b < eligible.size(); ++b) {
        if (mask >> b & 1u) items.push_back({jobs_[eligible[b]]->id, &jobs_[eligible[b]]->demand});
      }
      return items;
    };
    for (unsigned mask = 0; mask <= full; ++mask) packing[mask] = pack_items(items_of(mask), hosts_);

    std::vector<unsigned> candidates;
    for (unsigned mask = 0; mask <= full; ++mask) {
      if ((mask & forced) != forced || !packing[mask]) continue;
      bool maximal = true;
      for (std::size_t b = 0; b < eligible.size() && maximal; ++b) {
        if (!(mask >> b & 1u) && packing[mask | 1u << b]) maximal = false;
      }
      if (maximal) candidates.push_back(mask);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](unsigned a, unsigned b) { return std::popcount(a) > std::popcount(b); });

    for (unsigned mask : candidates) {
      for (std::size_t b = 0; b < eligible.size(); ++b) {
        if (mask >> b & 1u) --rem[eligible[b]];
      }
      const bool ok = search(t + 1, rem, schedule);
      for (std::size_t b = 0; b < eligible.size(); ++b) {
        if (mask >> b & 1u) ++rem[eligible[b]];
      }
      if (ok) {
        const auto& where = *packing[mask];
        std::size_t item = 0;
        for (std::size_t b = 0; b < eligible.size(); ++b) {
          if (mask >> b & 1u) schedule.place(jobs_[eligible[b]]->id, where[item++], t);
        }
        return true;
      }
    }
    failed_.insert(std::move(key));
    return false;
  }

  std::vector<const Job*> jobs_;
  int hosts_;
  int horizon_;
  int dim_;
  long budget_;
  long nodes_ = 0;
  std::set<std::vector<int>> failed_;
};

void check_size(const Instance& instance, std::size_t jobs, const OracleLimits& limits) {
  if (static_cast<int>(jobs) > limits.max_jobs) throw OracleRefused("too many jobs for the oracle");
  if (instance.horizon() > limits.max_horizon) throw OracleRefused("horizon too long for the oracle");
}

}  // namespace

std::optional<Schedule> feasible_schedule(const Instance& instance, const std::set<int>& subset, int hosts,
                                          const OracleLimits& limits) {
  check_size(instance, subset.size(), limits);
  std::vector<const Job*> jobs;
  for (int id : subset) jobs.push_back(&instance.job(id));
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job* a, const Job* b) { return area(*a) > area(*b); });
  // Total area bound first: cheap and often decisive.
  for (int k = 0; k < instance.dim(); ++k) {
    Rational load = 0;
    for (const Job* j : jobs) load += j->length * j->demand[k];
    if (load > hosts * instance.horizon()) return std::nullopt;
  }
  if (hosts < 1) {
    if (jobs.empty()) return Schedule{};
    return std::nullopt;
  }
  return SlotSearch(instance, std::move(jobs), hosts, limits.node_budget).run();
}

bool feasible(const Instance& instance, const std::set<int>& subset, int hosts, const OracleLimits& limits) {
  return feasible_schedule(instance, subset, hosts, limits).has_value();
}

ExactMaxT exact_maxt(const Instance& instance, const OracleLimits& limits) {
  check_size(instance, instance.size(), limits);
  if (instance.hosts() > limits.max_hosts) throw OracleRefused("too many hosts for the oracle");
  const std::size_t n = instance.size();
  std::vector<std::pair<Rational, unsigned>> subsets;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Rational w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) w += instance.jobs()[i].weight;
    }
    subsets.push_back({w, mask});
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [w, mask] : subsets) {
    std::set<int> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) ids.insert(instance.jobs()[i].id);
    }
    if (auto s = feasible_schedule(instance, ids, instance.hosts(), limits)) return {ids, w, *s};
  }
  return {};
}

int interval_area_bound(const Instance& instance) {
  if (instance.empty()) return 0;
  long best = 1;
  for (int a = 1; a <= instance.horizon(); ++a) {
    for (int b = a; b <= instance.horizon(); ++b) {
      const TimeWindow w{a, b};
      for (int k = 0; k < instance.dim(); ++k) {
        Rational load = 0;
        for (const auto& j : instance.jobs()) {
          if (w.contains(j.window())) load += j.length * j.demand[k];
        }
        best = std::max<long>(best, ceil_to_int(load / w.size()));
      }
    }
  }
  return static_cast<int>(best);
}

int exact_minr(const Instance& instance, const OracleLimits& limits) {
  check_size(instance, instance.size(), limits);
  if (instance.empty()) return 0;
  std::set<int> all;
  for (const auto& j : instance.jobs()) all.insert(j.id);
  for (int m = interval_area_bound(instance); m <= static_cast<int>(instance.size()); ++m) {
    if (feasible(instance, all, m, limits)) return m;
  }
  // n hosts always suffice: every job alone on its own host.
  throw std::logic_error("exact_minr: no feasible host count up to n");
}

namespace {

struct Constraint {
  std::vector<Rational> coef;
  Rational rhs;
};

// Solves the square system; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace

VertexOptimum lp_vertex_enumeration(const lp::LinearProgram& program) {
  const std::size_t n = program.num_variables();
  for (const auto& v : program.variables()) {
    if (!v.upper) throw std::invalid_argument("vertex enumeration needs finite upper bounds");
  }
  std::vector<Constraint> hyperplanes;
  for (const auto& row : program.rows()) {
    Constraint c{std::vector<Rational>(n), row.rhs};
    for (const auto& t : row.terms) c.coef[t.var] += t.coef;
    hyperplanes.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < n; ++j) {
    Constraint lo{std::vector<Rational>(n), program.variables()[j].lower};
    lo.coef[j] = 1;
    Constraint hi{std::vector<Rational>(n), *program.variables()[j].upper};
    hi.coef[j] = 1;
    hyperplanes.push_back(std::move(lo));
    hyperplanes.push_back(std::move(hi));
  }

  VertexOptimum best;
  const bool maximize = program.sense() == lp::Sense::Maximize;
  const std::size_t total = hyperplanes.size();
  if (n == 0) {
    if (program.is_feasible({})) best = {lp::Status::Optimal, 0, {}};
    return best;
  }
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (std::size_t i : pick) {
      a.push_back(hyperplanes[i].coef);
      b.push_back(hyperplanes[i].rhs);
    }
    if (auto x = solve_square(std::move(a), std::move(b)); x && program.is_feasible(*x)) {
      const Rational value = program.evaluate(*x);
      if (best.status != lp::Status::Optimal || (maximize ? value > best.objective : value < best.objective)) {
        best = {lp::Status::Optimal, value, *x};
      }
    }
    // Next n-combination in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == total - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace migsched
