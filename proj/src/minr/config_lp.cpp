#include "migsched/lp.hpp"
#include "migsched/minr.hpp"

#include <algorithm>
#include <numeric>

namespace migsched {

bool is_valid_configuration(const Instance& instance, const Configuration& config) {
  std::vector<Rational> load(static_cast<std::size_t>(instance.dim()));
  for (int id : config.jobs) {
    if (!instance.index_of(id)) return false;
    const Job& j = instance.job(id);
    if (!j.window().contains(config.slot)) return false;
    for (std::size_t k = 0; k < load.size(); ++k) load[k] += j.demand[k];
  }
  for (const auto& l : load) {
    if (l > 1) return false;
  }
  return std::adjacent_find(config.jobs.begin(), config.jobs.end(), std::greater_equal<>()) == config.jobs.end();
}

std::string check_config_lp(const Instance& instance, const ConfigLpSolution& solution) {
  std::map<int, Rational> per_slot;
  std::map<std::pair<int, int>, Rational> per_pair;
  std::map<int, Rational> per_job;
  for (const auto& col : solution.columns) {
    if (col.value < 0) return "negative column value";
    if (!is_valid_configuration(instance, col.config)) return "invalid configuration at slot " + std::to_string(col.config.slot);
    per_slot[col.config.slot] += col.value;
    for (int id : col.config.jobs) {
      per_pair[{id, col.config.slot}] += col.value;
      per_job[id] += col.value;
    }
  }
  for (const auto& [t, v] : per_slot) {
    if (v > solution.m_star) return "slot " + std::to_string(t) + " exceeds m";
  }
  for (const auto& [key, v] : per_pair) {
    if (v > 1) return "job " + std::to_string(key.first) + " above 1 at slot " + std::to_string(key.second);
  }
  for (const auto& j : instance.jobs()) {
    if (per_job[j.id] < j.length) return "job " + std::to_string(j.id) + " under-covered";
  }
  return {};
}

namespace {

class BranchAndBound {
 public:
  explicit BranchAndBound(std::vector<KnapsackItem> items) : items_(std::move(items)) {
    dims_ = items_.empty() ? 0 : items_[0].size.size();
    suffix_.assign(items_.size() + 1, Rational(0));
    for (std::size_t i = items_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + items_[i].profit;
    by_ratio_.resize(dims_);
    for (std::size_t k = 0; k < dims_; ++k) {
      auto& order = by_ratio_[k];
      order.resize(items_.size());
      std::iota(order.begin(), order.end(), 0);
      // Zero sizes first, then profit / size descending.
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Rational& sa = items_[a].size[k];
        const Rational& sb = items_[b].size[k];
        if (sa == 0 || sb == 0) return sa == 0 && sb != 0;
        return items_[a].profit * sb > items_[b].profit * sa;
      });
    }
  }

  KnapsackResult run() {
    std::vector<Rational> cap(dims_, Rational(1));
    dfs(0, cap, Rational(0));
    KnapsackResult r;
    for (std::size_t i : best_) r.ids.push_back(items_[i].id);
    std::sort(r.ids.begin(), r.ids.end());
    r.value = best_value_;
    return r;
  }

 private:
  Rational bound(std::size_t from, const std::vector<Rational>& cap) const {
    Rational best = suffix_[from];
    for (std::size_t k = 0; k < dims_; ++k) {
      Rational room = cap[k];
      Rational total = 0;
      for (std::size_t i : by_ratio_[k]) {
        if (i < from) continue;
        const auto& it = items_[i];
        if (it.size[k] <= room) {
          total += it.profit;
          room -= it.size[k];
        } else {
          total += it.profit * room / it.size[k];
          break;
        }
      }
      if (total < best) best = total;
    }
    return best;
  }

  void dfs(std::size_t i, std::vector<Rational>& cap, const Rational& value) {
    if (value > best_value_) {
      best_value_ = value;
      best_ = current_;
    }
    if (i == items_.size()) return;
    if (value + bound(i, cap) <= best_value_) return;
    const auto& it = items_[i];
    bool fits = true;
    for (std::size_t k = 0; k < dims_; ++k) fits = fits && it.size[k] <= cap[k];
    if (fits) {
      for (std::size_t k = 0; k < dims_; ++k) cap[k] -= it.size[k];
      current_.push_back(i);
      dfs(i + 1, cap, value + it.profit);
      current_.pop_back();
      for (std::size_t k = 0; k < dims_; ++k) cap[k] += it.size[k];
    }
    dfs(i + 1, cap, value);
  }

  std::vector<KnapsackItem> items_;
  std::size_t dims_ = 0;
  std::vector<Rational> suffix_;
  std::vector<std::vector<std::size_t>> by_ratio_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  Rational best_value_ = 0;
};

bool fits_alone(const KnapsackItem& item) {
  return std::all_of(item.size.begin(), item.size.end(), [](const Rational& s) { return s <= 1; });
}

}  // namespace

KnapsackResult solve_knapsack(std::span<const KnapsackItem> items) {
  std::vector<KnapsackItem> useful;
  for (const auto& it : items) {
    if (it.profit > 0 && fits_alone(it)) useful.push_back(it);
  }
  std::stable_sort(useful.begin(), useful.end(), [](const KnapsackItem& a, const KnapsackItem& b) {
    return a.profit > b.profit || (a.profit == b.profit && a.id < b.id);
  });
  return BranchAndBound(std::move(useful)).run();
}

KnapsackResult knapsack_exhaustive(std::span<const KnapsackItem> items) {
  if (items.size() > 20) throw std::invalid_argument("knapsack_exhaustive: more than 20 items");
  const std::size_t dims = items.empty() ? 0 : items[0].size.size();
  KnapsackResult best;
  best.value = 0;
  for (std::uint32_t mask = 0; mask < (1u << items.size()); ++mask) {
    Rational value = 0;
    std::vector<Rational> load(dims);
    bool ok = true;
    for (std::size_t i = 0; i < items.size() && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      value += items[i].profit;
      for (std::size_t k = 0; k < dims; ++k) {
        load[k] += items[i].size[k];
        ok = ok && load[k] <= 1;
      }
    }
    if (ok && value > best.value) {
      best.value = value;
      best.ids.clear();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (mask >> i & 1u) best.ids.push_back(items[i].id);
      }
    }
  }
  std::sort(best.ids.begin(), best.ids.end());
  return best;
}

PricedColumn price_column(const PricingProblem& problem) {
  KnapsackResult k = solve_knapsack(problem.items);
  PricedColumn c;
  c.config.slot = problem.slot;
  c.config.jobs = std::move(k.ids);
  c.value = std::move(k.value);
  c.improving = c.value > problem.gamma;
  return c;
}

std::vector<PricedColumn> price_all(std::span<const PricingProblem> problems, Execution execution) {
  std::vector<PricedColumn> out(problems.size());
  const long n = static_cast<long>(problems.size());
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = price_column(problems[i]);
  } else {
    for (long i = 0; i < n; ++i) out[i] = price_column(problems[i]);
  }
  return out;
}

ConfigLpSolution solve_config_lp(const Instance& instance, const ConfigLpOptions& options) {
  for (const auto& j : instance.jobs()) {
    if (j.length > j.window().size()) throw std::invalid_argument("job " + std::to_string(j.id) + ": p > |window|");
  }
  const int horizon = instance.horizon();
  lp::LinearProgram program(lp::Sense::Minimize);
  const int m_var = program.add_variable(1);
  std::vector<int> slot_row(static_cast<std::size_t>(horizon) + 1);
  for (int t = 1; t <= horizon; ++t) slot_row[t] = program.add_row({{m_var, Rational(1)}}, lp::Relation::GreaterEqual, 0);
  std::map<std::pair<int, int>, int> pair_row;
  std::map<int, int> job_row;
  for (const auto& j : instance.jobs()) {
    for (int t = j.release; t <= j.due; ++t) pair_row[{j.id, t}] = program.add_row({}, lp::Relation::LessEqual, 1);
  }
  for (const auto& j : instance.jobs()) job_row[j.id] = program.add_row({}, lp::Relation::GreaterEqual, j.length);

  auto entries_of = [&](const Configuration& c) {
    std::vector<std::pair<int, Rational>> e{{slot_row[c.slot], Rational(-1)}};
    for (int id : c.jobs) {
      e.push_back({pair_row.at({id, c.slot}), Rational(1)});
      e.push_back({job_row.at(id), Rational(1)});
    }
    return e;
  };

  std::vector<Configuration> configs;
  std::set<Configuration> known;
  for (const auto& j : instance.jobs()) {
    for (int t = j.release; t <= j.due; ++t) {
      Configuration c{t, {j.id}};
      program.add_column(0, entries_of(c));
      known.insert(c);
      configs.push_back(std::move(c));
    }
  }

  lp::Simplex simplex(std::move(program));
  ConfigLpSolution out;
  while (true) {
    const lp::LpSolution& s = simplex.solve();
    if (s.status != lp::Status::Optimal) throw std::logic_error("configuration LP: master not optimal");
    ++out.rounds;
    out.pivots = simplex.total_iterations();
    out.m_star = s.objective;
    out.m_int = static_cast<int>(ceil_to_int(s.objective));
    out.columns.clear();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const Rational& v = s.primal[i + 1];
      if (v > 0) out.columns.push_back({configs[i], v});
    }
    if (options.on_round) options.on_round(out);

    std::vector<PricingProblem> problems;
    for (int t = 1; t <= horizon; ++t) {
      PricingProblem p;
      p.slot = t;
      p.gamma = s.duals[slot_row[t]];
      for (const auto& j : instance.jobs()) {
        if (!j.window().contains(t)) continue;
        Rational profit = s.duals[job_row[j.id]] + s.duals[pair_row[{j.id, t}]];
        if (profit > 0) p.items.push_back({j.id, std::move(profit), j.demand});
      }
      if (!p.items.empty()) problems.push_back(std::move(p));
    }
    auto priced = price_all(problems, options.pricing);
    if (options.on_price) options.on_price(problems, priced);
    bool added = false;
    for (auto& col : priced) {
      if (!col.improving) continue;
      if (!known.insert(col.config).second) throw std::logic_error("configuration LP: priced an existing column");
      simplex.add_column(0, entries_of(col.config));
      configs.push_back(std::move(col.config));
      ++out.generated;
      added = true;
    }
    if (!added) return out;
  }
}

}  // namespace migsched
