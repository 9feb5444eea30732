#include "migsched/maxt.hpp"

#include <algorithm>
#include <numeric>

namespace migsched {

std::optional<Schedule> edf_schedule(std::span<const Job> jobs, int host) {
  Schedule schedule;
  if (jobs.empty()) return schedule;
  int first = jobs[0].release;
  int last = jobs[0].due;
  for (const auto& j : jobs) {
    first = std::min(first, j.release);
    last = std::max(last, j.due);
  }
  std::vector<int> remaining(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) remaining[i] = jobs[i].length;
  for (int t = first; t <= last; ++t) {
    std::size_t pick = jobs.size();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (remaining[i] == 0 || jobs[i].release > t) continue;
      if (pick == jobs.size() || jobs[i].due < jobs[pick].due ||
          (jobs[i].due == jobs[pick].due && jobs[i].id < jobs[pick].id)) {
        pick = i;
      }
    }
    if (pick != jobs.size()) {
      schedule.place(jobs[pick].id, host, t);
      --remaining[pick];
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].due == t && remaining[i] > 0) return std::nullopt;
    }
  }
  return schedule;
}

namespace {

class SubsetSearch {
 public:
  SubsetSearch(std::vector<Job> jobs, long budget) : jobs_(std::move(jobs)), budget_(budget) {
    suffix_.assign(jobs_.size() + 1, Rational(0));
    for (std::size_t i = jobs_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + jobs_[i].weight;
  }

  void run() {
    std::vector<Job> chosen;
    dfs(0, chosen, 0);
  }

  bool exhausted() const { return nodes_ > budget_; }
  const std::vector<Job>& best() const { return best_; }
  const Rational& best_weight() const { return best_weight_; }

 private:
  void dfs(std::size_t i, std::vector<Job>& chosen, const Rational& weight) {
    if (++nodes_ > budget_) return;
    if (weight > best_weight_) {
      best_weight_ = weight;
      best_ = chosen;
    }
    if (i == jobs_.size() || weight + suffix_[i] <= best_weight_) return;
    chosen.push_back(jobs_[i]);
    if (edf_schedule(chosen)) dfs(i + 1, chosen, weight + jobs_[i].weight);
    chosen.pop_back();
    dfs(i + 1, chosen, weight);
  }

  std::vector<Job> jobs_;
  std::vector<Rational> suffix_;
  long budget_;
  long nodes_ = 0;
  std::vector<Job> best_;
  Rational best_weight_ = 0;
};

}  // namespace

SingleHostResult single_host_throughput(std::span<const Job> jobs, long node_budget) {
  std::vector<Job> positive;
  std::vector<Job> zero;
  for (const auto& j : jobs) (j.weight > 0 ? positive : zero).push_back(j);
  auto by_weight = [](const Job& a, const Job& b) { return a.weight != b.weight ? a.weight > b.weight : a.id < b.id; };
  std::sort(positive.begin(), positive.end(), by_weight);
  std::sort(zero.begin(), zero.end(), by_weight);

  SubsetSearch search(positive, node_budget);
  search.run();
  std::vector<Job> chosen = search.best();
  SingleHostResult result;
  result.exact = !search.exhausted();

  if (!result.exact) {
    std::vector<Job> greedy;
    Rational greedy_weight = 0;
    for (const auto& j : positive) {
      greedy.push_back(j);
      if (edf_schedule(greedy)) {
        greedy_weight += j.weight;
      } else {
        greedy.pop_back();
      }
    }
    if (greedy_weight > search.best_weight()) chosen = greedy;
  }
  for (const auto& j : zero) {
    chosen.push_back(j);
    if (!edf_schedule(chosen)) chosen.pop_back();
  }

  result.schedule = *edf_schedule(chosen);
  for (const auto& j : chosen) {
    result.selected.insert(j.id);
    result.weight += j.weight;
  }
  return result;
}

LargeHeightsResult solve_large_heights_report(const Instance& instance, const Rational& delta, const Rational& eps) {
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  const Rational growth = 1 + eps;

  std::map<int, std::vector<Job>> classes;
  std::map<int, Rational> rounded;
  for (const auto& j : instance.jobs()) {
    const Rational h = j.height();
    if (h < delta) throw std::invalid_argument("job " + std::to_string(j.id) + " is below the height threshold");
    int k = 0;
    Rational level = delta;
    while (level * growth <= h) {
      level *= growth;
      ++k;
    }
    classes[k].push_back(j);
    rounded[k] = level;
  }

  LargeHeightsResult out;
  out.result.path = "large";
  bool have_best = false;
  const int m = instance.hosts();
  for (auto& [k, members] : classes) {
    HeightClassReport report;
    report.k = k;
    report.rounded_height = rounded[k];
    report.budget = static_cast<long>(m) * floor_to_int(Rational(1) / rounded[k]);
    Rational max_height = 0;
    for (const auto& j : members) max_height = rational_max(max_height, j.height());
    report.group = static_cast<int>(floor_to_int(Rational(1) / max_height));

    struct Virtual {
      SingleHostResult run;
      std::size_t index;
    };
    std::vector<Virtual> virtuals;
    std::vector<Job> remaining = members;
    bool exact = true;
    for (long v = 0; v < report.budget && !remaining.empty(); ++v) {
      SingleHostResult run = single_host_throughput(remaining);
      exact = exact && run.exact;
      if (run.selected.empty()) break;
      std::erase_if(remaining, [&run](const Job& j) { return run.selected.count(j.id) > 0; });
      virtuals.push_back({std::move(run), virtuals.size()});
    }

    std::stable_sort(virtuals.begin(), virtuals.end(),
                     [](const Virtual& a, const Virtual& b) { return a.run.weight > b.run.weight; });
    report.kept = std::min<long>(static_cast<long>(virtuals.size()), static_cast<long>(m) * report.group);
    virtuals.resize(report.kept);
    std::sort(virtuals.begin(), virtuals.end(), [](const Virtual& a, const Virtual& b) { return a.index < b.index; });

    MaxTResult candidate;
    candidate.path = "large";
    candidate.exact_subsolver = exact;
    for (std::size_t q = 0; q < virtuals.size(); ++q) {
      candidate.schedule.merge(virtuals[q].run.schedule, static_cast<int>(q) / report.group);
      for (int id : virtuals[q].run.selected) candidate.selected.insert(id);
      candidate.profit += virtuals[q].run.weight;
    }
    report.weight = candidate.profit;
    out.classes.push_back(report);
    if (!have_best || candidate.profit > out.result.profit) {
      out.result = std::move(candidate);
      have_best = true;
    }
  }
  return out;
}

MaxTResult solve_large_heights(const Instance& instance, const Rational& delta, const Rational& eps) {
  return solve_large_heights_report(instance, delta, eps).result;
}

}  // namespace migsched
