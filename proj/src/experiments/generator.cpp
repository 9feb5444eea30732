#include "migsched/generator.hpp"

#include "migsched/laminar.hpp"
#include "migsched/rng.hpp"

#include <stdexcept>

namespace migsched {

Instance generate(const GenSpec& spec) {
  if (spec.n < 0 || spec.hosts < 1 || spec.dim < 1 || spec.horizon < 1) {
    throw std::invalid_argument("gen: n >= 0, hosts, dim and horizon >= 1 required");
  }
  if (spec.lambda <= 0 || spec.lambda > 1) throw std::invalid_argument("gen: lambda must lie in (0, 1]");
  if (spec.demand_min <= 0 || spec.demand_max > 1 || spec.demand_min > spec.demand_max) {
    throw std::invalid_argument("gen: demand bounds must satisfy 0 < min <= max <= 1");
  }
  if (spec.granularity < 1) throw std::invalid_argument("gen: granularity must be positive");
  const long num_lo = ceil_to_int(spec.demand_min * spec.granularity);
  const long num_hi = floor_to_int(spec.demand_max * spec.granularity);
  if (num_lo > num_hi) throw std::invalid_argument("gen: no multiple of 1/granularity inside the demand bounds");

  // Admissible windows: size >= min_window and room for at least one slot of work.
  auto admissible = [&spec](const TimeWindow& w) {
    return w.size() >= spec.min_window && spec.lambda * w.size() >= 1;
  };
  std::vector<TimeWindow> tree_nodes;
  if (spec.laminar) {
    const LaminarTree tree = build_tree(spec.horizon);
    for (const auto& node : tree.nodes()) {
      if (admissible(node.interval)) tree_nodes.push_back(node.interval);
    }
    if (tree_nodes.empty() && spec.n > 0) throw std::invalid_argument("gen: no tree interval admits a job");
  } else {
    const int smallest = std::max<long>(spec.min_window, ceil_to_int(Rational(1) / spec.lambda));
    if (smallest > spec.horizon && spec.n > 0) throw std::invalid_argument("gen: lambda * T < 1 or min_window > T");
  }

  Rng rng(spec.seed);
  std::vector<Job> jobs;
  for (int i = 0; i < spec.n; ++i) {
    Job j;
    j.id = i + 1;
    TimeWindow w;
    if (spec.laminar) {
      w = tree_nodes[rng.uniform_int(0, static_cast<std::int64_t>(tree_nodes.size()) - 1)];
    } else {
      const int smallest = std::max<long>(spec.min_window, ceil_to_int(Rational(1) / spec.lambda));
      const int size = static_cast<int>(rng.uniform_int(smallest, spec.horizon));
      const int start = static_cast<int>(rng.uniform_int(1, spec.horizon - size + 1));
      w = {start, start + size - 1};
    }
    j.release = w.start;
    j.due = w.end;
    j.length = static_cast<int>(rng.uniform_int(1, floor_to_int(spec.lambda * w.size())));
    for (int k = 0; k < spec.dim; ++k) {
      j.demand.push_back(Rational(rng.uniform_int(num_lo, num_hi), spec.granularity));
      j.demand.back().canonicalize();
    }
    j.weight = spec.weights == WeightMode::Area ? area(j) : Rational(rng.uniform_int(1, spec.max_weight));
    jobs.push_back(std::move(j));
  }
  return Instance(std::move(jobs), spec.hosts, spec.dim, spec.horizon);
}

}  // namespace migsched
