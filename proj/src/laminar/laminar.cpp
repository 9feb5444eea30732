#include "migsched/laminar.hpp"

#include <algorithm>
#include <stdexcept>

namespace migsched {

bool is_laminar(std::span<const TimeWindow> windows) {
  std::vector<TimeWindow> sorted(windows.begin(), windows.end());
  // Sort by start, longer first; then a stack sweep suffices.
  std::sort(sorted.begin(), sorted.end(), [](const TimeWindow& a, const TimeWindow& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  std::vector<TimeWindow> stack;
  for (const auto& w : sorted) {
    while (!stack.empty() && stack.back().end < w.start) stack.pop_back();
    if (!stack.empty() && !stack.back().contains(w)) return false;
    stack.push_back(w);
  }
  return true;
}

int LaminarTree::add_node(TimeWindow interval, int parent) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back({interval, parent, {}, {}});
  lookup_.emplace(interval, index);
  if (parent < 0) {
    roots_.push_back(index);
  } else {
    nodes_[parent].children.push_back(index);
  }
  return index;
}

LaminarTree LaminarTree::binary(int horizon) {
  if (horizon < 1) throw std::invalid_argument("build_tree needs T >= 1");
  LaminarTree tree;
  tree.nodes_.reserve(2 * static_cast<std::size_t>(horizon));
  std::vector<int> frontier{tree.add_node({1, horizon}, -1)};
  for (std::size_t next = 0; next < frontier.size(); ++next) {
    const int index = frontier[next];
    const TimeWindow w = tree.nodes_[index].interval;
    if (w.start == w.end) continue;
    const int mid = (w.start + w.end) / 2;
    frontier.push_back(tree.add_node({w.start, mid}, index));
    frontier.push_back(tree.add_node({mid + 1, w.end}, index));
  }
  return tree;
}

LaminarTree LaminarTree::from_windows(std::span<const TimeWindow> windows) {
  if (!is_laminar(windows)) throw std::invalid_argument("window family is not laminar");
  std::vector<TimeWindow> sorted(windows.begin(), windows.end());
  std::sort(sorted.begin(), sorted.end(), [](const TimeWindow& a, const TimeWindow& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  LaminarTree tree;
  std::vector<int> stack;
  for (const auto& w : sorted) {
    while (!stack.empty() && !tree.nodes_[stack.back()].interval.contains(w)) stack.pop_back();
    stack.push_back(tree.add_node(w, stack.empty() ? -1 : stack.back()));
  }
  return tree;
}

LaminarTree LaminarTree::for_instance(const Instance& instance) {
  std::vector<TimeWindow> windows;
  windows.reserve(instance.size());
  for (const auto& j : instance.jobs()) windows.push_back(j.window());
  LaminarTree tree = from_windows(windows);
  tree.attach_jobs(instance);
  return tree;
}

int LaminarTree::find(const TimeWindow& window) const {
  auto it = lookup_.find(window);
  return it == lookup_.end() ? -1 : it->second;
}

std::vector<int> LaminarTree::post_order() const {
  std::vector<int> order;
  order.reserve(nodes_.size());
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root : roots_) {
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [index, child] = stack.back();
      const auto& kids = nodes_[index].children;
      if (child < kids.size()) {
        const int next = kids[child++];
        stack.push_back({next, 0});
      } else {
        order.push_back(index);
        stack.pop_back();
      }
    }
  }
  return order;
}

void LaminarTree::attach_jobs(const Instance& instance) {
  for (auto& n : nodes_) n.jobs.clear();
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const int index = find(instance.jobs()[i].window());
    if (index < 0) {
      throw std::invalid_argument("job " + std::to_string(instance.jobs()[i].id) + " window " +
                                  to_string(instance.jobs()[i].window()) + " is not a tree node");
    }
    nodes_[index].jobs.push_back(static_cast<int>(i));
  }
  for (auto& n : nodes_) {
    std::sort(n.jobs.begin(), n.jobs.end(), [&instance](int a, int b) {
      return instance.jobs()[a].id < instance.jobs()[b].id;
    });
  }
}

LaminarTree build_tree(int horizon) { return LaminarTree::binary(horizon); }

TimeWindow map_window(const LaminarTree& tree, const TimeWindow& window) {
  // Only nodes intersecting the window can contain a candidate; a contained
  // node dominates its whole subtree, so the descent stops there.
  bool found = false;
  TimeWindow best{};
  std::vector<int> stack(tree.roots().rbegin(), tree.roots().rend());
  while (!stack.empty()) {
    const int index = stack.back();
    stack.pop_back();
    const auto& n = tree.node(index);
    if (!n.interval.intersects(window)) continue;
    if (window.contains(n.interval)) {
      const int size = n.interval.size();
      if (!found || size > best.size() || (size == best.size() && n.interval.start > best.start)) {
        best = n.interval;
        found = true;
      }
      continue;
    }
    for (int child : n.children) stack.push_back(child);
  }
  if (!found) {
    throw std::invalid_argument("no tree interval inside " + to_string(window));
  }
  return best;
}

LaminarMapping build_mapping(const LaminarTree& tree, std::span<const TimeWindow> windows) {
  LaminarMapping mapping;
  for (const auto& w : windows) {
    if (mapping.forward.count(w)) continue;
    const TimeWindow image = map_window(tree, w);
    mapping.forward.emplace(w, image);
    auto [it, fresh] = mapping.aggregate.emplace(image, w);
    if (!fresh) {
      it->second.start = std::min(it->second.start, w.start);
      it->second.end = std::max(it->second.end, w.end);
    }
  }
  return mapping;
}

TransformResult transform_instance(const Instance& instance) {
  std::vector<TimeWindow> windows;
  for (const auto& j : instance.jobs()) windows.push_back(j.window());
  const int horizon = std::max(1, instance.horizon());
  const LaminarTree tree = build_tree(horizon);

  TransformResult result;
  result.mapping = build_mapping(tree, windows);
  std::vector<Job> mapped;
  for (const auto& j : instance.jobs()) {
    const TimeWindow image = result.mapping.forward.at(j.window());
    if (j.length > image.size()) {
      result.untransformable.push_back(j.id);
      continue;
    }
    Job copy = j;
    copy.release = image.start;
    copy.due = image.end;
    mapped.push_back(std::move(copy));
  }
  result.laminar = Instance(std::move(mapped), instance.hosts(), instance.dim(), horizon);
  return result;
}

}  // namespace migsched
