#pragma once

#include "migsched/core.hpp"

#include <map>
#include <span>
#include <vector>

namespace migsched {

/// True iff every pair of windows is nested or disjoint (duplicates allowed).
bool is_laminar(std::span<const TimeWindow> windows);

/// A forest of intervals in which children are disjoint and nested in their
/// parent. Built either as the balanced binary tree over [1, T] or as the
/// containment forest of a laminar window family.
class LaminarTree {
 public:
  struct Node {
    TimeWindow interval;
    int parent = -1;
    std::vector<int> children;  // left to right
    std::vector<int> jobs;      // instance job indices with window == interval
  };

  /// Root [1, T], each [l, r] split at floor((l + r) / 2) down to singletons.
  static LaminarTree binary(int horizon);
  /// Containment forest of the distinct windows. Throws if not laminar.
  static LaminarTree from_windows(std::span<const TimeWindow> windows);
  /// Containment forest of the instance's job windows, with job lists filled.
  static LaminarTree for_instance(const Instance& instance);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int index) const { return nodes_[index]; }
  const std::vector<int>& roots() const { return roots_; }
  std::size_t size() const { return nodes_.size(); }

  /// Node index whose interval equals `window`, or -1.
  int find(const TimeWindow& window) const;

  /// Children before parents; siblings left to right.
  std::vector<int> post_order() const;

  /// Attaches instance job indices to the node equal to each job window.
  /// Throws std::invalid_argument if some window is not a node.
  void attach_jobs(const Instance& instance);

 private:
  int add_node(TimeWindow interval, int parent);

  std::vector<Node> nodes_;
  std::vector<int> roots_;
  std::map<TimeWindow, int> lookup_;
};

LaminarTree build_tree(int horizon);

/// Largest tree interval contained in `window`, rightmost among the largest.
/// Total on binary trees because singleton leaves always qualify.
TimeWindow map_window(const LaminarTree& tree, const TimeWindow& window);

struct LaminarMapping {
  std::map<TimeWindow, TimeWindow> forward;    // original window -> tree interval
  std::map<TimeWindow, TimeWindow> aggregate;  // tree interval -> span of windows mapped to it
};

LaminarMapping build_mapping(const LaminarTree& tree, std::span<const TimeWindow> windows);

struct TransformResult {
  Instance laminar;               // untransformable jobs removed, horizon unchanged
  LaminarMapping mapping;
  std::vector<int> untransformable;  // ids whose length exceeds the mapped window
};

/// Replaces each job window by its image under map_window on build_tree(T).
TransformResult transform_instance(const Instance& instance);

}  // namespace migsched
