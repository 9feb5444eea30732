#include "doctest.h"
#include "support.hpp"

#include "migsched/generator.hpp"
#include "migsched/laminar.hpp"
#include "migsched/rng.hpp"

#include <algorithm>

using namespace migsched;
using test::job;

namespace {

std::set<TimeWindow> node_set(const LaminarTree& tree) {
  std::set<TimeWindow> out;
  for (const auto& n : tree.nodes()) out.insert(n.interval);
  return out;
}

// Independent reference: scan every tree node.
TimeWindow map_by_scan(const LaminarTree& tree, const TimeWindow& w) {
  std::optional<TimeWindow> best;
  for (const auto& n : tree.nodes()) {
    if (!w.contains(n.interval)) continue;
    if (!best || n.interval.size() > best->size() ||
        (n.interval.size() == best->size() && n.interval.start > best->start)) {
      best = n.interval;
    }
  }
  return *best;
}

}  // namespace

TEST_CASE("is_laminar") {
  std::vector<TimeWindow> a{{1, 8}, {1, 4}, {5, 8}};
  std::vector<TimeWindow> b{{1, 4}, {3, 6}};
  std::vector<TimeWindow> c{{2, 2}, {2, 2}};
  CHECK(is_laminar(a));
  CHECK_FALSE(is_laminar(b));
  CHECK(is_laminar(c));
}

TEST_CASE("is_laminar agrees with the pairwise definition") {
  Rng rng(7);
  for (int round = 0; round < 300; ++round) {
    std::vector<TimeWindow> ws;
    const int k = static_cast<int>(rng.uniform_int(1, 6));
    for (int i = 0; i < k; ++i) {
      int a = static_cast<int>(rng.uniform_int(1, 10));
      int b = static_cast<int>(rng.uniform_int(a, 10));
      ws.push_back({a, b});
    }
    bool pairwise = true;
    for (const auto& x : ws) {
      for (const auto& y : ws) {
        if (x.intersects(y) && !x.contains(y) && !y.contains(x)) pairwise = false;
      }
    }
    CHECK(is_laminar(ws) == pairwise);
  }
}

TEST_CASE("build_tree shapes") {
  CHECK(node_set(build_tree(4)) == std::set<TimeWindow>{{1, 4}, {1, 2}, {3, 4}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
  CHECK(build_tree(1).size() == 1);
  LaminarTree t8 = build_tree(8);
  CHECK(t8.size() == 15);
  for (const auto& n : t8.nodes()) {
    if (!n.children.empty()) CHECK(t8.node(n.children[0]).interval.size() == t8.node(n.children[1]).interval.size());
  }
  CHECK_THROWS(build_tree(0));
}

TEST_CASE("tree children are disjoint and nested") {
  for (int T : {1, 5, 13, 64}) {
    LaminarTree tree = build_tree(T);
    for (const auto& n : tree.nodes()) {
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        CHECK(n.interval.contains(tree.node(n.children[a]).interval));
        for (std::size_t b = a + 1; b < n.children.size(); ++b) {
          CHECK_FALSE(tree.node(n.children[a]).interval.intersects(tree.node(n.children[b]).interval));
        }
      }
    }
    std::vector<TimeWindow> all;
    for (const auto& n : tree.nodes()) all.push_back(n.interval);
    CHECK(is_laminar(all));
    CHECK(tree.post_order().size() == tree.size());
  }
}

TEST_CASE("map_window examples") {
  LaminarTree t8 = build_tree(8);
  CHECK(map_window(t8, {2, 7}) == TimeWindow{5, 6});
  CHECK(map_window(t8, {1, 8}) == TimeWindow{1, 8});
  CHECK(map_window(build_tree(4), {2, 3}) == TimeWindow{3, 3});
}

TEST_CASE("map_window matches a full scan and the 4x bounds, exhaustively") {
  for (int T = 1; T <= 40; ++T) {
    LaminarTree tree = build_tree(T);
    std::vector<TimeWindow> all;
    for (int a = 1; a <= T; ++a) {
      for (int b = a; b <= T; ++b) {
        const TimeWindow w{a, b};
        all.push_back(w);
        const TimeWindow m = map_window(tree, w);
        CHECK(m == map_by_scan(tree, w));
        CHECK(w.contains(m));
        CHECK(w.size() <= 4 * m.size());
      }
    }
    LaminarMapping mapping = build_mapping(tree, all);
    for (const auto& [node, span] : mapping.aggregate) CHECK(span.size() <= 4 * node.size());
  }
}

TEST_CASE("aggregate span example") {
  LaminarTree t8 = build_tree(8);
  std::vector<TimeWindow> ws{{1, 8}, {2, 7}};
  LaminarMapping m = build_mapping(t8, ws);
  CHECK(m.aggregate.at({5, 6}) == TimeWindow{2, 7});
  CHECK(m.aggregate.at({5, 6}).size() <= 4 * 2);
}

TEST_CASE("transform_instance") {
  Instance inst({job(1, 2, 7, 1, "1/2"), job(2, 1, 8, 3, "1/2")}, 2, 1, 8);
  TransformResult t = transform_instance(inst);
  CHECK(t.laminar.job(1).window() == TimeWindow{5, 6});
  CHECK(t.laminar.job(2).window() == TimeWindow{1, 8});
  CHECK(t.untransformable.empty());
  CHECK(t.laminar.horizon() == 8);

  Instance tight({job(1, 2, 7, 5, "1/2")}, 1, 1, 8);
  CHECK(transform_instance(tight).untransformable == std::vector<int>{1});
}

TEST_CASE("transform is identity on tree-aligned windows") {
  Instance inst({job(1, 1, 4, 1, "1/2"), job(2, 5, 6, 1, "1/2"), job(3, 1, 8, 2, "1/2")}, 1, 1, 8);
  TransformResult t = transform_instance(inst);
  for (const auto& j : inst.jobs()) CHECK(t.laminar.job(j.id).window() == j.window());
}

TEST_CASE("transform properties on generated instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenSpec spec;
    spec.n = 10;
    spec.horizon = 8 + static_cast<int>(seed % 25);
    spec.lambda = Rational(1, 4 + static_cast<int>(seed % 3));
    spec.seed = seed;
    Instance inst = generate(spec);
    TransformResult t = transform_instance(inst);
    std::vector<TimeWindow> ws;
    for (const auto& j : t.laminar.jobs()) {
      ws.push_back(j.window());
      CHECK(inst.job(j.id).window().contains(j.window()));
    }
    CHECK(is_laminar(ws));
    CHECK(t.untransformable.empty());
    CHECK(slackness(t.laminar) <= 4 * slackness(inst));

    // Lifting: a schedule of the mapped instance is valid for the original.
    Schedule s;
    int host = 0;
    for (const auto& j : t.laminar.jobs()) {
      for (int k = 0; k < j.length; ++k) s.place(j.id, host, j.release + k);
      ++host;
    }
    Instance wide = inst.with_hosts(static_cast<int>(inst.size()));
    Instance wide_l = t.laminar.with_hosts(static_cast<int>(inst.size()));
    CHECK(validate(wide_l, s, true).feasible);
    CHECK(validate(wide, s, true).feasible);
  }
}

TEST_CASE("containment forest of an instance") {
  Instance inst({job(1, 1, 8, 1, "1/2"), job(2, 1, 4, 1, "1/2"), job(3, 1, 4, 1, "1/2"), job(4, 10, 12, 1, "1/2")},
                1, 1);
  LaminarTree tree = LaminarTree::for_instance(inst);
  CHECK(tree.roots().size() == 2);
  const int n = tree.find({1, 4});
  REQUIRE(n >= 0);
  CHECK(tree.node(n).jobs.size() == 2);
  CHECK(tree.node(tree.node(n).parent).interval == TimeWindow{1, 8});
  Instance overlapping({job(1, 1, 4, 1, "1/2"), job(2, 3, 6, 1, "1/2")}, 1, 1);
  CHECK_THROWS(LaminarTree::for_instance(overlapping));
}
