#include "doctest.h"
#include "support.hpp"

#include "migsched/generator.hpp"
#include "migsched/maxt.hpp"
#include "migsched/oracle.hpp"
#include "migsched/rng.hpp"

using namespace migsched;
using test::job;
using test::q;

namespace {

FractionalSelection with_x(std::map<int, Rational> x) {
  FractionalSelection f;
  f.x = std::move(x);
  return f;
}

Rational node_area(const Instance& inst, const std::set<int>& s, const TimeWindow& w) {
  Rational a = 0;
  for (int id : s) {
    if (w.contains(inst.job(id).window())) a += area(inst.job(id));
  }
  return a;
}

}  // namespace

TEST_CASE("parameter formulas") {
  // m = 2, lambda = 1/3: alpha = (1/3 * 2/3) / (2/3 + 1/6) = 4/15.
  CHECK(alpha_of(2, Rational(1, 3)) == Rational(4, 15));
  // omega = (11/15)(2/3) - (4/15)(1/3)/2 = 22/45 - 2/45 = 4/9 = (1 - 1/3)^2.
  CHECK(omega_split(2, Rational(1, 3)) == Rational(4, 9));
  for (int m = 1; m <= 6; ++m) {
    for (int k = 2; k <= 9; ++k) {
      const Rational l(1, k);
      CHECK(omega_split(m, l) == (1 - l) * (1 - l));
    }
  }
  CHECK(omega_pairing(2, Rational(1, 5)) == Rational(1, 2) - Rational(1, 5));
}

TEST_CASE("relaxation examples") {
  Instance one({job(1, 1, 2, 1, "1/2", "10")}, 1, 1);
  auto x = solve_relaxation(one, Rational(1, 2));
  CHECK(x.x.at(1) == 1);
  CHECK(x.objective == 10);

  Instance two({job(1, 1, 2, 1, "1", "3"), job(2, 1, 2, 1, "1", "1")}, 1, 1);
  auto y = solve_relaxation(two, Rational(1, 2));
  CHECK(y.x.at(1) == 1);
  CHECK(y.x.at(2) == 0);
  CHECK(y.objective == 3);

  Instance bad({job(1, 1, 4, 1, "1"), job(2, 3, 6, 1, "1")}, 1, 1);
  CHECK_THROWS(solve_relaxation(bad, Rational(1, 2)));
}

TEST_CASE("relaxation equals vertex enumeration on nested windows") {
  // [1,4] holds A and B, [1,2] holds C: fractional optimum.
  Instance inst({job(1, 1, 4, 2, "3/4", "5"), job(2, 1, 4, 1, "1/2", "2"), job(3, 1, 2, 1, "1", "4")}, 1, 1);
  auto x = solve_relaxation(inst, Rational(1, 2));
  lp::LinearProgram p(lp::Sense::Maximize);
  for (const auto& j : inst.jobs()) p.add_variable(j.weight, 0, Rational(1));
  p.add_row({{0, Rational(3, 2)}, {1, Rational(1, 2)}, {2, Rational(1)}}, lp::Relation::LessEqual, 2);
  p.add_row({{2, Rational(1)}}, lp::Relation::LessEqual, 1);
  CHECK(x.objective == lp_vertex_enumeration(p).objective);
}

TEST_CASE("rounding: integral input is unchanged") {
  Instance inst({job(1, 1, 4, 1, "1/2"), job(2, 1, 2, 1, "1/2")}, 1, 1);
  LaminarTree tree = LaminarTree::for_instance(inst);
  CHECK(round_selection(inst, tree, with_x({{1, 1}, {2, 0}})) == std::set<int>{1});
}

TEST_CASE("rounding: transfer from parent to child") {
  Instance inst({job(1, 1, 4, 2, "1", "2"), job(2, 1, 2, 1, "1", "1")}, 1, 1);
  LaminarTree tree = LaminarTree::for_instance(inst);
  auto trace = round_selection_trace(inst, tree, with_x({{1, Rational(1, 2)}, {2, Rational(1, 2)}}));
  CHECK(trace.transferred.at(2) == 1);
  CHECK(trace.transferred.at(1) == Rational(1, 4));
  CHECK(trace.selected == std::set<int>{1, 2});
}

TEST_CASE("normalization leaves one fractional job per window") {
  Instance inst({job(1, 1, 4, 1, "1/2", "1"), job(2, 1, 4, 1, "1/2", "3"), job(3, 1, 4, 2, "1/2", "2")}, 1, 1);
  auto n = normalize_selection(inst, with_x({{1, Rational(1, 2)}, {2, Rational(1, 2)}, {3, Rational(1, 3)}}));
  int fractional = 0;
  for (auto& [id, v] : n.x) fractional += (v > 0 && v < 1);
  CHECK(fractional <= 1);
  CHECK(n.x.at(2) == 1);
  CHECK(n.objective >= Rational(1, 2) + Rational(3, 2) + Rational(2, 3));
}

TEST_CASE("rounding bounds on generated laminar instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenSpec spec;
    spec.n = 12;
    spec.hosts = 2 + static_cast<int>(seed % 3);
    spec.horizon = 16;
    spec.laminar = true;
    spec.lambda = Rational(1, 3);
    spec.seed = seed;
    Instance inst = generate(spec);
    const Rational lambda = slackness(inst);
    const Rational omega = omega_pairing(inst.hosts(), lambda);
    LaminarTree tree = LaminarTree::for_instance(inst);
    auto x = solve_relaxation(inst, omega);
    auto trace = round_selection_trace(inst, tree, x);
    CHECK(total_weight(inst, trace.selected) >= x.objective);
    for (const auto& [id, v] : x.x) {
      if (v == 0) CHECK_FALSE(trace.selected.count(id));
    }
    for (const auto& node : tree.nodes()) {
      CHECK(node_area(inst, trace.selected, node.interval) <=
            (omega + lambda / inst.hosts()) * inst.hosts() * node.interval.size());
    }
    BinState bins(1, 1);
    Schedule s = schedule_selected(inst, trace.selected, tree, AllocationMode::Pairing, {}, &bins);
    CHECK(validate_selected(inst, s, trace.selected).feasible);
    for (const auto& [a, b] : bins.pairs()) CHECK(bins.load(a.host, a.slot) + bins.load(b.host, b.slot) > 1);
  }
}

TEST_CASE("allocate_one_slot branches") {
  std::vector<int> avail{1, 2};
  BinState bins(2, 2);
  auto p = allocate_one_slot(1, q("1/2"), avail, bins);
  REQUIRE(p);
  CHECK(bins.color(p->host, p->slot) == BinColor::Gray);

  BinState fits(1, 2);
  fits.add(9, q("0.4"), {0, 1});
  fits.set_color({0, 1}, BinColor::Gray);
  auto joined = allocate_one_slot(1, q("0.5"), avail, fits);
  CHECK(*joined == Placement{0, 1});
  CHECK(fits.load(0, 1) == q("0.9"));

  BinState full(1, 2);
  full.add(9, q("0.7"), {0, 1});
  full.set_color({0, 1}, BinColor::Gray);
  auto paired = allocate_one_slot(1, q("0.5"), avail, full);
  CHECK(*paired == Placement{0, 2});
  CHECK(full.color(0, 1) == BinColor::Black);
  CHECK(full.color(0, 2) == BinColor::Black);
  REQUIRE(full.pairs().size() == 1);

  std::vector<int> only_first{1};
  CHECK_FALSE(allocate_one_slot(2, q("0.5"), only_first, full));
}

TEST_CASE("schedule_selected: single job and failure reporting") {
  Instance inst({job(1, 1, 3, 1, "1/2")}, 1, 1);
  LaminarTree tree = LaminarTree::for_instance(inst);
  Schedule s = schedule_selected(inst, {1}, tree, AllocationMode::Pairing);
  CHECK(s.placed_units(1) == 1);

  Instance crowded({job(1, 1, 1, 1, "0.6"), job(2, 1, 1, 1, "0.6")}, 1, 1);
  LaminarTree t2 = LaminarTree::for_instance(crowded);
  try {
    schedule_selected(crowded, {1, 2}, t2, AllocationMode::Pairing);
    FAIL("expected AllocationFailure");
  } catch (const AllocationFailure& e) {
    CHECK(e.job() == 2);
  }
}

TEST_CASE("smallfit uses any bin with room") {
  // Two hosts; slot 1 is full on host 0, host 1 still has room.
  Instance inst({job(1, 1, 1, 1, "0.7"), job(2, 1, 1, 1, "0.7"), job(3, 1, 2, 2, "0.3")}, 2, 1);
  LaminarTree tree = LaminarTree::for_instance(inst);
  Schedule s = schedule_selected(inst, {1, 2, 3}, tree, AllocationMode::Smallfit);
  CHECK(validate(inst, s, true).feasible);
}

TEST_CASE("edf and single host throughput") {
  std::vector<Job> jobs{job(1, 1, 2, 2, "1", "5"), job(2, 1, 1, 1, "1", "4")};
  CHECK_FALSE(edf_schedule(jobs));
  auto r = single_host_throughput(jobs);
  CHECK(r.selected == std::set<int>{1});
  CHECK(r.weight == 5);

  std::vector<Job> easy{job(1, 1, 4, 1, "1", "1"), job(2, 1, 4, 2, "1", "1"), job(3, 3, 4, 1, "1", "1")};
  CHECK(single_host_throughput(easy).selected.size() == 3);
}

TEST_CASE("single host throughput matches exhaustive search") {
  Rng rng(3);
  for (int round = 0; round < 60; ++round) {
    std::vector<Job> jobs;
    const int n = static_cast<int>(rng.uniform_int(1, 10));
    for (int i = 0; i < n; ++i) {
      const int r = static_cast<int>(rng.uniform_int(1, 8));
      const int d = static_cast<int>(rng.uniform_int(r, 10));
      const int p = static_cast<int>(rng.uniform_int(1, d - r + 1));
      const char* w = round % 2 ? "1" : nullptr;
      Job j = job(i + 1, r, d, p, "1", w);
      if (!w) j.weight = Rational(rng.uniform_int(1, 9));
      jobs.push_back(j);
    }
    Rational best = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<Job> pick;
      Rational w = 0;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1u) {
          pick.push_back(jobs[i]);
          w += jobs[i].weight;
        }
      }
      if (w > best && edf_schedule(pick)) best = w;
    }
    auto r = single_host_throughput(jobs);
    CHECK(r.weight == best);
    CHECK(r.exact);
  }
}

TEST_CASE("large heights: unit heights on one host") {
  Instance inst({job(1, 1, 2, 2, "1", "5"), job(2, 1, 1, 1, "1", "4")}, 1, 1);
  auto r = solve_large_heights(inst, q("1/2"));
  CHECK(r.profit == 5);
  CHECK(validate_selected(inst, r.schedule, r.selected).feasible);
}

TEST_CASE("large heights: class budgets") {
  Instance inst({job(1, 1, 4, 2, "0.9", "3"), job(2, 1, 4, 2, "0.45", "2"), job(3, 1, 4, 4, "0.45", "2")}, 2, 1);
  auto rep = solve_large_heights_report(inst, q("0.4"), 1);
  REQUIRE(rep.classes.size() == 2);
  CHECK(rep.classes[0].k == 0);
  CHECK(rep.classes[0].rounded_height == q("0.4"));
  CHECK(rep.classes[0].budget == 2 * 2);
  CHECK(rep.classes[1].k == 1);
  CHECK(rep.classes[1].rounded_height == q("0.8"));
  CHECK(rep.classes[1].budget == 2 * 1);
  CHECK(rep.result.profit == 4);
  CHECK(validate_selected(inst, rep.result.schedule, rep.result.selected).feasible);
  CHECK_THROWS(solve_large_heights(inst, 0));
}

TEST_CASE("laminar solver routes by height") {
  Instance tall({job(1, 1, 4, 1, "1", "2"), job(2, 1, 4, 1, "1", "3")}, 1, 1);
  auto r = solve_maxt_laminar(tall, Rational(1, 4));
  CHECK(r.path == "large");
  CHECK(r.profit == 5);
  CHECK_THROWS(solve_maxt_laminar(tall, Rational(1)));
}

TEST_CASE("general solver on window [2,7]") {
  Instance inst({job(1, 2, 7, 1, "1/4", "1")}, 1, 1, 8);
  auto r = solve_maxt_general(inst, Rational(1, 6));
  CHECK(r.selected == std::set<int>{1});
  for (const auto& p : *r.schedule.of(1)) CHECK((p.slot == 5 || p.slot == 6));
}

TEST_CASE("general solver agrees with laminar solver on tree-aligned input") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenSpec spec;
    spec.n = 8;
    spec.horizon = 16;
    spec.laminar = true;
    spec.lambda = Rational(1, 4);
    spec.seed = seed;
    Instance inst = generate(spec);
    const Rational l = slackness(inst);
    CHECK(solve_maxt_general(inst, l).profit == solve_maxt_laminar(inst, l).profit);
  }
}

TEST_CASE("logn solver") {
  Instance small({job(1, 1, 2, 1, "0.1"), job(2, 1, 2, 2, "0.2"), job(3, 2, 3, 1, "0.3")}, 1, 1);
  auto r = solve_maxt_logn(small);
  CHECK(r.selected.size() == 3);
  CHECK(validate(small, r.schedule, true).feasible);

  Instance big({job(1, 1, 2, 1, "1", "2"), job(2, 1, 2, 2, "1", "3")}, 1, 1);
  CHECK(solve_maxt_logn(big).profit == solve_large_heights(big, Rational(1, 2)).profit);
}

TEST_CASE("utilization greedy rejects when good slots run out") {
  // One host, window [1,2], all jobs long. The third job finds no bin below 1 - s.
  Instance inst({job(1, 1, 2, 2, "0.4"), job(2, 1, 2, 2, "0.4"), job(3, 1, 2, 2, "0.4")}, 1, 1);
  auto r = utilization_greedy(inst);
  CHECK(r.selected == std::set<int>{1, 2});
  CHECK(validate_selected(inst, r.schedule, r.selected).feasible);
}

TEST_CASE("utilization: all short jobs equals the general solver") {
  GenSpec spec;
  spec.n = 8;
  spec.horizon = 20;
  spec.lambda = Rational(1, 5);
  spec.weights = WeightMode::Area;
  spec.seed = 4;
  Instance inst = generate(spec);
  auto u = solve_utilization(inst);
  CHECK(u.profit == solve_maxt_general(inst, Rational(1, 5)).profit);
}

TEST_CASE("solvers emit valid schedules and never beat the oracle") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenSpec spec;
    spec.n = 5;
    spec.hosts = 1 + static_cast<int>(seed % 2);
    spec.horizon = 6;
    spec.lambda = Rational(1, 2);
    spec.seed = seed;
    Instance inst = generate(spec);
    const Rational opt = exact_maxt(inst).profit;
    const Rational l = slackness(inst);
    std::vector<MaxTResult> runs{solve_maxt_general(inst, l), solve_maxt_logn(inst)};
    for (const auto& r : runs) {
      CHECK(validate_selected(inst, r.schedule, r.selected).feasible);
      CHECK(r.profit == total_weight(inst, r.selected));
      CHECK(r.profit <= opt);
    }
    if (l < 1) {
      auto u = solve_utilization(inst, l);
      Rational used = 0;
      for (int id : u.selected) used += area(inst.job(id));
      CHECK(validate_selected(inst, u.schedule, u.selected).feasible);
      CHECK(u.profit == used);
    }
    CHECK(maxt_lp_bound(inst) >= opt);
  }
}
