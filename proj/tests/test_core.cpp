#include "doctest.h"
#include "support.hpp"

#include "migsched/generator.hpp"
#include "migsched/json_io.hpp"
#include "migsched/rng.hpp"

using namespace migsched;
using test::job;
using test::q;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(floor_to_int(Rational(-1, 2)) == -1);
  CHECK(ceil_to_int(Rational(7, 3)) == 3);
}

TEST_CASE("instance construction rejects broken jobs") {
  CHECK_THROWS(Instance({job(1, 3, 2, 1, "1/2")}, 1, 1));
  CHECK_THROWS(Instance({job(1, 1, 2, 3, "1/2")}, 1, 1));
  CHECK_THROWS(Instance({job(1, 1, 2, 1, "3/2")}, 1, 1));
  CHECK_THROWS(Instance({job(1, 1, 2, 1, "1/2"), job(1, 1, 2, 1, "1/2")}, 1, 1));
  CHECK_THROWS(Instance({job(1, 1, 2, 1, "1/2")}, 1, 2));
  CHECK(Instance({job(1, 2, 5, 1, "1/2")}, 1, 1).horizon() == 5);
}

TEST_CASE("validate: single placement is feasible") {
  Instance inst({job(1, 1, 2, 1, "1/2", "3")}, 2, 1);
  Schedule s;
  s.place(1, 0, 1);
  auto r = validate(inst, s, true);
  CHECK(r.feasible);
  CHECK(r.completed_ids == std::set<int>{1});
  CHECK(r.total_weight == 3);
  CHECK(r.total_area == Rational(1, 2));
}

TEST_CASE("validate: capacity violation") {
  Instance inst({job(1, 1, 1, 1, "0.6"), job(2, 1, 1, 1, "0.6")}, 1, 1);
  Schedule s;
  s.place(1, 0, 1);
  s.place(2, 0, 1);
  auto r = validate(inst, s, false);
  CHECK_FALSE(r.feasible);
  CHECK(r.has(ViolationKind::CapacityExceeded));
}

TEST_CASE("validate: simultaneous processing") {
  Instance inst({job(1, 1, 2, 2, "1/4")}, 2, 1);
  Schedule s;
  s.place(1, 0, 1);
  s.place(1, 1, 1);
  auto r = validate(inst, s, false);
  CHECK(r.has(ViolationKind::SimultaneousProcessing));
  CHECK_FALSE(r.completed_ids.count(1));
}

TEST_CASE("validate: structural problems are violations, not crashes") {
  Instance inst({job(1, 2, 3, 1, "1/4")}, 1, 1);
  Schedule s;
  s.place(7, 0, 1);
  s.place(1, 3, 2);
  s.place(1, 0, 9);
  s.place(1, 0, 1);
  auto r = validate(inst, s, true);
  CHECK(r.has(ViolationKind::UnknownJob));
  CHECK(r.has(ViolationKind::HostOutOfRange));
  CHECK(r.has(ViolationKind::SlotOutOfRange));
  CHECK(r.has(ViolationKind::OutsideWindow));
  CHECK(r.has(ViolationKind::Incomplete));
}

TEST_CASE("validate: excess slots and incomplete") {
  Instance inst({job(1, 1, 3, 1, "1/4"), job(2, 1, 3, 2, "1/4")}, 1, 1);
  Schedule s;
  s.place(1, 0, 1);
  s.place(1, 0, 2);
  s.place(2, 0, 1);
  auto r = validate(inst, s, true);
  CHECK(r.has(ViolationKind::ExcessSlots));
  CHECK(r.has(ViolationKind::Incomplete));
  CHECK(r.completed_ids.empty());
}

TEST_CASE("validate: vector demands are checked per dimension") {
  Instance inst({test::vjob(1, 1, 1, 1, {q("0.5"), q("0.7")}), test::vjob(2, 1, 1, 1, {q("0.5"), q("0.4")})}, 1, 2);
  Schedule s;
  s.place(1, 0, 1);
  s.place(2, 0, 1);
  auto r = validate(inst, s, true);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].dimension == 1);
}

TEST_CASE("validate is pure") {
  GenSpec spec;
  spec.seed = 42;
  Instance inst = generate(spec);
  Schedule s;
  for (const auto& j : inst.jobs()) s.place(j.id, 0, j.release);
  auto a = report_to_json(validate(inst, s, true)).dump();
  auto b = report_to_json(validate(inst, s, true)).dump();
  CHECK(a == b);
}

TEST_CASE("area, density, slackness") {
  CHECK(area(job(1, 1, 4, 4, "0.25")) == 1);
  CHECK(*density(job(1, 1, 2, 2, "0.5", "3")) == 3);
  Instance inst({job(1, 1, 4, 2, "1/2"), job(2, 1, 8, 2, "1/2")}, 1, 1);
  CHECK(slackness(inst) == Rational(1, 2));
  Job v = test::vjob(1, 1, 2, 2, {q("0.3"), q("0.7")});
  CHECK(area(v) == Rational(7, 5));
}

TEST_CASE("area agrees with recomputation on generated instances") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenSpec spec;
    spec.dim = 1 + static_cast<int>(seed % 3);
    spec.seed = seed;
    Instance inst = generate(spec);
    Rational lambda = 0;
    for (const auto& j : inst.jobs()) {
      Rational h = 0;
      for (const auto& s : j.demand) h = rational_max(h, s);
      CHECK(area(j) == h * j.length);
      CHECK(*density(j) * area(j) == j.weight);
      Rational ratio(j.length, j.due - j.release + 1);
      ratio.canonicalize();
      lambda = rational_max(lambda, ratio);
    }
    CHECK(slackness(inst) == lambda);
  }
}

TEST_CASE("instance json round trip") {
  GenSpec spec;
  spec.dim = 2;
  spec.seed = 9;
  Instance inst = generate(spec);
  Instance back = instance_from_json(instance_to_json(inst));
  CHECK(instance_to_json(back) == instance_to_json(inst));
  CHECK(instance_digest(back) == instance_digest(inst));
}

TEST_CASE("instance json defaults") {
  auto doc = json::parse(R"({"hosts": 2, "jobs": [{"id": 4, "release": 1, "due": 4, "length": 2, "demand": "1/4"}]})");
  Instance inst = instance_from_json(doc);
  CHECK(inst.dim() == 1);
  CHECK(inst.jobs()[0].weight == Rational(1, 2));
}

TEST_CASE("schedule json round trip") {
  Schedule s;
  s.place(3, 1, 4);
  s.place(3, 0, 2);
  s.place(1, 0, 1);
  Schedule back = schedule_from_json(schedule_to_json(s));
  s.normalize();
  CHECK(back.placements() == s.placements());
}

TEST_CASE("derived seeds are stable and distinct") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform_int(-3, 9) == b.uniform_int(-3, 9));
}

TEST_CASE("generator") {
  GenSpec spec;
  spec.n = 20;
  spec.horizon = 16;
  spec.lambda = Rational(1, 4);
  spec.seed = 3;
  Instance a = generate(spec);
  CHECK(instance_to_json(a).dump() == instance_to_json(generate(spec)).dump());
  for (const auto& j : a.jobs()) CHECK(Rational(j.length) <= spec.lambda * (j.due - j.release + 1));

  spec.weights = WeightMode::Area;
  Instance b = generate(spec);
  for (const auto& j : b.jobs()) CHECK(j.weight == area(j));

  spec.horizon = 3;
  CHECK_THROWS(generate(spec));
}
