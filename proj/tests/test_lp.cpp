#include "doctest.h"
#include "lp_support.hpp"

#include "migsched/oracle.hpp"

using namespace migsched;
using lp::Relation;
using lp::Sense;
using lp::Status;

TEST_CASE("max x with x <= 1") {
  lp::LinearProgram p(Sense::Maximize);
  int x = p.add_variable(1);
  p.add_row({{x, 1}}, Relation::LessEqual, 1);
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.primal[0] == 1);
  CHECK(s.objective == 1);
  CHECK(s.duals[0] == 1);
}

TEST_CASE("degenerate optimum") {
  lp::LinearProgram p(Sense::Maximize);
  int x = p.add_variable(1, 0, Rational(1));
  int y = p.add_variable(1, 0, Rational(1));
  p.add_row({{x, 1}, {y, 1}}, Relation::LessEqual, 1);
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == 1);
  CHECK(test::certificate_error(p, s).empty());
}

TEST_CASE("infeasible and unbounded") {
  lp::LinearProgram a(Sense::Maximize);
  int x = a.add_variable(1);
  a.add_row({{x, 1}}, Relation::LessEqual, 1);
  a.add_row({{x, 1}}, Relation::GreaterEqual, 2);
  CHECK(lp::solve(a).status == Status::Infeasible);

  lp::LinearProgram b(Sense::Maximize);
  int y = b.add_variable(1);
  b.add_row({{y, 1}}, Relation::GreaterEqual, 1);
  CHECK(lp::solve(b).status == Status::Unbounded);

  lp::LinearProgram c(Sense::Minimize);
  c.add_variable(1, 2, Rational(1));
  CHECK(lp::solve(c).status == Status::Infeasible);
}

TEST_CASE("minimize with equality and shifted bounds") {
  lp::LinearProgram p(Sense::Minimize);
  int x = p.add_variable(2, -3, Rational(4));
  int y = p.add_variable(3, 1);
  p.add_row({{x, 1}, {y, 1}}, Relation::Equal, 3);
  p.add_row({{x, 1}, {y, -1}}, Relation::LessEqual, 0);
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.primal[x] == Rational(3, 2));
  CHECK(s.primal[y] == Rational(3, 2));
  CHECK(s.objective == Rational(15, 2));
  CHECK(test::certificate_error(p, s).empty());
}

TEST_CASE("structural errors") {
  lp::LinearProgram p;
  CHECK_THROWS_AS(p.add_row({{3, 1}}, Relation::LessEqual, 1), std::invalid_argument);
  p.add_variable(1);
  CHECK_THROWS_AS(p.add_column(1, {{0, Rational(1)}}), std::invalid_argument);
}

TEST_CASE("random small LPs equal vertex enumeration") {
  Rng rng(2024);
  int optimal = 0;
  for (int round = 0; round < 300; ++round) {
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    const int m = static_cast<int>(rng.uniform_int(0, 4));
    auto p = test::random_lp(rng, n, m, rng.coin(2, 3));
    auto s = lp::solve(p);
    auto v = lp_vertex_enumeration(p);
    REQUIRE(s.status == v.status);
    if (s.status == Status::Optimal) {
      ++optimal;
      CHECK(s.objective == v.objective);
      CHECK(test::certificate_error(p, s) == "");
    }
  }
  CHECK(optimal > 100);
}

TEST_CASE("random LPs up to 30 variables carry exact certificates") {
  Rng rng(77);
  for (int round = 0; round < 40; ++round) {
    const int n = static_cast<int>(rng.uniform_int(5, 30));
    const int m = static_cast<int>(rng.uniform_int(5, 30));
    auto p = test::random_lp(rng, n, m, true);
    auto s = lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(test::certificate_error(p, s) == "");
  }
}

TEST_CASE("identical programs give identical solutions") {
  Rng a(5), b(5);
  auto p = test::random_lp(a, 8, 8, true);
  auto q = test::random_lp(b, 8, 8, true);
  auto s1 = lp::solve(p);
  auto s2 = lp::solve(q);
  CHECK(s1.primal == s2.primal);
  CHECK(s1.duals == s2.duals);
  CHECK(s1.iterations == s2.iterations);
}

namespace {

// Covering LP: min sum x  s.t.  A x >= 1, columns added one at a time.
lp::LinearProgram covering_rows(int rows) {
  lp::LinearProgram p(Sense::Minimize);
  int slack = p.add_variable(100);
  for (int i = 0; i < rows; ++i) p.add_row({{slack, 1}}, Relation::GreaterEqual, 1);
  return p;
}

}  // namespace

TEST_CASE("warm column additions match cold solves") {
  Rng rng(11);
  for (int round = 0; round < 30; ++round) {
    const int rows = static_cast<int>(rng.uniform_int(2, 6));
    lp::Simplex warm(covering_rows(rows));
    REQUIRE(warm.solve().status == Status::Optimal);
    Rational previous = warm.solution().objective;
    for (int c = 0; c < 8; ++c) {
      std::vector<std::pair<int, Rational>> entries;
      for (int i = 0; i < rows; ++i) {
        if (rng.coin(1, 2)) entries.push_back({i, Rational(rng.uniform_int(1, 3))});
      }
      warm.add_column(Rational(rng.uniform_int(1, 4)), entries);
      const auto& s = warm.solve();
      REQUIRE(s.status == Status::Optimal);
      auto cold = lp::solve(warm.program());
      CHECK(cold.objective == s.objective);
      CHECK(s.objective <= previous);
      CHECK(test::certificate_error(warm.program(), s) == "");
      previous = s.objective;
    }
  }
}

TEST_CASE("duplicate and dominating columns") {
  lp::Simplex sx(covering_rows(3));
  sx.add_column(2, {{0, Rational(1)}, {1, Rational(1)}});
  Rational base = sx.solve().objective;
  sx.add_column(2, {{0, Rational(1)}, {1, Rational(1)}});
  CHECK(sx.solve().objective == base);
  sx.add_column(1, {{0, Rational(1)}, {1, Rational(1)}, {2, Rational(1)}});
  CHECK(sx.solve().objective <= base);
  CHECK(sx.solve().objective == 1);
}

TEST_CASE("vertex enumeration on a known polytope") {
  lp::LinearProgram p(Sense::Maximize);
  int x = p.add_variable(3, 0, Rational(4));
  int y = p.add_variable(2, 0, Rational(4));
  p.add_row({{x, 1}, {y, 1}}, Relation::LessEqual, 5);
  auto v = lp_vertex_enumeration(p);
  CHECK(v.objective == 14);
  CHECK(v.point == std::vector<Rational>{4, 1});
}
