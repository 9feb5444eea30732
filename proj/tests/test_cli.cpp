#include "doctest.h"
#include "support.hpp"

#include "migsched/cli.hpp"
#include "migsched/experiments.hpp"
#include "migsched/laminar.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace migsched;
using test::job;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("migsched-test-" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

Instance tiny() {
  return Instance({job(1, 1, 4, 1, "1/2", "3"), job(2, 1, 4, 2, "1/2", "2"), job(3, 5, 6, 1, "1", "1")}, 2, 1);
}

}  // namespace

TEST_CASE("gen is deterministic and honours the flags") {
  ScratchDir dir("gen");
  CHECK(cli({"gen", "--n", "8", "--horizon", "16", "--seed", "9", "--out", dir / "a.json"}).code == 0);
  CHECK(cli({"gen", "--n", "8", "--horizon", "16", "--seed", "9", "--out", dir / "b.json"}).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(cli({"gen", "--n", "8", "--horizon", "16", "--seed", "10", "--out", dir / "c.json"}).code == 0);
  CHECK(slurp(dir / "a.json") != slurp(dir / "c.json"));

  CHECK(cli({"gen", "--n", "10", "--horizon", "16", "--laminar", "--weights", "area", "--out", dir / "l.json"}).code == 0);
  const Instance lam = load_instance(dir / "l.json");
  std::vector<TimeWindow> windows;
  for (const auto& j : lam.jobs()) {
    windows.push_back(j.window());
    CHECK(j.weight == area(j));
    CHECK(j.length <= Rational(1, 2) * j.window().size());
  }
  CHECK(is_laminar(windows));
}

TEST_CASE("gen rejects unsatisfiable specs") {
  auto r = cli({"gen", "--horizon", "4", "--lambda", "1/8"});
  CHECK(r.code == exit_input);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("gen reads a spec file and lets flags override it") {
  ScratchDir dir("genspec");
  GenSpec spec;
  spec.n = 4;
  spec.horizon = 10;
  spec.dim = 2;
  write_json_file(dir / "spec.json", gen_spec_to_json(spec));
  CHECK(cli({"gen", "--spec", dir / "spec.json", "--n", "7", "--out", dir / "i.json"}).code == 0);
  const Instance inst = load_instance(dir / "i.json");
  CHECK(inst.size() == 7);
  CHECK(inst.dim() == 2);
}

TEST_CASE("usage and input errors map to exit codes") {
  CHECK(cli({}).code == exit_usage);
  CHECK(cli({"frobnicate"}).code == exit_usage);
  CHECK(cli({"solve-maxt", "--mode", "bogus", "--instance", "x.json"}).code == exit_usage);
  CHECK(cli({"solve-maxt", "--instance", "/nonexistent/inst.json"}).code == exit_input);
  CHECK(cli({"solve-minr", "--instance", "/nonexistent/inst.json", "--c", "abc"}).code != exit_ok);
  CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("emitted schedules revalidate on load") {
  ScratchDir dir("revalidate");
  write_json_file(dir / "inst.json", instance_to_json(tiny()));
  for (const char* mode : {"general", "logn", "utilization"}) {
    CHECK(cli({"solve-maxt", "--instance", dir / "inst.json", "--mode", mode, "--out", dir / "maxt.json"}).code == 0);
    CHECK(cli({"validate", "--instance", dir / "inst.json", "--schedule", dir / "maxt.json"}).code == 0);
  }
  CHECK(cli({"solve-maxt", "--instance", dir / "inst.json", "--mode", "laminar", "--variant", "pairing", "--out",
             dir / "lam.json"}).code == 0);
  CHECK(cli({"solve-minr", "--instance", dir / "inst.json", "--seed", "4", "--out", dir / "minr.json"}).code == 0);
  CHECK(cli({"validate", "--instance", dir / "inst.json", "--schedule", dir / "minr.json", "--all"}).code == 0);
  const json doc = read_json_file(dir / "minr.json");
  CHECK(doc.at("valid").get<bool>());
  CHECK(doc.contains("residual_area_stats"));
  CHECK(doc.at("hosts_used").get<int>() == doc.at("m1").get<int>() + doc.at("m2").get<int>() +
                                               doc.at("dedicated").get<int>());

  CHECK(cli({"solve-minr", "--instance", dir / "inst.json", "--partition", "--out", dir / "part.json"}).code == 0);
  CHECK(cli({"validate", "--instance", dir / "inst.json", "--schedule", dir / "part.json", "--all"}).code == 0);

  // An empty schedule does not complete the jobs.
  write_json_file(dir / "empty.json", json{{"placements", json::object()}});
  CHECK(cli({"validate", "--instance", dir / "inst.json", "--schedule", dir / "empty.json", "--all"}).code ==
        exit_failed);
}

TEST_CASE("oracle command") {
  ScratchDir dir("oracle");
  write_json_file(dir / "inst.json", instance_to_json(tiny()));
  auto r = cli({"oracle", "--instance", dir / "inst.json", "--task", "maxt"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("profit") == "6");
  r = cli({"oracle", "--instance", dir / "inst.json", "--task", "minr"});
  CHECK(json::parse(r.out).at("hosts") == 1);
  r = cli({"oracle", "--instance", dir / "inst.json", "--task", "feasible", "--hosts", "1"});
  CHECK(json::parse(r.out).at("feasible") == true);
  CHECK(cli({"oracle", "--instance", dir / "inst.json", "--max-jobs", "2"}).code == exit_failed);
}

TEST_CASE("laminarize prints the mapping") {
  ScratchDir dir("laminarize");
  write_json_file(dir / "inst.json", instance_to_json(Instance({job(1, 2, 7, 1, "1/2")}, 1, 1, 8)));
  auto r = cli({"laminarize", "--instance", dir / "inst.json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("mapping").size() == 1);
  CHECK(doc.at("mapping")[0].at("mapped") == json::array({5, 6}));
}

TEST_CASE("compare: tiny instance has oracle and ratio columns") {
  CompareOptions opts;
  auto rows = compare(tiny(), {"maxt-general", "maxt-logn", "minr"}, 5, opts);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.status == "ok");
    CHECK(r.valid);
    CHECK(r.oracle.has_value());
    CHECK(r.lp_bound.has_value());
    CHECK(r.ratio_to_oracle().has_value());
  }
  CHECK(*rows[0].oracle == 6);
  CHECK(*rows[2].oracle == 1);
  CHECK(*rows[0].value <= *rows[0].oracle);
  CHECK(*rows[2].value >= *rows[2].oracle);

  const std::string csv = rows_to_csv(rows, false);
  CHECK(csv.rfind("cell,digest,solver,seed,objective,value,lp_bound,oracle,ratio_oracle,ratio_lp,valid,status,error\n", 0) == 0);
  CHECK(csv.find("runtime_ms") == std::string::npos);
}

TEST_CASE("compare: oracle-exceeding instance leaves the oracle column empty") {
  GenSpec spec;
  spec.n = 12;
  spec.horizon = 16;
  spec.seed = 3;
  auto rows = compare(generate(spec), {"maxt-general"}, 1);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].oracle.has_value());
  CHECK(rows[0].lp_bound.has_value());
  CHECK_FALSE(rows[0].ratio_to_oracle().has_value());
}

TEST_CASE("compare: solver failures become rows") {
  GenSpec spec;
  spec.n = 6;
  spec.horizon = 8;
  spec.seed = 2;
  const Instance inst = generate(spec);
  std::vector<TimeWindow> windows;
  for (const auto& j : inst.jobs()) windows.push_back(j.window());
  REQUIRE_FALSE(is_laminar(windows));
  auto rows = compare(inst, {"maxt-laminar", "maxt-general"}, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status == "error");
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[1].status == "ok");
}

TEST_CASE("csv round trip recomputes ratios from raw values") {
  auto rows = compare(tiny(), {"maxt-general", "minr"}, 5);
  rows[0].cell = "a,\"quoted\" cell";
  rows[1].error = "x,y";
  const auto back = rows_from_csv(rows_to_csv(rows, true));
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].cell == rows[i].cell);
    CHECK(back[i].solver == rows[i].solver);
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].value == rows[i].value);
    CHECK(back[i].oracle == rows[i].oracle);
    CHECK(back[i].ratio_to_oracle() == rows[i].ratio_to_oracle());
    CHECK(back[i].error == rows[i].error);
  }
  CHECK_THROWS_AS(rows_from_csv("nope\n"), std::invalid_argument);
}

TEST_CASE("per-solver seeds do not depend on the solver list") {
  const auto a = compare(tiny(), {"minr"}, 7);
  const auto b = compare(tiny(), {"maxt-logn", "minr", "minr-partition"}, 7);
  CHECK(a[0].seed == b[1].seed);
  CHECK(a[0].value == b[1].value);
  CHECK(cell_seed(1, "x", 0) != cell_seed(1, "x", 1));
  CHECK(cell_seed(1, "x", 0) != cell_seed(1, "y", 0));
}

TEST_CASE("batch: cardinality, empty matrix and reruns") {
  const json config = {{"seed", 3},
                       {"cells",
                        {{{"name", "many"},
                          {"seeds", 100},
                          {"oracle", false},
                          {"gen", {{"n", 4}, {"horizon", 8}}},
                          {"solvers", {"maxt-logn", "maxt-general"}}}}}};
  const BatchOutcome a = run_batch(config);
  CHECK(a.rows.size() == 200);
  CHECK(a.ok);
  CHECK(a.summary.at("maxt-logn").at("runs") == 100);
  const BatchOutcome b = run_batch(config);
  CHECK(a.summary == b.summary);
  CHECK(rows_to_csv(a.rows, false) == rows_to_csv(b.rows, false));

  const BatchOutcome empty = run_batch(json{{"cells", json::array()}});
  CHECK(empty.rows.empty());
  CHECK(empty.summary.empty());
  CHECK(empty.ok);

  CHECK_THROWS_AS(run_batch(json{{"cells", {{{"solvers", {"nope"}}}}}}), std::invalid_argument);
}

TEST_CASE("batch: a failing cell is isolated") {
  const json config = {{"cells",
                        {{{"name", "bad"}, {"seeds", 2}, {"gen", {{"horizon", 3}, {"lambda", "1/8"}}}, {"solvers", {"maxt-logn"}}},
                         {{"name", "good"}, {"seeds", 2}, {"gen", {{"n", 3}}}, {"solvers", {"maxt-logn"}}}}}};
  const BatchOutcome r = run_batch(config);
  REQUIRE(r.rows.size() == 4);
  CHECK_FALSE(r.ok);
  CHECK(r.rows[0].status == "error");
  CHECK(r.rows[2].status == "ok");
  CHECK(r.rows[3].status == "ok");
}

#ifdef _OPENMP
TEST_CASE("batch rows do not depend on the pool size") {
  const json config = {{"seed", 8},
                       {"cells",
                        {{{"name", "c"},
                          {"seeds", 6},
                          {"gen", {{"n", 5}, {"horizon", 6}}},
                          {"solvers", {"maxt-general", "minr"}}}}}};
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = rows_to_csv(run_batch(config).rows, false);
  omp_set_num_threads(4);
  const auto four = rows_to_csv(run_batch(config).rows, false);
  omp_set_num_threads(before);
  CHECK(one == four);
}
#endif

TEST_CASE("batch command writes results, summary and verdict") {
  ScratchDir dir("batch");
  const json config = {{"seed", 2},
                       {"cells", {{{"name", "t"}, {"seeds", 2}, {"gen", {{"n", 4}}}, {"solvers", {"maxt-general"}}}}},
                       {"acceptance", {{"scale", 0.1}, {"criteria", {3, 10}}}}};
  write_json_file(dir / "config.json", config);
  auto r = cli({"batch", "--config", dir / "config.json", "--out-dir", dir / "out"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS 3") != std::string::npos);
  const json verdict = read_json_file(dir.path() / "out" / "verdict.json");
  CHECK(verdict.at("pass") == true);
  CHECK(verdict.at("criteria").size() == 2);
  CHECK(read_json_file(dir.path() / "out" / "summary.json").contains("maxt-general"));
  CHECK(rows_from_csv(slurp(dir.path() / "out" / "results.csv")).size() == 2);
}

TEST_CASE("default output directory comes from the environment") {
  ScratchDir dir("envout");
  ::setenv("MIGSCHED_OUT_DIR", dir.path().c_str(), 1);
  const auto r = cli({"gen", "--n", "3"});
  ::unsetenv("MIGSCHED_OUT_DIR");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(dir.path() / "instance.json"));
}

TEST_CASE("compare command exit code follows the rows") {
  ScratchDir dir("cmp");
  write_json_file(dir / "inst.json", instance_to_json(tiny()));
  auto ok = cli({"compare", "--instance", dir / "inst.json", "--solvers", "maxt-general,minr", "--timing"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("runtime_ms") != std::string::npos);
  // The tiny instance is laminar, so "all" includes the laminar solvers.
  auto all = cli({"compare", "--instance", dir / "inst.json", "--solvers", "all"});
  CHECK(all.code == 0);
  CHECK(rows_from_csv(all.out).size() == known_solvers().size());
  CHECK(cli({"compare", "--instance", dir / "inst.json", "--solvers", "nope"}).code == exit_usage);
}
