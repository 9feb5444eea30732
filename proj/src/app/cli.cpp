#include "migsched/cli.hpp"

#include "migsched/acceptance.hpp"
#include "migsched/experiments.hpp"
#include "migsched/laminar.hpp"
#include "migsched/maxt.hpp"
#include "migsched/minr.hpp"
#include "migsched/oracle.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace migsched {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorkFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Output {
 public:
  Output(std::ostream& out, std::string default_name) : out_(out), default_name_(std::move(default_name)) {}

  std::string path;

  void write(const std::string& text) const {
    const std::filesystem::path target = resolve();
    if (target.empty()) {
      out_ << text;
      return;
    }
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream file(target, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + target.string());
    file << text;
  }
  void write(const json& doc) const { write(doc.dump(2) + "\n"); }

 private:
  std::filesystem::path resolve() const {
    if (!path.empty()) return path;
    if (const char* dir = std::getenv("MIGSCHED_OUT_DIR"); dir && *dir) return std::filesystem::path(dir) / default_name_;
    return {};
  }

  std::ostream& out_;
  std::string default_name_;
};

Instance read_instance(const std::string& path) {
  try {
    return load_instance(path);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

json read_document(const std::string& path) {
  try {
    return read_json_file(path);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

Rational parse_arg(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(name, "expected a rational such as 3/4, got '" + text + "'");
  }
}

json ids_to_json(const std::set<int>& ids) { return json(std::vector<int>(ids.begin(), ids.end())); }

json window_json(const TimeWindow& w) { return json::array({w.start, w.end}); }

json stats_to_json(const IntervalStats& s) {
  return {{"checked", s.checked},
          {"violations", s.violations},
          {"violation_rate", s.violation_rate()},
          {"max_ratio", rational_to_json(s.max_ratio)}};
}

// Option sets shared between commands.
struct CommonOptions {
  std::uint64_t seed = 1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--seed", common.seed, "Random seed");
  cmd->add_option("--out", common.out, "Output file (default: $MIGSCHED_OUT_DIR/<name> or stdout)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-host preemptive scheduling solvers"};
  app.require_subcommand(1);
  CommonOptions common;
  int status = exit_ok;
  std::function<void()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  GenSpec spec;
  std::string spec_file, lambda_text = "1/2", dmin_text = "1/10", dmax_text = "1", weights = "random";
  gen->add_option("--spec", spec_file, "JSON file with generator fields; flags override it");
  gen->add_option("--n", spec.n, "Number of jobs");
  gen->add_option("--hosts,-m", spec.hosts, "Number of hosts");
  gen->add_option("--dim,-d", spec.dim, "Resource dimensions");
  gen->add_option("--horizon,-T", spec.horizon, "Time horizon");
  auto* gen_lambda = gen->add_option("--lambda", lambda_text, "Slackness bound p <= lambda |window|");
  gen->add_flag("--laminar", spec.laminar, "Draw windows from the binary tree");
  gen->add_option("--weights", weights, "random or area")->check(CLI::IsMember({"random", "area"}));
  auto* gen_dmin = gen->add_option("--demand-min", dmin_text, "Smallest demand");
  auto* gen_dmax = gen->add_option("--demand-max", dmax_text, "Largest demand");
  gen->add_option("--granularity", spec.granularity, "Demands are multiples of 1/granularity");
  gen->add_option("--min-window", spec.min_window, "Smallest window size");
  gen->add_option("--max-weight", spec.max_weight, "Largest random weight");
  add_common(gen, common);
  gen->callback([&] {
    action = [&] {
      GenSpec s = spec;
      if (!spec_file.empty()) {
        s = gen_spec_from_json(read_document(spec_file));
        // Explicit flags win over the file.
        if (gen->count("--n")) s.n = spec.n;
        if (gen->count("--hosts")) s.hosts = spec.hosts;
        if (gen->count("--dim")) s.dim = spec.dim;
        if (gen->count("--horizon")) s.horizon = spec.horizon;
        if (gen->count("--laminar")) s.laminar = spec.laminar;
        if (gen->count("--granularity")) s.granularity = spec.granularity;
        if (gen->count("--min-window")) s.min_window = spec.min_window;
        if (gen->count("--max-weight")) s.max_weight = spec.max_weight;
      }
      if (spec_file.empty() || gen_lambda->count()) s.lambda = parse_arg("--lambda", lambda_text);
      if (spec_file.empty() || gen_dmin->count()) s.demand_min = parse_arg("--demand-min", dmin_text);
      if (spec_file.empty() || gen_dmax->count()) s.demand_max = parse_arg("--demand-max", dmax_text);
      if (spec_file.empty() || gen->count("--weights")) s.weights = weights == "area" ? WeightMode::Area : WeightMode::Random;
      if (spec_file.empty() || gen->count("--seed")) s.seed = common.seed;
      Output o(out, "instance.json");
      o.path = common.out;
      o.write(instance_to_json(generate(s)));
    };
  });

  // laminarize
  auto* lam = app.add_subcommand("laminarize", "Map every window onto the binary tree");
  std::string instance_path;
  lam->add_option("--instance", instance_path, "Instance JSON")->required();
  add_common(lam, common);
  lam->callback([&] {
    action = [&] {
      const Instance inst = read_instance(instance_path);
      const TransformResult t = transform_instance(inst);
      json mapping = json::array();
      for (const auto& [from, to] : t.mapping.forward) mapping.push_back({{"window", window_json(from)}, {"mapped", window_json(to)}});
      json aggregate = json::array();
      for (const auto& [node, span] : t.mapping.aggregate) aggregate.push_back({{"node", window_json(node)}, {"span", window_json(span)}});
      json doc = {{"horizon", inst.horizon()},
                  {"mapping", mapping},
                  {"aggregate", aggregate},
                  {"untransformable", t.untransformable},
                  {"instance", instance_to_json(t.laminar)}};
      Output o(out, "laminar.json");
      o.path = common.out;
      o.write(doc);
    };
  });

  // solve-maxt
  auto* maxt = app.add_subcommand("solve-maxt", "Maximize the weight of completed jobs");
  std::string mode = "general", variant = "split", maxt_lambda = "auto", maxt_omega = "auto";
  maxt->add_option("--instance", instance_path, "Instance JSON")->required();
  maxt->add_option("--mode", mode, "laminar, general, logn or utilization")
      ->check(CLI::IsMember({"laminar", "general", "logn", "utilization"}));
  maxt->add_option("--variant", variant, "split or pairing (laminar and general modes)")
      ->check(CLI::IsMember({"split", "pairing"}));
  maxt->add_option("--lambda", maxt_lambda, "Slackness parameter, or auto for the measured one");
  maxt->add_option("--omega", maxt_omega, "LP scale, or auto");
  add_common(maxt, common);
  maxt->callback([&] {
    action = [&] {
      Instance inst = read_instance(instance_path);
      const std::optional<Rational> omega =
          maxt_omega == "auto" ? std::nullopt : std::optional<Rational>(parse_arg("--omega", maxt_omega));
      const LaminarVariant v = variant == "pairing" ? LaminarVariant::Pairing : LaminarVariant::Split;
      MaxTResult r;
      if (mode == "utilization") {
        std::vector<Job> jobs = inst.jobs();
        for (auto& j : jobs) j.weight = area(j);
        inst = inst.with_jobs(std::move(jobs));
        r = solve_utilization(inst, maxt_lambda == "auto" ? Rational(1, 5) : parse_arg("--lambda", maxt_lambda));
      } else if (mode == "logn") {
        r = solve_maxt_logn(inst);
      } else {
        const Rational lambda = maxt_lambda == "auto" ? slackness(inst) : parse_arg("--lambda", maxt_lambda);
        r = mode == "laminar" ? solve_maxt_laminar(inst, lambda, v, omega) : solve_maxt_general(inst, lambda, v, omega);
      }
      const Rational bound = maxt_lp_bound(inst);
      const bool valid = validate_selected(inst, r.schedule, r.selected).feasible;
      json doc = {{"mode", mode},
                  {"path", r.path},
                  {"seed", common.seed},
                  {"selected", ids_to_json(r.selected)},
                  {"profit", rational_to_json(r.profit)},
                  {"lp_bound", rational_to_json(bound)},
                  {"ratio_to_lp", bound > 0 ? rational_to_json(Rational(r.profit / bound)) : json(nullptr)},
                  {"excluded", r.excluded},
                  {"valid", valid},
                  {"hosts", inst.hosts()},
                  {"schedule", schedule_to_json(r.schedule)}};
      if (r.omega) doc["omega"] = rational_to_json(*r.omega);
      Output o(out, "maxt.json");
      o.path = common.out;
      o.write(doc);
      if (!valid) throw WorkFailed("solve-maxt: schedule failed validation");
    };
  });

  // solve-minr
  auto* minr = app.add_subcommand("solve-minr", "Minimize the number of hosts");
  std::string c_text = "6", eps_text = "1/10", theta_text = "1", minr_omega = "auto";
  int max_retries = 5, max_escalations = 4;
  bool partition = false, serial = false;
  minr->add_option("--instance", instance_path, "Instance JSON")->required();
  minr->add_option("--c", c_text, "Sampling constant");
  minr->add_option("--epsilon", eps_text, "Failure budget");
  minr->add_option("--theta", theta_text, "Window-size constant");
  minr->add_option("--omega", minr_omega, "Residual-area target, or auto");
  minr->add_option("--max-retries", max_retries, "Attempts per sampling constant");
  minr->add_option("--max-escalations", max_escalations, "Times the sampling constant may grow");
  minr->add_flag("--partition", partition, "Split jobs by window size first");
  minr->add_flag("--serial", serial, "Use the serial pricing and reporting kernels");
  add_common(minr, common);
  minr->callback([&] {
    action = [&] {
      const Instance inst = read_instance(instance_path);
      MinRParams p;
      p.c = parse_arg("--c", c_text);
      p.epsilon = parse_arg("--epsilon", eps_text);
      p.theta = parse_arg("--theta", theta_text);
      if (minr_omega != "auto") p.omega = parse_arg("--omega", minr_omega);
      p.max_retries = max_retries;
      p.max_escalations = max_escalations;
      p.execution = serial ? Execution::Serial : Execution::Parallel;
      json doc;
      Schedule schedule;
      int hosts = 0;
      if (partition) {
        PartitionResult r = solve_minr_partitioned(inst, p, common.seed);
        json slabs = json::array();
        for (std::size_t i = 0; i < r.slabs.size(); ++i) {
          const auto& s = r.slabs[i];
          slabs.push_back({{"range", s.range},
                           {"odd", s.odd},
                           {"span", window_json(s.span)},
                           {"jobs", s.jobs},
                           {"hosts", r.slab_hosts[i]}});
        }
        doc = {{"hosts_used", r.hosts_used}, {"gamma", r.table.gamma}, {"psi", r.table.psi},
               {"kappa", r.table.kappa},     {"slabs", slabs}};
        schedule = std::move(r.schedule);
        hosts = r.hosts_used;
      } else {
        MinRResult r = solve_minr(inst, p, common.seed);
        doc = {{"hosts_used", r.hosts_used},
               {"m_star", rational_to_json(r.m_star)},
               {"m_int", r.m_int},
               {"m1", r.m1},
               {"m2", r.m2},
               {"dedicated", r.dedicated},
               {"retries", r.retries},
               {"escalations", r.escalations},
               {"final_c", rational_to_json(r.final_c)},
               {"residual_empty", r.residual_empty},
               {"window_condition", r.window_condition},
               {"residual_area_stats", stats_to_json(r.residual_area)}};
        schedule = std::move(r.schedule);
        hosts = r.hosts_used;
      }
      const bool valid = validate(inst.with_hosts(std::max(hosts, 1)), schedule, true).feasible;
      doc["seed"] = common.seed;
      doc["valid"] = valid;
      doc["schedule"] = schedule_to_json(schedule);
      Output o(out, "minr.json");
      o.path = common.out;
      o.write(doc);
      if (!valid) throw WorkFailed("solve-minr: schedule failed validation");
    };
  });

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact answers on tiny instances");
  std::string task = "maxt";
  OracleLimits limits;
  int feasible_hosts = 0;
  orc->add_option("--instance", instance_path, "Instance JSON")->required();
  orc->add_option("--task", task, "maxt, minr or feasible")->check(CLI::IsMember({"maxt", "minr", "feasible"}));
  orc->add_option("--hosts", feasible_hosts, "Host count for the feasible task (default: the instance's)");
  orc->add_option("--max-jobs", limits.max_jobs, "Refuse larger instances");
  orc->add_option("--max-horizon", limits.max_horizon, "Refuse longer horizons");
  orc->add_option("--max-hosts", limits.max_hosts, "Refuse more hosts");
  orc->add_option("--node-budget", limits.node_budget, "Search nodes before giving up");
  add_common(orc, common);
  orc->callback([&] {
    action = [&] {
      const Instance inst = read_instance(instance_path);
      json doc = {{"task", task}};
      try {
        if (task == "maxt") {
          const ExactMaxT r = exact_maxt(inst, limits);
          doc["profit"] = rational_to_json(r.profit);
          doc["selected"] = ids_to_json(r.selected);
          doc["schedule"] = schedule_to_json(r.schedule);
        } else if (task == "minr") {
          doc["hosts"] = exact_minr(inst, limits);
          doc["area_bound"] = interval_area_bound(inst);
        } else {
          std::set<int> all;
          for (const auto& j : inst.jobs()) all.insert(j.id);
          const int hosts = feasible_hosts > 0 ? feasible_hosts : inst.hosts();
          const auto s = feasible_schedule(inst, all, hosts, limits);
          doc["hosts"] = hosts;
          doc["feasible"] = s.has_value();
          if (s) doc["schedule"] = schedule_to_json(*s);
        }
      } catch (const OracleRefused& e) {
        throw WorkFailed(std::string("oracle refused: ") + e.what());
      }
      Output o(out, "oracle.json");
      o.path = common.out;
      o.write(doc);
    };
  });

  // validate
  auto* val = app.add_subcommand("validate", "Check a schedule against an instance");
  std::string schedule_path;
  bool require_all = false;
  int validate_hosts = 0;
  val->add_option("--instance", instance_path, "Instance JSON")->required();
  val->add_option("--schedule", schedule_path, "Schedule JSON or a solver output holding one")->required();
  val->add_flag("--all", require_all, "Every job must complete");
  val->add_option("--hosts", validate_hosts, "Host count (default: hosts_used or hosts from the file, else the instance's)");
  add_common(val, common);
  val->callback([&] {
    action = [&] {
      const Instance inst = read_instance(instance_path);
      const json doc = read_document(schedule_path);
      Schedule schedule;
      int hosts = inst.hosts();
      std::optional<std::set<int>> selected;
      try {
        schedule = schedule_from_json(doc.contains("schedule") ? doc.at("schedule") : doc);
        if (doc.contains("hosts_used")) hosts = doc.at("hosts_used").get<int>();
        if (doc.contains("selected")) selected = doc.at("selected").get<std::set<int>>();
      } catch (const std::exception& e) {
        throw InputError(schedule_path + ": " + e.what());
      }
      if (validate_hosts > 0) hosts = validate_hosts;
      const Instance sized = inst.with_hosts(std::max(hosts, 1));
      const ValidationReport report =
          selected && !require_all ? validate_selected(sized, schedule, *selected) : validate(sized, schedule, require_all);
      Output o(out, "validation.json");
      o.path = common.out;
      o.write(report_to_json(report));
      if (!report.feasible) throw WorkFailed("validate: schedule is infeasible");
    };
  });

  // compare
  auto* cmp = app.add_subcommand("compare", "Run several solvers plus bounds on one instance");
  std::vector<std::string> solvers{"all"};
  bool no_oracle = false, timing = false;
  std::string cmp_lambda;
  cmp->add_option("--instance", instance_path, "Instance JSON")->required();
  cmp->add_option("--solvers", solvers, "Solver names, or all (laminar solvers only on laminar input)")->delimiter(',');
  cmp->add_flag("--no-oracle", no_oracle, "Skip the exact oracle");
  cmp->add_option("--lambda", cmp_lambda, "MaxT slackness parameter (default: measured)");
  cmp->add_flag("--timing", timing, "Add a runtime_ms column");
  cmp->add_option("--max-jobs", limits.max_jobs, "Oracle job limit");
  cmp->add_option("--max-horizon", limits.max_horizon, "Oracle horizon limit");
  cmp->add_option("--max-hosts", limits.max_hosts, "Oracle host limit");
  add_common(cmp, common);
  cmp->callback([&] {
    action = [&] {
      const Instance inst = read_instance(instance_path);
      std::vector<std::string> names;
      for (const auto& s : solvers) {
        if (s == "all") {
          // Laminar-only solvers join only when the windows are laminar.
          std::vector<TimeWindow> windows;
          for (const auto& j : inst.jobs()) windows.push_back(j.window());
          const bool laminar = is_laminar(windows);
          for (const auto& name : known_solvers()) {
            if (laminar || name.rfind("maxt-laminar", 0) != 0) names.push_back(name);
          }
        } else if (std::find(known_solvers().begin(), known_solvers().end(), s) == known_solvers().end()) {
          throw CLI::ValidationError("--solvers", "unknown solver " + s);
        } else {
          names.push_back(s);
        }
      }
      CompareOptions opts;
      opts.oracle = !no_oracle;
      opts.limits = limits;
      opts.timing = timing;
      if (!cmp_lambda.empty()) opts.lambda = parse_arg("--lambda", cmp_lambda);
      const auto rows = compare(inst, names, common.seed, opts);
      Output o(out, "compare.csv");
      o.path = common.out;
      o.write(rows_to_csv(rows, timing));
      for (const auto& r : rows) {
        if (r.status != "ok" || !r.valid) throw WorkFailed("compare: " + r.solver + " did not produce a valid schedule");
      }
    };
  });

  // batch
  auto* bat = app.add_subcommand("batch", "Run an experiment matrix from a config file");
  std::string config_path, out_dir;
  bat->add_option("--config", config_path, "Batch config JSON")->required();
  bat->add_option("--out-dir", out_dir, "Results directory (default: $MIGSCHED_OUT_DIR/batch or ./results)");
  bat->add_flag("--timing", timing, "Add a runtime_ms column");
  bat->add_option("--seed", common.seed, "Overrides the config's global seed");
  bat->callback([&] {
    action = [&] {
      json config = read_document(config_path);
      if (bat->count("--seed")) config["seed"] = common.seed;
      std::filesystem::path dir = out_dir;
      if (dir.empty()) {
        const char* env = std::getenv("MIGSCHED_OUT_DIR");
        dir = env && *env ? std::filesystem::path(env) / "batch" : std::filesystem::path("results");
      }
      BatchOutcome r;
      try {
        r = run_batch_to(config, dir, timing);
      } catch (const std::invalid_argument& e) {
        throw InputError(config_path + ": " + e.what());
      } catch (const json::exception& e) {
        throw InputError(config_path + ": " + e.what());
      }
      out << "wrote " << r.rows.size() << " rows to " << (dir / "results.csv").string() << "\n";
      if (r.verdict) {
        for (const auto& c : (*r.verdict)["criteria"]) {
          out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["id"].get<int>() << " "
              << c["title"].get<std::string>() << "\n";
        }
      }
      if (!r.ok) throw WorkFailed("batch: some cells failed");
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (action) action();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    status = exit_input;
  } catch (const WorkFailed& e) {
    err << "error: " << e.what() << "\n";
    status = exit_failed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    status = exit_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    status = exit_failed;
  }
  return status;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace migsched
