#include "migsched/experiments.hpp"

#include "migsched/acceptance.hpp"
#include "migsched/laminar.hpp"
#include "migsched/maxt.hpp"
#include "migsched/parallel.hpp"
#include "migsched/rng.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace migsched {

const std::vector<std::string>& known_solvers() {
  static const std::vector<std::string> names{"maxt-laminar", "maxt-laminar-pairing", "maxt-general",
                                              "maxt-general-pairing", "maxt-logn", "maxt-utilization",
                                              "minr", "minr-partition"};
  return names;
}

bool is_maxt_solver(const std::string& name) { return name.rfind("maxt-", 0) == 0; }

std::optional<Rational> ExperimentRow::ratio_to_oracle() const {
  if (!value || !oracle || *oracle == 0) return std::nullopt;
  return Rational(*value / *oracle);
}

std::optional<Rational> ExperimentRow::ratio_to_lp() const {
  if (!value || !lp_bound || *lp_bound == 0) return std::nullopt;
  return Rational(*value / *lp_bound);
}

namespace {

Instance with_area_weights(const Instance& instance) {
  std::vector<Job> jobs = instance.jobs();
  for (auto& j : jobs) j.weight = area(j);
  return instance.with_jobs(std::move(jobs));
}

struct SolverOutput {
  Rational value;
  Schedule schedule;
  std::set<int> selected;
  int hosts = 0;
};

SolverOutput run_solver(const Instance& inst, const std::string& name, std::uint64_t seed,
                        const CompareOptions& options) {
  SolverOutput out;
  if (is_maxt_solver(name)) {
    const Rational lambda = options.lambda.value_or(slackness(inst));
    MaxTResult r;
    if (name == "maxt-laminar") {
      r = solve_maxt_laminar(inst, lambda);
    } else if (name == "maxt-laminar-pairing") {
      r = solve_maxt_laminar(inst, lambda, LaminarVariant::Pairing);
    } else if (name == "maxt-general") {
      r = solve_maxt_general(inst, lambda);
    } else if (name == "maxt-general-pairing") {
      r = solve_maxt_general(inst, lambda, LaminarVariant::Pairing);
    } else if (name == "maxt-logn") {
      r = solve_maxt_logn(inst);
    } else if (name == "maxt-utilization") {
      r = solve_utilization(inst, options.lambda.value_or(Rational(1, 5)));
    } else {
      throw std::invalid_argument("unknown solver " + name);
    }
    out.value = r.profit;
    out.schedule = std::move(r.schedule);
    out.selected = std::move(r.selected);
    out.hosts = inst.hosts();
    return out;
  }
  if (name == "minr") {
    MinRResult r = solve_minr(inst, options.minr, seed);
    out.value = r.hosts_used;
    out.hosts = r.hosts_used;
    out.schedule = std::move(r.schedule);
  } else if (name == "minr-partition") {
    PartitionResult r = solve_minr_partitioned(inst, options.minr, seed);
    out.value = r.hosts_used;
    out.hosts = r.hosts_used;
    out.schedule = std::move(r.schedule);
  } else {
    throw std::invalid_argument("unknown solver " + name);
  }
  for (const auto& j : inst.jobs()) out.selected.insert(j.id);
  return out;
}

}  // namespace

std::vector<ExperimentRow> compare(const Instance& instance, const std::vector<std::string>& solvers,
                                   std::uint64_t seed, const CompareOptions& options) {
  const std::string digest = instance_digest(instance);
  const Instance area_weighted = with_area_weights(instance);

  // Bounds are computed once per objective and only when some solver needs them.
  std::optional<Rational> maxt_oracle, util_oracle, minr_oracle, maxt_lp, util_lp, minr_lp;
  bool maxt_done = false, util_done = false, minr_done = false;
  auto bounds_for = [&](const std::string& name) -> std::pair<std::optional<Rational>, std::optional<Rational>> {
    if (name == "maxt-utilization") {
      if (!util_done) {
        util_done = true;
        util_lp = maxt_lp_bound(area_weighted);
        if (options.oracle) {
          try {
            util_oracle = exact_maxt(area_weighted, options.limits).profit;
          } catch (const OracleRefused&) {
          }
        }
      }
      return {util_lp, util_oracle};
    }
    if (is_maxt_solver(name)) {
      if (!maxt_done) {
        maxt_done = true;
        maxt_lp = maxt_lp_bound(instance);
        if (options.oracle) {
          try {
            maxt_oracle = exact_maxt(instance, options.limits).profit;
          } catch (const OracleRefused&) {
          }
        }
      }
      return {maxt_lp, maxt_oracle};
    }
    if (!minr_done) {
      minr_done = true;
      try {
        minr_lp = solve_config_lp(instance).m_star;
      } catch (const std::exception&) {
      }
      if (options.oracle) {
        try {
          minr_oracle = exact_minr(instance, options.limits);
        } catch (const OracleRefused&) {
        }
      }
    }
    return {minr_lp, minr_oracle};
  };

  std::vector<ExperimentRow> rows;
  for (const auto& name : solvers) {
    ExperimentRow row;
    row.digest = digest;
    row.solver = name;
    row.seed = derive_seed(seed, hash_name(name));
    row.objective = is_maxt_solver(name) ? "profit" : "hosts";
    const auto start = std::chrono::steady_clock::now();
    try {
      const Instance& inst = name == "maxt-utilization" ? area_weighted : instance;
      SolverOutput out = run_solver(inst, name, row.seed, options);
      row.value = out.value;
      if (is_maxt_solver(name)) {
        row.valid = validate_selected(inst, out.schedule, out.selected).feasible;
      } else {
        row.valid = validate(inst.with_hosts(std::max(out.hosts, 1)), out.schedule, true).feasible;
      }
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
    }
    if (options.timing) {
      row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    auto [lp, oracle] = bounds_for(name);
    row.lp_bound = lp;
    row.oracle = oracle;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string opt_text(const std::optional<Rational>& v) { return v ? to_string(*v) : std::string(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

const char* const csv_header = "cell,digest,solver,seed,objective,value,lp_bound,oracle,ratio_oracle,ratio_lp,valid,status,error";

}  // namespace

std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool timing) {
  std::ostringstream out;
  out << csv_header << (timing ? ",runtime_ms" : "") << '\n';
  for (const auto& r : rows) {
    out << csv_escape(r.cell) << ',' << r.digest << ',' << r.solver << ',' << r.seed << ',' << r.objective << ','
        << opt_text(r.value) << ',' << opt_text(r.lp_bound) << ',' << opt_text(r.oracle) << ','
        << opt_text(r.ratio_to_oracle()) << ',' << opt_text(r.ratio_to_lp()) << ',' << (r.valid ? 1 : 0) << ','
        << r.status << ',' << csv_escape(r.error);
    if (timing) out << ',' << r.runtime_ms;
    out << '\n';
  }
  return out.str();
}

std::vector<ExperimentRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ExperimentRow> rows;
  if (!std::getline(in, line) || line.rfind(csv_header, 0) != 0) throw std::invalid_argument("csv: unexpected header");
  auto opt = [](const std::string& s) -> std::optional<Rational> {
    if (s.empty()) return std::nullopt;
    return parse_rational(s);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = csv_split(line);
    if (c.size() < 13) throw std::invalid_argument("csv: short row");
    ExperimentRow r;
    r.cell = c[0];
    r.digest = c[1];
    r.solver = c[2];
    r.seed = std::stoull(c[3]);
    r.objective = c[4];
    r.value = opt(c[5]);
    r.lp_bound = opt(c[6]);
    r.oracle = opt(c[7]);
    r.valid = c[10] == "1";
    r.status = c[11];
    r.error = c[12];
    if (c.size() > 13) r.runtime_ms = std::stod(c[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

GenSpec gen_spec_from_json(const json& doc) {
  GenSpec s;
  s.n = doc.value("n", s.n);
  s.hosts = doc.value("hosts", s.hosts);
  s.dim = doc.value("dim", s.dim);
  s.horizon = doc.value("horizon", s.horizon);
  if (doc.contains("lambda")) s.lambda = rational_from_json(doc["lambda"]);
  s.laminar = doc.value("laminar", s.laminar);
  if (doc.contains("weights")) {
    const std::string w = doc["weights"].get<std::string>();
    if (w != "random" && w != "area") throw std::invalid_argument("gen: weights must be random or area");
    s.weights = w == "area" ? WeightMode::Area : WeightMode::Random;
  }
  if (doc.contains("demand_min")) s.demand_min = rational_from_json(doc["demand_min"]);
  if (doc.contains("demand_max")) s.demand_max = rational_from_json(doc["demand_max"]);
  s.granularity = doc.value("granularity", s.granularity);
  s.min_window = doc.value("min_window", s.min_window);
  s.max_weight = doc.value("max_weight", s.max_weight);
  s.seed = doc.value("seed", s.seed);
  return s;
}

json gen_spec_to_json(const GenSpec& s) {
  return json{{"n", s.n},
              {"hosts", s.hosts},
              {"dim", s.dim},
              {"horizon", s.horizon},
              {"lambda", to_string(s.lambda)},
              {"laminar", s.laminar},
              {"weights", s.weights == WeightMode::Area ? "area" : "random"},
              {"demand_min", to_string(s.demand_min)},
              {"demand_max", to_string(s.demand_max)},
              {"granularity", s.granularity},
              {"min_window", s.min_window},
              {"max_weight", s.max_weight},
              {"seed", s.seed}};
}

MinRParams minr_params_from_json(const json& doc) {
  MinRParams p;
  if (doc.contains("c")) p.c = rational_from_json(doc["c"]);
  if (doc.contains("epsilon")) p.epsilon = rational_from_json(doc["epsilon"]);
  if (doc.contains("theta")) p.theta = rational_from_json(doc["theta"]);
  if (doc.contains("omega")) p.omega = rational_from_json(doc["omega"]);
  p.max_retries = doc.value("max_retries", p.max_retries);
  p.max_escalations = doc.value("max_escalations", p.max_escalations);
  return p;
}

std::map<std::string, SolverSummary> summarize(const std::vector<ExperimentRow>& rows) {
  std::map<std::string, std::vector<double>> by_oracle, by_lp;
  std::map<std::string, SolverSummary> out;
  for (const auto& r : rows) {
    auto& s = out[r.solver];
    ++s.runs;
    if (r.status != "ok") {
      ++s.errors;
      continue;
    }
    if (!r.valid) ++s.invalid;
    if (auto q = r.ratio_to_oracle()) by_oracle[r.solver].push_back(to_double(*q));
    if (auto q = r.ratio_to_lp()) by_lp[r.solver].push_back(to_double(*q));
  }
  auto fill = [](std::vector<double>& v, std::optional<double>& lo, std::optional<double>& mid) {
    if (v.empty()) return;
    std::sort(v.begin(), v.end());
    lo = v.front();
    mid = v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
  };
  for (auto& [name, s] : out) {
    fill(by_oracle[name], s.min_ratio_oracle, s.median_ratio_oracle);
    fill(by_lp[name], s.min_ratio_lp, s.median_ratio_lp);
  }
  return out;
}

json summary_to_json(const std::map<std::string, SolverSummary>& summary) {
  json out = json::object();
  auto num = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  for (const auto& [name, s] : summary) {
    out[name] = {{"runs", s.runs},
                 {"errors", s.errors},
                 {"invalid", s.invalid},
                 {"min_ratio_oracle", num(s.min_ratio_oracle)},
                 {"median_ratio_oracle", num(s.median_ratio_oracle)},
                 {"min_ratio_lp", num(s.min_ratio_lp)},
                 {"median_ratio_lp", num(s.median_ratio_lp)}};
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t global, const std::string& cell, std::uint64_t index) {
  return derive_seed(derive_seed(global, hash_name(cell)), index);
}

BatchOutcome run_batch(const json& config) {
  const std::uint64_t global = config.value("seed", std::uint64_t{1});
  struct Task {
    std::size_t cell;
    std::uint64_t index;
  };
  const json cells = config.value("cells", json::array());
  std::vector<Task> tasks;
  std::vector<std::vector<std::string>> solvers(cells.size());
  std::vector<CompareOptions> options(cells.size());
  std::vector<GenSpec> specs(cells.size());
  std::vector<std::string> names(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const json& cell = cells[c];
    names[c] = cell.value("name", "cell" + std::to_string(c));
    specs[c] = gen_spec_from_json(cell.value("gen", json::object()));
    solvers[c] = cell.value("solvers", std::vector<std::string>{});
    for (const auto& s : solvers[c]) {
      if (std::find(known_solvers().begin(), known_solvers().end(), s) == known_solvers().end()) {
        throw std::invalid_argument("batch: unknown solver " + s);
      }
    }
    options[c].oracle = cell.value("oracle", true);
    if (cell.contains("lambda")) options[c].lambda = rational_from_json(cell["lambda"]);
    if (cell.contains("minr")) options[c].minr = minr_params_from_json(cell["minr"]);
    options[c].minr.execution = Execution::Serial;  // the pool is already parallel
    const std::uint64_t seeds = cell.value("seeds", std::uint64_t{1});
    for (std::uint64_t i = 0; i < seeds; ++i) tasks.push_back({c, i});
  }

  std::vector<std::vector<ExperimentRow>> results(tasks.size());
  std::vector<std::string> failures(tasks.size());
  const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    const Task& t = tasks[k];
    const std::uint64_t seed = cell_seed(global, names[t.cell], t.index);
    try {
      GenSpec spec = specs[t.cell];
      spec.seed = seed;
      const Instance inst = generate(spec);
      results[k] = compare(inst, solvers[t.cell], seed, options[t.cell]);
      for (auto& r : results[k]) r.cell = names[t.cell];
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  }

  BatchOutcome out;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (!failures[k].empty()) {
      // A cell that could not even generate its instance still leaves a row per solver.
      for (const auto& s : solvers[tasks[k].cell]) {
        ExperimentRow r;
        r.cell = names[tasks[k].cell];
        r.solver = s;
        r.seed = cell_seed(global, names[tasks[k].cell], tasks[k].index);
        r.objective = is_maxt_solver(s) ? "profit" : "hosts";
        r.status = "error";
        r.error = failures[k];
        out.rows.push_back(std::move(r));
      }
      out.ok = false;
      continue;
    }
    for (auto& r : results[k]) {
      if (r.status != "ok" || !r.valid) out.ok = false;
      out.rows.push_back(std::move(r));
    }
  }
  out.summary = summary_to_json(summarize(out.rows));
  if (config.contains("acceptance")) {
    AcceptanceOptions a;
    a.scale = config["acceptance"].value("scale", 1.0);
    a.seed = config["acceptance"].value("seed", a.seed);
    std::set<int> only;
    for (int id : config["acceptance"].value("criteria", std::vector<int>{})) only.insert(id);
    const auto results_acc = run_acceptance(a, only);
    out.verdict = verdict_to_json(results_acc, a.scale);
    if (!(*out.verdict)["pass"].get<bool>()) out.ok = false;
  }
  return out;
}

BatchOutcome run_batch_to(const json& config, const std::filesystem::path& dir, bool timing) {
  BatchOutcome out = run_batch(config);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "results.csv", std::ios::binary) << rows_to_csv(out.rows, timing);
  write_json_file(dir / "summary.json", out.summary);
  if (out.verdict) write_json_file(dir / "verdict.json", *out.verdict);
  return out;
}

}  // namespace migsched
