#include "migsched/acceptance.hpp"

#include "migsched/cli.hpp"
#include "migsched/experiments.hpp"
#include "migsched/generator.hpp"
#include "migsched/laminar.hpp"
#include "migsched/lp_check.hpp"
#include "migsched/maxt.hpp"
#include "migsched/minr.hpp"
#include "migsched/oracle.hpp"
#include "migsched/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

namespace migsched {

namespace {

long scaled(long base, double scale) { return std::max(1L, static_cast<long>(std::ceil(base * scale))); }

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out;
  for (std::size_t i = 0; i < errors.size() && i < 3; ++i) out += (i ? "; " : "") + errors[i];
  if (errors.size() > 3) out += "; ...";
  return out;
}

Rational window_area(const Instance& inst, const std::set<int>& selected, const TimeWindow& w) {
  Rational total = 0;
  for (int id : selected) {
    const Job& j = inst.job(id);
    if (w.contains(j.window())) total += area(j);
  }
  return total;
}

// Criteria 1 and 2 share one corpus of laminar instances.
struct PairingCorpus {
  long instances = 0;
  long allocation_failures = 0;
  long invalid = 0;
  long below_lp = 0;
  long area_violations = 0;
  std::vector<std::string> errors;
};

PairingCorpus run_pairing_corpus(const AcceptanceOptions& opt) {
  PairingCorpus c;
  const long count = scaled(500, opt.scale);
  const Rational lambdas[] = {Rational(1, 5), Rational(1, 4), Rational(1, 3), Rational(2, 5)};
  Rng rng(derive_seed(opt.seed, 1));
  for (long i = 0; i < count; ++i) {
    GenSpec spec;
    spec.laminar = true;
    spec.hosts = static_cast<int>(rng.uniform_int(2, 5));
    spec.n = static_cast<int>(rng.uniform_int(5, 40));
    spec.horizon = rng.coin(1, 2) ? 16 : 32;
    spec.lambda = lambdas[rng.uniform_int(0, 3)];
    spec.seed = derive_seed(opt.seed, 100 + static_cast<std::uint64_t>(i));
    const Instance inst = generate(spec);
    const int m = inst.hosts();
    const Rational lambda = slackness(inst);
    if (lambda >= 1 - Rational(2, m + 2)) {
      c.errors.push_back("generator broke the slackness bound");
      continue;
    }
    ++c.instances;
    const Rational omega = omega_pairing(m, lambda);
    const LaminarTree tree = LaminarTree::for_instance(inst);
    const auto x = solve_relaxation(inst, omega);
    const auto trace = round_selection_trace(inst, tree, x);
    if (total_weight(inst, trace.selected) < x.objective) ++c.below_lp;
    for (const auto& node : tree.nodes()) {
      if (window_area(inst, trace.selected, node.interval) > (omega + lambda / m) * m * node.interval.size()) {
        ++c.area_violations;
      }
    }
    try {
      const Schedule s = schedule_selected(inst, trace.selected, tree, AllocationMode::Pairing);
      if (!validate_selected(inst, s, trace.selected).feasible) ++c.invalid;
    } catch (const AllocationFailure& e) {
      ++c.allocation_failures;
      c.errors.push_back("seed " + std::to_string(spec.seed) + ": " + e.what());
    }
  }
  return c;
}

CriterionResult criterion_pairing_total(const PairingCorpus& c) {
  CriterionResult r{1, "pairing scheduler completes every selected job", false, ""};
  r.pass = c.errors.empty() && c.allocation_failures == 0 && c.invalid == 0;
  r.detail = std::to_string(c.instances) + " instances, " + std::to_string(c.allocation_failures) +
             " allocation failures, " + std::to_string(c.invalid) + " invalid schedules";
  if (!c.errors.empty()) r.detail += " (" + join_errors(c.errors) + ")";
  return r;
}

CriterionResult criterion_rounding_bounds(const PairingCorpus& c) {
  CriterionResult r{2, "rounded profit and per-window area bounds", false, ""};
  r.pass = c.instances > 0 && c.below_lp == 0 && c.area_violations == 0;
  r.detail = std::to_string(c.instances) + " instances, " + std::to_string(c.below_lp) + " below LP, " +
             std::to_string(c.area_violations) + " window area violations";
  return r;
}

CriterionResult criterion_mapping_bounds() {
  CriterionResult r{3, "window mapping stays within a factor 4", false, ""};
  long windows = 0, violations = 0;
  for (int T : {4, 8, 16, 32, 64}) {
    const LaminarTree tree = build_tree(T);
    std::vector<TimeWindow> all;
    for (int a = 1; a <= T; ++a) {
      for (int b = a; b <= T; ++b) {
        const TimeWindow w{a, b};
        all.push_back(w);
        ++windows;
        const TimeWindow mapped = map_window(tree, w);
        if (!w.contains(mapped) || w.size() > 4 * mapped.size()) ++violations;
      }
    }
    const LaminarMapping mapping = build_mapping(tree, all);
    for (const auto& [node, span] : mapping.aggregate) {
      if (span.size() > 4 * node.size()) ++violations;
    }
  }
  r.pass = violations == 0;
  r.detail = std::to_string(windows) + " windows, " + std::to_string(violations) + " violations";
  return r;
}

CriterionResult criterion_maxt_sandwich(const AcceptanceOptions& opt) {
  CriterionResult r{4, "MaxT profit between ratio times optimum and optimum", false, ""};
  const long per_family = scaled(100, opt.scale);
  OracleLimits limits;
  limits.max_horizon = 12;
  long laminar_runs = 0, general_runs = 0, below = 0, above = 0, invalid = 0, refused = 0;
  Rational worst_laminar = 1, worst_general = 1;
  std::vector<std::string> errors;
  Rng rng(derive_seed(opt.seed, 4));

  auto check = [&](const Instance& inst, const MaxTResult& res, const Rational& opt_profit, const Rational& ratio,
                   Rational& worst) {
    if (!validate_selected(inst, res.schedule, res.selected).feasible) ++invalid;
    if (res.profit > opt_profit) ++above;
    if (res.profit < ratio * opt_profit) {
      ++below;
      errors.push_back(instance_digest(inst) + " profit " + to_string(res.profit) + " < " +
                       to_string(ratio * opt_profit));
    }
    if (opt_profit > 0 && res.profit / opt_profit < worst) worst = res.profit / opt_profit;
  };

  for (long attempt = 0; laminar_runs < per_family && attempt < 20 * per_family; ++attempt) {
    GenSpec spec;
    spec.laminar = true;
    spec.hosts = rng.coin(1, 4) ? 1 : 2;
    spec.lambda = spec.hosts == 1 ? Rational(1, 4) : Rational(1, 3);
    spec.n = static_cast<int>(rng.uniform_int(2, 6));
    spec.horizon = static_cast<int>(rng.uniform_int(4, 6));
    spec.seed = derive_seed(opt.seed, 4000 + static_cast<std::uint64_t>(attempt));
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const Rational lambda = slackness(inst);
    const Rational ratio = omega_pairing(inst.hosts(), lambda);
    if (ratio <= 0) continue;
    try {
      const Rational best = exact_maxt(inst, limits).profit;
      check(inst, solve_maxt_laminar(inst, lambda, LaminarVariant::Pairing), best, ratio, worst_laminar);
      ++laminar_runs;
    } catch (const OracleRefused&) {
      ++refused;
    } catch (const std::exception& e) {
      errors.push_back(e.what());
      ++below;
    }
  }

  for (long attempt = 0; general_runs < per_family && attempt < 20 * per_family; ++attempt) {
    GenSpec spec;
    spec.hosts = 2;
    spec.horizon = static_cast<int>(rng.uniform_int(9, 12));
    spec.min_window = 9;
    spec.lambda = Rational(1, 9);
    spec.n = static_cast<int>(rng.uniform_int(2, 6));
    spec.seed = derive_seed(opt.seed, 8000 + static_cast<std::uint64_t>(attempt));
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const Rational lambda = slackness(inst);
    const Rational ratio = Rational(1, 8) - lambda * (Rational(1, 2) + Rational(1, inst.hosts()));
    if (ratio <= 0) continue;
    try {
      const Rational best = exact_maxt(inst, limits).profit;
      check(inst, solve_maxt_general(inst, lambda, LaminarVariant::Pairing), best, ratio, worst_general);
      ++general_runs;
    } catch (const OracleRefused&) {
      ++refused;
    } catch (const std::exception& e) {
      errors.push_back(e.what());
      ++below;
    }
  }

  r.pass = laminar_runs + general_runs > 0 && below == 0 && above == 0 && invalid == 0;
  r.detail = std::to_string(laminar_runs) + " laminar + " + std::to_string(general_runs) + " general instances, " +
             std::to_string(below) + " below ratio, " + std::to_string(above) + " above optimum, " +
             std::to_string(invalid) + " invalid, worst profit/OPT " + to_string(worst_laminar) + " laminar, " +
             to_string(worst_general) + " general";
  if (refused) r.detail += ", " + std::to_string(refused) + " oracle refusals";
  if (!errors.empty()) r.detail += " (" + join_errors(errors) + ")";
  return r;
}

CriterionResult criterion_utilization(const AcceptanceOptions& opt) {
  CriterionResult r{5, "utilization greedy on long jobs", false, ""};
  const Rational lambda(1, 5);
  const long count = scaled(200, opt.scale);
  long runs = 0, below = 0, invalid = 0;
  Rational worst = 1;
  Rng rng(derive_seed(opt.seed, 5));
  for (long attempt = 0; runs < count && attempt < 20 * count; ++attempt) {
    GenSpec spec;
    spec.hosts = static_cast<int>(rng.uniform_int(1, 2));
    const Rational alpha = alpha_of(spec.hosts, lambda);
    spec.granularity = 20;
    spec.demand_min = Rational(1, 20);
    spec.demand_max = Rational(floor_to_int(alpha * 20), 20);
    spec.demand_max.canonicalize();
    spec.lambda = 1;
    spec.weights = WeightMode::Area;
    spec.n = static_cast<int>(rng.uniform_int(2, 6));
    spec.horizon = static_cast<int>(rng.uniform_int(3, 6));
    spec.seed = derive_seed(opt.seed, 5000 + static_cast<std::uint64_t>(attempt));
    const Instance all = generate(spec);
    std::vector<Job> long_jobs;
    for (const auto& j : all.jobs()) {
      if (is_long(j, lambda)) long_jobs.push_back(j);
    }
    if (long_jobs.empty()) continue;
    const Instance inst = all.with_jobs(std::move(long_jobs));
    const Rational best = exact_maxt(inst).profit;
    const MaxTResult g = utilization_greedy(inst);
    ++runs;
    if (!validate_selected(inst, g.schedule, g.selected).feasible) ++invalid;
    const Rational bound = (1 - alpha) * lambda / 3 * best;
    if (g.profit < bound) ++below;
    if (best > 0 && g.profit / best < worst) worst = g.profit / best;
  }
  r.pass = runs > 0 && below == 0 && invalid == 0;
  r.detail = std::to_string(runs) + " instances, " + std::to_string(below) + " below bound, " +
             std::to_string(invalid) + " invalid, worst greedy/OPT " + to_string(worst);
  return r;
}

CriterionResult criterion_config_lp(const AcceptanceOptions& opt) {
  CriterionResult r{6, "configuration LP bound, feasibility and exact pricing", false, ""};
  const long count = scaled(100, opt.scale);
  OracleLimits limits;
  limits.max_hosts = 6;
  long runs = 0, order = 0, infeasible_rounds = 0, rounds = 0, priced = 0, pricing_mismatch = 0, refused = 0;
  std::vector<std::string> errors;
  for (long i = 0; i < count; ++i) {
    GenSpec spec;
    spec.n = 3 + static_cast<int>(i % 4);
    spec.horizon = 6;
    spec.dim = 1 + static_cast<int>(i % 2);
    spec.lambda = Rational(2, 3);
    spec.seed = derive_seed(opt.seed, 6000 + static_cast<std::uint64_t>(i));
    const Instance inst = generate(spec);
    ConfigLpOptions lp_opts;
    lp_opts.on_round = [&](const ConfigLpSolution& s) {
      ++rounds;
      const std::string err = check_config_lp(inst, s);
      if (!err.empty()) {
        ++infeasible_rounds;
        errors.push_back(err);
      }
    };
    lp_opts.on_price = [&](std::span<const PricingProblem> problems, std::span<const PricedColumn> answers) {
      for (std::size_t k = 0; k < problems.size(); ++k) {
        if (problems[k].items.size() > 15) continue;
        ++priced;
        if (knapsack_exhaustive(problems[k].items).value != answers[k].value) ++pricing_mismatch;
      }
    };
    try {
      const ConfigLpSolution lp = solve_config_lp(inst, lp_opts);
      const int best = exact_minr(inst, limits);
      const MinRResult m = solve_minr(inst, {}, spec.seed);
      ++runs;
      const bool valid = validate(inst.with_hosts(m.hosts_used), m.schedule, true).feasible;
      if (!(lp.m_star <= best && best <= m.hosts_used && valid)) {
        ++order;
        errors.push_back("seed " + std::to_string(spec.seed) + ": m*=" + to_string(lp.m_star) +
                         " opt=" + std::to_string(best) + " hosts=" + std::to_string(m.hosts_used));
      }
    } catch (const OracleRefused&) {
      ++refused;
    }
  }
  r.pass = runs > 0 && order == 0 && infeasible_rounds == 0 && pricing_mismatch == 0 && priced > 0;
  r.detail = std::to_string(runs) + " instances, " + std::to_string(order) + " sandwich failures, " +
             std::to_string(rounds) + " master rounds (" + std::to_string(infeasible_rounds) + " infeasible), " +
             std::to_string(priced) + " pricing calls checked (" + std::to_string(pricing_mismatch) + " mismatches)";
  if (refused) r.detail += ", " + std::to_string(refused) + " oracle refusals";
  if (!errors.empty()) r.detail += " (" + join_errors(errors) + ")";
  return r;
}

// Criteria 7 and 8 share the large-window corpus.
struct MinRCorpus {
  long runs = 0;
  long failures = 0;       // threw or produced an invalid schedule
  long retried = 0;        // needed any retry or escalation
  long bound_violations = 0;
  long window_condition = 0;
  long checked = 0;
  long violations = 0;
  std::vector<std::string> errors;
};

MinRCorpus run_minr_corpus(const AcceptanceOptions& opt) {
  MinRCorpus c;
  const long count = scaled(200, opt.scale);
  const Rational theta(1, 64);
  const Rational epsilon(1, 10);
  const int horizon = 16;
  struct Run {
    bool ok = false;
    std::string error;
    MinRResult result;
    int dim = 1;
  };
  std::vector<Run> runs(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    Run& run = runs[static_cast<std::size_t>(i)];
    const int dims[] = {1, 2, 4};
    GenSpec spec;
    spec.dim = dims[i % 3];
    run.dim = spec.dim;
    spec.n = 10;
    spec.horizon = horizon;
    spec.lambda = Rational(1, 5);
    const double d = spec.dim;
    const double need = to_double(theta) * d * d * std::max(1.0, std::log2(d)) *
                        std::log2(horizon / std::sqrt(to_double(epsilon)));
    spec.min_window = std::max(5, static_cast<int>(std::ceil(need)));
    spec.seed = derive_seed(opt.seed, 7000 + static_cast<std::uint64_t>(i));
    MinRParams params;
    params.theta = theta;
    params.epsilon = epsilon;
    params.execution = Execution::Serial;
    try {
      const Instance inst = generate(spec);
      run.result = solve_minr(inst, params, spec.seed);
      run.ok = validate(inst.with_hosts(run.result.hosts_used), run.result.schedule, true).feasible;
      if (!run.ok) run.error = "invalid schedule for seed " + std::to_string(spec.seed);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  }
  for (const auto& run : runs) {
    ++c.runs;
    if (!run.ok) {
      ++c.failures;
      c.errors.push_back(run.error);
      continue;
    }
    const MinRResult& m = run.result;
    if (m.window_condition) ++c.window_condition;
    if (m.retries > 0 || m.escalations > 0) {
      ++c.retried;
    } else if (m.hosts_used > sample_draws(6, m.m_int, run.dim) + m.m_int) {
      ++c.bound_violations;
    }
    c.checked += m.residual_area.checked;
    c.violations += m.residual_area.violations;
  }
  return c;
}

std::string percent(double v) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << 100 * v << "%";
  return out.str();
}

CriterionResult criterion_minr_end_to_end(const MinRCorpus& c) {
  CriterionResult r{7, "MinR completes every job within the host bound", false, ""};
  const double rate = c.runs ? static_cast<double>(c.retried) / c.runs : 0;
  r.pass = c.runs > 0 && c.failures == 0 && c.bound_violations == 0 && rate <= 0.2;
  r.detail = std::to_string(c.runs) + " instances, " + std::to_string(c.failures) + " failures, " +
             std::to_string(c.bound_violations) + " host-bound violations, retry rate " + percent(rate) +
             (rate < 0.05 ? " (below 5%)" : " (at or above 5%)") + ", window condition met on " +
             std::to_string(c.window_condition);
  if (!c.errors.empty()) r.detail += " (" + join_errors(c.errors) + ")";
  return r;
}

CriterionResult criterion_residual_area(const MinRCorpus& c) {
  CriterionResult r{8, "residual area concentration", false, ""};
  const double rate = c.checked ? static_cast<double>(c.violations) / c.checked : 0;
  r.pass = c.checked > 0 && rate <= 0.1;
  r.detail = std::to_string(c.checked) + " intervals checked, " + std::to_string(c.violations) +
             " over target, rate " + percent(rate) + " (limit 10%)";
  return r;
}

CriterionResult criterion_partition(const AcceptanceOptions& opt) {
  CriterionResult r{9, "psi table and window partition", false, ""};
  long tables = 0, psi_violations = 0;
  for (int d : {2, 4, 8}) {
    std::vector<long> horizons;
    for (long T = 1; T <= (1L << 20); T = T * 3 + 1) horizons.push_back(T);
    for (int k = 0; k <= 20; ++k) horizons.push_back(1L << k);
    for (long T : horizons) {
      const PsiTable t = psi_table(T, d, 1);
      ++tables;
      bool ok = t.psi.front() == 0 && t.psi.back() == T && t.kappa <= log_star(static_cast<double>(T)) + 3;
      for (std::size_t i = 1; i < t.psi.size(); ++i) ok = ok && t.psi[i - 1] <= t.psi[i];
      for (int i = 1; i < t.kappa; ++i) {
        ok = ok && t.psi[i] >= 2 * t.gamma * std::log2(static_cast<double>(t.psi[i + 1]));
      }
      if (!ok) ++psi_violations;
    }
  }

  long partitions = 0, cover_violations = 0, solves = 0, invalid = 0;
  std::vector<std::string> errors;
  const long count = scaled(20, opt.scale);
  for (long i = 0; i < count; ++i) {
    GenSpec spec;
    spec.n = 30;
    spec.horizon = 120;
    spec.lambda = Rational(1, 4);
    spec.seed = derive_seed(opt.seed, 9000 + static_cast<std::uint64_t>(i));
    const Instance inst = generate(spec);
    const PsiTable table = psi_table(inst.horizon(), 1, 0.5);
    std::map<int, int> seen;
    for (const auto& s : partition_by_window(inst, table)) {
      for (int id : s.jobs) {
        ++seen[id];
        if (!s.span.contains(inst.job(id).window())) ++cover_violations;
      }
    }
    for (const auto& j : inst.jobs()) {
      if (seen[j.id] != 1) ++cover_violations;
    }
    if (seen.size() != inst.size()) ++cover_violations;
    ++partitions;

    GenSpec small = spec;
    small.n = 10;
    small.horizon = 24;
    small.dim = 2;
    const Instance sub = generate(small);
    MinRParams params;
    params.theta = Rational(1, 8);
    try {
      const PartitionResult p = solve_minr_partitioned(sub, params, small.seed);
      ++solves;
      if (!validate(sub.with_hosts(p.hosts_used), p.schedule, true).feasible) ++invalid;
    } catch (const std::exception& e) {
      ++invalid;
      errors.push_back(e.what());
    }
  }
  r.pass = psi_violations == 0 && cover_violations == 0 && invalid == 0;
  r.detail = std::to_string(tables) + " psi tables (" + std::to_string(psi_violations) + " bad), " +
             std::to_string(partitions) + " partitions (" + std::to_string(cover_violations) + " cover errors), " +
             std::to_string(solves) + " partitioned solves (" + std::to_string(invalid) + " invalid)";
  if (!errors.empty()) r.detail += " (" + join_errors(errors) + ")";
  return r;
}

CriterionResult criterion_lp(const AcceptanceOptions& opt) {
  CriterionResult r{10, "exact simplex against enumeration and certificates", false, ""};
  const long small = scaled(400, opt.scale);
  const long large = scaled(100, opt.scale);
  long enumerated = 0, mismatch = 0, certified = 0, bad_certificate = 0;
  long max_iterations = 0;
  Rng rng(derive_seed(opt.seed, 10));
  for (long i = 0; i < small; ++i) {
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    const int m = static_cast<int>(rng.uniform_int(0, 4));
    const auto p = lp::random_program(rng, n, m, rng.coin(2, 3));
    const auto s = lp::solve(p);
    const auto v = lp_vertex_enumeration(p);
    max_iterations = std::max(max_iterations, s.iterations);
    ++enumerated;
    if (s.status != v.status) {
      ++mismatch;
    } else if (s.status == lp::Status::Optimal && (s.objective != v.objective || !lp::certificate_error(p, s).empty())) {
      ++mismatch;
    }
  }
  for (long i = 0; i < large; ++i) {
    const int n = static_cast<int>(rng.uniform_int(5, 30));
    const int m = static_cast<int>(rng.uniform_int(5, 30));
    const auto p = lp::random_program(rng, n, m, true);
    const auto s = lp::solve(p);
    max_iterations = std::max(max_iterations, s.iterations);
    ++certified;
    if (s.status != lp::Status::Optimal || !lp::certificate_error(p, s).empty()) ++bad_certificate;
  }
  r.pass = mismatch == 0 && bad_certificate == 0;
  r.detail = std::to_string(enumerated) + " LPs against vertex enumeration (" + std::to_string(mismatch) +
             " mismatches), " + std::to_string(certified) + " LPs up to 30x30 with duality certificates (" +
             std::to_string(bad_certificate) + " bad), at most " + std::to_string(max_iterations) + " pivots";
  return r;
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[std::filesystem::relative(entry.path(), root).generic_string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

CriterionResult criterion_determinism(const AcceptanceOptions& opt) {
  CriterionResult r{11, "reruns with the same seed are byte-identical", false, ""};
  const std::filesystem::path base =
      opt.scratch.empty() ? std::filesystem::temp_directory_path() / ("migsched-determinism-" + std::to_string(opt.seed))
                          : opt.scratch / "determinism";
  std::filesystem::remove_all(base);
  std::vector<std::string> failed;
  for (const std::string run : {"a", "b"}) {
    const std::string dir = (base / run).string();
    std::filesystem::create_directories(dir);
    const json batch = {{"seed", 11},
                        {"cells",
                         {{{"name", "tiny"},
                           {"seeds", 3},
                           {"gen", {{"n", 5}, {"horizon", 6}}},
                           {"solvers", {"maxt-general", "minr"}}}}}};
    write_json_file(dir + "/batch.json", batch);
    const std::vector<std::vector<std::string>> commands{
        {"gen", "--n", "6", "--horizon", "8", "--seed", "5", "--out", dir + "/inst.json"},
        {"gen", "--n", "4", "--horizon", "6", "--laminar", "--seed", "5", "--out", dir + "/tiny.json"},
        {"laminarize", "--instance", dir + "/inst.json", "--out", dir + "/laminar.json"},
        {"solve-maxt", "--instance", dir + "/inst.json", "--mode", "general", "--seed", "5", "--out",
         dir + "/maxt.json"},
        {"solve-minr", "--instance", dir + "/inst.json", "--seed", "5", "--out", dir + "/minr.json"},
        {"solve-minr", "--instance", dir + "/inst.json", "--seed", "5", "--partition", "--theta", "1/8", "--out",
         dir + "/minr-partition.json"},
        {"oracle", "--instance", dir + "/tiny.json", "--task", "maxt", "--out", dir + "/oracle.json"},
        {"validate", "--instance", dir + "/inst.json", "--schedule", dir + "/minr.json", "--all", "--out",
         dir + "/validate.json"},
        {"compare", "--instance", dir + "/inst.json", "--solvers", "all", "--seed", "5", "--out",
         dir + "/compare.csv"},
        {"batch", "--config", dir + "/batch.json", "--out-dir", dir + "/batch"},
    };
    for (const auto& c : commands) {
      if (cli(c) != 0) failed.push_back(run + ":" + c[0]);
    }
  }
  const auto a = read_tree(base / "a");
  const auto b = read_tree(base / "b");
  long differing = 0;
  for (const auto& [name, bytes] : a) {
    auto it = b.find(name);
    if (it == b.end() || it->second != bytes) ++differing;
  }
  if (a.size() != b.size()) ++differing;
  r.pass = failed.empty() && differing == 0 && a.size() >= 10;
  r.detail = std::to_string(a.size()) + " files per run, " + std::to_string(differing) + " differing";
  if (!failed.empty()) r.detail += ", failed commands: " + join_errors(failed);
  std::filesystem::remove_all(base);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, const std::set<int>& only) {
  auto wanted = [&](int id) { return only.empty() || only.count(id); };
  std::vector<CriterionResult> out;
  if (wanted(1) || wanted(2)) {
    const PairingCorpus c = run_pairing_corpus(options);
    if (wanted(1)) out.push_back(criterion_pairing_total(c));
    if (wanted(2)) out.push_back(criterion_rounding_bounds(c));
  }
  if (wanted(3)) out.push_back(criterion_mapping_bounds());
  if (wanted(4)) out.push_back(criterion_maxt_sandwich(options));
  if (wanted(5)) out.push_back(criterion_utilization(options));
  if (wanted(6)) out.push_back(criterion_config_lp(options));
  if (wanted(7) || wanted(8)) {
    const MinRCorpus c = run_minr_corpus(options);
    if (wanted(7)) out.push_back(criterion_minr_end_to_end(c));
    if (wanted(8)) out.push_back(criterion_residual_area(c));
  }
  if (wanted(9)) out.push_back(criterion_partition(options));
  if (wanted(10)) out.push_back(criterion_lp(options));
  if (wanted(11)) out.push_back(criterion_determinism(options));
  return out;
}

std::string format_result(const CriterionResult& result) {
  return std::string(result.pass ? "PASS " : "FAIL ") + std::to_string(result.id) + " " + result.title + ": " +
         result.detail;
}

json verdict_to_json(const std::vector<CriterionResult>& results, double scale) {
  json criteria = json::array();
  bool pass = true;
  for (const auto& r : results) {
    pass = pass && r.pass;
    criteria.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
  }
  return {{"pass", pass}, {"scale", scale}, {"criteria", criteria}};
}

}  // namespace migsched
