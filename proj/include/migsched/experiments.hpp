#pragma once

#include "migsched/generator.hpp"
#include "migsched/json_io.hpp"
#include "migsched/minr.hpp"
#include "migsched/oracle.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace migsched {

/// maxt-laminar, maxt-laminar-pairing, maxt-general, maxt-general-pairing,
/// maxt-logn, maxt-utilization, minr, minr-partition.
const std::vector<std::string>& known_solvers();
bool is_maxt_solver(const std::string& name);

struct CompareOptions {
  bool oracle = true;
  OracleLimits limits;
  MinRParams minr;
  std::optional<Rational> lambda;  // MaxT slackness parameter; measured when empty
  bool timing = false;             // fill runtime_ms
};

/// One solver on one instance. Ratios are derived on demand, never stored.
struct ExperimentRow {
  std::string cell;
  std::string digest;
  std::string solver;
  std::uint64_t seed = 0;
  std::string objective;  // "profit" or "hosts"
  std::optional<Rational> value;
  std::optional<Rational> lp_bound;
  std::optional<Rational> oracle;
  bool valid = false;
  std::string status;  // "ok" or "error"
  std::string error;
  double runtime_ms = 0;

  std::optional<Rational> ratio_to_oracle() const;
  std::optional<Rational> ratio_to_lp() const;
};

/// Runs each solver, then the oracle and LP bounds for each objective that
/// appears. Solver failures become rows with status "error".
std::vector<ExperimentRow> compare(const Instance& instance, const std::vector<std::string>& solvers,
                                   std::uint64_t seed, const CompareOptions& options = {});

/// Stable column order; runtime_ms is appended only with `timing`.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool timing);
/// Parses rows_to_csv output. Ratio columns are ignored and recomputed.
std::vector<ExperimentRow> rows_from_csv(const std::string& text);

GenSpec gen_spec_from_json(const json& doc);
json gen_spec_to_json(const GenSpec& spec);
MinRParams minr_params_from_json(const json& doc);

struct SolverSummary {
  long runs = 0;
  long errors = 0;
  long invalid = 0;
  std::optional<double> min_ratio_oracle;
  std::optional<double> median_ratio_oracle;
  std::optional<double> min_ratio_lp;
  std::optional<double> median_ratio_lp;
};

std::map<std::string, SolverSummary> summarize(const std::vector<ExperimentRow>& rows);
json summary_to_json(const std::map<std::string, SolverSummary>& summary);

/// Per-run seed for instance `index` of a cell: independent of the solver list.
std::uint64_t cell_seed(std::uint64_t global, const std::string& cell, std::uint64_t index);

struct BatchOutcome {
  std::vector<ExperimentRow> rows;
  json summary;
  std::optional<json> verdict;
  bool ok = true;  // no cell failed and the verdict, if any, passed
};

/// Config: {"seed", "cells": [{"name", "seeds", "gen": {...}, "solvers": [...],
/// "oracle", "lambda", "minr": {...}}], "acceptance": {"scale": x}}.
/// Cells run in parallel; rows are ordered by (cell, index, solver).
BatchOutcome run_batch(const json& config);
/// run_batch plus results.csv, summary.json and verdict.json in `dir`.
BatchOutcome run_batch_to(const json& config, const std::filesystem::path& dir, bool timing);

}  // namespace migsched
