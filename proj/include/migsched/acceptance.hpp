#pragma once

#include "migsched/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace migsched {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Corpus sizes are multiplied by this; 1 gives the full suite.
  double scale = 1.0;
  std::uint64_t seed = 20240611;
  /// Where the determinism check writes its files; a temp dir when empty.
  std::filesystem::path scratch;
};

/// Runs the selected criteria (all when `only` is empty) in id order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, const std::set<int>& only = {});

/// "PASS 3 <title>: <detail>" or "FAIL ...".
std::string format_result(const CriterionResult& result);
json verdict_to_json(const std::vector<CriterionResult>& results, double scale);

}  // namespace migsched
