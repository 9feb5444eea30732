#pragma once

#include "migsched/core.hpp"

#include <cstdint>

namespace migsched {

enum class WeightMode { Random, Area };

struct GenSpec {
  int n = 6;
  int hosts = 2;
  int dim = 1;
  int horizon = 8;
  Rational lambda{1, 2};         // every job gets length <= lambda |window|
  bool laminar = false;          // windows drawn from the binary tree over [1, T]
  WeightMode weights = WeightMode::Random;
  Rational demand_min{1, 10};
  Rational demand_max{1};
  int granularity = 20;          // demands are multiples of 1 / granularity
  int min_window = 1;            // smallest admissible window size
  int max_weight = 10;           // random weights are integers in [1, max_weight]
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument when no job can satisfy the spec, e.g. when
/// lambda times the largest admissible window is below 1.
Instance generate(const GenSpec& spec);

}  // namespace migsched
