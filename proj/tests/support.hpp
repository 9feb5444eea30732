#pragma once

#include "migsched/core.hpp"

#include <string>
#include <vector>

namespace test {

using migsched::Job;
using migsched::Rational;

inline Rational q(const char* text) { return migsched::parse_rational(text); }

/// Scalar-demand job; weight defaults to area.
inline Job job(int id, int release, int due, int length, const char* s, const char* w = nullptr) {
  Job j;
  j.id = id;
  j.release = release;
  j.due = due;
  j.length = length;
  j.demand = {q(s)};
  j.weight = w ? q(w) : migsched::area(j);
  return j;
}

inline Job vjob(int id, int release, int due, int length, std::vector<Rational> demand, const char* w = "1") {
  Job j;
  j.id = id;
  j.release = release;
  j.due = due;
  j.length = length;
  j.demand = std::move(demand);
  j.weight = q(w);
  return j;
}

}  // namespace test
