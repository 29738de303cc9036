#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "slnt/app/config.hpp"

namespace slnt::app {

inline constexpr std::size_t kMaxSweepCases = 10000;

/// One grid axis. Keys n, l and N set quantum numbers; any other key is a
/// potential parameter.
struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

/// Parses "key=v1,v2,...". An empty value list is allowed and yields no cases.
SweepAxis parse_axis(const std::string& text);

/// Cartesian product in axis order, last axis fastest. No axes means no cases.
/// Throws Config past kMaxSweepCases or on a non-integer quantum number.
std::vector<RunConfig> expand_grid(const RunConfig& base, const std::vector<SweepAxis>& axes);

/// Writes a CSV header and one row per case, in grid order, as rows become
/// available. Per-case failures go into the error column.
void run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, std::ostream& out, unsigned threads = 0);

}  // namespace slnt::app
