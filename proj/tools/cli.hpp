#pragma once

#include "sg/core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sg::cli {

// Parsed `min:max:count` axis; count >= 2.
struct GridSpec {
  double min = 0, max = 0;
  std::size_t count = 0;
  std::vector<double> values() const { return linspace(min, max, count); }
};

GridSpec parse_grid(const std::string& spec);

// Runs the `sg` tool. Exit status: 0 success, 1 a validation check failed, 2 bad input or error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sg::cli
