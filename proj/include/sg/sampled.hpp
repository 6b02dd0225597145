#pragma once

#include "sg/core.hpp"

#include <vector>

namespace sg {

// Real function known at strictly increasing nodes. Values between nodes come from the local
// cubic Lagrange interpolant on the four nearest nodes.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(std::vector<double> nodes, std::vector<double> values);

  double operator()(double s) const;
  // Nodal derivative by 5-point finite differences (4th-order central in the interior,
  // one-sided near the ends), returned as a new sampled function on the same nodes.
  SampledFunction derivative() const;

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }
  bool uniform() const { return uniform_; }

 private:
  std::size_t locate(double s) const;

  std::vector<double> x_, y_;
  bool uniform_ = false;
  double h_ = 0;
};

// Finite-difference weights for the first derivative at z from the given stencil nodes.
std::vector<double> fd_weights(double z, const std::vector<double>& nodes);

}  // namespace sg
