#include "sg/sampled.hpp"

#include <algorithm>

namespace sg {

SampledFunction::SampledFunction(std::vector<double> nodes, std::vector<double> values)
    : x_(std::move(nodes)), y_(std::move(values)) {
  if (x_.size() != y_.size()) throw UsageError("sample grid and values differ in length");
  if (x_.size() < 5) throw UsageError("need at least 5 samples");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw UsageError("sample grid must be strictly increasing");
  for (double v : y_)
    if (!std::isfinite(v)) throw DomainError("non-finite sample value");
  h_ = (x_.back() - x_.front()) / double(x_.size() - 1);
  uniform_ = true;
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (std::abs(x_[i] - x_[i - 1] - h_) > 1e-9 * h_) {
      uniform_ = false;
      break;
    }
}

std::size_t SampledFunction::locate(double s) const {
  std::size_t i;
  if (uniform_) {
    const double f = (s - x_.front()) / h_;
    i = f <= 0 ? 0 : std::size_t(f);
  } else {
    i = std::size_t(std::upper_bound(x_.begin(), x_.end(), s) - x_.begin());
    i = i == 0 ? 0 : i - 1;
  }
  return std::min(i, x_.size() - 2);
}

double SampledFunction::operator()(double s) const {
  const std::size_t i = locate(s);
  if (uniform_) {
    const double tau = (s - x_[i]) / h_;
    if (tau == 0) return y_[i];
  } else if (s == x_[i]) {
    return y_[i];
  }
  std::size_t lo = i == 0 ? 0 : i - 1;
  lo = std::min(lo, x_.size() - 4);
  double v = 0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double w = 1;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (b != a) w *= (s - x_[b]) / (x_[a] - x_[b]);
    v += w * y_[a];
  }
  return v;
}

std::vector<double> fd_weights(double z, const std::vector<double>& nodes) {
  // Fornberg's recursion, first derivative only.
  const std::size_t n = nodes.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1, c4 = nodes[0] - z;
  c[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (double(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - double(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

SampledFunction SampledFunction::derivative() const {
  const std::size_t n = x_.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i < 2 ? 0 : i - 2;
    lo = std::min(lo, n - 5);
    std::vector<double> st(x_.begin() + lo, x_.begin() + lo + 5);
    const auto w = fd_weights(x_[i], st);
    double v = 0;
    for (std::size_t a = 0; a < 5; ++a) v += w[a] * y_[lo + a];
    d[i] = v;
  }
  return SampledFunction(x_, std::move(d));
}

}  // namespace sg
