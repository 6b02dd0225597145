#pragma once

#include "sg/core.hpp"
#include "sg/sampled.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace sg {

// Reflection coefficient r(k) on [-1, 1] together with g(s) = ln(1 + |r(s)|^2) and g'(s).
// Outside [-1, 1] the profile reads as zero. Immutable; copies share an id used as a cache key.
class RadiationProfile {
 public:
  enum class Kind { Zero, Builtin, Sampled, Function };

  // r = 0.
  RadiationProfile();
  // r(k) = i kappa k^3 (1 - k^2) exp(-4 k^2), with g' in closed form.
  static RadiationProfile builtin_default(double kappa = 1.0);
  // Samples on nodes covering [-1, 1]; g' comes from 4th-order differences of g.
  static RadiationProfile sampled(std::vector<double> k, std::vector<double> re,
                                  std::vector<double> im);
  // Any callable. When dg is absent it is differentiated numerically.
  static RadiationProfile function(std::function<cplx(double)> r,
                                   std::function<double(double)> dg = {},
                                   std::string name = "function");

  cplx r(double k) const;
  double g(double s) const;
  double dg(double s) const;

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double kappa() const { return kappa_; }
  std::uint64_t id() const { return id_; }
  // Achieved vanishing orders; -1 means "not known".
  int vanish_order_at_0 = -1;
  int vanish_order_at_1 = -1;
  bool is_zero() const { return kind_ == Kind::Zero; }

  // Throws UsageError naming the invariant when r(-k) = conj r(k) or |r(+-1)| ~ 0 fails.
  void validate(double tol = 1e-8) const;

  // Raw samples for the sampled kind (empty otherwise).
  const std::vector<double>& sample_k() const { return k_; }
  const std::vector<double>& sample_re() const { return re_.values(); }
  const std::vector<double>& sample_im() const { return im_.values(); }

 private:
  Kind kind_ = Kind::Zero;
  std::string name_ = "zero";
  double kappa_ = 0;
  std::uint64_t id_ = 0;
  std::vector<double> k_;
  SampledFunction re_, im_, dg_;
  std::function<cplx(double)> fn_;
  std::function<double(double)> dfn_;
};

inline constexpr double quad_tol = 1e-9;

double nu_of(const RadiationProfile& r, double k0);

// ln delta(k) = (1/2 pi i) int_{-k0}^{k0} g(s)/(s - k) ds, for k off [-k0, k0].
cplx log_delta_of(const RadiationProfile& r, double k0, cplx k);
cplx delta_of(const RadiationProfile& r, double k0, cplx k);

// chi(k) = -(1/2 pi i) int ln(k - s) g'(s) ds for k off (-inf, k0].
cplx chi_of(const RadiationProfile& r, double k0, cplx k);
// The same integral by the tanh-sinh rule, for cross-checking.
cplx chi_of_tanh_sinh(const RadiationProfile& r, double k0, cplx k);

// J = int_{-k0}^{k0} ln(k0 - s) g'(s) ds by two unrelated rules.
double alpha_integral_graded(const RadiationProfile& r, double k0);
double alpha_integral_tanh_sinh(const RadiationProfile& r, double k0);

// Quantities that depend only on (profile, zeta), memoized across calls and threads.
struct RadiationScalars {
  double k0 = 0;
  double nu = 0;
  double arg_r = 0;      // arg r(k0); 0 when r(k0) = 0
  double J = 0;          // alpha integral
  double arg_gamma = 0;  // arg Gamma(i nu); unused when nu = 0
};

const RadiationScalars& radiation_scalars(const RadiationProfile& r, double k0);

// Full phase alpha(zeta, t). Requires nu > 0.
double alpha_of(const RadiationProfile& r, double zeta, double t);
double alpha_of(const RadiationScalars& s, double t);

// Amplitude 2 sqrt(2 (1 + k0^2) nu / (k0 t)) of the Sector III wave.
double radiation_amplitude(double k0, double nu, double t);

}  // namespace sg
