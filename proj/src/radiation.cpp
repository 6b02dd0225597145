#include "sg/radiation.hpp"

#include "sg/gamma.hpp"
#include "sg/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace sg {

namespace {

std::uint64_t next_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

double default_dg(double kappa, double k) {
  const double k2 = k * k, q = 1 - k2, e = std::exp(-8 * k2);
  const double k5 = k2 * k2 * k, k7 = k5 * k2;
  const double p = kappa * kappa * k5 * k * q * q * e;
  return kappa * kappa * e * (6 * k5 * q * q - 4 * k7 * q - 16 * k7 * q * q) / (1 + p);
}

}  // namespace

RadiationProfile::RadiationProfile() = default;

RadiationProfile RadiationProfile::builtin_default(double kappa) {
  if (!std::isfinite(kappa)) throw UsageError("kappa must be finite");
  RadiationProfile p;
  if (kappa == 0) return p;
  p.kind_ = Kind::Builtin;
  p.name_ = "default";
  p.kappa_ = kappa;
  p.id_ = next_id();
  p.vanish_order_at_0 = 3;
  p.vanish_order_at_1 = 1;
  return p;
}

RadiationProfile RadiationProfile::sampled(std::vector<double> k, std::vector<double> re,
                                           std::vector<double> im) {
  if (k.size() != re.size() || k.size() != im.size())
    throw UsageError("sampled profile: k, re and im must have equal lengths");
  if (k.size() < 5) throw UsageError("sampled profile needs at least 5 nodes");
  if (k.front() > -1 + 1e-12 || k.back() < 1 - 1e-12)
    throw UsageError("sampled profile must cover [-1, 1]");
  RadiationProfile p;
  p.kind_ = Kind::Sampled;
  p.name_ = "sampled";
  p.id_ = next_id();
  std::vector<double> g(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) g[i] = std::log1p(re[i] * re[i] + im[i] * im[i]);
  p.re_ = SampledFunction(k, std::move(re));
  p.im_ = SampledFunction(k, std::move(im));
  p.dg_ = SampledFunction(k, std::move(g)).derivative();
  p.k_ = std::move(k);
  return p;
}

RadiationProfile RadiationProfile::function(std::function<cplx(double)> r,
                                            std::function<double(double)> dg, std::string name) {
  if (!r) throw UsageError("function profile needs a callable");
  RadiationProfile p;
  p.kind_ = Kind::Function;
  p.name_ = std::move(name);
  p.id_ = next_id();
  p.fn_ = std::move(r);
  p.dfn_ = std::move(dg);
  return p;
}

cplx RadiationProfile::r(double k) const {
  switch (kind_) {
    case Kind::Zero:
      return 0;
    case Kind::Builtin: {
      if (std::abs(k) > 1) return 0;
      const double k2 = k * k;
      return cplx(0, kappa_ * k2 * k * (1 - k2) * std::exp(-4 * k2));
    }
    case Kind::Sampled:
      if (k < k_.front() || k > k_.back()) return 0;
      return {re_(k), im_(k)};
    case Kind::Function:
      return fn_(k);
  }
  return 0;
}

double RadiationProfile::g(double s) const {
  if (kind_ == Kind::Zero) return 0;
  return std::log1p(std::norm(r(s)));
}

double RadiationProfile::dg(double s) const {
  switch (kind_) {
    case Kind::Zero:
      return 0;
    case Kind::Builtin:
      return std::abs(s) > 1 ? 0 : default_dg(kappa_, s);
    case Kind::Sampled:
      if (s < k_.front() || s > k_.back()) return 0;
      return dg_(s);
    case Kind::Function: {
      if (dfn_) return dfn_(s);
      const double h = 1e-3;
      return (-g(s + 2 * h) + 8 * g(s + h) - 8 * g(s - h) + g(s - 2 * h)) / (12 * h);
    }
  }
  return 0;
}

void RadiationProfile::validate(double tol) const {
  if (kind_ == Kind::Zero) return;
  for (int i = 0; i <= 200; ++i) {
    const double k = i / 200.0;
    const cplx a = r(k), b = r(-k);
    require_finite(a, "r(k)");
    if (std::abs(b - std::conj(a)) > tol * std::max(1.0, std::abs(a)))
      throw UsageError("radiation profile violates r(-k) = conj(r(k))");
  }
  if (std::abs(r(1.0)) > tol || std::abs(r(-1.0)) > tol)
    throw UsageError("radiation profile must vanish at k = +-1");
}

double nu_of(const RadiationProfile& r, double k0) {
  if (!(k0 > 0 && k0 <= 1)) throw DomainError("nu needs k0 in (0, 1]");
  return r.g(k0) / (2 * pi);
}

cplx log_delta_of(const RadiationProfile& r, double k0, cplx k) {
  require_finite(k, "k");
  if (k.imag() == 0 && std::abs(k.real()) <= k0) throw DomainError("delta evaluated on its cut");
  if (r.is_zero() || k0 == 0) return 0;
  // Subtract g at the point of the cut nearest to k so the remaining integrand stays bounded.
  const double s0 = std::clamp(k.real(), -k0, k0);
  const double g0 = r.g(s0);
  auto f = [&](double s) { return cplx(r.g(s) - g0) / (s - k); };
  std::vector<double> breaks{-k0};
  if (s0 > -k0 && s0 < k0) breaks.push_back(s0);
  breaks.push_back(k0);
  cplx integral;
  try {
    integral = quad::adaptive(f, breaks, quad_tol).value;
  } catch (const NumericalError&) {
    throw NumericalError("delta quadrature did not converge");
  }
  integral += g0 * (std::log(k0 - k) - std::log(-k0 - k));
  return integral / (2 * pi * I);
}

cplx delta_of(const RadiationProfile& r, double k0, cplx k) {
  return std::exp(log_delta_of(r, k0, k));
}

namespace {

void require_off_chi_cut(double k0, cplx k) {
  require_finite(k, "k");
  if (k.imag() == 0 && k.real() <= k0) throw DomainError("chi evaluated on its cut");
}

}  // namespace

cplx chi_of(const RadiationProfile& r, double k0, cplx k) {
  require_off_chi_cut(k0, k);
  if (r.is_zero() || k0 == 0) return 0;
  const double s0 = std::clamp(k.real(), -k0, k0);
  std::vector<double> breaks{-k0};
  if (s0 > -k0 && s0 < k0) breaks.push_back(s0);
  breaks.push_back(k0);
  auto f = [&](double s) { return std::log(k - s) * r.dg(s); };
  try {
    return -quad::adaptive(f, breaks, quad_tol).value / (2 * pi * I);
  } catch (const NumericalError&) {
    throw NumericalError("chi quadrature did not converge");
  }
}

cplx chi_of_tanh_sinh(const RadiationProfile& r, double k0, cplx k) {
  require_off_chi_cut(k0, k);
  if (r.is_zero() || k0 == 0) return 0;
  // k - s = (k - k0) + (k0 - s) keeps the endpoint distance exact
  auto f = [&](double s, double, double db) { return std::log((k - k0) + db) * r.dg(s); };
  try {
    return -quad::tanh_sinh(f, -k0, k0, 1e-2 * quad_tol).value / (2 * pi * I);
  } catch (const NumericalError&) {
    throw NumericalError("chi quadrature did not converge");
  }
}

double alpha_integral_graded(const RadiationProfile& r, double k0) {
  if (r.is_zero() || k0 == 0) return 0;
  // w = k0 - s in [0, 2 k0], geometric panels of ratio 4 toward w = 0
  constexpr int panels = 12;
  auto f = [&](double w) { return std::log(w) * r.dg(k0 - w); };
  double total = 0, hi = 2 * k0;
  for (int i = 0; i < panels; ++i) {
    const double lo = hi / 4;
    try {
      total += quad::adaptive(f, {lo, hi}, quad_tol / panels).value;
    } catch (const NumericalError&) {
      throw NumericalError("alpha quadrature did not converge");
    }
    hi = lo;
  }
  // last panel [0, hi]: g' is constant to O(hi), and int_0^h ln w dw = h (ln h - 1)
  total += r.dg(k0) * hi * (std::log(hi) - 1);
  return total;
}

double alpha_integral_tanh_sinh(const RadiationProfile& r, double k0) {
  if (r.is_zero() || k0 == 0) return 0;
  auto f = [&](double s, double, double db) { return std::log(db) * r.dg(s); };
  try {
    return quad::tanh_sinh(f, -k0, k0, 1e-2 * quad_tol).value;
  } catch (const NumericalError&) {
    throw NumericalError("alpha quadrature did not converge");
  }
}

const RadiationScalars& radiation_scalars(const RadiationProfile& r, double k0) {
  using Key = std::pair<std::uint64_t, double>;
  static std::map<Key, RadiationScalars> memo;
  static std::shared_mutex mu;
  const Key key{r.id(), k0};
  {
    std::shared_lock lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  RadiationScalars s;
  s.k0 = k0;
  s.nu = nu_of(r, k0);
  if (s.nu > 0) {
    s.arg_r = principal_arg(r.r(k0));
    s.J = alpha_integral_graded(r, k0);
    s.arg_gamma = log_gamma_arg(s.nu);
  }
  std::unique_lock lock(mu);
  return memo.emplace(key, s).first->second;
}

double alpha_of(const RadiationScalars& s, double t) {
  if (!(t > 0)) throw DomainError("alpha needs t > 0");
  if (!(s.nu > 0)) throw DomainError("alpha undefined when nu = 0");
  const double k0 = s.k0, q = 1 + k0 * k0;
  return 2 * t * k0 / q - s.nu * std::log(8 * t * k0 / q) - pi / 4 + s.arg_r + s.arg_gamma -
         s.J / pi;
}

double alpha_of(const RadiationProfile& r, double zeta, double t) {
  if (!(zeta >= 0 && zeta < 1)) throw DomainError("alpha needs zeta in [0, 1)");
  return alpha_of(radiation_scalars(r, k0_of(zeta)), t);
}

double radiation_amplitude(double k0, double nu, double t) {
  if (!(k0 > 0) || !(t > 0)) throw DomainError("amplitude needs k0 > 0 and t > 0");
  return 2 * std::sqrt(2 * (1 + k0 * k0) * nu / (k0 * t));
}

}  // namespace sg
