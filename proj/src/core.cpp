#include "sg/core.hpp"

#include <algorithm>
#include <limits>

namespace sg {

double k0_of(double zeta) {
  if (!(zeta >= 0.0 && zeta <= 1.0))
    throw DomainError("k0 requires zeta in [0, 1]");
  return std::sqrt((1.0 - zeta) / (1.0 + zeta));
}

Phases phase_values(double x, double t, cplx k) {
  require_finite(k, "k");
  if (k == cplx(0)) throw DomainError("phase singular at origin");
  Phases p;
  p.theta1 = theta1(k);
  p.theta2 = theta2(k);
  p.theta = p.theta1 * x + p.theta2 * t;
  if (t > 0) {
    const double zeta = x / t;
    if (zeta <= 1.0) p.Phi = Phi(zeta, k);
  }
  return p;
}

PhasePoint make_phase_point(double x, double t) {
  PhasePoint p;
  p.x = x;
  p.t = t;
  p.zeta = t > 0 ? x / t : std::numeric_limits<double>::infinity();
  if (p.zeta <= 1.0) p.k0 = k0_of(p.zeta);
  return p;
}

std::string to_string(const SectorLabel& label) {
  static const char* names[] = {"I", "II", "III", "IV"};
  std::string s = names[static_cast<int>(label.sector)];
  if (label.sub == SubSector::NearSoliton)
    s += "/NearSoliton(" + std::to_string(label.index) + ")";
  else if (label.sub == SubSector::Between)
    s += "/Between(" + std::to_string(label.index) + ")";
  return s;
}

SectorLabel classify_sector(double x, double t, const SectorThresholds& cfg,
                            const std::vector<double>& speeds) {
  if (x < 0 || t < 0) throw DomainError("sector classification needs x, t >= 0");
  if (x == 0 && t == 0) throw DomainError("sector undefined at the corner x = t = 0");
  if (t == 0) return {Sector::I, SubSector::None, 0};
  const double zeta = x / t;
  if (zeta >= 1.0) return {Sector::I, SubSector::None, 0};

  // A soliton ray takes precedence over the II/IV edges so that its term is never dropped.
  int near = 0;
  double best = cfg.eps_sol;
  for (std::size_t j = 0; j < speeds.size(); ++j) {
    const double gap = std::abs(zeta - speeds[j]);
    if (gap < best) {
      best = gap;
      near = int(j) + 1;
    }
  }
  if (near > 0) {
    // first index carrying this speed (pair lead for breathers)
    while (near > 1 && speeds[near - 2] == speeds[near - 1]) --near;
    return {Sector::III, SubSector::NearSoliton, near};
  }
  if (zeta >= cfg.zeta_II) return {Sector::II, SubSector::None, 0};
  if (zeta <= cfg.zeta_IV) return {Sector::IV, SubSector::None, 0};
  int faster = 0;
  for (double v : speeds)
    if (v > zeta) ++faster;
  return {Sector::III, SubSector::Between, faster + 1};
}

double wrap_to_pi(double a) {
  double w = std::remainder(a, 2 * pi);
  if (w <= -pi) w += 2 * pi;
  return w;
}

double principal_arg(cplx z) {
  double a = std::arg(z);
  if (a == -pi) a = pi;
  return a;
}

std::vector<double> unwrap_arg(const std::vector<cplx>& samples, double anchor,
                               double modulus_tol, double max_jump) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const cplx z = samples[i];
    require_finite(z, "unwrap sample");
    if (std::abs(std::abs(z) - 1.0) > modulus_tol)
      throw DomainError("unwrap sample is not on the unit circle");
    const double a = principal_arg(z);
    if (i == 0) {
      out.push_back(anchor + wrap_to_pi(a - anchor));
      continue;
    }
    const double step = wrap_to_pi(a - out.back());
    if (std::abs(step) >= max_jump) throw DomainError("grid too coarse for unwrapping");
    out.push_back(out.back() + step);
  }
  return out;
}

void require_finite(cplx z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string("non-finite value for ") + what);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw UsageError("linspace needs at least 2 points");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0 && b > 0)) throw UsageError("logspace needs positive endpoints");
  auto e = linspace(std::log(a), std::log(b), n);
  for (auto& v : e) v = std::exp(v);
  e.front() = a;
  e.back() = b;
  return e;
}

}  // namespace sg
