#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sg {

using cplx = std::complex<double>;

template <typename Real> using Mat2T = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real> using Vec2T = Eigen::Matrix<std::complex<Real>, 2, 1>;
using Mat2 = Mat2T<double>;
using Vec2 = Vec2T<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Error taxonomy shared by all modules.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Real> Mat2T<Real> sigma1() {
  Mat2T<Real> s;
  s << 0, 1, 1, 0;
  return s;
}
template <typename Real> Mat2T<Real> sigma2() {
  using C = std::complex<Real>;
  Mat2T<Real> s;
  s << C(0), C(0, -1), C(0, 1), C(0);
  return s;
}
template <typename Real> Mat2T<Real> sigma3() {
  Mat2T<Real> s;
  s << 1, 0, 0, -1;
  return s;
}

// Rotation by u/2, i.e. exp(-i u sigma2 / 2).
template <typename Real> Mat2T<Real> half_rotation(Real u) {
  Mat2T<Real> r;
  const Real c = std::cos(u / 2), s = std::sin(u / 2);
  r << c, -s, s, c;
  return r;
}

template <typename Real> std::complex<Real> theta1(std::complex<Real> k) {
  return (k - Real(1) / k) / Real(4);
}
template <typename Real> std::complex<Real> theta2(std::complex<Real> k) {
  return (k + Real(1) / k) / Real(4);
}
template <typename Real>
std::complex<Real> theta(Real x, Real t, std::complex<Real> k) {
  return theta1(k) * x + theta2(k) * t;
}

// Similarity variable k0 = sqrt((1 - zeta)/(1 + zeta)), zeta in [0, 1].
double k0_of(double zeta);

template <typename Real>
std::complex<Real> Phi(Real zeta, std::complex<Real> k) {
  const Real k0 = Real(k0_of(double(zeta)));
  return std::complex<Real>(0, 1) * (k * k + k0 * k0) / (k * (Real(1) + k0 * k0));
}

struct Phases {
  cplx theta1, theta2, theta;
  std::optional<cplx> Phi;
};

Phases phase_values(double x, double t, cplx k);

struct PhasePoint {
  double x = 0, t = 0;
  double zeta = 0;  // +inf when t == 0
  std::optional<double> k0;
};

PhasePoint make_phase_point(double x, double t);

enum class Sector { I, II, III, IV };
enum class SubSector { None, NearSoliton, Between };

struct SectorLabel {
  Sector sector = Sector::I;
  SubSector sub = SubSector::None;
  int index = 0;  // 1-based soliton or band index when sub != None

  bool operator==(const SectorLabel&) const = default;
};

std::string to_string(const SectorLabel& label);

struct SectorThresholds {
  double zeta_II = 0.9;
  double zeta_IV = 0.1;
  double eps_sol = 0.05;
};

// speeds: v_1 >= v_2 >= ... of the solitons (one entry per pole with |lambda| < 1).
SectorLabel classify_sector(double x, double t, const SectorThresholds& cfg,
                            const std::vector<double>& speeds = {});

// Principal argument in (-pi, pi].
double principal_arg(cplx z);
double wrap_to_pi(double a);

std::vector<double> unwrap_arg(const std::vector<cplx>& samples, double anchor,
                               double modulus_tol = 1e-6, double max_jump = pi);

void require_finite(cplx z, const char* what);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace sg
