#include "sg/gamma.hpp"

#include <array>

namespace sg {

namespace {

constexpr double kG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx log_gamma(cplx z) {
  require_finite(z, "z");
  if (!(z.real() > 0)) throw DomainError("log_gamma needs Re z > 0");
  // log Gamma(w + 1) with w = z - 1
  const cplx w = z - 1.0;
  cplx s = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) s += kLanczos[i] / (w + double(i));
  const cplx tt = w + kG + 0.5;
  return 0.5 * std::log(2 * pi) + (w + 0.5) * std::log(tt) - tt + std::log(s);
}

double log_gamma_arg(double nu) {
  if (!(nu > 0) || !std::isfinite(nu)) throw DomainError("log_gamma_arg needs nu > 0");
  // Gamma(i nu) = Gamma(1 + i nu) / (i nu)
  return log_gamma(cplx(1, nu)).imag() - pi / 2;
}

}  // namespace sg
