// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include "oracles.hpp"
#include "sg/asymptotics.hpp"
#include "sg/gamma.hpp"
#include "sg/parallel.hpp"
#include "sg/validation.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace sg;

namespace tol {
constexpr double closed_form = 1e-10;
constexpr double closed_form_seconds = 30;
constexpr double ratio_lo = 3.5, ratio_hi = 4.5;
constexpr double kink_residual = 5e-3;
constexpr double unitarity = 1e-6;
constexpr double schwarz = 1e-8;
constexpr double d_at_pole = 1e-4;
constexpr double global_relation = 1e-4;
constexpr double small_k = 5e-3;
constexpr double asymptotic_final = 1e-3;
constexpr double sector_iv = 1e-2;
constexpr double gamma_arg = 1e-10;
constexpr double gamma_modulus = 1e-10;
constexpr double delta_symmetry = 1e-8;
constexpr double delta_jump = 1e-4;
constexpr double jump_eps = 1e-6;
constexpr double alpha_rules = 1e-7;
constexpr double amplitude_target = 0.2100;
constexpr double amplitude = 1e-3;
constexpr double base_reality = 1e-12;
constexpr double rad2_reality = 1e-10;
constexpr double order_independence = 1e-10;
}  // namespace tol

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

const int jobs = default_jobs();

const PoleSet& kink() {
  static const PoleSet p({{cplx(0, 0.5), cplx(0, -2)}});
  return p;
}

const cplx breather_lambda(0.5, 0.5), breather_c(1.0, 1.0);

Outcome closed_form_kink() {
  const auto grid = linspace(0, 20, 401);
  const auto start = std::chrono::steady_clock::now();
  const ValidationReport r = closed_form_report(ClosedFormKind::OneSoliton, cplx(0, 0.5),
                                                cplx(0, -2), grid, grid, jobs, tol::closed_form);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double err = r.metrics.at("max_error");
  return {err < tol::closed_form && secs < tol::closed_form_seconds,
          "max|u_dress - u_closed| = " + sci(err) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome closed_form_breather() {
  const auto grid = linspace(0, 20, 401);
  const ValidationReport r = closed_form_report(ClosedFormKind::Breather, breather_lambda,
                                                breather_c, grid, grid, jobs, tol::closed_form);
  const double err = r.metrics.at("max_error");
  return {err < tol::closed_form, "max|u_dress - u_closed| = " + sci(err)};
}

Outcome residual_convergence_check() {
  const ValidationReport k = residual_convergence(kink(), 20, 0.05, jobs);
  const PoleSet b({{breather_lambda, breather_c},
                   {-std::conj(breather_lambda), -std::conj(breather_c)}});
  const ValidationReport br = residual_convergence(b, 20, 0.05, jobs);
  const double rk = k.metrics.at("ratio"), rb = br.metrics.at("ratio");
  const double res = k.metrics.at("max_residual_h2");
  const bool pass = rk >= tol::ratio_lo && rk <= tol::ratio_hi && rb >= tol::ratio_lo &&
                    rb <= tol::ratio_hi && res < tol::kink_residual;
  return {pass, "ratio kink " + fmt("%.4f", rk) + ", breather " + fmt("%.4f", rb) +
                    "; kink residual at h = 0.025: " + sci(res)};
}

const ValidationReport& kink_roundtrip() {
  static const ValidationReport r = [] {
    RoundtripOptions opt;
    opt.jobs = jobs;
    opt.scatter.jobs = jobs;
    opt.table.n_real = 400;
    return roundtrip(kink(), opt);
  }();
  return r;
}

Outcome spectral_identities() {
  const ValidationReport& r = kink_roundtrip();
  const double u = r.metrics.at("ab_unitarity"), s = r.metrics.at("schwarz");
  return {u < tol::unitarity && s < tol::schwarz,
          "unitarity defect " + sci(u) + ", Schwarz defect " + sci(s) + " (400 real k)"};
}

Outcome discrete_spectrum() {
  const ValidationReport& r = kink_roundtrip();
  const double d = r.metrics.at("abs_d_lambda_1"), gr = r.metrics.at("global_relation");
  const double sk = r.metrics.at("small_k_defect");
  return {d < tol::d_at_pole && gr < tol::global_relation && sk < tol::small_k,
          "|d(lambda_1)| = " + sci(d) + ", global relation " + sci(gr) +
              ", |d(1e-3) - (-1)^(Nx-Nt)| = " + sci(sk)};
}

Outcome asymptotics_exact() {
  // speeds 0.6 and 0.3; both kinks carry charge +1 towards x = 0
  const PoleSet p({{cplx(0, 0.5), cplx(0, -2)}, {cplx(0, std::sqrt(0.7 / 1.3)), cplx(0, -1)}});
  CompareOptions opt;
  opt.final_tol = tol::asymptotic_final;
  opt.jobs = jobs;
  const ValidationReport r =
      compare_asymptotic(p, RadiationProfile(), {0.6, 0.45}, {25, 50, 100}, opt);
  double charge = 0;
  for (const auto& q : p.poles()) charge += q.c.imag() > 0 ? 1 : -1;
  const double target = -2 * pi * charge;
  const double exact_iv = dress_row(p, 200, {0.05 * 200}).front();
  const double iv = std::abs(exact_iv - target);
  const bool pass = r.pass() && iv < tol::sector_iv;
  return {pass, "final error zeta=0.6 " + sci(r.metrics.at("zeta=0.6,final_error")) +
                    ", zeta=0.45 " + sci(r.metrics.at("zeta=0.45,final_error")) +
                    ", monotone " + (r.metrics.at("zeta=0.6,monotone") == 1 &&
                                             r.metrics.at("zeta=0.45,monotone") == 1
                                         ? "yes"
                                         : "no") +
                    "; Sector IV defect " + sci(iv)};
}

Outcome special_functions() {
  double arg_err = 0, mod_err = 0;
  for (double nu : {0.01, 0.1103178, 0.5, 1.0}) {
    arg_err = std::max(arg_err, std::abs(log_gamma_arg(nu) - oracle::arg_gamma_imag(nu)));
    const double m2 = std::exp(2 * log_gamma(cplx(1, nu)).real()) / (nu * nu);
    const double ref = oracle::abs_gamma_imag_sq(nu);
    mod_err = std::max(mod_err, std::abs(m2 - ref) / ref);
  }
  return {arg_err < tol::gamma_arg && mod_err < tol::gamma_modulus,
          "arg Gamma(i nu) vs product series " + sci(arg_err) + ", |Gamma|^2 identity " +
              sci(mod_err) + " (relative)"};
}

Outcome delta_chi_quadrature() {
  const RadiationProfile r = RadiationProfile::builtin_default();
  const double k0 = 0.5;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  double sym = 0;
  for (int n = 0; n < 20;) {
    const cplx k(U(rng), U(rng));
    if (std::abs(k.imag()) < 0.05) continue;
    ++n;
    const cplx d = delta_of(r, k0, k);
    sym = std::max(sym, std::abs(d * delta_of(r, k0, -k) - 1.0));
    sym = std::max(sym, std::abs(d * std::conj(delta_of(r, k0, std::conj(k))) - 1.0));
  }
  double jump = 0;
  for (double k : {0.0, 0.3}) {
    const cplx ratio =
        delta_of(r, k0, cplx(k, -tol::jump_eps)) / delta_of(r, k0, cplx(k, tol::jump_eps));
    jump = std::max(jump, std::abs(ratio - 1.0 / (1 + std::norm(r.r(k)))));
  }
  const double rules = std::abs(alpha_integral_graded(r, k0) - alpha_integral_tanh_sinh(r, k0));
  // |r(k0)| = 1 at zeta = 3/5 gives nu = ln 2 / (2 pi)
  const double amp = radiation_amplitude(k0_of(0.6), std::log(2.0) / (2 * pi), 100);
  const bool amp_ok = std::abs(amp - tol::amplitude_target) <= tol::amplitude;
  const bool pass = sym < tol::delta_symmetry && jump < tol::delta_jump &&
                    rules < tol::alpha_rules && amp_ok;
  return {pass, "symmetry " + sci(sym) + ", jump " + sci(jump) + ", alpha rules " + sci(rules) +
                    "; amplitude " + fmt("%.5f", amp) + " vs stated " +
                    fmt("%.4f", tol::amplitude_target) + (amp_ok ? "" : " (mismatch)")};
}

Outcome r_recursion_properties() {
  const PoleSet imag({{cplx(0, 0.3), cplx(0, 1)}, {cplx(0, 0.6), cplx(0, -1)},
                      {cplx(0, 0.85), cplx(0, 2)}});
  const RTable base = r_recursion(imag, cplx(0.4, -0.7), 0.45, {ModeKind::Away, 1});
  double base_im = 0;
  for (int m = 1; m <= 6; ++m) base_im = std::max(base_im, std::abs(base.at(m, 0).imag()));

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> n_imag(0, 3), n_pair(0, 2);
  std::uniform_real_distribution<double> U(-1, 1), phase(0, 2 * pi);
  double rad2_im = 0;
  bool agree = true;
  for (int trial = 0; trial < 100; ++trial) {
    int a = n_imag(rng), b = n_pair(rng);
    if (a + b == 0) a = 1;
    const PoleSet p(oracle::as_pole_list(oracle::random_layout(rng, a, b, false)));
    const cplx A(U(rng), U(rng));
    for (int j = 1; j <= p.Lambda() + 1; ++j) {
      if (j <= int(p.size()) && p[j - 1].kind == PoleKind::PairMate) continue;
      const RTable away = r_recursion(p, A, 0.5, {ModeKind::Away, j});
      rad2_im = std::max(rad2_im, std::abs(u_rad2_complex(p, away).imag()));
      if (j > p.Lambda()) continue;
      const PoleKind kind = p[j - 1].kind;
      const bool is_kink = kind == PoleKind::Imaginary;
      const RTable next = r_recursion(p, A, 0.5, {ModeKind::Away, is_kink ? j + 1 : j + 2});
      for (int l = 0; l < j; ++l)
        for (int m = 1; m <= 2 * int(p.size()); ++m)
          if (away.has(m, l) && (!next.has(m, l) || next.at(m, l) != away.at(m, l))) agree = false;
      const RTable mode = r_recursion(p, A, 0.5, {is_kink ? ModeKind::Kink : ModeKind::Breather, j});
      const ShiftCoefficient d{kind, cplx(3 * U(rng), is_kink ? 0.0 : phase(rng))};
      rad2_im = std::max(rad2_im, std::abs(u_rad2_complex(p, mode, d).imag()));
    }
  }
  return {base_im < tol::base_reality && rad2_im < tol::rad2_reality && agree,
          "base-case Im " + sci(base_im) + ", max |Im u_rad2| " + sci(rad2_im) +
              " over 100 sets, Away(j)/Away(j+1) below level j " +
              (agree ? "identical" : "differ")};
}

Outcome order_independence() {
  std::mt19937_64 rng(10);
  auto layout = oracle::random_layout(rng, 2, 1);
  const PoleSet a(oracle::as_pole_list(layout));
  std::reverse(layout.begin(), layout.end());
  const PoleSet b(oracle::as_pole_list(layout));
  std::uniform_real_distribution<double> U(0, 20);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const double x = U(rng), t = U(rng);
    worst = std::max(worst, (dress(a, x, t).Mhat - dress(b, x, t).Mhat).norm());
  }
  return {worst < tol::order_independence,
          "max |Mhat difference| = " + sci(worst) + " over 50 points, " +
              std::to_string(a.size()) + " poles"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"dressing vs closed form, kink", closed_form_kink},
      {"dressing vs closed form, breather", closed_form_breather},
      {"PDE residual convergence", residual_convergence_check},
      {"spectral identities", spectral_identities},
      {"roundtrip discrete spectrum", discrete_spectrum},
      {"asymptotics vs exact, pure solitons", asymptotics_exact},
      {"special functions", special_functions},
      {"delta, chi and alpha quadrature", delta_chi_quadrature},
      {"r-recursion properties", r_recursion_properties},
      {"dressing order independence", order_independence},
  };
  int failed = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
