#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "sg/validation.hpp"

using namespace sg;

TEST_CASE("residual of exact constant solutions vanishes") {
  for (double c : {0.0, 2 * pi, -4 * pi}) {
    const ResidualResult r = pde_residual(Eigen::MatrixXd::Constant(7, 9, c), 0.1, 0.1);
    CHECK(r.residual.rows() == 5);
    CHECK(r.residual.cols() == 7);
    CHECK(r.max < 1e-14);
  }
  // a non-solution is flagged
  CHECK(pde_residual(Eigen::MatrixXd::Constant(5, 5, 1.0), 0.1, 0.1).max ==
        doctest::Approx(std::sin(1.0)));
  CHECK_THROWS_AS(pde_residual(Eigen::MatrixXd::Zero(2, 5), 0.1, 0.1), UsageError);
}

TEST_CASE("grid residual agrees with the pointwise oracle") {
  const PoleSet p({{cplx(0, 0.5), cplx(0, -2)}});
  const double h = 0.05;
  const auto xs = linspace(0, 2, 41), ts = linspace(0, 2, 41);
  const ResidualResult r = pde_residual(dress_grid(p, xs, ts), h, h);
  auto u = [](double x, double t) { return one_soliton(cplx(0, 0.5), cplx(0, -2), x, t); };
  CHECK(r.residual(10, 20) == doctest::Approx(oracle::sg_residual(u, xs[21], ts[11], h)).epsilon(1e-6));
}

TEST_CASE("report bounds are half-open") {
  ValidationReport rep;
  rep.metrics["v"] = 1.0;
  rep.require("below", "v", std::nullopt, 1.0);
  rep.require("above", "v", 1.0, std::nullopt);
  CHECK_FALSE(rep.checks[0].pass);
  CHECK(rep.checks[1].pass);
  CHECK_FALSE(rep.pass());
  rep.metrics["v"] = 0.5;
  rep.recompute();
  CHECK(rep.checks[0].pass);
  CHECK_FALSE(rep.checks[1].pass);
  CHECK_THROWS_AS(rep.require("missing", "w", 0.0, 1.0), UsageError);
}

TEST_CASE("closed-form reports") {
  const auto xs = linspace(0, 20, 81), ts = linspace(0, 20, 41);
  CHECK(closed_form_report(ClosedFormKind::OneSoliton, cplx(0, 0.5), cplx(0, -2), xs, ts, 2).pass());
  const ValidationReport b =
      closed_form_report(ClosedFormKind::Breather, cplx(0.5, 0.5), cplx(1, 1), xs, ts, 2);
  CHECK(b.pass());
  CHECK(b.metrics.at("max_error") < 1e-10);
}

TEST_CASE("residual converges at second order") {
  const ValidationReport r = residual_convergence(PoleSet({{cplx(0, 0.5), cplx(0, -2)}}), 20, 0.05, 4);
  CHECK(r.pass());
  CHECK(r.metrics.at("max_residual_h2") < 5e-3);
}

TEST_CASE("empty spectrum roundtrip is exact") {
  RoundtripOptions opt;
  opt.X_max = 10;
  opt.T_max = 10;
  opt.dx = 0.05;
  const BoundaryData d = sample_boundary_data(PoleSet(), opt);
  for (double v : d.u0) CHECK(v == 0.0);
  for (double v : d.g1) CHECK(v == 0.0);
  const ValidationReport r = roundtrip(d, PoleSet(), opt);
  CHECK(r.pass());
  CHECK(r.metrics.at("ab_unitarity") < 1e-15);
  CHECK(r.metrics.at("global_relation") < 1e-15);
  CHECK(r.metrics.at("small_k_defect") < 1e-15);
}

TEST_CASE("one-kink roundtrip passes every check") {
  RoundtripOptions opt;
  opt.jobs = 4;
  const ValidationReport r = roundtrip(PoleSet({{cplx(0, 0.5), cplx(0, -2)}}), opt);
  CHECK(r.pass());
  CHECK(r.metrics.at("abs_d_lambda_1") < 1e-4);
  CHECK(r.metrics.at("Nt") == 1.0);
}

TEST_CASE("asymptotic comparison modes") {
  const PoleSet p({{cplx(0, 0.5), cplx(0, -2)}});
  const ValidationReport exact = compare_asymptotic(p, RadiationProfile(), {0.6}, {25, 50, 100});
  CHECK(exact.mode == "exact");
  CHECK(exact.pass());
  CHECK(exact.metrics.at("zeta=0.6,monotone") == 1.0);
  const ValidationReport info =
      compare_asymptotic(p, RadiationProfile::builtin_default(), {0.6}, {25, 50});
  CHECK(info.mode == "informational");
  CHECK(info.checks.empty());
  CHECK(info.metrics.count("zeta=0.6,t=50,u_rad1") == 1);
}
