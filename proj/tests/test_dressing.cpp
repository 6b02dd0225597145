#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "sg/dressing.hpp"

#include <Eigen/LU>

#include <random>

using namespace sg;

namespace {

PoleSet kink_half() { return PoleSet({{cplx(0, 0.5), cplx(0, -2)}}); }

PoleSet breather_pair(cplx l, cplx c) { return PoleSet({{l, c}, {-std::conj(l), -std::conj(c)}}); }

PoleSet kink_and_breather() {
  const cplx l(0.45, 0.6), c(1.0, 0.5);
  return PoleSet({{cplx(0, 0.4), cplx(0, -1.5)}, {l, c}, {-std::conj(l), -std::conj(c)}});
}

}  // namespace

TEST_CASE("standing kink at the origin") {
  const PoleSet p({{I, cplx(0, -2)}});
  const DressingState st = dress(p, 0, 0);
  CHECK(std::abs(std::exp(st.log_d[0]) + 1.0) < 1e-15);
  CHECK(std::abs(st.Mhat(0, 0)) < 1e-15);
  CHECK(st.Mhat(0, 1) == doctest::Approx(-1));
  CHECK(st.Mhat(1, 0) == doctest::Approx(1));
  CHECK(std::abs(st.Mhat(1, 1)) < 1e-15);
  CHECK(st.u == doctest::Approx(pi));
  CHECK(one_soliton(I, cplx(0, -2), 0, 0) == doctest::Approx(pi));
}

TEST_CASE("kink matches the textbook traveling wave") {
  const PoleSet p = kink_half();
  const auto xs = linspace(0, 20, 201);
  double worst = 0, worst_cf = 0;
  for (double t : linspace(0, 20, 21)) {
    const auto row = dress_row(p, t, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      worst = std::max(worst, std::abs(row[i] - oracle::kink(0.5, cplx(0, -2), xs[i], t)));
      worst_cf = std::max(worst_cf, std::abs(one_soliton(cplx(0, 0.5), cplx(0, -2), xs[i], t) -
                                             oracle::kink(0.5, cplx(0, -2), xs[i], t)));
    }
  }
  CHECK(worst < 1e-10);
  CHECK(worst_cf < 1e-13);
  // antikink branch
  for (double x : {-3.0, 0.0, 4.0})
    CHECK(one_soliton(cplx(0, 0.8), cplx(0, 1.3), x, 2) ==
          doctest::Approx(oracle::kink(0.8, cplx(0, 1.3), x, 2)).epsilon(1e-13));
}

TEST_CASE("breather matches the boosted standing breather") {
  for (cplx l : {cplx(0.5, 0.5), cplx(0.3, 0.8), cplx(1.2, 0.9)}) {
    const cplx c(1.0, 1.0);
    const PoleSet p = breather_pair(l, c);
    const auto xs = linspace(0, 20, 201);
    double worst = 0, worst_cf = 0, worst_M = 0;
    for (double t : linspace(0, 20, 21)) {
      const auto row = dress_row(p, t, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ref = oracle::breather(l, c, xs[i], t);
        worst = std::max(worst, std::abs(row[i] - ref));
        worst_cf = std::max(worst_cf, std::abs(breather(l, c, xs[i], t) - ref));
      }
      for (double x : {0.0, 3.3, 11.0}) {
        const Eigen::Matrix2d R = half_rotation(oracle::breather(l, c, x, t)).real();
        worst_M = std::max(worst_M, (dress(p, x, t).Mhat - R).norm());
      }
    }
    CHECK(worst < 1e-10);
    CHECK(worst_cf < 1e-12);
    CHECK(worst_M < 1e-10);
  }
}

TEST_CASE("far field is the vacuum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const PoleSet p(oracle::as_pole_list(oracle::random_layout(rng, 2, 1)));
    const DressingState st = dress(p, 50, 0);
    CHECK(std::abs(wrap_to_pi(st.u)) < 1e-8);
    CHECK((st.Mhat - Eigen::Matrix2d::Identity()).norm() < 1e-8);
  }
}

TEST_CASE("eval_M normalization, determinant and symmetries") {
  const PoleSet p = kink_half();
  CHECK((eval_M(p, 0.3, 0.7, cplx(1e6)) - Mat2::Identity()).norm() < 1e-5);
  CHECK(std::abs(eval_M(p, 0.3, 0.7, cplx(2, 1)).determinant() - 1.0) < 1e-12);

  const Mat2 s2 = sigma2<double>();
  for (const PoleSet& q : {kink_half(), kink_and_breather()}) {
    const DressingState st = dress(q, 1.2, 0.8);
    const cplx k(1, 2);
    const Mat2 M = eval_M(q, st, k);
    CHECK((M - s2 * eval_M(q, st, std::conj(k)).conjugate() * s2).norm() < 1e-12);
    CHECK((M - s2 * eval_M(q, st, -k) * s2).norm() < 1e-12);
    CHECK(std::abs(M.determinant() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(eval_M(p, 0, 0, cplx(0, 0.5)), DomainError);
}

TEST_CASE("residues agree with a contour integral") {
  const PoleSet p = kink_half();
  const DressingState st = dress(p, 1, 1);
  const cplx l = p[0].lambda;
  const Mat2 res = oracle::contour_residue([&](cplx k) { return eval_M(p, st, k); }, l, 1e-3);
  // column 1 has the pole at lambda; column 2 is regular there
  CHECK(res.col(1).norm() < 1e-12);
  const cplx C = p[0].c * std::exp(2.0 * I * theta(1.0, 1.0, l));
  const Mat2 at = eval_M(p, st, l + 1e-9 * I);
  CHECK((res.col(0) - C * at.col(1)).norm() < 1e-7);

  const ResidueDefect d = residue_check(p, 1, 1, 1);
  CHECK(d.at_lambda < 1e-10);
  CHECK(std::abs(d.at_lambda - d.at_lambda_bar) < 1e-12);

  const PoleSet q = kink_and_breather();
  for (int j = 1; j <= 3; ++j) {
    const ResidueDefect e = residue_check(q, 2.5, 1.5, j);
    CHECK(e.at_lambda < 1e-9);
    CHECK(e.at_lambda_bar < 1e-9);
  }
  CHECK_THROWS_AS(residue_check(q, 0, 0, 4), UsageError);
}

TEST_CASE("soliton speed and width") {
  CHECK(soliton_speed(cplx(0, 0.5)) == doctest::Approx(0.6));
  CHECK(soliton_gamma(cplx(0, 0.5)) == doctest::Approx(1.25));
  for (double mu : {0.1, 0.5, 0.9, 1.7}) {
    const double v = soliton_speed(cplx(0, mu)), g = soliton_gamma(cplx(0, mu));
    CHECK(g * g * (1 - v * v) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // along x = v t the kink profile is frozen
  const double v = 0.6;
  const double u0 = one_soliton(cplx(0, 0.5), cplx(0, -2), 0, 0);
  for (double t : {1.0, 7.0, 30.0})
    CHECK(one_soliton(cplx(0, 0.5), cplx(0, -2), v * t, t) == doctest::Approx(u0));
}

TEST_CASE("kink and antikink charges") {
  const cplx l(0, 0.5);
  CHECK(one_soliton(l, cplx(0, 2), -30, 0) - one_soliton(l, cplx(0, 2), 30, 0) ==
        doctest::Approx(-2 * pi).epsilon(1e-10));
  CHECK(one_soliton(l, cplx(0, -2), -30, 0) - one_soliton(l, cplx(0, -2), 30, 0) ==
        doctest::Approx(2 * pi).epsilon(1e-10));
}

TEST_CASE("breather decays in space and oscillates in time") {
  const cplx l(0.5, 0.5), c(1, 1);
  double peak = 0;
  for (double t : linspace(0, 2 * pi / 0.7, 50)) {
    CHECK(std::abs(breather(l, c, 60, t)) < 1e-8);
    peak = std::max(peak, std::abs(breather(l, c, 0, t)));
  }
  CHECK(peak > 0.1);
}

TEST_CASE("u_x + u_t from the rational structure") {
  CHECK(ux_plus_ut(PoleSet(), 1, 2) == 0);
  const PoleSet p = kink_half();
  const double h = 1e-4;
  for (double x : {0.0, 1.5, 4.0}) {
    for (double t : {0.0, 2.0}) {
      auto u = [&](double a, double b) { return one_soliton(cplx(0, 0.5), cplx(0, -2), a, b); };
      const double fd = (u(x + h, t) - u(x - h, t) + u(x, t + h) - u(x, t - h)) / (2 * h);
      CHECK(ux_plus_ut(p, x, t) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PoleSet q(oracle::as_pole_list(oracle::random_layout(rng, 1, 1)));
    std::uniform_real_distribution<double> U(0, 10);
    CHECK(std::abs(ux_plus_ut_complex(dress(q, U(rng), U(rng))).imag()) < 1e-10);
  }
}

TEST_CASE("dressing factors have the prescribed kernels") {
  const PoleSet q = kink_and_breather();
  const DressingState st = dress(q, 0.7, 1.9);
  for (std::size_t j = 0; j < q.size(); ++j) {
    const cplx l = q[j].lambda;
    for (cplx k : {cplx(0.3, -1.2), cplx(2.1, 0.4)}) {
      const cplx lhs = (k * Mat2::Identity() + st.B[j]).determinant();
      CHECK(std::abs(lhs - (k - l) * (k - std::conj(l))) < 1e-10);
    }
  }
}

TEST_CASE("dressing does not depend on the pole order") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 15);
  for (int trial = 0; trial < 5; ++trial) {
    auto layout = oracle::random_layout(rng, 2, 1);
    const PoleSet a(oracle::as_pole_list(layout));
    std::reverse(layout.begin(), layout.end());
    const PoleSet b(oracle::as_pole_list(layout));
    for (int i = 0; i < 20; ++i) {
      const double x = U(rng), t = U(rng);
      CHECK((dress(a, x, t).Mhat - dress(b, x, t).Mhat).norm() < 1e-10);
    }
  }
}

TEST_CASE("dressed solutions solve the equation") {
  const PoleSet q = kink_and_breather();
  auto u = [&](double x, double t) { return dress(q, x, t).u; };
  for (double x : {2.0, 5.0}) {
    const double r1 = std::abs(oracle::sg_residual(u, x, 3.0, 0.02));
    const double r2 = std::abs(oracle::sg_residual(u, x, 3.0, 0.01));
    CHECK(r2 < 1e-2);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("topological charge between the far corners") {
  const cplx l(0.45, 0.6), c(1.0, 0.5);
  const PoleSet q({{cplx(0, 0.3), cplx(0, -1.5)}, {l, c}, {-std::conj(l), -std::conj(c)},
                   {cplx(0, 0.8), cplx(0, -0.7)}});
  const double u_t = dress_row(q, 60, linspace(0, 1, 2)).front();
  const double u_x = dress_row(q, 0, linspace(59, 60, 2)).back();
  CHECK(u_t - u_x == doctest::Approx(-2 * pi * partial_charge(q, q.Lambda())).epsilon(1e-3));
  CHECK(partial_charge(q, q.Lambda()) == -2);
}

TEST_CASE("extreme shifts stay finite") {
  const PoleSet p = kink_half();
  for (double x : {-3000.0, 3000.0}) {
    const DressingState st = dress(p, x, 0);
    CHECK(std::isfinite(st.u));
    CHECK(std::abs(st.Mhat.determinant() - 1) < 1e-12);
  }
}

TEST_CASE("grid evaluation is independent of the thread count") {
  const PoleSet q = kink_and_breather();
  const auto xs = linspace(0, 10, 51), ts = linspace(0, 10, 41);
  const Eigen::MatrixXd a = dress_grid(q, xs, ts, 1), b = dress_grid(q, xs, ts, 4);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pole set validation") {
  CHECK_THROWS_AS(PoleSet({{cplx(0, -1), cplx(0, 1)}}), UsageError);
  CHECK_THROWS_AS(PoleSet({{cplx(0, 1), cplx(0)}}), UsageError);
  CHECK_THROWS_AS(PoleSet({{cplx(0, 0.5), cplx(1, 1)}}), UsageError);
  CHECK_THROWS_AS(PoleSet({{cplx(0.3, 0.5), cplx(1, 1)}}), UsageError);
  CHECK_THROWS_AS(PoleSet({{cplx(0, 0.5), cplx(0, 1)}, {cplx(1e-9, 0.5), cplx(0, 1)}}), UsageError);
  CHECK_NOTHROW(PoleSet({{I, cplx(0, -2)}}));
  CHECK_THROWS_WITH(check_ordered(PoleSet({{I, cplx(0, -2)}})), "pole lies on the unit circle");
  CHECK_THROWS_AS(check_ordered(PoleSet({{cplx(0, 0.7), cplx(0, 1)}, {cplx(0, 0.5), cplx(0, 1)}})),
                  UsageError);
  CHECK_NOTHROW(check_ordered(kink_and_breather()));
}
