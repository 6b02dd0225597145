#include "sg/validation.hpp"

#include "sg/parallel.hpp"

#include <algorithm>
#include <sstream>

namespace sg {

void ValidationReport::require(const std::string& check, const std::string& metric,
                               std::optional<double> lo, std::optional<double> hi) {
  if (!metrics.count(metric)) throw UsageError("check refers to unknown metric " + metric);
  checks.push_back({check, metric, lo, hi, false});
  recompute();
}

void ValidationReport::recompute() {
  for (Check& c : checks) {
    const double v = metrics.at(c.metric);
    c.pass = std::isfinite(v) && (!c.lo || v >= *c.lo) && (!c.hi || v < *c.hi);
  }
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ResidualResult pde_residual(const Eigen::MatrixXd& u, double hx, double ht) {
  if (u.rows() < 3 || u.cols() < 3) throw UsageError("residual grid must be at least 3 x 3");
  if (!(hx > 0) || !(ht > 0)) throw UsageError("grid spacings must be positive");
  ResidualResult out;
  out.residual.resize(u.rows() - 2, u.cols() - 2);
  for (Eigen::Index i = 1; i + 1 < u.rows(); ++i) {
    for (Eigen::Index j = 1; j + 1 < u.cols(); ++j) {
      const double utt = (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (ht * ht);
      const double uxx = (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (hx * hx);
      const double r = utt - uxx + std::sin(u(i, j));
      out.residual(i - 1, j - 1) = r;
      out.max = std::max(out.max, std::abs(r));
    }
  }
  return out;
}

ValidationReport closed_form_report(ClosedFormKind kind, cplx lambda, cplx c,
                                    const std::vector<double>& xs, const std::vector<double>& ts,
                                    int jobs, double tol) {
  PoleSet poles = kind == ClosedFormKind::OneSoliton
                      ? PoleSet({{lambda, c}})
                      : PoleSet({{lambda, c}, {-std::conj(lambda), -std::conj(c)}});
  const Eigen::MatrixXd u = dress_grid(poles, xs, ts, jobs);
  std::vector<double> row_err(ts.size(), 0.0);
  parallel_for(ts.size(), jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < xs.size(); ++j)
      row_err[i] = std::max(row_err[i],
                            std::abs(u(Eigen::Index(i), Eigen::Index(j)) -
                                     closed_form(kind, lambda, c, xs[j], ts[i])));
  });
  ValidationReport rep;
  rep.name = kind == ClosedFormKind::OneSoliton ? "closed_form_kink" : "closed_form_breather";
  rep.metrics["max_error"] = *std::max_element(row_err.begin(), row_err.end());
  rep.require("dressing matches closed form", "max_error", std::nullopt, tol);
  return rep;
}

ValidationReport residual_convergence(const PoleSet& poles, double L, double h, int jobs) {
  ValidationReport rep;
  rep.name = "pde_residual";
  double prev = 0;
  for (int level = 0; level < 2; ++level) {
    const double step = h / (1 << level);
    const auto n = std::size_t(std::lround(L / step)) + 1;
    const auto grid = linspace(0, L, n);
    const ResidualResult res = pde_residual(dress_grid(poles, grid, grid, jobs), step, step);
    rep.metrics[level == 0 ? "max_residual_h" : "max_residual_h2"] = res.max;
    if (level == 1) rep.metrics["ratio"] = prev / res.max;
    prev = res.max;
  }
  rep.require("second-order convergence", "ratio", 3.5, 4.5);
  return rep;
}

namespace {

// 4th-order one-sided first derivative from samples at 0, h, ..., 4h.
double one_sided(const double (&f)[5], double h) {
  return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
}

// Slowest decay rates of the tails of u(x, 0) in x and of u(0, t) in t.
std::pair<double, double> tail_rates(const PoleSet& poles) {
  double rx = 1e300, rt = 1e300;
  for (const auto& p : poles.poles()) {
    const double g = soliton_gamma(p.lambda), v = soliton_speed(p.lambda);
    rx = std::min(rx, g);
    rt = std::min(rt, g * std::abs(v));
  }
  return {rx, rt};
}

double tail_length(double rate, double tol) {
  if (rate >= 1e300) return 20;
  if (!(rate > 1e-3)) throw UsageError("a soliton at rest never leaves the boundary; no finite T_max");
  return std::max(20.0, std::ceil((std::log(1 / tol) + 6) / rate));
}

}  // namespace

BoundaryData sample_boundary_data(const PoleSet& poles, const RoundtripOptions& opt) {
  const auto [rx, rt] = tail_rates(poles);
  double X = opt.X_max.value_or(tail_length(rx, opt.tail_tol));
  double T = opt.T_max.value_or(tail_length(rt, opt.tail_tol));
  const double h = opt.fd_step;
  SweepOptions sweep;

  for (int attempt = 0;; ++attempt) {
    BoundaryData d;
    d.x = linspace(0, X, std::size_t(std::lround(X / opt.dx)) + 1);
    d.t = linspace(0, T, std::size_t(std::lround(T / opt.dx)) + 1);
    d.u0 = dress_row(poles, 0, d.x, sweep);
    d.g0 = dress_column(poles, 0, d.t, d.u0.front(), sweep);
    d.Nx = int(std::lround(d.u0.back() / (2 * pi)));
    d.Nt = int(std::lround(d.g0.back() / (2 * pi)));
    const bool x_ok = std::abs(d.u0.back() - 2 * pi * d.Nx) < opt.tail_tol;
    const bool t_ok = std::abs(d.g0.back() - 2 * pi * d.Nt) < opt.tail_tol;
    if (!x_ok || !t_ok) {
      if (attempt >= 8 || opt.X_max || opt.T_max) throw DomainError("truncation too short");
      if (!x_ok) X *= 1.25;
      if (!t_ok) T *= 1.25;
      continue;
    }
    // Time and space derivatives by one-sided stencils on wrapped differences, which are
    // insensitive to the 2 pi branch of each sample.
    d.u1.assign(d.x.size(), 0.0);
    d.g1.assign(d.t.size(), 0.0);
    parallel_for(d.x.size(), opt.jobs, [&](std::size_t i) {
      const double base = dress(poles, d.x[i], 0).u;
      double f[5] = {0, 0, 0, 0, 0};
      for (int m = 1; m < 5; ++m)
        f[m] = 2 * wrap_to_pi(0.5 * (dress(poles, d.x[i], m * h).u - base));
      d.u1[i] = one_sided(f, h);
    });
    parallel_for(d.t.size(), opt.jobs, [&](std::size_t i) {
      const double base = dress(poles, 0, d.t[i]).u;
      double f[5] = {0, 0, 0, 0, 0};
      for (int m = 1; m < 5; ++m)
        f[m] = 2 * wrap_to_pi(0.5 * (dress(poles, m * h, d.t[i]).u - base));
      d.g1[i] = one_sided(f, h);
    });
    return d;
  }
}

ValidationReport roundtrip(const BoundaryData& data, const PoleSet& poles,
                           const RoundtripOptions& opt) {
  ValidationReport rep;
  rep.name = "roundtrip";
  ScatterOptions sopt = opt.scatter;
  sopt.jobs = opt.jobs;
  sopt.tail_tol = std::max(sopt.tail_tol, opt.tail_tol);

  SpectralTable tab = build_spectral_table(data, opt.table, sopt);
  derive_cd_and_reflection(tab, 1e-12);
  const IdentityDefects id = identity_defects(tab);
  rep.metrics["ab_unitarity"] = id.ab_unitarity;
  rep.metrics["AB_unitarity"] = id.AB_unitarity;
  rep.metrics["cd_unitarity"] = id.cd_unitarity;
  rep.metrics["schwarz"] = id.schwarz;
  rep.metrics["r_consistency"] = id.r_consistency;
  rep.metrics["global_relation"] = global_relation_residual(tab);
  rep.metrics["small_k_defect"] = tab.small_k_defect;
  rep.metrics["Nx"] = data.Nx;
  rep.metrics["Nt"] = data.Nt;
  rep.require("|a|^2 + |b|^2 = 1", "ab_unitarity", std::nullopt, opt.unitarity_tol);
  rep.require("Schwarz symmetry", "schwarz", std::nullopt, opt.schwarz_tol);
  rep.require("global relation", "global_relation", std::nullopt, opt.gr_tol);
  rep.require("d(k) -> (-1)^(Nx - Nt) as k -> 0", "small_k_defect", std::nullopt,
              opt.small_k_tol);

  const int L = poles.Lambda();
  std::vector<cplx> ks;
  for (int j = 0; j < L; ++j) ks.push_back(poles[j].lambda);
  const auto dv = d_values(data, ks, sopt);
  for (int j = 0; j < L; ++j) {
    const std::string key = "abs_d_lambda_" + std::to_string(j + 1);
    rep.metrics[key] = std::abs(dv[std::size_t(j)]);
    const double tol = poles[j].kind == PoleKind::Imaginary ? opt.zero_tol : 10 * opt.zero_tol;
    rep.require("d vanishes at lambda_" + std::to_string(j + 1), key, std::nullopt, tol);
  }
  return rep;
}

ValidationReport roundtrip(const PoleSet& poles, const RoundtripOptions& opt) {
  return roundtrip(sample_boundary_data(poles, opt), poles, opt);
}

ValidationReport compare_asymptotic(const PoleSet& poles, const RadiationProfile& r,
                                    const std::vector<double>& rays,
                                    const std::vector<double>& ts, const CompareOptions& opt) {
  ValidationReport rep;
  rep.name = "compare_asymptotic";
  const bool exact = r.is_zero();
  if (!exact) rep.mode = "informational";
  auto fmt = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };

  struct Cell {
    AsymptoticReport a;
    double exact = 0;
  };
  std::vector<Cell> cells(rays.size() * ts.size());
  parallel_for(cells.size(), opt.jobs, [&](std::size_t n) {
    const double zeta = rays[n / ts.size()], t = ts[n % ts.size()];
    Cell& c = cells[n];
    c.a = assemble(zeta * t, t, poles, r, opt.thresholds);
    if (exact) c.exact = dress_row(poles, t, {zeta * t}).front();
  });

  for (std::size_t i = 0; i < rays.size(); ++i) {
    const std::string ray = "zeta=" + fmt(rays[i]);
    double worst = 0;
    bool monotone = true;
    double prev = 1e300;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const Cell& c = cells[i * ts.size() + k];
      const std::string at = ray + ",t=" + fmt(ts[k]);
      rep.metrics[at + ",u_pred"] = c.a.u_pred;
      if (!exact) {
        rep.metrics[at + ",u_const"] = c.a.terms.u_const;
        rep.metrics[at + ",u_sol"] = c.a.terms.u_sol;
        rep.metrics[at + ",u_rad1"] = c.a.terms.u_rad1;
        rep.metrics[at + ",u_rad2"] = c.a.terms.u_rad2;
        continue;
      }
      const double err = std::abs(c.exact - c.a.u_pred);
      rep.metrics[at + ",error"] = err;
      worst = std::max(worst, err);
      // errors at rounding level count as decayed
      if (err > prev && err > 1e-12) monotone = false;
      prev = err;
    }
    if (!exact) continue;
    rep.metrics[ray + ",max_error"] = worst;
    rep.metrics[ray + ",final_error"] = rep.metrics[ray + ",t=" + fmt(ts.back()) + ",error"];
    rep.metrics[ray + ",monotone"] = monotone ? 1 : 0;
    rep.require(ray + " final error", ray + ",final_error", std::nullopt, opt.final_tol);
    if (opt.require_monotone && ts.size() > 1)
      rep.require(ray + " error decreases", ray + ",monotone", 1.0, std::nullopt);
  }
  return rep;
}

}  // namespace sg
