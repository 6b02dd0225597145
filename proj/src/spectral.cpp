#include "sg/spectral.hpp"

#include "sg/parallel.hpp"

#include <algorithm>

namespace sg {

namespace {

// One of the two Lax ODEs along a half-line, with its data interpolants.
struct LaxLine {
  SampledFunction q, w, qd;
  double L = 0;
  double sign = 1;  // +1 for the x-part, -1 for the t-part
  bool is_x = true;
  std::size_t intervals = 0;
  bool uniform = true;

  cplx theta(cplx k) const { return is_x ? theta1(k) : theta2(k); }

  // Coefficient of the column system, original frame.
  Mat2 P(double s, cplx k) const {
    const double qs = q(s), ws = w(s), ds = qd(s);
    const double m = 0.25 * (ds + ws);
    const cplx f = sign * I / (4.0 * k);
    Mat2 p;
    p << f * (std::cos(qs) - 1.0), -m + f * std::sin(qs),
         m + f * std::sin(qs), -f * (std::cos(qs) - 1.0);
    return p;
  }

  // Coefficient after the rotation by q/2, regular as k -> 0.
  Mat2 P_gauge(double s, cplx k) const {
    const double qs = q(s), ws = w(s), ds = qd(s);
    const double m = 0.25 * (ds - ws);
    const cplx f = I * k / 4.0;
    Mat2 p;
    p << f * (1.0 - std::cos(qs)), m + f * std::sin(qs),
         -m + f * std::sin(qs), -f * (1.0 - std::cos(qs));
    return p;
  }
};

LaxLine make_line(const std::vector<double>& grid, const std::vector<double>& q,
                  const std::vector<double>& w,
                  const std::optional<std::vector<double>>& qd, bool is_x) {
  LaxLine line;
  line.q = SampledFunction(grid, q);
  line.w = SampledFunction(grid, w);
  line.qd = qd ? SampledFunction(grid, *qd) : line.q.derivative();
  line.L = grid.back();
  line.sign = is_x ? 1.0 : -1.0;
  line.is_x = is_x;
  line.intervals = grid.size() - 1;
  line.uniform = line.q.uniform();
  return line;
}

std::size_t step_count(const LaxLine& line, cplx th, const ScatterOptions& opt) {
  const double h_data = line.L / double(line.intervals);
  double h = opt.step > 0 ? opt.step : h_data;
  const double mag = std::abs(th);
  if (mag > 0) h = std::min(h, opt.phase_step / mag);
  if (line.uniform) {
    const std::size_t sub = std::max<std::size_t>(1, std::size_t(std::ceil(h_data / h - 1e-9)));
    return line.intervals * sub;
  }
  return std::max<std::size_t>(1, std::size_t(std::ceil(line.L / h)));
}

// Second column of the normalized eigenfunction at s = 0, integrated from s = L backwards
// with an integrating-factor RK4 step that treats the diagonal phase exactly.
Vec2 integrate_column(const LaxLine& line, cplx k, const ScatterOptions& opt) {
  const cplx th = line.theta(k);
  const bool gauge = opt.small_k_gauge && std::abs(k) < 1.0;
  auto coef = [&](double s) { return gauge ? line.P_gauge(s, k) : line.P(s, k); };

  Vec2 psi;
  if (gauge) {
    const double qL = line.q(line.L);
    psi << std::sin(0.5 * qL), std::cos(0.5 * qL);
  } else {
    psi << 0.0, 1.0;
  }

  const std::size_t n = step_count(line, th, opt);
  const double h = -line.L / double(n);
  const cplx E_half = std::exp(-2.0 * I * th * (0.5 * h));
  const cplx E_full = E_half * E_half;
  auto rotated = [](const Mat2& p, cplx E) {
    Mat2 a = p;
    a(0, 1) /= E;
    a(1, 0) *= E;
    return a;
  };

  Mat2 P0 = coef(line.L);
  for (std::size_t i = 0; i < n; ++i) {
    const double s0 = line.L + double(i) * h;
    const double s1 = i + 1 == n ? 0.0 : s0 + h;
    const Mat2 Pm = rotated(coef(s0 + 0.5 * h), E_half);
    const Mat2 P1raw = coef(s1);
    const Mat2 P1 = rotated(P1raw, E_full);
    const Vec2 k1 = P0 * psi;
    const Vec2 k2 = Pm * (psi + 0.5 * h * k1);
    const Vec2 k3 = Pm * (psi + 0.5 * h * k2);
    const Vec2 k4 = P1 * (psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    psi(0) *= E_full;
    P0 = P1raw;
  }

  if (gauge) {
    const double q0 = line.q(0.0);
    const Mat2 R = half_rotation(q0);
    psi = R * psi;
  }
  return psi;
}

std::vector<ScatterPair> scatter(const LaxLine& line, const std::vector<cplx>& ks,
                                 const ScatterOptions& opt) {
  std::vector<ScatterPair> out(ks.size());
  parallel_for(ks.size(), opt.jobs, [&](std::size_t i) {
    const Vec2 col = integrate_column(line, ks[i], opt);
    out[i] = {col(1), col(0)};
  });
  return out;
}

void check_tail(const std::vector<double>& q, int N, double tol, const char* name) {
  if (std::abs(q.back() - 2 * pi * N) >= tol)
    throw DomainError(std::string("truncation too short: ") + name +
                      " has not reached 2 pi N at the end of its grid");
}

void check_grid(const std::vector<double>& g, std::size_t n1, std::size_t n2, const char* name) {
  if (g.size() < 5) throw UsageError(std::string(name) + " grid needs at least 5 samples");
  if (g.size() != n1 || g.size() != n2)
    throw UsageError(std::string(name) + " grid and sample arrays differ in length");
  if (g.front() != 0.0) throw UsageError(std::string(name) + " grid must start at 0");
}

}  // namespace

void validate_boundary_data(const BoundaryData& data, double tail_tol) {
  check_grid(data.x, data.u0.size(), data.u1.size(), "x");
  check_grid(data.t, data.g0.size(), data.g1.size(), "t");
  if (data.u0x && data.u0x->size() != data.x.size()) throw UsageError("u0x length mismatch");
  if (data.g0t && data.g0t->size() != data.t.size()) throw UsageError("g0t length mismatch");
  check_tail(data.u0, data.Nx, tail_tol, "u0");
  check_tail(data.g0, data.Nt, tail_tol, "g0");
}

std::vector<ScatterPair> scatter_x(const BoundaryData& data, const std::vector<cplx>& ks,
                                   const ScatterOptions& opt) {
  validate_boundary_data(data, opt.tail_tol);
  for (cplx k : ks) {
    require_finite(k, "k");
    if (k == cplx(0)) throw DomainError("k = 0 is excluded (1/k terms)");
    if (k.imag() < 0) throw DomainError("scatter_x needs Im k >= 0");
  }
  return scatter(make_line(data.x, data.u0, data.u1, data.u0x, true), ks, opt);
}

std::vector<ScatterPair> scatter_t(const BoundaryData& data, const std::vector<cplx>& ks,
                                   const ScatterOptions& opt) {
  validate_boundary_data(data, opt.tail_tol);
  for (cplx k : ks) {
    require_finite(k, "k");
    if (k == cplx(0)) throw DomainError("k = 0 is excluded (1/k terms)");
    if (theta2(k).imag() < -1e-12 * std::abs(theta2(k)))
      throw DomainError("scatter_t needs k in the closure of D1 or D3");
  }
  return scatter(make_line(data.t, data.g0, data.g1, data.g0t, false), ks, opt);
}

namespace {

SpectralSample sample_at(cplx k) {
  SpectralSample s;
  s.k = k;
  return s;
}

}  // namespace

SpectralTable build_spectral_table(const BoundaryData& data, const TableSpec& spec,
                                   const ScatterOptions& opt) {
  if (spec.n_real < 2 || spec.n_real % 2 != 0) throw UsageError("n_real must be even and >= 2");
  SpectralTable tab;
  tab.Nx = data.Nx;
  tab.Nt = data.Nt;

  const auto pos = logspace(spec.k_min, spec.k_max, std::size_t(spec.n_real / 2));
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) tab.real.push_back(sample_at(cplx(-*it, 0)));
  for (double k : pos) tab.real.push_back(sample_at(cplx(k, 0)));
  for (int i = 0; i < spec.n_circle; ++i)
    tab.circle.push_back(sample_at(std::polar(1.0, pi * (i + 0.5) / spec.n_circle)));
  for (cplx k : spec.upper) {
    if (!(k.imag() > 0)) throw UsageError("upper grid points need Im k > 0");
    tab.upper.push_back(sample_at(k));
  }
  tab.small = sample_at(cplx(spec.k_small, 0));

  // Gather every k needed by each problem, scatter once, then distribute.
  std::vector<cplx> kx, kt;
  for (auto& s : tab.real) {
    kx.push_back(s.k);
    kt.push_back(s.k);
  }
  for (auto& s : tab.circle) {
    kx.push_back(s.k);
    kt.push_back(s.k);
    kt.push_back(std::conj(s.k));
  }
  for (auto& s : tab.upper) {
    kx.push_back(s.k);
    if (std::abs(s.k) >= 1) kt.push_back(s.k);
    if (std::abs(s.k) <= 1) kt.push_back(std::conj(s.k));
  }
  kx.push_back(tab.small->k);
  kt.push_back(tab.small->k);

  const auto X = scatter_x(data, kx, opt);
  const auto T = scatter_t(data, kt, opt);
  std::size_t ix = 0, it = 0;
  auto take_x = [&](SpectralSample& s) {
    s.a = X[ix].first;
    s.b = X[ix].second;
    ++ix;
  };
  auto take_t = [&](std::optional<cplx>& A, std::optional<cplx>& B) {
    A = T[it].first;
    B = T[it].second;
    ++it;
  };
  for (auto& s : tab.real) {
    take_x(s);
    take_t(s.A, s.B);
    s.A_bar = s.A;
    s.B_bar = s.B;
  }
  for (auto& s : tab.circle) {
    take_x(s);
    take_t(s.A, s.B);
    take_t(s.A_bar, s.B_bar);
  }
  for (auto& s : tab.upper) {
    take_x(s);
    if (std::abs(s.k) >= 1) take_t(s.A, s.B);
    if (std::abs(s.k) <= 1) take_t(s.A_bar, s.B_bar);
  }
  take_x(*tab.small);
  take_t(tab.small->A, tab.small->B);
  tab.small->A_bar = tab.small->A;
  tab.small->B_bar = tab.small->B;
  return tab;
}

namespace {

void derive_sample(SpectralSample& s, bool on_real, double zero_tol) {
  if (s.A && s.B) s.c = s.b * *s.A - s.a * *s.B;
  const bool in_D2 = s.A_bar && s.B_bar && std::abs(s.k) <= 1.0;
  if (s.A_bar && s.B_bar && (in_D2 || on_real))
    s.d = s.a * std::conj(*s.A_bar) + s.b * std::conj(*s.B_bar);
  if (on_real) {
    if (std::abs(s.a) < zero_tol) throw SpectralZeroError("spectral zero detected: a", s.k);
    s.r1 = std::conj(s.b) / s.a;
  }
  if (in_D2) {
    if (std::abs(*s.d) < zero_tol) throw SpectralZeroError("spectral zero detected: d", s.k);
    s.h = -std::conj(*s.B_bar) / (s.a * *s.d);
    if (on_real) s.r = *s.r1 + *s.h;
  }
}

}  // namespace

void derive_cd_and_reflection(SpectralTable& table, double zero_tol) {
  for (auto& s : table.real) derive_sample(s, true, zero_tol);
  for (auto& s : table.circle) derive_sample(s, false, zero_tol);
  for (auto& s : table.upper) derive_sample(s, false, zero_tol);
  if (table.small) {
    derive_sample(*table.small, true, zero_tol);
    const double expected = (table.Nx - table.Nt) % 2 == 0 ? 1.0 : -1.0;
    table.small_k_defect = std::abs(*table.small->d - expected);
  }
}

double global_relation_residual(const SpectralTable& table) {
  double res = 0;
  std::size_t count = 0;
  auto visit = [&](const SpectralSample& s) {
    if (!s.A || !s.B || std::abs(s.k) < 1.0) return;
    res = std::max(res, std::abs(*s.A * s.b - *s.B * s.a));
    ++count;
  };
  for (const auto& s : table.real) visit(s);
  for (const auto& s : table.circle) visit(s);
  for (const auto& s : table.upper) visit(s);
  if (count == 0) throw UsageError("global relation needs samples in the closure of D1");
  return res;
}

IdentityDefects identity_defects(const SpectralTable& table) {
  IdentityDefects d;
  const std::size_t n = table.real.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = table.real[i];
    d.ab_unitarity = std::max(d.ab_unitarity, std::abs(std::norm(s.a) + std::norm(s.b) - 1));
    if (s.A && s.B)
      d.AB_unitarity = std::max(d.AB_unitarity, std::abs(std::norm(*s.A) + std::norm(*s.B) - 1));
    if (s.c && s.d)
      d.cd_unitarity = std::max(d.cd_unitarity, std::abs(std::norm(*s.c) + std::norm(*s.d) - 1));
    const auto& m = table.real[n - 1 - i];
    if (std::abs(m.k + s.k) <= 1e-12 * std::abs(s.k)) {
      d.schwarz = std::max({d.schwarz, std::abs(s.a - std::conj(m.a)),
                            std::abs(s.b - std::conj(m.b))});
      if (s.A && m.A)
        d.schwarz = std::max({d.schwarz, std::abs(*s.A - std::conj(*m.A)),
                              std::abs(*s.B - std::conj(*m.B))});
    }
    if (s.r && s.c && s.d)
      d.r_consistency = std::max(d.r_consistency, std::abs(std::conj(*s.c) / *s.d - *s.r));
  }
  for (const auto& s : table.circle) {
    if (!s.A || !s.A_bar) continue;
    const cplx v = *s.A * std::conj(*s.A_bar) + *s.B * std::conj(*s.B_bar);
    d.AB_unitarity = std::max(d.AB_unitarity, std::abs(v - 1.0));
  }
  return d;
}

std::vector<cplx> d_values(const BoundaryData& data, const std::vector<cplx>& ks,
                           const ScatterOptions& opt) {
  std::vector<cplx> kb(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (std::abs(ks[i]) > 1.0 + 1e-12 || ks[i].imag() < 0)
      throw DomainError("d is defined on the closure of D2");
    kb[i] = std::conj(ks[i]);
  }
  const auto X = scatter_x(data, ks, opt);
  const auto T = scatter_t(data, kb, opt);
  std::vector<cplx> d(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i)
    d[i] = X[i].first * std::conj(T[i].first) + X[i].second * std::conj(T[i].second);
  return d;
}

std::vector<cplx> locate_d_zeros(const BoundaryData& data, int n, const ScatterOptions& opt,
                                 double zero_tol) {
  if (n < 3) throw UsageError("zero scan needs n >= 3");
  std::vector<cplx> grid;
  std::vector<int> index(std::size_t(n * n), -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx k(-1.0 + 2.0 * (i + 0.5) / n, (j + 0.5) / n);
      if (std::abs(k) < 0.98) {
        index[std::size_t(i * n + j)] = int(grid.size());
        grid.push_back(k);
      }
    }
  const auto dv = d_values(data, grid, opt);

  std::vector<cplx> zeros;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int c = index[std::size_t(i * n + j)];
      if (c < 0) continue;
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= n || b >= n) continue;
          const int o = index[std::size_t(a * n + b)];
          if (o >= 0 && std::abs(dv[std::size_t(o)]) < std::abs(dv[std::size_t(c)])) {
            minimum = false;
            break;
          }
        }
      if (!minimum) continue;
      // Newton refinement with a central-difference derivative of the analytic function d.
      cplx k = grid[std::size_t(c)];
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const double eps = 1e-5;
        const auto v = d_values(data, {k, k + eps, k - eps}, opt);
        if (std::abs(v[0]) < 1e-13) {
          ok = true;
          break;
        }
        const cplx step = v[0] / ((v[1] - v[2]) / (2 * eps));
        k -= step;
        if (!(k.imag() > 0) || std::abs(k) >= 1) break;
        if (std::abs(step) < 1e-12) {
          ok = std::abs(d_values(data, {k}, opt)[0]) < zero_tol;
          break;
        }
      }
      if (!ok) continue;
      bool dup = false;
      for (cplx z : zeros) dup = dup || std::abs(z - k) < 1e-6;
      if (!dup) zeros.push_back(k);
    }
  return zeros;
}

CompatibilityReport check_compatibility(const BoundaryData& data) {
  CompatibilityReport r;
  const SampledFunction u0(data.x, data.u0), g0(data.t, data.g0);
  const double u0x0 = data.u0x ? data.u0x->front() : u0.derivative().values().front();
  const double g0t0 = data.g0t ? data.g0t->front() : g0.derivative().values().front();
  r.value = std::abs(data.g0.front() - data.u0.front());
  r.first_t = std::abs(g0t0 - data.u1.front());
  r.first_x = std::abs(data.g1.front() - u0x0);
  return r;
}

}  // namespace sg
