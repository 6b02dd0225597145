#include "sg/dressing.hpp"

#include "sg/parallel.hpp"

#include <algorithm>
#include <functional>

namespace sg {

namespace {

constexpr double kImagTol = 1e-13;
constexpr double kPairTol = 1e-12;

bool is_mate_of(const Pole& a, const Pole& b) {
  const double scale = std::abs(a.lambda);
  return std::abs(b.lambda + std::conj(a.lambda)) <= kPairTol * scale &&
         std::abs(b.c + std::conj(a.c)) <= kPairTol * std::max(1.0, std::abs(a.c));
}

}  // namespace

PoleSet::PoleSet(const std::vector<std::pair<cplx, cplx>>& lambda_c) {
  for (const auto& [lambda, c] : lambda_c) {
    require_finite(lambda, "lambda");
    require_finite(c, "c");
    if (!(lambda.imag() > 0)) throw UsageError("pole must lie in the upper half-plane");
    if (c == cplx(0)) throw UsageError("norming constant must be nonzero");
    Pole p{lambda, c, PoleKind::Imaginary};
    if (std::abs(lambda.real()) <= kImagTol * std::abs(lambda)) {
      if (std::abs(c.real()) > 1e-12 * std::abs(c))
        throw UsageError("norming constant of an imaginary pole must be imaginary");
      p.lambda = cplx(0, lambda.imag());
      p.c = cplx(0, c.imag());
    }
    poles_.push_back(p);
  }
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    for (std::size_t j = i + 1; j < poles_.size(); ++j)
      if (std::abs(poles_[i].lambda - poles_[j].lambda) < 1e-6)
        throw UsageError("poles nearly coincide; dressing degenerate");
  }
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    if (poles_[i].kind == PoleKind::Imaginary && poles_[i].lambda.real() == 0) continue;
    if (i + 1 >= poles_.size() || !is_mate_of(poles_[i], poles_[i + 1]))
      throw UsageError("non-imaginary poles must come in adjacent pairs (lambda, -conj(lambda)) "
                       "with c_mate = -conj(c_lead)");
    const bool first_leads = poles_[i].lambda.real() > 0;
    poles_[i].kind = first_leads ? PoleKind::PairLead : PoleKind::PairMate;
    poles_[i + 1].kind = first_leads ? PoleKind::PairMate : PoleKind::PairLead;
    // make the mate an exact reflection so that symmetries hold to rounding
    poles_[i + 1].lambda = -std::conj(poles_[i].lambda);
    poles_[i + 1].c = -std::conj(poles_[i].c);
    ++i;
  }
}

int PoleSet::Lambda() const {
  int n = 0;
  for (const auto& p : poles_)
    if (std::abs(p.lambda) < 1) ++n;
  return n;
}

void check_ordered(const PoleSet& poles) {
  for (std::size_t j = 1; j < poles.size(); ++j) {
    const double prev = std::abs(poles[j - 1].lambda), cur = std::abs(poles[j].lambda);
    const bool same_pair = poles[j].kind == PoleKind::PairMate;
    if (cur < prev && !same_pair) throw UsageError("poles must be ordered by increasing modulus");
    if (cur == prev && !same_pair) throw UsageError("equal moduli allowed only inside a pair");
  }
  for (std::size_t j = 0; j < poles.size(); ++j)
    if (poles[j].kind == PoleKind::PairMate && (j == 0 || poles[j - 1].kind != PoleKind::PairLead))
      throw UsageError("pair lead (Re lambda > 0) must precede its mate");
  for (const auto& p : poles.poles())
    if (std::abs(std::abs(p.lambda) - 1.0) < 1e-12) throw UsageError("pole lies on the unit circle");
  const int L = poles.Lambda();
  for (int j = 0; j < L; ++j)
    if (!(std::abs(poles[j].lambda) < 1)) throw UsageError("first Lambda poles must lie in D2");
}

double soliton_gamma(cplx lambda) {
  return 0.5 * lambda.imag() * (1 + 1 / std::norm(lambda));
}

double soliton_speed(cplx lambda) {
  const double m = std::norm(lambda);
  return (1 - m) / (1 + m);
}

std::vector<double> soliton_speeds(const PoleSet& poles) {
  std::vector<double> v;
  for (int j = 0; j < poles.Lambda(); ++j) v.push_back(soliton_speed(poles[j].lambda));
  return v;
}

int partial_charge(const PoleSet& poles, int count) {
  int q = 0;
  for (int i = 0; i < count && i < int(poles.size()); ++i)
    if (poles[i].kind == PoleKind::Imaginary) q += poles[i].c.imag() > 0 ? 1 : -1;
  return q;
}

namespace {

// (kI + B_count) ... (kI + B_1)
Mat2 partial_product(const std::vector<Mat2>& B, std::size_t count, cplx k) {
  Mat2 P = Mat2::Identity();
  for (std::size_t i = 0; i < count; ++i) P = (k * Mat2::Identity() + B[i]) * P;
  return P;
}

}  // namespace

DressingState dress(const PoleSet& poles, double x, double t, const DressOptions& opt) {
  DressingState st;
  const std::size_t N = poles.size();
  if (N == 0) return st;

  st.log_d.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const cplx lj = poles[j].lambda;
    cplx ld = std::log(poles[j].c) + 2.0 * I * theta(x, t, lj);
    for (std::size_t l = 0; l < N; ++l) {
      if (l != j) ld += std::log(lj - poles[l].lambda);
      ld -= std::log(lj - std::conj(poles[l].lambda));
    }
    st.log_d[j] = ld;
  }

  st.B.reserve(N);
  for (std::size_t j = 0; j < N; ++j) {
    const cplx lj = poles[j].lambda, lb = std::conj(lj);
    const Mat2 Ml = partial_product(st.B, j, lj), Mb = partial_product(st.B, j, lb);
    Vec2 e1, e2;
    const cplx ld = st.log_d[j];
    if (ld.real() <= 0) {
      const cplx d = std::exp(ld);
      e1 << 1.0, -d;
      e2 << std::conj(d), 1.0;
    } else {
      // same kernel vectors scaled by 1/d, regular as d -> infinity
      const cplx e = std::exp(-ld);
      e1 << e, -1.0;
      e2 << 1.0, std::conj(e);
    }
    Vec2 v1 = Ml * e1, v2 = Mb * e2;
    v1 /= v1.norm();
    v2 /= v2.norm();
    Mat2 Q;
    Q << v1, v2;
    const cplx det = Q(0, 0) * Q(1, 1) - Q(0, 1) * Q(1, 0);
    if (!(std::abs(det) > 2.0 / opt.cond_tol)) throw NumericalError("dressing degenerate");
    Mat2 adj;
    adj << Q(1, 1), -Q(0, 1), -Q(1, 0), Q(0, 0);
    Mat2 D = Mat2::Zero();
    D(0, 0) = -lj;
    D(1, 1) = -lb;
    st.B.push_back(Q * D * adj / det);
  }

  Mat2 P = Mat2::Identity();
  cplx prod_l = 1, prod_b = 1;
  for (std::size_t j = 0; j < N; ++j) {
    P = st.B[j] * P;
    prod_l *= poles[j].lambda;
    prod_b *= std::conj(poles[j].lambda);
  }
  const double sign = N % 2 == 0 ? 1.0 : -1.0;
  P.col(0) /= prod_l;
  P.col(1) /= prod_b;
  st.Mhat_complex = sign * P;
  st.Mhat = st.Mhat_complex.real();
  st.u = 2 * std::atan2(st.Mhat(1, 0), st.Mhat(0, 0));
  if (st.u <= -2 * pi) st.u += 4 * pi;

  for (int j = 0; j < poles.Lambda(); ++j)
    if (poles[j].kind == PoleKind::Imaginary && soliton_speed(poles[j].lambda) * t > x)
      st.charge_partial += poles[j].c.imag() > 0 ? 1 : -1;
  return st;
}

Mat2 eval_M(const PoleSet& poles, const DressingState& st, cplx k) {
  require_finite(k, "k");
  cplx dl = 1, db = 1;
  for (const auto& p : poles.poles()) {
    if (k == p.lambda || k == std::conj(p.lambda))
      throw DomainError("M evaluated at a pole; use residue_check");
    dl *= k - p.lambda;
    db *= k - std::conj(p.lambda);
  }
  Mat2 M = partial_product(st.B, st.B.size(), k);
  M.col(0) /= dl;
  M.col(1) /= db;
  return M;
}

Mat2 eval_M(const PoleSet& poles, double x, double t, cplx k) {
  return eval_M(poles, dress(poles, x, t), k);
}

ResidueDefect residue_check(const PoleSet& poles, double x, double t, int j) {
  if (j < 1 || j > int(poles.size())) throw UsageError("pole index out of range");
  const DressingState st = dress(poles, x, t);
  const cplx lj = poles[j - 1].lambda, lb = std::conj(lj);
  const cplx Cj = std::exp(std::log(poles[j - 1].c) + 2.0 * I * theta(x, t, lj));
  const Mat2 Pl = partial_product(st.B, st.B.size(), lj);
  const Mat2 Pb = partial_product(st.B, st.B.size(), lb);
  cplx rl = 1, ml = 1, rb = 1, mb = 1;
  for (std::size_t l = 0; l < poles.size(); ++l) {
    const cplx ll = poles[l].lambda;
    if (int(l) != j - 1) {
      rl *= lj - ll;
      rb *= lb - std::conj(ll);
    }
    ml *= lj - std::conj(ll);
    mb *= lb - ll;
  }
  ResidueDefect r;
  r.at_lambda = (Pl.col(0) / rl - Cj * Pl.col(1) / ml).norm();
  r.at_lambda_bar = (Pb.col(1) / rb + std::conj(Cj) * Pb.col(0) / mb).norm();
  return r;
}

cplx ux_plus_ut_complex(const DressingState& st) {
  cplx s = 0;
  for (const auto& B : st.B) s += B(0, 1);
  return -2.0 * I * s;
}

double ux_plus_ut(const PoleSet& poles, double x, double t) {
  return ux_plus_ut_complex(dress(poles, x, t)).real();
}

double one_soliton(cplx lambda, cplx c, double x, double t) {
  if (!(lambda.imag() > 0) || std::abs(lambda.real()) > kImagTol * std::abs(lambda) ||
      std::abs(c.real()) > 1e-12 * std::abs(c))
    throw UsageError("one-soliton closed form needs imaginary lambda and c");
  const double eta = std::abs(lambda);
  const double arg = -c.imag() / (2 * eta) * std::exp(-soliton_gamma(lambda) * (x - soliton_speed(lambda) * t));
  return 4 * std::atan(arg);
}

namespace {

// Im d / (1 + |d|^2) for d = exp(ld), stable for large |d|.
double breather_ratio(cplx ld) {
  const double mag_log = ld.real();
  const double s_im = std::sin(ld.imag());
  if (mag_log <= 0) {
    const double m = std::exp(mag_log);
    return m * s_im / (1 + m * m);
  }
  const double s = std::exp(-mag_log);
  return s * s_im / (1 + s * s);
}

}  // namespace

double breather(cplx lambda, cplx c, double x, double t) {
  if (!(lambda.real() > 0) || !(lambda.imag() > 0))
    throw UsageError("breather closed form needs Re lambda > 0 and Im lambda > 0");
  const cplx ld = std::log(c * lambda.real() / (2.0 * I * lambda * lambda.imag())) +
                  2.0 * I * theta(x, t, lambda);
  return 4 * std::atan(2 * breather_ratio(ld) * lambda.imag() / lambda.real());
}

double closed_form(ClosedFormKind kind, cplx lambda, cplx c, double x, double t) {
  return kind == ClosedFormKind::OneSoliton ? one_soliton(lambda, c, x, t)
                                            : breather(lambda, c, x, t);
}

Eigen::Matrix2d breather_Mhat(cplx lambda, cplx c, double x, double t) {
  const double h = 0.5 * breather(lambda, c, x, t);
  Eigen::Matrix2d R;
  R << std::cos(h), -std::sin(h), std::sin(h), std::cos(h);
  return R;
}

namespace {

double half_angle(const DressingState& st) { return std::atan2(st.Mhat(1, 0), st.Mhat(0, 0)); }

// Largest rate at which any log d_j changes along the direction (dx, dt).
double log_d_rate(const PoleSet& poles, double dx, double dt) {
  double r = 0;
  for (const auto& p : poles.poles())
    r = std::max(r, std::abs(2.0 * (theta1(p.lambda) * dx + theta2(p.lambda) * dt)));
  return r;
}

// Continues the half-angle phi = u/2 along a path, bisecting steps whose phase increment
// exceeds the limit. pos(s) maps the path parameter to (x, t).
class PhaseTracker {
 public:
  PhaseTracker(const PoleSet& poles, const SweepOptions& opt,
               std::function<std::pair<double, double>(double)> pos, double s0, double phi0)
      : poles_(poles), opt_(opt), pos_(std::move(pos)), s_(s0), phi_(phi0) {}

  void advance_to(double s_target, double h_max) {
    while (s_ != s_target) {
      const double dir = s_target > s_ ? 1 : -1;
      const double next = std::abs(s_target - s_) > h_max ? s_ + dir * h_max : s_target;
      step(next, 0);
    }
  }
  double phi() const { return phi_; }

 private:
  void step(double next, int depth) {
    const auto [x, t] = pos_(next);
    const double raw = half_angle(dress(poles_, x, t, opt_.dress));
    const double inc = wrap_to_pi(raw - phi_);
    if (std::abs(inc) > opt_.max_phase_step) {
      if (depth > 40) throw NumericalError("branch tracking failed to resolve the phase");
      step(0.5 * (s_ + next), depth + 1);
      step(next, depth + 1);
      return;
    }
    phi_ += inc;
    s_ = next;
  }

  const PoleSet& poles_;
  const SweepOptions& opt_;
  std::function<std::pair<double, double>(double)> pos_;
  double s_, phi_;
};

}  // namespace

std::vector<double> dress_row(const PoleSet& poles, double t, const std::vector<double>& xs,
                              const SweepOptions& opt) {
  if (xs.empty()) return {};
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1]) throw UsageError("dress_row needs ascending x");
  double vmax = 0;
  for (const auto& p : poles.poles()) vmax = std::max(vmax, soliton_speed(p.lambda));
  double x_anchor = std::max(xs.back(), opt.x_anchor + vmax * t);

  double phi0 = 0;
  for (int tries = 0;; ++tries) {
    const DressingState st = dress(poles, x_anchor, t, opt.dress);
    if ((st.Mhat - Eigen::Matrix2d::Identity()).norm() < 1e-6) {
      phi0 = half_angle(st);
      break;
    }
    if (tries == 20) throw NumericalError("branch anchor: solution has not decayed at large x");
    x_anchor += opt.x_anchor;
  }

  const double rate = log_d_rate(poles, 1, 0);
  const double h_max = rate > 0 ? std::min(1.0, 0.5 / rate) : 1.0;
  PhaseTracker tr(poles, opt, [t](double s) { return std::pair{s, t}; }, x_anchor, phi0);
  std::vector<double> u(xs.size());
  for (std::size_t i = xs.size(); i-- > 0;) {
    tr.advance_to(xs[i], h_max);
    u[i] = 2 * tr.phi();
  }
  return u;
}

std::vector<double> dress_column(const PoleSet& poles, double x, const std::vector<double>& ts,
                                 double u_start, const SweepOptions& opt) {
  if (ts.empty()) return {};
  const double raw = half_angle(dress(poles, x, ts.front(), opt.dress));
  if (std::abs(wrap_to_pi(raw - 0.5 * u_start)) > 1e-6)
    throw UsageError("dress_column start value is not a branch of u at the first point");
  const double rate = log_d_rate(poles, 0, 1);
  const double h_max = rate > 0 ? std::min(1.0, 0.5 / rate) : 1.0;
  PhaseTracker tr(poles, opt, [x](double s) { return std::pair{x, s}; }, ts.front(),
                  raw + 2 * pi * std::round((0.5 * u_start - raw) / (2 * pi)));
  std::vector<double> u(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tr.advance_to(ts[i], h_max);
    u[i] = 2 * tr.phi();
  }
  return u;
}

Eigen::MatrixXd dress_grid(const PoleSet& poles, const std::vector<double>& xs,
                           const std::vector<double>& ts, int jobs, const SweepOptions& opt) {
  Eigen::MatrixXd u(ts.size(), xs.size());
  parallel_for(ts.size(), jobs, [&](std::size_t i) {
    const auto row = dress_row(poles, ts[i], xs, opt);
    for (std::size_t j = 0; j < xs.size(); ++j) u(i, j) = row[j];
  });
  return u;
}

}  // namespace sg
