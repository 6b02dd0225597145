#include "sg/asymptotics.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace sg {

namespace {

double minus_one_pow(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

// ln delta at a pole, memoized per (profile, k0, lambda).
cplx log_delta_at(const RadiationProfile& r, double k0, cplx lambda) {
  if (r.is_zero()) return 0;
  using Key = std::tuple<std::uint64_t, double, double, double>;
  static std::map<Key, cplx> memo;
  static std::shared_mutex mu;
  const Key key{r.id(), k0, lambda.real(), lambda.imag()};
  {
    std::shared_lock lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  const cplx v = log_delta_of(r, k0, lambda);
  std::unique_lock lock(mu);
  return memo.emplace(key, v).first->second;
}

double sector_k0(double x, double t) {
  if (!(t > 0) || x < 0) throw DomainError("asymptotic formulas need x >= 0 and t > 0");
  const double zeta = x / t;
  if (!(zeta < 1)) throw DomainError("Sector III formulas need zeta < 1");
  return k0_of(zeta);
}

}  // namespace

RadiationLeading radiation_leading(const RadiationProfile& r, const PoleSet& poles, double x,
                                   double t) {
  RadiationLeading out;
  out.k0 = sector_k0(x, t);
  const RadiationScalars& s = radiation_scalars(r, out.k0);
  out.nu = s.nu;
  if (!(s.nu > 0)) return out;
  // |r~| = |r| on the real line, so only the phase changes
  double twist = 0;
  for (const auto& p : poles.poles())
    twist += std::arg((out.k0 - p.lambda) / (out.k0 - std::conj(p.lambda)));
  out.alpha = alpha_of(s, t) + twist;
  const double k0 = out.k0, q = 1 + k0 * k0;
  out.value = -2 * minus_one_pow(int(poles.size())) * std::sqrt(2 * q * s.nu / k0) *
              std::sin(out.alpha);
  out.Atilde = std::sqrt(k0 * q * s.nu / 2) * std::exp(I * out.alpha);
  return out;
}

double u_radiation_leading(const RadiationProfile& r, double x, double t, int sign_factor,
                           const PoleSet& poles) {
  if (sign_factor != 1 && sign_factor != -1) throw UsageError("sign_factor must be +-1");
  return sign_factor * radiation_leading(r, poles, x, t).value / std::sqrt(t);
}

ShiftCoefficient soliton_shift_coefficients(const PoleSet& poles, const RadiationProfile& r,
                                            int j, double x, double t) {
  if (j < 1 || j > poles.Lambda()) throw UsageError("soliton index must lie in 1..Lambda");
  const Pole& p = poles[j - 1];
  if (p.kind == PoleKind::PairMate) throw UsageError("breather terms are indexed by the pair lead");
  const double k0 = sector_k0(x, t);
  const cplx lj = p.lambda;
  ShiftCoefficient out;
  out.kind = p.kind;
  cplx ld = std::log(p.c) + 2.0 * I * theta(x, t, lj);
  if (p.kind == PoleKind::Imaginary)
    ld -= std::log(lj - std::conj(lj));
  else
    ld += std::log(lj.real() / (2.0 * I * lj * lj.imag()));
  for (int l = 0; l < j - 1; ++l)
    ld += 2.0 * std::log((lj - poles[l].lambda) / (lj - std::conj(poles[l].lambda)));
  ld -= 2.0 * log_delta_at(r, k0, lj);
  if (p.kind == PoleKind::Imaginary) {
    // d' is real: keep the imaginary part at exactly 0 or pi
    ld = cplx(ld.real(), std::cos(ld.imag()) >= 0 ? 0.0 : pi);
  }
  out.log_d = ld;
  return out;
}

double u_sol(const ShiftCoefficient& d, cplx lambda) {
  if (d.kind == PoleKind::Imaginary) {
    const double sign = std::cos(d.log_d.imag()) >= 0 ? 1.0 : -1.0;
    if (d.log_d.real() <= 0) return -4 * std::atan(sign * std::exp(d.log_d.real()));
    // atan(d) = sgn(d) pi/2 - atan(1/d)
    return -4 * (sign * pi / 2 - std::atan(sign * std::exp(-d.log_d.real())));
  }
  const double s = std::exp(-std::abs(d.log_d.real()));
  const double ratio = lambda.imag() / lambda.real();
  if (d.log_d.real() <= 0) {
    const cplx dv = std::exp(d.log_d);
    return 4 * std::atan(2 * dv.imag() * ratio / (1 + std::norm(dv)));
  }
  // Im d / (1 + |d|^2) = s Im e / (1 + s^2) with e = d / |d|
  const double im_e = std::sin(d.log_d.imag());
  return 4 * std::atan(2 * s * im_e * ratio / (1 + s * s));
}

double u_sol(const PoleSet& poles, const RadiationProfile& r, int j, double x, double t) {
  return u_sol(soliton_shift_coefficients(poles, r, j, x, t), poles[j - 1].lambda);
}

RTable::RTable(Mode mode, int N, int depth)
    : mode_(mode), N_(N), depth_(depth),
      cells_(std::size_t(std::max(0, depth + 1)) * std::size_t(2 * N)) {}

std::size_t RTable::slot(int m, int l) const {
  return std::size_t(l) * std::size_t(2 * N_) + std::size_t(m - 1);
}

bool RTable::has(int m, int l) const {
  if (m < 1 || m > 2 * N_ || l < 0 || l > depth_) return false;
  return cells_[slot(m, l)].has_value();
}

cplx RTable::at(int m, int l) const {
  if (!has(m, l)) throw UsageError("r-table entry outside the recursion");
  return *cells_[slot(m, l)];
}

void RTable::set(int m, int l, cplx v) { cells_[slot(m, l)] = v; }

namespace {

void check_mode(const PoleSet& poles, Mode mode) {
  const int L = poles.Lambda();
  switch (mode.kind) {
    case ModeKind::Away:
      if (mode.j < 1 || mode.j > L + 1) throw UsageError("Away mode index must lie in 1..Lambda+1");
      if (mode.j <= int(poles.size()) && mode.j > 1 &&
          poles[mode.j - 1].kind == PoleKind::PairMate)
        throw UsageError("Away mode index splits a breather pair");
      break;
    case ModeKind::Kink:
      if (mode.j < 1 || mode.j > L) throw UsageError("Kink mode index must lie in 1..Lambda");
      if (poles[mode.j - 1].kind != PoleKind::Imaginary)
        throw UsageError("Kink mode needs an imaginary pole");
      break;
    case ModeKind::Breather:
      if (mode.j < 1 || mode.j > L) throw UsageError("Breather mode index must lie in 1..Lambda");
      if (poles[mode.j - 1].kind != PoleKind::PairLead)
        throw UsageError("Breather mode needs a pair lead");
      break;
  }
}

cplx checked_ratio(cplx num, cplx den) {
  if (std::abs(den) == 0) throw NumericalError("r-recursion division by zero");
  return num / den;
}

}  // namespace

RTable r_recursion(const PoleSet& poles, cplx Atilde, double k0, Mode mode) {
  check_mode(poles, mode);
  const int N = int(poles.size());
  if (N == 0) return RTable(mode, 0, -1);
  const int depth = mode.kind == ModeKind::Breather ? N - 2 : N - 1;
  RTable tab(mode, N, depth);
  auto lam = [&](int m) { return poles[m - 1].lambda; };

  const cplx Ab = std::conj(Atilde);
  for (int m = 1; m <= N; ++m) {
    const cplx l = lam(m), lb = std::conj(l);
    tab.set(m, 0, I * Atilde / (k0 - l) - I * Ab / (k0 + l));
    tab.set(N + m, 0, I * Atilde / (k0 - lb) - I * Ab / (k0 + lb));
  }

  std::vector<bool> inserted(N + 1, false);
  for (int l = 1; l <= depth; ++l) {
    int p = l;
    bool regular = l < mode.j;
    if (!regular && mode.kind == ModeKind::Kink) p = l + 1;
    if (!regular && mode.kind == ModeKind::Breather) p = l + 2;
    const cplx lp = lam(p), lpb = std::conj(lp);
    for (int m = 1; m <= N; ++m) {
      if (inserted[m] || m == p) continue;
      const cplx lm = lam(m), lmb = std::conj(lm);
      if (regular) {
        const cplx src = tab.at(N + p, l - 1);
        tab.set(m, l, checked_ratio(lm - lp, lm - lpb) * tab.at(m, l - 1) +
                          checked_ratio(lp - lpb, lm - lpb) * src);
        tab.set(N + m, l, checked_ratio(lmb - lp, lmb - lpb) * tab.at(N + m, l - 1) +
                              checked_ratio(lp - lpb, lmb - lpb) * src);
      } else {
        const cplx src = tab.at(p, l - 1);
        tab.set(m, l, checked_ratio(lm - lpb, lm - lp) * tab.at(m, l - 1) +
                          checked_ratio(lpb - lp, lm - lp) * src);
        tab.set(N + m, l, checked_ratio(lmb - lpb, lmb - lp) * tab.at(N + m, l - 1) +
                              checked_ratio(lpb - lp, lmb - lp) * src);
      }
    }
    inserted[p] = true;
  }
  return tab;
}

std::vector<PartitionEntry> rad2_partition(const PoleSet& poles, Mode mode) {
  check_mode(poles, mode);
  const int N = int(poles.size());
  // level offset of the "after" sums: the r-table depth at which pole l is about to be inserted
  const int after_shift = mode.kind == ModeKind::Away ? 1 : mode.kind == ModeKind::Kink ? 2 : 3;
  std::vector<PartitionEntry> out;
  for (int l = 1; l <= N; ++l) {
    const PoleKind kind = poles[l - 1].kind;
    if (mode.kind == ModeKind::Kink && l == mode.j) {
      out.push_back({l, TermRole::Mode, N - 1});
      continue;
    }
    if (mode.kind == ModeKind::Breather && l == mode.j) {
      out.push_back({l, TermRole::Mode, N - 2});
      continue;
    }
    if (kind == PoleKind::PairMate) {
      out.push_back({l, TermRole::CoveredByLead, -1});
      continue;
    }
    const bool before = l < mode.j;
    const bool imag = kind == PoleKind::Imaginary;
    if (before)
      out.push_back({l, imag ? TermRole::ImagBefore : TermRole::PairBefore, l - 1});
    else
      out.push_back({l, imag ? TermRole::ImagAfter : TermRole::PairAfter, l - after_shift});
  }
  return out;
}

cplx u_rad2_complex(const PoleSet& poles, const RTable& table, std::optional<ShiftCoefficient> d) {
  const Mode mode = table.mode();
  const int N = int(poles.size());
  if (table.N() != N) throw UsageError("r-table built for a different pole set");
  if (mode.kind != ModeKind::Away) {
    if (!d) throw UsageError("soliton mode needs its shift coefficient");
    const bool kink = mode.kind == ModeKind::Kink;
    if (kink != (d->kind == PoleKind::Imaginary)) throw UsageError("mode/table mismatch");
  }
  // Sums over poles after j flip sign in kink mode only. The pair sums use +8 (-1)^(N-l) in the
  // away and breather modes, the sign under which each soliton mode tends to the neighbouring
  // away modes as its shift coefficient goes to 0 or infinity.
  const double after_sign = mode.kind == ModeKind::Kink ? -1.0 : 1.0;
  cplx sum = 0;
  for (const PartitionEntry& e : rad2_partition(poles, mode)) {
    const int l = e.l;
    const cplx lam = poles[l - 1].lambda;
    const double sgn = minus_one_pow(N - l);
    const double ratio = lam.imag() / lam.real();
    switch (e.role) {
      case TermRole::CoveredByLead:
        break;
      case TermRole::ImagBefore:
        sum += 4 * sgn * table.at(N + l, e.level);
        break;
      case TermRole::PairBefore:
        sum -= 8 * sgn * ratio * table.at(N + l, e.level).imag();
        break;
      case TermRole::ImagAfter:
        sum += 4 * after_sign * sgn * table.at(l, e.level);
        break;
      case TermRole::PairAfter:
        sum += 8 * after_sign * sgn * ratio * table.at(l, e.level).imag();
        break;
      case TermRole::Mode: {
        const cplx rj = table.at(l, e.level), rNj = table.at(N + l, e.level);
        if (mode.kind == ModeKind::Kink) {
          const double sign = std::cos(d->log_d.imag()) >= 0 ? 1.0 : -1.0;
          if (d->log_d.real() <= 0) {
            const double dp = sign * std::exp(d->log_d.real());
            sum += 4.0 * (rj + rNj * (dp * dp)) / (1 + dp * dp);
          } else {
            const double w = sign * std::exp(-d->log_d.real());
            sum += 4.0 * (rj * (w * w) + rNj) / (w * w + 1);
          }
        } else {
          const double im = lam.imag(), re = lam.real();
          double num, den;
          if (d->log_d.real() <= 0) {
            const cplx dv = std::exp(d->log_d), db = std::conj(dv);
            num = ((1.0 + db * db) * rj - (1.0 + dv * dv) * db * db * rNj).imag();
            den = 4 * dv.imag() * dv.imag() * im * im + std::pow(1 + std::norm(dv), 2) * re * re;
          } else {
            // numerator and denominator divided by |d|^4
            const double s = std::exp(-d->log_d.real());
            const cplx e = std::exp(I * d->log_d.imag()), eb = std::conj(e);
            num = ((s * s * s * s + eb * eb * (s * s)) * rj - (s * s + e * e) * eb * eb * rNj).imag();
            den = 4 * std::pow(e.imag() * s * im, 2) + std::pow(s * s + 1, 2) * re * re;
          }
          sum -= 8 * im * re * num / den;
        }
        break;
      }
    }
  }
  return sum;
}

double u_rad2(const PoleSet& poles, const RTable& table, std::optional<ShiftCoefficient> d) {
  return u_rad2_complex(poles, table, d).real();
}

double u_const(const PoleSet& poles, int j) { return 2 * pi * double(-partial_charge(poles, j - 1)); }

AsymptoticReport assemble(double x, double t, const PoleSet& poles, const RadiationProfile& r,
                          const SectorThresholds& thresholds) {
  if (!poles.empty()) check_ordered(poles);
  AsymptoticReport rep;
  rep.x = x;
  rep.t = t;
  rep.sector = classify_sector(x, t, thresholds, soliton_speeds(poles));
  const int L = poles.Lambda();
  switch (rep.sector.sector) {
    case Sector::I:
      rep.error_scale = 1 / x;
      return rep;
    case Sector::II:
      rep.error_scale = (1 - x / t) + 1 / t;
      return rep;
    case Sector::IV:
      rep.terms.u_const = u_const(poles, L + 1);
      rep.u_pred = rep.terms.u_const;
      rep.error_scale = std::pow(x / t, 2) + 1 / t;
      return rep;
    case Sector::III:
      break;
  }
  if (!(t > 2)) throw DomainError("Sector III formulas need t > 2");
  const int j = rep.sector.index;
  const RadiationLeading rad = radiation_leading(r, poles, x, t);
  rep.k0 = rad.k0;
  rep.nu = rad.nu;
  rep.terms.u_rad1 = rad.value;
  rep.terms.u_const = u_const(poles, j);

  Mode mode{ModeKind::Away, j};
  std::optional<ShiftCoefficient> d;
  if (rep.sector.sub == SubSector::NearSoliton) {
    d = soliton_shift_coefficients(poles, r, j, x, t);
    rep.terms.u_sol = u_sol(*d, poles[j - 1].lambda);
    mode.kind = d->kind == PoleKind::Imaginary ? ModeKind::Kink : ModeKind::Breather;
    rep.error_scale = std::log(t) / t;
  } else {
    rep.error_scale = 1 / (rad.k0 * t) + std::log(t) / t;
  }
  if (rad.Atilde != cplx(0) && !poles.empty())
    rep.terms.u_rad2 = u_rad2(poles, r_recursion(poles, rad.Atilde, rad.k0, mode), d);
  rep.u_pred = rep.terms.u_const + rep.terms.u_sol +
               (rep.terms.u_rad1 + rep.terms.u_rad2) / std::sqrt(t);
  return rep;
}

}  // namespace sg
