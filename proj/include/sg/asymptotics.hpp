#pragma once

#include "sg/core.hpp"
#include "sg/dressing.hpp"
#include "sg/radiation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sg {

// Radiation wave built from the Blaschke-twisted reflection coefficient. With an empty pole set
// this is the pure radiation leading term.
struct RadiationLeading {
  double k0 = 0, nu = 0;
  double alpha = 0;  // twisted phase; meaningful only when nu > 0
  double value = 0;  // -2 (-1)^N sqrt(2 (1 + k0^2) nu / k0) sin(alpha), not divided by sqrt t
  cplx Atilde = 0;   // sqrt(k0 (1 + k0^2) nu / 2) exp(i alpha)
};

RadiationLeading radiation_leading(const RadiationProfile& r, const PoleSet& poles, double x,
                                   double t);
// sign_factor * value / sqrt(t); without poles this is the Sector III leading term of u.
double u_radiation_leading(const RadiationProfile& r, double x, double t, int sign_factor = 1,
                           const PoleSet& poles = {});

// log d'_j (kink, real up to rounding) or log d''_j (breather); j is 1-based.
struct ShiftCoefficient {
  PoleKind kind = PoleKind::Imaginary;
  cplx log_d;
  cplx value() const { return std::exp(log_d); }
};

ShiftCoefficient soliton_shift_coefficients(const PoleSet& poles, const RadiationProfile& r,
                                            int j, double x, double t);

double u_sol(const PoleSet& poles, const RadiationProfile& r, int j, double x, double t);
double u_sol(const ShiftCoefficient& d, cplx lambda);

enum class ModeKind { Away, Kink, Breather };

struct Mode {
  ModeKind kind = ModeKind::Away;
  int j = 1;  // 1-based; Away allows j = Lambda + 1
  bool operator==(const Mode&) const = default;
};

// r_m^(l) for m = 1..2N, where m > N stands for the N + m entries of the recursion.
class RTable {
 public:
  RTable(Mode mode, int N, int depth);
  Mode mode() const { return mode_; }
  int N() const { return N_; }
  int depth() const { return depth_; }
  bool has(int m, int l) const;
  cplx at(int m, int l) const;  // throws UsageError when the entry is not part of the table
  void set(int m, int l, cplx v);

 private:
  std::size_t slot(int m, int l) const;
  Mode mode_;
  int N_, depth_;
  std::vector<std::optional<cplx>> cells_;
};

RTable r_recursion(const PoleSet& poles, cplx Atilde, double k0, Mode mode);

// Which sum of the u_rad^(2) formula pole l feeds in a given mode.
enum class TermRole { Mode, ImagBefore, ImagAfter, PairBefore, PairAfter, CoveredByLead };

struct PartitionEntry {
  int l;
  TermRole role;
  int level;  // r-table level used; -1 for roles with no own term
};

// Every l in 1..N appears exactly once.
std::vector<PartitionEntry> rad2_partition(const PoleSet& poles, Mode mode);

// d is d'_j for Kink mode and d''_j for Breather mode; ignored for Away.
double u_rad2(const PoleSet& poles, const RTable& table, std::optional<ShiftCoefficient> d = {});
cplx u_rad2_complex(const PoleSet& poles, const RTable& table,
                    std::optional<ShiftCoefficient> d = {});

struct AsymptoticTerms {
  double u_const = 0, u_sol = 0, u_rad1 = 0, u_rad2 = 0;
};

struct AsymptoticReport {
  double x = 0, t = 0;
  SectorLabel sector;
  double u_pred = 0;
  AsymptoticTerms terms;
  double error_scale = 0;
  std::optional<double> k0, nu;
};

double u_const(const PoleSet& poles, int j);

AsymptoticReport assemble(double x, double t, const PoleSet& poles, const RadiationProfile& r,
                          const SectorThresholds& thresholds = {});

}  // namespace sg
