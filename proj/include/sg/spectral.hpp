#pragma once

#include "sg/core.hpp"
#include "sg/sampled.hpp"

#include <optional>
#include <vector>

namespace sg {

struct BoundaryData {
  std::vector<double> x, u0, u1;  // initial data on [0, X_max]
  std::vector<double> t, g0, g1;  // boundary data on [0, T_max]
  int Nx = 0, Nt = 0;
  // Optional derivative channels; finite differences of u0 / g0 are used when absent.
  std::optional<std::vector<double>> u0x, g0t;
};

struct ScatterOptions {
  double step = 0;            // integrator step; 0 means the data spacing
  double phase_step = 0.05;   // bound on |theta| * step for the oscillating exponentials
  double tail_tol = 1e-8;
  bool small_k_gauge = true;  // integrate |k| < 1 in the gauge-rotated frame
  int jobs = 1;
};

// Throws DomainError("truncation too short") when a tail has not reached 2 pi N.
void validate_boundary_data(const BoundaryData& data, double tail_tol);

struct ScatterPair {
  cplx first;   // a (x-problem) or A (t-problem)
  cplx second;  // b or B
};

// a = X22(0, k), b = X12(0, k) for Im k >= 0.
std::vector<ScatterPair> scatter_x(const BoundaryData& data, const std::vector<cplx>& ks,
                                   const ScatterOptions& opt = {});
// A = T22(0, k), B = T12(0, k) for k in the closure of D1 u D3.
std::vector<ScatterPair> scatter_t(const BoundaryData& data, const std::vector<cplx>& ks,
                                   const ScatterOptions& opt = {});

struct SpectralSample {
  cplx k;
  cplx a{1}, b{0};                   // at k
  std::optional<cplx> A, B;          // at k, when k is in the closure of D1 (incl. real k)
  std::optional<cplx> A_bar, B_bar;  // A(conj k), B(conj k), when k is in the closure of D2
  std::optional<cplx> c, d, r1, h, r;
};

struct SpectralTable {
  std::vector<SpectralSample> real;    // symmetric: real[i].k == -real[n-1-i].k
  std::vector<SpectralSample> circle;  // upper unit semicircle
  std::vector<SpectralSample> upper;   // arbitrary points in the open upper half-plane
  std::optional<SpectralSample> small; // real k = k_small for the k -> 0 check
  int Nx = 0, Nt = 0;
  double small_k_defect = 0;           // |d(k_small) - (-1)^(Nx - Nt)|, filled by derive
};

struct TableSpec {
  int n_real = 400;  // split evenly between the two half-lines
  double k_min = 1e-2, k_max = 1e2;
  int n_circle = 40;
  std::vector<cplx> upper;
  double k_small = 1e-3;
};

SpectralTable build_spectral_table(const BoundaryData& data, const TableSpec& spec,
                                   const ScatterOptions& opt = {});

struct SpectralZeroError : NumericalError {
  SpectralZeroError(const std::string& what, cplx k) : NumericalError(what), k(k) {}
  cplx k;
};

void derive_cd_and_reflection(SpectralTable& table, double zero_tol = 1e-6);

// sup over samples in the closure of D1 of |A b - B a|.
double global_relation_residual(const SpectralTable& table);

struct IdentityDefects {
  double ab_unitarity = 0;   // max ||a|^2 + |b|^2 - 1| on the real grid
  double AB_unitarity = 0;   // max |A conj A(conj k) + B conj B(conj k) - 1|, real grid and circle
  double cd_unitarity = 0;   // max ||c|^2 + |d|^2 - 1| on the real grid
  double schwarz = 0;        // max over a, b, A, B of |f(k) - conj f(-k)| on the real grid
  double r_consistency = 0;  // max |conj(c)/d - (r1 + h)| on [-1, 1]
};

IdentityDefects identity_defects(const SpectralTable& table);

// d(k) = a(k) conj(A(conj k)) + b(k) conj(B(conj k)) for k in the closure of D2.
std::vector<cplx> d_values(const BoundaryData& data, const std::vector<cplx>& ks,
                           const ScatterOptions& opt = {});

// Zeros of d in D2 from a modulus scan of an n x n grid followed by Newton refinement.
std::vector<cplx> locate_d_zeros(const BoundaryData& data, int n = 24,
                                 const ScatterOptions& opt = {}, double zero_tol = 1e-6);

struct CompatibilityReport {
  double value = 0;       // |g0(0) - u0(0)|
  double first_t = 0;     // |g0'(0) - u1(0)|
  double first_x = 0;     // |g1(0) - u0'(0)|
};

CompatibilityReport check_compatibility(const BoundaryData& data);

}  // namespace sg
