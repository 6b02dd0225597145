#pragma once

#include "sg/core.hpp"

#include <Eigen/Core>

#include <vector>

namespace sg {

enum class PoleKind { Imaginary, PairLead, PairMate };

struct Pole {
  cplx lambda;
  cplx c;
  PoleKind kind = PoleKind::Imaginary;
};

// Ordered discrete spectrum. Construction classifies each pole and checks the structural
// invariants (upper half-plane, distinct, pairs adjacent with matching norming constants).
// The modulus ordering and the exclusion of the unit circle matter only for the asymptotic
// formulas and are checked separately by check_ordered.
class PoleSet {
 public:
  PoleSet() = default;
  explicit PoleSet(const std::vector<std::pair<cplx, cplx>>& lambda_c);

  const std::vector<Pole>& poles() const { return poles_; }
  const Pole& operator[](std::size_t j) const { return poles_[j]; }
  std::size_t size() const { return poles_.size(); }
  bool empty() const { return poles_.empty(); }
  // Number of poles inside the unit disk.
  int Lambda() const;

 private:
  std::vector<Pole> poles_;
};

// Throws UsageError unless |lambda_1| <= |lambda_2| <= ... and the first Lambda poles lie in D2.
void check_ordered(const PoleSet& poles);

double soliton_gamma(cplx lambda);  // Im(lambda) (1 + |lambda|^-2) / 2
double soliton_speed(cplx lambda);  // (1 - |lambda|^2) / (1 + |lambda|^2)
// Speeds of the first Lambda poles, in pole order.
std::vector<double> soliton_speeds(const PoleSet& poles);

// Net topological charge: sum of sgn(Im c) over imaginary poles among the first `count`.
// Breather pairs carry zero charge.
int partial_charge(const PoleSet& poles, int count);

struct DressOptions {
  double cond_tol = 1e12;
};

struct DressingState {
  std::vector<Mat2> B;            // B_1 .. B_N
  std::vector<cplx> log_d;        // log d_j(x, t)
  Mat2 Mhat_complex = Mat2::Identity();
  Eigen::Matrix2d Mhat = Eigen::Matrix2d::Identity();
  double u = 0;                   // principal value 2 arg(Mhat11 + i Mhat21), in (-2 pi, 2 pi]
  int charge_partial = 0;         // charge of kinks whose nominal ray v_j t lies beyond x
};

DressingState dress(const PoleSet& poles, double x, double t, const DressOptions& opt = {});

// M(x, t, k) from the factored form. Throws DomainError at a pole.
Mat2 eval_M(const PoleSet& poles, const DressingState& st, cplx k);
Mat2 eval_M(const PoleSet& poles, double x, double t, cplx k);

struct ResidueDefect {
  double at_lambda = 0;      // |Res_{lambda_j} [M]_1 - C_j [M(lambda_j)]_2|
  double at_lambda_bar = 0;  // |Res_{conj lambda_j} [M]_2 + conj(C_j) [M(conj lambda_j)]_1|
};

// j is 1-based.
ResidueDefect residue_check(const PoleSet& poles, double x, double t, int j);

// u_x + u_t = -2i (sum_j B_j)_12, exact from the rational structure.
cplx ux_plus_ut_complex(const DressingState& st);
double ux_plus_ut(const PoleSet& poles, double x, double t);

enum class ClosedFormKind { OneSoliton, Breather };

double one_soliton(cplx lambda, cplx c, double x, double t);
double breather(cplx lambda, cplx c, double x, double t);
double closed_form(ClosedFormKind kind, cplx lambda, cplx c, double x, double t);
// Rotation matrix [[cos u/2, -sin u/2], [sin u/2, cos u/2]] for the breather closed form.
Eigen::Matrix2d breather_Mhat(cplx lambda, cplx c, double x, double t);

struct SweepOptions {
  double x_anchor = 50;   // anchor offset beyond the fastest soliton ray
  double max_phase_step = pi / 4;
  DressOptions dress;
};

// Branch-fixed u along a row of fixed t. xs must be ascending; the value at large x is 0.
std::vector<double> dress_row(const PoleSet& poles, double t, const std::vector<double>& xs,
                              const SweepOptions& opt = {});

// Branch-fixed u along x = const, continued in t from the value u_start at ts.front().
std::vector<double> dress_column(const PoleSet& poles, double x, const std::vector<double>& ts,
                                 double u_start, const SweepOptions& opt = {});

// Row-major grid u(t_i, x_j), one branch-fixing sweep per row.
Eigen::MatrixXd dress_grid(const PoleSet& poles, const std::vector<double>& xs,
                           const std::vector<double>& ts, int jobs = 1,
                           const SweepOptions& opt = {});

}  // namespace sg
