#pragma once

/// @file sbp_ops.hpp
/// Diagonal-norm SBP second-derivative operators of order (2p, p), p = 1, 2, 3,
/// with constant or variable coefficient b(x) > 0.

#include <complex>
#include <span>
#include <vector>

#include "sbpwave/banded.hpp"

namespace sbpwave {

/// Equidistant grid on [x_lo, x_hi].
struct Grid1D {
  int n = 0;
  double x_lo = 0.0;
  double x_hi = 1.0;

  static Grid1D uniform(int n, double x_lo, double x_hi);
  double h() const { return (x_hi - x_lo) / (n - 1); }
  double node(int i) const;
  Vec nodes() const;
};

/// Squared wave speed b(x), either one value or samples on the grid.
class CoefficientProfile {
 public:
  static CoefficientProfile constant(double value);
  static CoefficientProfile sampled(Vec values);

  bool is_constant() const { return values_.empty(); }
  double value() const { return value_; }
  const Vec& values() const { return values_; }
  /// b at node i (the constant value for constant profiles).
  double at(int i) const { return values_.empty() ? value_ : values_[i]; }

 private:
  double value_ = 1.0;
  Vec values_;
};

/// Sparse row vector with contiguous support starting at `offset`.
struct Stencil {
  int offset = 0;
  Vec coeffs;

  double dot(std::span<const double> u) const;
  /// y += s * stencil
  void axpy(double s, std::span<double> y) const;
};

/// Operator bundle satisfying H D = -A - b1 e1 d1^T + bn en dn^T.
/// H carries one factor h and A carries 1/h.
struct SbpOps {
  int p = 0;
  Grid1D grid;
  Vec H;
  SymBand A;
  Stencil d1;
  Stencil dn;
  double b1 = 1.0;
  double bn = 1.0;
  Band D;

  int n() const { return grid.n; }
  /// y = D u
  void apply_D(std::span<const double> u, std::span<double> y) const;
  Vec apply_D(std::span<const double> u) const;
};

/// Boundary closure width: 2 (p=1), 4 (p=2), 6 (p=3).
int closure_width(int p);
/// Smallest admissible point count, twice the closure width.
int min_points(int p);

SbpOps build_constant_ops(int p, const Grid1D& grid, double b);
SbpOps build_variable_ops(int p, const Grid1D& grid, const CoefficientProfile& b);

/// max |(H D + A + b1 e1 d1^T - bn en dn^T)_ij| / max |A_ij|
double sbp_residual(const SbpOps& ops);

struct RankReport {
  double a1_norm = 0.0;              ///< ||A 1||_2
  double a_norm = 0.0;               ///< max |A_ij|
  double smallest_eig = 0.0;
  double second_smallest_eig = 0.0;
  int near_zero_count = 0;           ///< eigenvalues below 1e-12 * ||A||_2
};

/// Dense eigensolve of A; n <= 2000.
RankReport nullspace_rank_check(const SbpOps& ops);

/// Roots of the characteristic polynomial of the interior stencil of order (4,2).
std::vector<std::complex<double>> interior_characteristic_roots(int p = 2);
/// The characteristic polynomial evaluated at z.
std::complex<double> interior_characteristic_polynomial(int p, std::complex<double> z);

}  // namespace sbpwave
