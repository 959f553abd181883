#pragma once

/// @file semidisc2d.hpp
/// Tensor-product SBP-SAT discretization of u_t = v, v_t = (a u_x)_x + (b u_y)_y + F
/// on a rectangle with Dirichlet data on all four sides.
///
/// Grid functions are flattened x-major: index = ix * ny + iy.
/// State layout: [u, v].

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sbpwave/banded.hpp"
#include "sbpwave/linalg.hpp"
#include "sbpwave/sbp_ops.hpp"

namespace sbpwave {

using Field2D = std::function<double(double x, double y, double t)>;

struct Grid2D {
  Grid1D x;
  Grid1D y;

  int nx() const { return x.n; }
  int ny() const { return y.n; }
  int index(int ix, int iy) const { return ix * y.n + iy; }
  size_t size() const { return static_cast<size_t>(x.n) * y.n; }
};

/// Sampled coefficient fields, x-major.
struct Coefficients2D {
  Vec a;
  Vec b;

  static Coefficients2D constant(const Grid2D& g, double a, double b);
  static Coefficients2D sample(const Grid2D& g, const std::function<double(double, double)>& a,
                               const std::function<double(double, double)>& b);
  bool is_constant() const;
};

struct PcgConfig {
  double rel_tol = 1e-8;
  int max_iter = 1000;
  double ichol_boost = 0.01;
  double ichol_drop = 1e-4;
};

struct PcgStats {
  long solves = 0;
  long iterations = 0;
  int max_iterations = 0;
  double mean() const { return solves ? static_cast<double>(iterations) / solves : 0.0; }
};

class Semi2D {
 public:
  /// theta <= 0. f_t is the time derivative of the Dirichlet data; empty means zero.
  static Semi2D assemble(const Grid2D& grid, const Coefficients2D& coeffs, int p, double theta, Field2D f_t = {},
                         Field2D forcing = {});

  const Grid2D& grid() const { return grid_; }
  int p() const { return p_; }
  double theta() const { return theta_; }
  const Coefficients2D& coefficients() const { return coeffs_; }
  const Csr& A() const { return A_; }
  /// Diagonal of H = Hx (x) Hy.
  const Vec& H() const { return H_; }
  const Vec& Hx() const { return x_lines_.front().H; }
  const Vec& Hy() const { return y_lines_.front().H; }
  /// Operator along the x-line y = y_iy, coefficient a(:, iy).
  const SbpOps& x_line(int iy) const { return x_lines_[iy]; }
  /// Operator along the y-line x = x_ix, coefficient b(ix, :).
  const SbpOps& y_line(int ix) const { return y_lines_[ix]; }
  size_t state_size() const { return 2 * grid_.size(); }
  const Field2D& boundary_rate() const { return f_t_; }
  const Field2D& forcing() const { return forcing_; }

  /// out = D u
  void apply_D(std::span<const double> u, std::span<double> out) const;
  /// Right-hand side of A (u_t - v) = SAT.
  void sat_u(double t, std::span<const double> v, std::span<double> out) const;
  /// out = D u + F + theta H^{-1} [boundary terms]
  void v_rhs(double t, std::span<const double> u, std::span<double> out) const;

  /// Builds the incomplete Cholesky preconditioner of A.
  void prepare_pcg(const PcgConfig& cfg);
  /// Solves A u_t = A v + SAT by PCG with initial guess v.
  void rhs_pcg(double t, std::span<const double> s, std::span<double> ds, PcgStats* stats = nullptr) const;
  const IcholFactor& ichol_factor() const { return *ichol_; }

  /// Factors A for the direct constrained solve (small grids).
  void prepare_direct();
  void rhs_direct(double t, std::span<const double> s, std::span<double> ds) const;

  double energy(std::span<const double> s) const;
  /// 2 u^T A u_t + 2 v^T H v_t
  double energy_rate(std::span<const double> s, std::span<const double> ds) const;
  /// 2 theta sum over sides of v^T e H e^T v
  double dissipation_rate(std::span<const double> s) const;

 private:
  Grid2D grid_;
  Coefficients2D coeffs_;
  int p_ = 2;
  double theta_ = 0.0;
  Field2D f_t_;
  Field2D forcing_;
  std::vector<SbpOps> x_lines_;
  std::vector<SbpOps> y_lines_;
  Csr A_;
  Vec H_;
  PcgConfig pcg_;
  std::shared_ptr<IcholFactor> ichol_;
  std::shared_ptr<AugmentedFactor> direct_;
};

/// Diagonalization of the constant-coefficient scheme.
///
/// With A~x = Hx^{-1/2} Ax Hx^{-1/2} = Qx Lx Qx^T (likewise y), the variables
/// u = H^{-1/2} (Qx (x) Qy) u~ turn the volume operator into Lx (+) Ly. Boundary
/// terms act through the length-nx and length-ny vectors p = Q^T H^{-1/2} d and
/// q = Q^T H^{-1/2} e of each side.
class FastDiag {
 public:
  static FastDiag build(const Semi2D& semi);

  /// u~ = Q^T H^{1/2} u for a single grid function.
  void forward(std::span<const double> u, std::span<double> ut) const;
  /// u = H^{-1/2} Q u~
  void inverse(std::span<const double> ut, std::span<double> u) const;
  /// [u, v] -> [u~, v~]
  Vec to_diag(std::span<const double> s) const;
  Vec from_diag(std::span<const double> st) const;

  /// Time derivative of the transformed state.
  void rhs(double t, std::span<const double> st, std::span<double> dst) const;
  /// u~^T L u~ + v~^T v~
  double energy(std::span<const double> st) const;

  const EigPair& eig_x() const { return ex_; }
  const EigPair& eig_y() const { return ey_; }
  /// Eigenvalue of mode (kx, ky).
  double lambda(int kx, int ky) const { return ex_.lambda[kx] + ey_.lambda[ky]; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  double theta_ = 0.0;
  Grid2D grid_;
  Field2D f_t_;
  Field2D forcing_;
  EigPair ex_, ey_;
  Vec shx_, shy_;  // square roots of Hx, Hy
  Vec pW_, qW_, pE_, qE_;  // length nx
  Vec pS_, qS_, pN_, qN_;  // length ny
  Vec cx_, cy_;            // Q^T H^{-1/2} 1 per direction
};

}  // namespace sbpwave
