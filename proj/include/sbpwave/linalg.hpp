#pragma once

/// @file linalg.hpp
/// Solver kernels: constrained solve with a singular band matrix, dense symmetric
/// eigendecomposition, preconditioned conjugate gradients and incomplete Cholesky.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbpwave/banded.hpp"

namespace sbpwave {

/// Raised when a matrix expected to have rank n-1 with constants in its
/// nullspace turns out not to.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factor for the bordered system [[A, 1], [1^T, 0]] [w; m] = [r; 0].
///
/// With 1 in the nullspace of A, the multiplier is m = mean(r) and w solves
/// A w = r - m 1 with zero mean. The leading (n-1) block of A is positive
/// definite exactly when rank(A) = n-1, so it is Cholesky factored in band form.
struct AugmentedFactor {
  int n = 0;
  int bw = 0;
  Vec L;  // lower band of the Cholesky factor of A[0:n-1, 0:n-1]

  void solve(std::span<const double> rhs, std::span<double> w, double* multiplier = nullptr) const;
};

struct AugmentedSolution {
  Vec w;
  double multiplier = 0.0;
};

AugmentedFactor factor_augmented(const SymBand& A);
AugmentedSolution solve_augmented(const AugmentedFactor& f, std::span<const double> rhs);

/// Eigenpairs with ascending eigenvalues. Q is row-major, column k is the k-th vector.
struct EigPair {
  int n = 0;
  Vec Q;
  Vec lambda;

  double q(int i, int k) const { return Q[static_cast<size_t>(i) * n + k]; }
};

/// Cyclic Jacobi on a dense symmetric row-major matrix.
EigPair sym_eig(std::span<const double> M, int n);

using LinearOp = std::function<void(std::span<const double>, std::span<double>)>;

/// Norm used by the stopping test: the residual ||r|| or the preconditioned
/// residual sqrt(r^T M^{-1} r), each relative to the same norm of the rhs.
enum class PcgNorm { Residual, Preconditioned };

struct PcgOptions {
  double rel_tol = 1e-8;
  PcgNorm norm = PcgNorm::Preconditioned;
  int max_iter = 1000;
  /// Project the constant vector out of residuals and search directions.
  bool deflate_constants = true;
  /// Record ||r_k|| and the preconditioned norm sqrt(r_k^T M^{-1} r_k) per iteration.
  bool record_history = false;
};

struct PcgResult {
  Vec x;
  int iterations = 0;
  double rel_residual = 0.0;  ///< ||rhs - A x|| / ||rhs||
  double stop_measure = 0.0;  ///< the relative quantity compared against rel_tol
  Vec residual_history;
  Vec precond_residual_history;
};

class PcgError : public std::runtime_error {
 public:
  PcgError(const std::string& what, Vec best, double rel_residual)
      : std::runtime_error(what), best(std::move(best)), rel_residual(rel_residual) {}
  Vec best;
  double rel_residual;
};

/// Preconditioned CG for symmetric positive semidefinite A with rhs in range(A).
/// Stops when the residual, measured in opt.norm, falls below rel_tol times the rhs in
/// the same norm. An empty preconditioner means identity.
/// With deflation on, x - x0 stays orthogonal to the constant vector.
PcgResult pcg(const LinearOp& A, const LinearOp& precond, std::span<const double> rhs,
              std::span<const double> x0, const PcgOptions& opt);

/// Threshold incomplete Cholesky L L^T ~ A + boost * diag(A).
/// Off-diagonal entries of column j smaller than drop_tol * ||A(j:n, j)||_1 are dropped.
struct IcholFactor {
  int n = 0;
  double diag_boost = 0.0;
  double drop_tol = 0.0;
  std::vector<int> colptr;  // L stored by columns, diagonal first
  std::vector<int> row;
  Vec val;

  /// z = (L L^T)^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;
  int nnz() const { return static_cast<int>(val.size()); }
  Vec to_dense() const;
};

IcholFactor ichol(const Csr& A, double diag_boost, double drop_tol);

}  // namespace sbpwave
