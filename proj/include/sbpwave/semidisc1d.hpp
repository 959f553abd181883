#pragma once

/// @file semidisc1d.hpp
/// Energy-based SBP-SAT semi-discretization of u_t = v, v_t = (b u_x)_x in 1D,
/// for one block or two blocks joined at an interface.
///
/// The displacement equation is A (u_t - v) = SAT and is solved for u_t with the
/// mean-zero constraint on u_t - v. State layout: [u_0, v_0, u_1, v_1, ...].

#include <functional>
#include <span>
#include <vector>

#include "sbpwave/linalg.hpp"
#include "sbpwave/sbp_ops.hpp"

namespace sbpwave {

using TimeFn = std::function<double(double)>;
using Forcing1D = std::function<double(double x, double t)>;

enum class BcKind { Dirichlet, Neumann, Periodic };

/// Boundary condition at one end. Empty data functions mean homogeneous data.
/// `dissipation` is beta on Dirichlet sides and alpha on Neumann sides; it must be <= 0.
struct BoundarySpec {
  BcKind kind = BcKind::Dirichlet;
  TimeFn f;    ///< Dirichlet value (informational; only f_t enters the scheme)
  TimeFn f_t;  ///< time derivative of the Dirichlet value
  TimeFn g;    ///< Neumann data
  double dissipation = 0.0;

  static BoundarySpec dirichlet(TimeFn f, TimeFn f_t, double beta = 0.0);
  static BoundarySpec neumann(TimeFn g, double alpha = 0.0);
  static BoundarySpec periodic();
};

/// Interface coupling weights; gamma <= 0.
struct InterfaceSpec {
  double tau = 0.5;
  double gamma = 0.0;
};

/// Which zero-mean condition fixes the constant in u_t - v on each block:
/// the plain sum of its entries or the H-weighted sum.
enum class MeanConstraint { Sum, Weighted };

class Semi1D {
 public:
  /// One block. Periodic on both sides couples the right end to the left end
  /// with the interface SATs given by `periodic`.
  static Semi1D single(SbpOps ops, BoundarySpec left, BoundarySpec right, Forcing1D forcing = {},
                       InterfaceSpec periodic = {});
  /// Two blocks meeting at left.grid.x_hi == right.grid.x_lo. Periodic outer sides
  /// add a second interface from the right end of block 1 to the left end of block 0.
  static Semi1D two_block(SbpOps left, SbpOps right, InterfaceSpec iface, BoundarySpec outer_left,
                          BoundarySpec outer_right, Forcing1D forcing = {});

  void set_constraint(MeanConstraint c) { constraint_ = c; }
  MeanConstraint constraint() const { return constraint_; }

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const SbpOps& ops(int b) const { return blocks_[b].ops; }
  size_t state_size() const { return size_; }
  size_t u_offset(int b) const { return blocks_[b].offset; }
  size_t v_offset(int b) const { return blocks_[b].offset + blocks_[b].ops.n(); }

  void rhs(double t, std::span<const double> s, std::span<double> ds) const;
  Vec rhs(double t, std::span<const double> s) const;

  /// sum over blocks of u^T A u + v^T H v
  double energy(std::span<const double> s) const;
  /// 2 u^T A u_t + 2 v^T H v_t with the time derivatives from rhs().
  double energy_rate(double t, std::span<const double> s) const;
  /// Boundary and interface terms that the energy rate equals for homogeneous data:
  /// 2 beta (e^T v)^2 per Dirichlet side, 2 alpha (d^T u)^2 per Neumann side,
  /// 2 gamma (jump in v)^2 per interface.
  double dissipation_rate(std::span<const double> s) const;
  /// max over blocks of |1^T (u_t - v)|, or |1^T H (u_t - v)| when weighted
  double mean_constraint(double t, std::span<const double> s) const;

 private:
  struct Block {
    SbpOps ops;
    AugmentedFactor factor;
    size_t offset = 0;
  };
  struct Coupling {
    int left;   // block whose right end is coupled
    int right;  // block whose left end is coupled
    InterfaceSpec spec;
  };

  void finalize();

  std::vector<Block> blocks_;
  BoundarySpec left_bc_;
  BoundarySpec right_bc_;
  std::vector<Coupling> couplings_;
  Forcing1D forcing_;
  size_t size_ = 0;
  MeanConstraint constraint_ = MeanConstraint::Sum;
};

}  // namespace sbpwave
