#pragma once

/// @file manufactured.hpp
/// Closed-form solutions used by the convergence studies.

#include <string>

namespace sbpwave {

/// U = cos(10x + 1) cos(10t + 2) on [-pi/2, pi/2], c = 1, t in [0, 2].
struct Wave1DSolution {
  double x_lo;
  double x_hi;
  double t_final;

  double U(double x, double t) const;
  double V(double x, double t) const;    ///< U_t
  double U_x(double x, double t) const;
  double V_t(double x, double t) const;  ///< U_tt
};

Wave1DSolution dirichlet_1d_case();
/// Same solution, split at x = 0 into two blocks with periodic outer ends.
Wave1DSolution interface_1d_case();

/// U = sin(2x) sin(2y) cos(2 sqrt(2) t + 3) on the unit square with
/// a = b = 0.5 (tanh(k (R - 0.25)) + 3), R = (x - 0.5)^2 + (y - 0.5)^2.
struct Variable2DSolution {
  double k;
  double t_final = 1.0;

  double U(double x, double y, double t) const;
  double V(double x, double y, double t) const;
  double U_tt(double x, double y, double t) const;
  double U_x(double x, double y, double t) const;
  double U_y(double x, double y, double t) const;
  double a(double x, double y) const;
  double a_x(double x, double y) const;
  double a_y(double x, double y) const;
  /// F = U_tt - (a U_x)_x - (a U_y)_y
  double forcing(double x, double y, double t) const;
};

Variable2DSolution variable_2d_case(double k);

}  // namespace sbpwave
