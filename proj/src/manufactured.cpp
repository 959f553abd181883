#include "sbpwave/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace sbpwave {

namespace {
constexpr double kPi = std::numbers::pi;
const double kOmega2 = 2.0 * std::sqrt(2.0);
}  // namespace

double Wave1DSolution::U(double x, double t) const { return std::cos(10 * x + 1) * std::cos(10 * t + 2); }
double Wave1DSolution::V(double x, double t) const { return -10 * std::cos(10 * x + 1) * std::sin(10 * t + 2); }
double Wave1DSolution::U_x(double x, double t) const { return -10 * std::sin(10 * x + 1) * std::cos(10 * t + 2); }
double Wave1DSolution::V_t(double x, double t) const { return -100 * U(x, t); }

Wave1DSolution dirichlet_1d_case() { return {-kPi / 2, kPi / 2, 2.0}; }
Wave1DSolution interface_1d_case() { return {-kPi / 2, kPi / 2, 2.0}; }

double Variable2DSolution::U(double x, double y, double t) const {
  return std::sin(2 * x) * std::sin(2 * y) * std::cos(kOmega2 * t + 3);
}
double Variable2DSolution::V(double x, double y, double t) const {
  return -kOmega2 * std::sin(2 * x) * std::sin(2 * y) * std::sin(kOmega2 * t + 3);
}
double Variable2DSolution::U_tt(double x, double y, double t) const { return -8.0 * U(x, y, t); }
double Variable2DSolution::U_x(double x, double y, double t) const {
  return 2 * std::cos(2 * x) * std::sin(2 * y) * std::cos(kOmega2 * t + 3);
}
double Variable2DSolution::U_y(double x, double y, double t) const {
  return 2 * std::sin(2 * x) * std::cos(2 * y) * std::cos(kOmega2 * t + 3);
}

double Variable2DSolution::a(double x, double y) const {
  const double R = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
  return 0.5 * (std::tanh(k * (R - 0.25)) + 3.0);
}

double Variable2DSolution::a_x(double x, double y) const {
  const double R = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
  const double c = std::cosh(k * (R - 0.25));
  return 0.5 * k / (c * c) * 2.0 * (x - 0.5);
}

double Variable2DSolution::a_y(double x, double y) const { return a_x(y, x); }

double Variable2DSolution::forcing(double x, double y, double t) const {
  // U_xx = U_yy = -4 U
  const double u = U(x, y, t);
  const double c = a(x, y);
  return U_tt(x, y, t) + 8.0 * c * u - a_x(x, y) * U_x(x, y, t) - a_y(x, y) * U_y(x, y, t);
}

Variable2DSolution variable_2d_case(double k) { return {k, 1.0}; }

}  // namespace sbpwave
