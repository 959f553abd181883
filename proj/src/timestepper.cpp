#include "sbpwave/timestepper.hpp"

#include <cmath>
#include <stdexcept>

namespace sbpwave {

StepPolicy StepPolicy::cfl(double C) {
  if (!(C > 0.0)) throw std::invalid_argument("Courant number must be positive");
  return StepPolicy{Mode::Cfl, C, 1.0};
}

StepPolicy StepPolicy::rate_matched(double C, double q) {
  if (!(C > 0.0)) throw std::invalid_argument("step constant must be positive");
  if (q < 1.0) throw std::invalid_argument("rate-matched exponent must be >= 1");
  return StepPolicy{Mode::RateMatched, C, q};
}

double StepPolicy::dt(double h_min, double c_max) const {
  if (!(h_min > 0.0) || !(c_max > 0.0)) throw std::invalid_argument("StepPolicy: h and c must be positive");
  return mode == Mode::Cfl ? C * h_min / c_max : C * std::pow(h_min, q);
}

void Rk4::step(const RhsFn& rhs, double t, double dt, Vec& s) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4: dt must be positive");
  const size_t n = s.size();
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  tmp_.resize(n);
  rhs(t, s, k1_);
  for (size_t i = 0; i < n; ++i) tmp_[i] = s[i] + 0.5 * dt * k1_[i];
  rhs(t + 0.5 * dt, tmp_, k2_);
  for (size_t i = 0; i < n; ++i) tmp_[i] = s[i] + 0.5 * dt * k2_[i];
  rhs(t + 0.5 * dt, tmp_, k3_);
  for (size_t i = 0; i < n; ++i) tmp_[i] = s[i] + dt * k3_[i];
  rhs(t + dt, tmp_, k4_);
  for (size_t i = 0; i < n; ++i) s[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
}

Vec rk4_step(const RhsFn& rhs, std::span<const double> s, double t, double dt) {
  Vec out(s.begin(), s.end());
  Rk4 rk;
  rk.step(rhs, t, dt, out);
  return out;
}

IntegrateResult integrate(const RhsFn& rhs, Vec& s, double t0, double t_final, double dt, const Observer& observer) {
  if (!(t_final > t0)) throw std::invalid_argument("integrate: t_final must exceed t0");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  const double span = t_final - t0;
  // guard against a spurious extra step when span/dt is an integer up to roundoff
  int steps = static_cast<int>(std::ceil(span / dt - 1e-10));
  if (steps < 1) steps = 1;
  Rk4 rk;
  if (observer) observer(0, t0, s);
  double t = t0;
  for (int k = 0; k < steps; ++k) {
    const double step = (k == steps - 1) ? t_final - t : dt;
    rk.step(rhs, t, step, s);
    t = (k == steps - 1) ? t_final : t0 + (k + 1) * dt;
    if (observer) observer(k + 1, t, s);
  }
  return IntegrateResult{steps, t};
}

}  // namespace sbpwave
