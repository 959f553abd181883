#pragma once

/// @file timestepper.hpp
/// Classical fourth-order Runge-Kutta integration.

#include <functional>
#include <span>
#include <vector>

namespace sbpwave {

using Vec = std::vector<double>;
using RhsFn = std::function<void(double t, std::span<const double> s, std::span<double> ds)>;
using Observer = std::function<void(int step, double t, std::span<const double> s)>;

/// dt = C h_min / c_max (cfl) or dt = C h_min^q (rate matched).
struct StepPolicy {
  enum class Mode { Cfl, RateMatched };
  Mode mode = Mode::Cfl;
  double C = 0.2;
  double q = 1.0;

  static StepPolicy cfl(double C);
  static StepPolicy rate_matched(double C, double q);
  double dt(double h_min, double c_max) const;
};

/// One RK4 step in place. Exactly four rhs evaluations.
class Rk4 {
 public:
  void step(const RhsFn& rhs, double t, double dt, Vec& s);

 private:
  Vec k1_, k2_, k3_, k4_, tmp_;
};

Vec rk4_step(const RhsFn& rhs, std::span<const double> s, double t, double dt);

struct IntegrateResult {
  int steps = 0;
  double t = 0.0;
};

/// Advances s from t0 to t_final with ceil((t_final - t0) / dt) steps, the last
/// one shortened to land on t_final. The observer sees step 0 and every step after.
IntegrateResult integrate(const RhsFn& rhs, Vec& s, double t0, double t_final, double dt,
                          const Observer& observer = {});

}  // namespace sbpwave
