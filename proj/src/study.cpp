#include "sbpwave/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sbpwave/manufactured.hpp"
#include "sbpwave/semidisc2d.hpp"

namespace sbpwave {

double l2_error(std::span<const double> a, std::span<const double> b, double h, int d) {
  if (a.size() != b.size()) throw std::invalid_argument("l2_error: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(std::pow(h, d) * s);
}

std::vector<std::optional<double>> rates(std::span<const double> errors) {
  std::vector<std::optional<double>> r(errors.size());
  for (size_t j = 1; j < errors.size(); ++j) r[j] = std::log2(errors[j - 1] / errors[j]);
  return r;
}

Vec ConvergenceReport::errors() const {
  Vec e;
  for (const auto& r : rows) e.push_back(r.l2_error);
  return e;
}

void ConvergenceReport::compute_rates() {
  const Vec e = errors();
  const auto r = rates(e);
  for (size_t j = 0; j < rows.size(); ++j) rows[j].rate = r[j];
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string format_report(const ConvergenceReport& report) {
  std::ostringstream os;
  os << "# case: " << report.case_id << "\n";
  for (const auto& [k, v] : report.metadata) os << "# " << k << ": " << v << "\n";
  for (size_t j = 0; j < report.mean_iterations.size() && j < report.rows.size(); ++j)
    os << "# mean_pcg_iterations n=" << report.rows[j].n << ": " << num(report.mean_iterations[j]) << "\n";
  os << "n,l2_error,rate\n";
  for (const auto& r : report.rows) {
    os << r.n << "," << sci(r.l2_error) << ",";
    if (r.rate) os << sci(*r.rate);
    os << "\n";
  }
  return os.str();
}

void emit_report(const ConvergenceReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << format_report(report);
}

void write_energy_trace(const std::vector<std::pair<double, double>>& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "t,E_H\n";
  char buf[64];
  for (const auto& [t, e] : trace) {
    std::snprintf(buf, sizeof buf, "%.10e,%.15e\n", t, e);
    f << buf;
  }
}

int order_to_p(int order) {
  if (order != 2 && order != 4 && order != 6) throw std::invalid_argument("order must be 2, 4 or 6");
  return order / 2;
}

StepPolicy default_policy_1d(int order) {
  return order >= 6 ? StepPolicy::rate_matched(0.2, 1.5) : StepPolicy::cfl(0.2);
}

double default_pcg_tol(int order) { return std::pow(10.0, -(order + 4)); }
double default_ichol_boost(int order) { return order >= 6 ? 1e-4 : 0.01; }
double default_ichol_drop(int order) { return order >= 6 ? 1e-6 : 1e-4; }

namespace {

std::string policy_name(const StepPolicy& p) {
  if (p.mode == StepPolicy::Mode::Cfl) return "cfl C=" + num(p.C);
  return "rate-matched C=" + num(p.C) + " q=" + num(p.q);
}

std::string constraint_name(MeanConstraint c) { return c == MeanConstraint::Sum ? "sum" : "weighted"; }

void check_levels(const std::vector<int>& levels) {
  if (levels.empty()) throw std::invalid_argument("no grid levels");
}

// Integrates and records the energy if a trace is requested.
void run(const RhsFn& rhs, Vec& s, double tf, double dt, const std::function<double(std::span<const double>)>& energy,
         std::vector<std::pair<double, double>>* trace) {
  Observer obs;
  if (trace) {
    trace->clear();
    obs = [&](int, double t, std::span<const double> st) { trace->emplace_back(t, energy(st)); };
  }
  integrate(rhs, s, 0.0, tf, dt, obs);
}

}  // namespace

ConvergenceReport run_case_1d_dirichlet(const Study1DOptions& opt) {
  check_levels(opt.levels);
  const int p = order_to_p(opt.order);
  const Wave1DSolution sol = dirichlet_1d_case();
  const double tf = opt.t_final.value_or(sol.t_final);
  const StepPolicy policy = opt.policy.value_or(default_policy_1d(opt.order));

  ConvergenceReport rep;
  rep.case_id = "dirichlet_1d";
  rep.add_meta("order", std::to_string(opt.order));
  rep.add_meta("beta", num(opt.beta));
  const MeanConstraint constraint = opt.constraint.value_or(MeanConstraint::Sum);
  rep.add_meta("constraint", constraint_name(constraint));
  rep.add_meta("t_final", num(tf));
  rep.add_meta("dt_policy", policy_name(policy));

  for (size_t li = 0; li < opt.levels.size(); ++li) {
    const int n = opt.levels[li];
    const Grid1D g = Grid1D::uniform(n, sol.x_lo, sol.x_hi);
    const double xl = sol.x_lo, xr = sol.x_hi;
    auto left = BoundarySpec::dirichlet([&](double t) { return sol.U(xl, t); }, [&](double t) { return sol.V(xl, t); },
                                        opt.beta);
    auto right = BoundarySpec::dirichlet([&](double t) { return sol.U(xr, t); },
                                         [&](double t) { return sol.V(xr, t); }, opt.beta);
    Semi1D semi = Semi1D::single(build_constant_ops(p, g, 1.0), left, right);
    semi.set_constraint(constraint);

    Vec s(semi.state_size());
    for (int i = 0; i < n; ++i) {
      s[semi.u_offset(0) + i] = sol.U(g.node(i), 0.0);
      s[semi.v_offset(0) + i] = sol.V(g.node(i), 0.0);
    }
    const bool last = li + 1 == opt.levels.size();
    run([&](double t, std::span<const double> x, std::span<double> dx) { semi.rhs(t, x, dx); }, s, tf,
        policy.dt(g.h(), 1.0), [&](std::span<const double> x) { return semi.energy(x); },
        last ? opt.energy_trace : nullptr);

    Vec exact(n);
    for (int i = 0; i < n; ++i) exact[i] = sol.U(g.node(i), tf);
    rep.rows.push_back({n, l2_error(std::span<const double>(s).subspan(semi.u_offset(0), n), exact, g.h(), 1), {}});
  }
  rep.compute_rates();
  return rep;
}

ConvergenceReport run_case_1d_interface(const Study1DOptions& opt) {
  check_levels(opt.levels);
  const int p = order_to_p(opt.order);
  const Wave1DSolution sol = interface_1d_case();
  const double tf = opt.t_final.value_or(sol.t_final);
  const StepPolicy policy = opt.policy.value_or(default_policy_1d(opt.order));

  ConvergenceReport rep;
  rep.case_id = "interface_1d";
  rep.add_meta("order", std::to_string(opt.order));
  rep.add_meta("gamma", num(opt.gamma));
  rep.add_meta("tau", num(opt.tau));
  const MeanConstraint constraint = opt.constraint.value_or(MeanConstraint::Weighted);
  rep.add_meta("constraint", constraint_name(constraint));
  rep.add_meta("points_per_block", "n");
  rep.add_meta("t_final", num(tf));
  rep.add_meta("dt_policy", policy_name(policy));

  const InterfaceSpec iface{opt.tau, opt.gamma};
  for (size_t li = 0; li < opt.levels.size(); ++li) {
    const int n = opt.levels[li];
    const Grid1D gl = Grid1D::uniform(n, sol.x_lo, 0.0);
    const Grid1D gr = Grid1D::uniform(n, 0.0, sol.x_hi);
    Semi1D semi = Semi1D::two_block(build_constant_ops(p, gl, 1.0), build_constant_ops(p, gr, 1.0), iface,
                                    BoundarySpec::periodic(), BoundarySpec::periodic());
    semi.set_constraint(constraint);
    Vec s(semi.state_size());
    const Grid1D* grids[2] = {&gl, &gr};
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < n; ++i) {
        s[semi.u_offset(b) + i] = sol.U(grids[b]->node(i), 0.0);
        s[semi.v_offset(b) + i] = sol.V(grids[b]->node(i), 0.0);
      }
    const bool last = li + 1 == opt.levels.size();
    run([&](double t, std::span<const double> x, std::span<double> dx) { semi.rhs(t, x, dx); }, s, tf,
        policy.dt(gl.h(), 1.0), [&](std::span<const double> x) { return semi.energy(x); },
        last ? opt.energy_trace : nullptr);

    Vec num_u, exact;
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < n; ++i) {
        num_u.push_back(s[semi.u_offset(b) + i]);
        exact.push_back(sol.U(grids[b]->node(i), tf));
      }
    rep.rows.push_back({n, l2_error(num_u, exact, gl.h(), 1), {}});
  }
  rep.compute_rates();
  return rep;
}

ConvergenceReport run_case_2d(const Study2DOptions& opt) {
  check_levels(opt.levels);
  const int p = order_to_p(opt.order);
  const Variable2DSolution sol = variable_2d_case(opt.k);
  const double tf = opt.t_final.value_or(sol.t_final);
  const StepPolicy policy = opt.policy.value_or(StepPolicy::cfl(0.2));
  PcgConfig cfg;
  cfg.rel_tol = opt.pcg_tol.value_or(default_pcg_tol(opt.order));
  cfg.ichol_boost = opt.ichol_boost.value_or(default_ichol_boost(opt.order));
  cfg.ichol_drop = opt.ichol_drop.value_or(default_ichol_drop(opt.order));

  ConvergenceReport rep;
  rep.case_id = "variable_2d";
  rep.add_meta("order", std::to_string(opt.order));
  rep.add_meta("k", num(opt.k));
  rep.add_meta("theta", num(opt.theta));
  rep.add_meta("t_final", num(tf));
  rep.add_meta("dt_policy", policy_name(policy));
  rep.add_meta("pcg_tol", num(cfg.rel_tol));
  rep.add_meta("ichol_boost", num(cfg.ichol_boost));
  rep.add_meta("ichol_drop", num(cfg.ichol_drop));

  for (size_t li = 0; li < opt.levels.size(); ++li) {
    const int n = opt.levels[li];
    const Grid2D grid{Grid1D::uniform(n, 0.0, 1.0), Grid1D::uniform(n, 0.0, 1.0)};
    auto coef = [&](double x, double y) { return sol.a(x, y); };
    const Coefficients2D c = Coefficients2D::sample(grid, coef, coef);
    Semi2D semi = Semi2D::assemble(
        grid, c, p, opt.theta, [&](double x, double y, double t) { return sol.V(x, y, t); },
        [&](double x, double y, double t) { return sol.forcing(x, y, t); });
    semi.prepare_pcg(cfg);

    const size_t N = grid.size();
    Vec s(2 * N);
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        const int k = grid.index(ix, iy);
        s[k] = sol.U(grid.x.node(ix), grid.y.node(iy), 0.0);
        s[N + k] = sol.V(grid.x.node(ix), grid.y.node(iy), 0.0);
      }
    const double c_max = std::sqrt(*std::max_element(c.a.begin(), c.a.end()));
    PcgStats stats;
    const bool last = li + 1 == opt.levels.size();
    run([&](double t, std::span<const double> x, std::span<double> dx) { semi.rhs_pcg(t, x, dx, &stats); }, s, tf,
        policy.dt(grid.x.h(), c_max), [&](std::span<const double> x) { return semi.energy(x); },
        last ? opt.energy_trace : nullptr);

    Vec exact(N);
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) exact[grid.index(ix, iy)] = sol.U(grid.x.node(ix), grid.y.node(iy), tf);
    rep.rows.push_back({n, l2_error(std::span<const double>(s).first(N), exact, grid.x.h(), 2), {}});
    rep.mean_iterations.push_back(stats.mean());
  }
  rep.compute_rates();
  return rep;
}

}  // namespace sbpwave
