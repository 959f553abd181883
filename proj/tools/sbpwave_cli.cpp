// Command line driver for the convergence studies and operator inspection.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sbpwave/sbp_ops.hpp"
#include "sbpwave/study.hpp"

using namespace sbpwave;

namespace {

struct Common {
  int order = 4;
  std::vector<int> levels;
  double tfinal = NAN;
  std::string dt_policy;
  double cfl = 0.2;
  std::string out;
  std::string energy_trace;
  std::string constraint;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--order", c.order, "Interior order")->check(CLI::IsMember({4, 6}));
  sub->add_option("--levels", c.levels, "Grid sizes, comma separated")->delimiter(',');
  sub->add_option("--tfinal", c.tfinal, "Final time");
  sub->add_option("--dt-policy", c.dt_policy, "Time step policy")->check(CLI::IsMember({"cfl", "rate-matched"}));
  sub->add_option("--cfl", c.cfl, "Courant constant C")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "CSV report path (stdout if omitted)");
  sub->add_option("--energy-trace", c.energy_trace, "CSV of t,E_H for the finest level");
}

std::optional<MeanConstraint> constraint_from(const Common& c) {
  if (c.constraint.empty()) return std::nullopt;
  return c.constraint == "sum" ? MeanConstraint::Sum : MeanConstraint::Weighted;
}

std::optional<StepPolicy> policy_from(const Common& c) {
  if (c.dt_policy.empty()) {
    StepPolicy p = default_policy_1d(c.order);
    if (p.C == c.cfl) return std::nullopt;
    p.C = c.cfl;
    return p;
  }
  if (c.dt_policy == "cfl") return StepPolicy::cfl(c.cfl);
  return StepPolicy::rate_matched(c.cfl, 1.5);
}

void finish(const ConvergenceReport& rep, const Common& c, const std::vector<std::pair<double, double>>& trace) {
  if (c.out.empty())
    std::cout << format_report(rep);
  else
    emit_report(rep, c.out);
  if (!c.energy_trace.empty()) write_energy_trace(trace, c.energy_trace);
}

void print_vec(std::ostream& os, const char* name, const Vec& v) {
  os << name;
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, " %.17g", x + 0.0);  // no negative zeros
    os << buf;
  }
  os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SBP-SAT wave equation solver"};
  app.require_subcommand(1);

  Common c1, c2, c3;
  double beta = 0.0, gamma = 0.0, tau = 0.5;
  auto* dir = app.add_subcommand("dirichlet1d", "1D Dirichlet convergence study");
  add_common(dir, c1);
  dir->add_option("--beta", beta, "Boundary dissipation (<= 0)");

  auto* itf = app.add_subcommand("interface1d", "1D two-block interface convergence study");
  add_common(itf, c2);
  itf->add_option("--gamma", gamma, "Interface dissipation (<= 0)");
  itf->add_option("--tau", tau, "Interface weight");
  for (auto [sub, c] : {std::pair{dir, &c1}, std::pair{itf, &c2}})
    sub->add_option("--constraint", c->constraint, "Zero-mean condition on u_t - v")
        ->check(CLI::IsMember({"sum", "weighted"}));

  double theta = -1.0, k = 5.0;
  double pcg_tol = NAN, boost = NAN, drop = NAN;
  auto* w2 = app.add_subcommand("wave2d", "2D variable coefficient study with PCG statistics");
  add_common(w2, c3);
  w2->add_option("--theta", theta, "Boundary dissipation (<= 0)");
  w2->add_option("--k", k, "Material transition sharpness");
  w2->add_option("--pcg-tol", pcg_tol, "PCG relative residual tolerance");
  w2->add_option("--ichol-boost", boost, "Diagonal boost of the incomplete factorization");
  w2->add_option("--ichol-drop", drop, "Drop tolerance of the incomplete factorization");

  int dump_order = 4, dump_n = 12;
  std::string dump_out;
  auto* dump = app.add_subcommand("dump-operator", "Print H, d1, A and D of the constant coefficient operator");
  dump->add_option("--order", dump_order, "Interior order")->check(CLI::IsMember({2, 4, 6}));
  dump->add_option("--n", dump_n, "Number of grid points");
  dump->add_option("--out", dump_out, "Output path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify-ops", "Check the SBP property and nullspace of all shipped operators");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::pair<double, double>> trace;
    if (*dir) {
      Study1DOptions o;
      o.order = c1.order;
      o.beta = beta;
      if (!c1.levels.empty()) o.levels = c1.levels;
      if (!std::isnan(c1.tfinal)) o.t_final = c1.tfinal;
      o.policy = policy_from(c1);
      o.constraint = constraint_from(c1);
      if (!c1.energy_trace.empty()) o.energy_trace = &trace;
      finish(run_case_1d_dirichlet(o), c1, trace);
    } else if (*itf) {
      Study1DOptions o;
      o.order = c2.order;
      o.gamma = gamma;
      o.tau = tau;
      if (!c2.levels.empty()) o.levels = c2.levels;
      if (!std::isnan(c2.tfinal)) o.t_final = c2.tfinal;
      o.policy = policy_from(c2);
      o.constraint = constraint_from(c2);
      if (!c2.energy_trace.empty()) o.energy_trace = &trace;
      finish(run_case_1d_interface(o), c2, trace);
    } else if (*w2) {
      Study2DOptions o;
      o.order = c3.order;
      o.k = k;
      o.theta = theta;
      if (!c3.levels.empty()) o.levels = c3.levels;
      if (!std::isnan(c3.tfinal)) o.t_final = c3.tfinal;
      if (c3.dt_policy == "rate-matched")
        o.policy = StepPolicy::rate_matched(c3.cfl, 1.5);
      else
        o.policy = StepPolicy::cfl(c3.cfl);
      if (!std::isnan(pcg_tol)) o.pcg_tol = pcg_tol;
      if (!std::isnan(boost)) o.ichol_boost = boost;
      if (!std::isnan(drop)) o.ichol_drop = drop;
      if (!c3.energy_trace.empty()) o.energy_trace = &trace;
      finish(run_case_2d(o), c3, trace);
    } else if (*dump) {
      const SbpOps ops = build_constant_ops(order_to_p(dump_order), Grid1D::uniform(dump_n, 0.0, 1.0), 1.0);
      std::ostringstream os;
      os << "# order " << dump_order << " n " << dump_n << " on [0,1], b = 1\n";
      print_vec(os, "H", ops.H);
      os << "d1_offset " << ops.d1.offset << "\n";
      print_vec(os, "d1", ops.d1.coeffs);
      os << "dn_offset " << ops.dn.offset << "\n";
      print_vec(os, "dn", ops.dn.coeffs);
      const Vec A = ops.A.to_dense(), D = ops.D.to_dense();
      for (int i = 0; i < dump_n; ++i) print_vec(os, "A", Vec(A.begin() + i * dump_n, A.begin() + (i + 1) * dump_n));
      for (int i = 0; i < dump_n; ++i) print_vec(os, "D", Vec(D.begin() + i * dump_n, D.begin() + (i + 1) * dump_n));
      if (dump_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(dump_out);
        f << os.str();
      }
    } else if (*verify) {
      bool ok = true;
      for (int p = 1; p <= 3; ++p) {
        const int n = 4 * min_points(p);
        const Grid1D g = Grid1D::uniform(n, 0.0, 1.0);
        Vec b(n);
        for (int i = 0; i < n; ++i) b[i] = 2.0 + std::sin(3.0 * g.node(i));
        const SbpOps ops[2] = {build_constant_ops(p, g, 1.0), build_variable_ops(p, g, CoefficientProfile::sampled(b))};
        const char* names[2] = {"constant", "variable"};
        for (int v = 0; v < 2; ++v) {
          const double res = sbp_residual(ops[v]);
          const RankReport r = nullspace_rank_check(ops[v]);
          double q = 0.0;
          for (double h : ops[v].H) q += h;
          const bool pass = res <= 1e-13 && r.near_zero_count == 1 && r.smallest_eig > -1e-12 * r.a_norm &&
                            std::abs(q - 1.0) <= 1e-13;
          ok = ok && pass;
          std::printf("order %d %-8s n=%d sbp_residual=%.3e zero_eigs=%d lambda_2=%.3e quadrature=%.3e %s\n", 2 * p,
                      names[v], n, res, r.near_zero_count, r.second_smallest_eig, std::abs(q - 1.0),
                      pass ? "PASS" : "FAIL");
        }
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
