#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sbpwave/linalg.hpp"
#include "sbpwave/manufactured.hpp"
#include "sbpwave/sbp_ops.hpp"
#include "sbpwave/semidisc1d.hpp"
#include "sbpwave/semidisc2d.hpp"
#include "sbpwave/study.hpp"
#include "sbpwave/timestepper.hpp"

namespace py = pybind11;
using namespace sbpwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Vec& v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Array to_matrix(const Vec& v, int rows, int cols) {
  Array a({rows, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Vec to_vec(const Array& a) { return Vec(a.data(), a.data() + a.size()); }

Array stencil_row(const Stencil& s, int n) {
  Vec row(n, 0.0);
  for (size_t k = 0; k < s.coeffs.size(); ++k) row[s.offset + k] = s.coeffs[k];
  return to_array(row);
}

// b may be None (b = 1), a float, or samples on the grid.
SbpOps make_ops(int p, int n, double x_lo, double x_hi, const py::object& b) {
  const Grid1D g = Grid1D::uniform(n, x_lo, x_hi);
  if (b.is_none()) return build_constant_ops(p, g, 1.0);
  if (py::isinstance<py::float_>(b) || py::isinstance<py::int_>(b)) return build_constant_ops(p, g, b.cast<double>());
  Vec samples = to_vec(b.cast<Array>());
  if (static_cast<int>(samples.size()) != n) throw std::invalid_argument("b must have n samples");
  return build_variable_ops(p, g, CoefficientProfile::sampled(std::move(samples)));
}

Array rhs_of(const RhsFn& f, double t, const Array& s) {
  Vec in = to_vec(s), out(in.size());
  f(t, in, out);
  return to_array(out);
}

Array integrate_with(const RhsFn& f, const Array& s, double t0, double t1, double dt) {
  Vec state = to_vec(s);
  integrate(f, state, t0, t1, dt);
  return to_array(state);
}

py::dict report_dict(const ConvergenceReport& r) {
  py::dict d;
  py::list n, err, rate;
  for (const auto& row : r.rows) {
    n.append(row.n);
    err.append(row.l2_error);
    rate.append(row.rate ? py::cast(*row.rate) : py::none());
  }
  d["case"] = r.case_id;
  d["n"] = n;
  d["l2_error"] = err;
  d["rate"] = rate;
  d["mean_pcg_iterations"] = r.mean_iterations;
  d["csv"] = format_report(r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SBP-SAT wave equation solvers";

  py::register_exception<AssumptionViolation>(m, "AssumptionViolation", PyExc_ValueError);

  py::class_<SbpOps>(m, "Operators")
      .def(py::init(&make_ops), py::arg("p"), py::arg("n"), py::arg("x_lo") = 0.0, py::arg("x_hi") = 1.0,
           py::arg("b") = py::none())
      .def_readonly("p", &SbpOps::p)
      .def_property_readonly("n", &SbpOps::n)
      .def_property_readonly("h", [](const SbpOps& o) { return o.grid.h(); })
      .def_property_readonly("x", [](const SbpOps& o) { return to_array(o.grid.nodes()); })
      .def_property_readonly("H", [](const SbpOps& o) { return to_array(o.H); })
      .def_property_readonly("A", [](const SbpOps& o) { return to_matrix(o.A.to_dense(), o.n(), o.n()); })
      .def_property_readonly("D", [](const SbpOps& o) { return to_matrix(o.D.to_dense(), o.n(), o.n()); })
      .def_property_readonly("d1", [](const SbpOps& o) { return stencil_row(o.d1, o.n()); })
      .def_property_readonly("dn", [](const SbpOps& o) { return stencil_row(o.dn, o.n()); })
      .def_readonly("b1", &SbpOps::b1)
      .def_readonly("bn", &SbpOps::bn)
      .def("apply_D", [](const SbpOps& o, const Array& u) { return to_array(o.apply_D(to_vec(u))); })
      .def("residual", &sbp_residual);

  m.def("min_points", &min_points);
  m.def("interior_characteristic_roots", &interior_characteristic_roots, py::arg("p") = 2);

  m.def(
      "solve_augmented",
      [](const Array& A, const Array& r) {
        if (A.ndim() != 2 || A.shape(0) != A.shape(1)) throw std::invalid_argument("A must be square");
        const int n = static_cast<int>(A.shape(0));
        int bw = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (A.at(i, j) != 0.0) bw = std::max(bw, std::abs(i - j));
        SymBand S(n, bw);
        for (int i = 0; i < n; ++i)
          for (int j = std::max(0, i - bw); j <= i; ++j) S.set(i, j, A.at(i, j));
        const AugmentedSolution s = solve_augmented(factor_augmented(S), to_vec(r));
        return py::make_tuple(to_array(s.w), s.multiplier);
      },
      py::arg("A"), py::arg("rhs"), "Solve the bordered system [[A, 1], [1^T, 0]] [w; m] = [rhs; 0].");

  py::class_<BoundarySpec>(m, "Boundary")
      .def_static(
          "dirichlet", [](double beta) { return BoundarySpec::dirichlet({}, {}, beta); }, py::arg("beta") = 0.0)
      .def_static(
          "neumann", [](double alpha) { return BoundarySpec::neumann({}, alpha); }, py::arg("alpha") = 0.0)
      .def_static("periodic", &BoundarySpec::periodic);

  py::enum_<MeanConstraint>(m, "MeanConstraint")
      .value("SUM", MeanConstraint::Sum)
      .value("WEIGHTED", MeanConstraint::Weighted);

  py::class_<Semi1D>(m, "Semi1D")
      .def_static(
          "single",
          [](const SbpOps& ops, const BoundarySpec& l, const BoundarySpec& r, double tau, double gamma) {
            return Semi1D::single(ops, l, r, {}, InterfaceSpec{tau, gamma});
          },
          py::arg("ops"), py::arg("left"), py::arg("right"), py::arg("tau") = 0.5, py::arg("gamma") = 0.0)
      .def_static(
          "two_block",
          [](const SbpOps& a, const SbpOps& b, double tau, double gamma, const BoundarySpec& l,
             const BoundarySpec& r) { return Semi1D::two_block(a, b, InterfaceSpec{tau, gamma}, l, r); },
          py::arg("left_ops"), py::arg("right_ops"), py::arg("tau") = 0.5, py::arg("gamma") = 0.0,
          py::arg("outer_left") = BoundarySpec::periodic(), py::arg("outer_right") = BoundarySpec::periodic())
      .def_property("constraint", &Semi1D::constraint, &Semi1D::set_constraint)
      .def_property_readonly("state_size", &Semi1D::state_size)
      .def_property_readonly("num_blocks", &Semi1D::num_blocks)
      .def("u_offset", &Semi1D::u_offset)
      .def("v_offset", &Semi1D::v_offset)
      .def("rhs",
           [](const Semi1D& s, double t, const Array& x) {
             return rhs_of([&](double tt, std::span<const double> a, std::span<double> b) { s.rhs(tt, a, b); }, t, x);
           })
      .def("energy", [](const Semi1D& s, const Array& x) { return s.energy(to_vec(x)); })
      .def("energy_rate", [](const Semi1D& s, double t, const Array& x) { return s.energy_rate(t, to_vec(x)); })
      .def("dissipation_rate", [](const Semi1D& s, const Array& x) { return s.dissipation_rate(to_vec(x)); })
      .def("integrate",
           [](const Semi1D& s, const Array& x, double t0, double t1, double dt) {
             return integrate_with([&](double t, std::span<const double> a, std::span<double> b) { s.rhs(t, a, b); },
                                   x, t0, t1, dt);
           });

  py::class_<Semi2D>(m, "Semi2D")
      .def(py::init([](int p, const Array& a, const Array& b, double theta) {
             if (a.ndim() != 2 || b.ndim() != 2 || a.shape(0) != b.shape(0) || a.shape(1) != b.shape(1))
               throw std::invalid_argument("a and b must be 2D arrays of the same shape");
             const int nx = static_cast<int>(a.shape(0)), ny = static_cast<int>(a.shape(1));
             const Grid2D g{Grid1D::uniform(nx, 0, 1), Grid1D::uniform(ny, 0, 1)};
             Coefficients2D c{to_vec(a), to_vec(b)};
             Semi2D s = Semi2D::assemble(g, c, p, theta);
             return s;
           }),
           py::arg("p"), py::arg("a"), py::arg("b"), py::arg("theta") = -1.0,
           "Unit square, coefficients sampled x-major with shape (nx, ny), homogeneous data.")
      .def_property_readonly("state_size", &Semi2D::state_size)
      .def_property_readonly("H", [](const Semi2D& s) { return to_array(s.H()); })
      .def("prepare_direct", &Semi2D::prepare_direct)
      .def(
          "prepare_pcg",
          [](Semi2D& s, double tol, double boost, double drop) { s.prepare_pcg({tol, 1000, boost, drop}); },
          py::arg("rel_tol") = 1e-8, py::arg("ichol_boost") = 0.01, py::arg("ichol_drop") = 1e-4)
      .def("rhs_direct",
           [](const Semi2D& s, double t, const Array& x) {
             return rhs_of([&](double tt, std::span<const double> a, std::span<double> b) { s.rhs_direct(tt, a, b); },
                           t, x);
           })
      .def("rhs_pcg",
           [](const Semi2D& s, double t, const Array& x) {
             PcgStats st;
             Array out = rhs_of(
                 [&](double tt, std::span<const double> a, std::span<double> b) { s.rhs_pcg(tt, a, b, &st); }, t, x);
             return py::make_tuple(out, st.iterations);
           })
      .def("energy", [](const Semi2D& s, const Array& x) { return s.energy(to_vec(x)); });

  py::class_<FastDiag>(m, "FastDiag")
      .def(py::init([](const Semi2D& s) { return FastDiag::build(s); }))
      .def("to_diag", [](const FastDiag& f, const Array& x) { return to_array(f.to_diag(to_vec(x))); })
      .def("from_diag", [](const FastDiag& f, const Array& x) { return to_array(f.from_diag(to_vec(x))); })
      .def("rhs",
           [](const FastDiag& f, double t, const Array& x) {
             return rhs_of([&](double tt, std::span<const double> a, std::span<double> b) { f.rhs(tt, a, b); }, t, x);
           })
      .def("energy", [](const FastDiag& f, const Array& x) { return f.energy(to_vec(x)); })
      .def("eigenvalues", [](const FastDiag& f) {
        Vec l(static_cast<size_t>(f.nx()) * f.ny());
        for (int i = 0; i < f.nx(); ++i)
          for (int j = 0; j < f.ny(); ++j) l[static_cast<size_t>(i) * f.ny() + j] = f.lambda(i, j);
        return to_array(l);
      });

  m.def(
      "dirichlet1d",
      [](int order, double beta, std::vector<int> levels) {
        Study1DOptions o;
        o.order = order;
        o.beta = beta;
        if (!levels.empty()) o.levels = std::move(levels);
        return report_dict(run_case_1d_dirichlet(o));
      },
      py::arg("order") = 4, py::arg("beta") = 0.0, py::arg("levels") = std::vector<int>{});
  m.def(
      "interface1d",
      [](int order, double gamma, double tau, std::vector<int> levels) {
        Study1DOptions o;
        o.order = order;
        o.gamma = gamma;
        o.tau = tau;
        o.levels = levels.empty() ? std::vector<int>{51, 101, 201, 401, 801} : std::move(levels);
        return report_dict(run_case_1d_interface(o));
      },
      py::arg("order") = 4, py::arg("gamma") = 0.0, py::arg("tau") = 0.5, py::arg("levels") = std::vector<int>{});
  m.def(
      "wave2d",
      [](int order, double k, double theta, std::vector<int> levels, std::optional<double> t_final) {
        Study2DOptions o;
        o.order = order;
        o.k = k;
        o.theta = theta;
        if (!levels.empty()) o.levels = std::move(levels);
        o.t_final = t_final;
        return report_dict(run_case_2d(o));
      },
      py::arg("order") = 4, py::arg("k") = 5.0, py::arg("theta") = -1.0, py::arg("levels") = std::vector<int>{},
      py::arg("t_final") = py::none());
}
