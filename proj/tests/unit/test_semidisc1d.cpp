#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "sbpwave/manufactured.hpp"
#include "sbpwave/semidisc1d.hpp"
#include "sbpwave/timestepper.hpp"

using namespace sbpwave;

namespace {

Vec random_state(size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  Vec s(n);
  for (auto& x : s) x = U(rng);
  return s;
}

double rate_scale(const Semi1D& semi, std::span<const double> s) {
  const Vec ds = semi.rhs(0.0, s);
  double scale = 0.0;
  for (int b = 0; b < semi.num_blocks(); ++b) {
    const SbpOps& ops = semi.ops(b);
    const int n = ops.n();
    Vec au(n);
    ops.A.matvec(s.subspan(semi.u_offset(b), n), au);
    for (int i = 0; i < n; ++i)
      scale += std::abs(2 * au[i] * ds[semi.u_offset(b) + i]) +
               std::abs(2 * ops.H[i] * s[semi.v_offset(b) + i] * ds[semi.v_offset(b) + i]);
  }
  return scale;
}

SbpOps ops_on(int p, int n, double lo, double hi) { return build_constant_ops(p, Grid1D::uniform(n, lo, hi), 1.0); }

}  // namespace

TEST(Semi1D, ConstantsAreSteady) {
  const Semi1D semi = Semi1D::single(ops_on(2, 30, 0, 1), BoundarySpec::dirichlet({}, {}), BoundarySpec::neumann({}));
  Vec s(semi.state_size(), 0.0);
  for (int i = 0; i < 30; ++i) s[i] = 3.5;
  const Vec ds = semi.rhs(0.0, s);
  for (double x : ds) EXPECT_NEAR(x, 0.0, 1e-11);
  EXPECT_NEAR(semi.energy(s), 0.0, 1e-10);
  EXPECT_EQ(semi.energy(Vec(semi.state_size(), 0.0)), 0.0);
}

TEST(Semi1D, ZeroVelocityGivesZeroDisplacementRate) {
  const Semi1D semi =
      Semi1D::single(ops_on(3, 40, 0, 1), BoundarySpec::dirichlet({}, {}, -1.0), BoundarySpec::dirichlet({}, {}, -1.0));
  Vec s = random_state(semi.state_size(), 3);
  for (int i = 0; i < 40; ++i) s[semi.v_offset(0) + i] = 0.0;
  const Vec ds = semi.rhs(0.0, s);
  for (int i = 0; i < 40; ++i) EXPECT_NEAR(ds[i], 0.0, 1e-12);
}

TEST(Semi1D, RejectsBadSpecs) {
  EXPECT_THROW(Semi1D::single(ops_on(2, 30, 0, 1), BoundarySpec::dirichlet({}, {}, 0.5), BoundarySpec::neumann({})),
               std::invalid_argument);
  EXPECT_THROW(Semi1D::single(ops_on(2, 30, 0, 1), BoundarySpec::periodic(), BoundarySpec::neumann({})),
               std::invalid_argument);
  EXPECT_THROW(Semi1D::two_block(ops_on(2, 30, -1, 0), ops_on(2, 30, 0.1, 1), {}, BoundarySpec::periodic(),
                                 BoundarySpec::periodic()),
               std::invalid_argument);
  EXPECT_THROW(Semi1D::two_block(ops_on(2, 30, -1, 0), ops_on(2, 30, 0, 1), {0.5, 1.0}, BoundarySpec::periodic(),
                                 BoundarySpec::periodic()),
               std::invalid_argument);
}

TEST(Semi1D, EnergyRateDirichletNeumann) {
  for (int p = 1; p <= 3; ++p)
    for (double beta : {0.0, -1.0})
      for (double alpha : {0.0, -0.7}) {
        const Semi1D semi = Semi1D::single(ops_on(p, 40, 0, 1), BoundarySpec::dirichlet({}, {}, beta),
                                           BoundarySpec::neumann({}, alpha));
        const Vec s = random_state(semi.state_size(), 17 + p);
        const double rate = semi.energy_rate(0.0, s);
        const double expected = semi.dissipation_rate(s);
        const double v0 = s[semi.v_offset(0)];
        const double dnu = semi.ops(0).dn.dot(std::span<const double>(s).first(40));
        EXPECT_NEAR(expected, 2 * beta * v0 * v0 + 2 * alpha * dnu * dnu, 1e-12 * (1 + std::abs(expected)));
        EXPECT_NEAR(rate, expected, 1e-11 * rate_scale(semi, s)) << "p=" << p << " beta=" << beta << " alpha=" << alpha;
      }
}

TEST(Semi1D, EnergyRateMirroredPatterns) {
  // Neumann left / Dirichlet right and Dirichlet at both ends.
  const Semi1D a =
      Semi1D::single(ops_on(2, 36, 0, 2), BoundarySpec::neumann({}, -0.3), BoundarySpec::dirichlet({}, {}, -0.4));
  const Semi1D b =
      Semi1D::single(ops_on(2, 36, 0, 2), BoundarySpec::dirichlet({}, {}, -0.2), BoundarySpec::dirichlet({}, {}, -1.0));
  for (const Semi1D* semi : {&a, &b}) {
    const Vec s = random_state(semi->state_size(), 29);
    EXPECT_NEAR(semi->energy_rate(0.0, s), semi->dissipation_rate(s), 1e-11 * rate_scale(*semi, s));
  }
}

TEST(Semi1D, EnergyRateInterface) {
  for (double tau : {0.5, 0.0, 2.0})
    for (double gamma : {0.0, -1.0}) {
      const Semi1D semi = Semi1D::two_block(ops_on(2, 30, -1, 0), ops_on(3, 41, 0, 1), {tau, gamma},
                                            BoundarySpec::dirichlet({}, {}, -0.5), BoundarySpec::neumann({}, 0.0));
      const Vec s = random_state(semi.state_size(), 31);
      const double jump = s[semi.v_offset(0) + 29] - s[semi.v_offset(1)];
      const double expected = 2 * gamma * jump * jump + 2 * -0.5 * s[semi.v_offset(0)] * s[semi.v_offset(0)];
      EXPECT_NEAR(semi.dissipation_rate(s), expected, 1e-12);
      EXPECT_NEAR(semi.energy_rate(0.0, s), expected, 1e-11 * rate_scale(semi, s)) << "tau=" << tau;
    }
}

TEST(Semi1D, EnergyRatePeriodic) {
  const Semi1D two = Semi1D::two_block(ops_on(2, 30, -1, 0), ops_on(2, 30, 0, 1), {0.5, -0.3}, BoundarySpec::periodic(),
                                       BoundarySpec::periodic());
  const Semi1D one =
      Semi1D::single(ops_on(2, 30, 0, 1), BoundarySpec::periodic(), BoundarySpec::periodic(), {}, {0.5, -0.3});
  for (const Semi1D* semi : {&two, &one}) {
    const Vec s = random_state(semi->state_size(), 7);
    EXPECT_LT(semi->dissipation_rate(s), 0.0);
    EXPECT_NEAR(semi->energy_rate(0.0, s), semi->dissipation_rate(s), 1e-11 * rate_scale(*semi, s));
  }
}

TEST(Semi1D, MeanConstraint) {
  const Semi1D semi = Semi1D::two_block(ops_on(2, 30, -1, 0), ops_on(2, 30, 0, 1), {0.5, -1.0},
                                        BoundarySpec::periodic(), BoundarySpec::periodic());
  const Vec s = random_state(semi.state_size(), 77);
  double vnorm = 0.0;
  for (double x : s) vnorm += x * x;
  EXPECT_LE(semi.mean_constraint(0.0, s), 1e-10 * std::sqrt(vnorm));

  Semi1D weighted = semi;
  weighted.set_constraint(MeanConstraint::Weighted);
  EXPECT_LE(weighted.mean_constraint(0.0, s), 1e-10 * std::sqrt(vnorm));
  // Both choices differ only by a constant per block, invisible to the energy.
  EXPECT_NEAR(weighted.energy_rate(0.0, s), semi.energy_rate(0.0, s), 1e-10 * rate_scale(semi, s));
}

TEST(Semi1D, CompatibleLinearDataAtInterface) {
  const int n = 30;
  const Semi1D semi = Semi1D::two_block(ops_on(2, n, -1, 0), ops_on(2, n, 0, 1), {0.5, -1.0},
                                        BoundarySpec::neumann([](double) { return 1.0; }),
                                        BoundarySpec::neumann([](double) { return 1.0; }));
  Vec s(semi.state_size(), 0.0);
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < n; ++i) s[semi.u_offset(b) + i] = semi.ops(b).grid.node(i);
  const Vec ds = semi.rhs(0.0, s);
  for (double x : ds) EXPECT_NEAR(x, 0.0, 1e-11);
}

TEST(Semi1D, DirichletMismatchProducesFixedShape) {
  const int n = 40;
  const SbpOps ops = ops_on(2, n, 0, 1);
  const double delta = 0.37;
  const Semi1D semi =
      Semi1D::single(ops, BoundarySpec::dirichlet({}, [&](double) { return -delta; }), BoundarySpec::neumann({}));
  Vec s(semi.state_size(), 0.0);
  const Vec ds = semi.rhs(0.0, s);
  Vec d1(n, 0.0);
  ops.d1.axpy(ops.b1 * delta, d1);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Vec Ad = ops.A.to_dense();
  const Eigen::MatrixXd A = Eigen::Map<const RowMat>(Ad.data(), n, n);
  const Eigen::VectorXd ref =
      A.completeOrthogonalDecomposition().pseudoInverse() * Eigen::Map<const Eigen::VectorXd>(d1.data(), n);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(ds[i], ref[i], 1e-9 * ref.norm());
}

TEST(Semi1D, ConsistencyWithManufacturedSolution) {
  const Wave1DSolution sol = dirichlet_1d_case();
  double prev_int = 0.0, prev_bnd = 0.0;
  for (int n : {101, 201, 401}) {
    const Grid1D g = Grid1D::uniform(n, sol.x_lo, sol.x_hi);
    const double t = 0.3;
    const Semi1D semi = Semi1D::single(
        build_constant_ops(2, g, 1.0),
        BoundarySpec::dirichlet([&](double t) { return sol.U(g.x_lo, t); }, [&](double t) { return sol.V(g.x_lo, t); }),
        BoundarySpec::dirichlet([&](double t) { return sol.U(g.x_hi, t); },
                                [&](double t) { return sol.V(g.x_hi, t); }));
    Vec s(2 * n);
    for (int i = 0; i < n; ++i) {
      s[i] = sol.U(g.node(i), t);
      s[n + i] = sol.V(g.node(i), t);
    }
    const Vec ds = semi.rhs(t, s);
    double e_int = 0.0, e_bnd = 0.0, e_u = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = std::abs(ds[n + i] - sol.V_t(g.node(i), t));
      if (i < 8 || i >= n - 8)
        e_bnd = std::max(e_bnd, e);
      else
        e_int = std::max(e_int, e);
      e_u = std::max(e_u, std::abs(ds[i] - sol.V(g.node(i), t)));
    }
    EXPECT_LE(e_u, 1e-9);  // the SAT vanishes on exact boundary data
    if (prev_int > 0.0) {
      EXPECT_NEAR(std::log2(prev_int / e_int), 4.0, 0.2);
      EXPECT_GE(std::log2(prev_bnd / e_bnd), 1.8);
    }
    prev_int = e_int;
    prev_bnd = e_bnd;
  }
}

TEST(Semi1D, EnergyOfManufacturedSolution) {
  // E = int (U_t^2 + U_x^2) dx, exact integral on [-pi/2, pi/2]
  const Wave1DSolution sol = dirichlet_1d_case();
  double prev = 0.0;
  for (int n : {101, 201, 401}) {
    const Grid1D g = Grid1D::uniform(n, sol.x_lo, sol.x_hi);
    const Semi1D semi =
        Semi1D::single(build_constant_ops(2, g, 1.0), BoundarySpec::dirichlet({}, {}), BoundarySpec::dirichlet({}, {}));
    Vec s(2 * n);
    for (int i = 0; i < n; ++i) {
      s[i] = sol.U(g.node(i), 0.0);
      s[n + i] = sol.V(g.node(i), 0.0);
    }
    // int cos^2(10x+1) dx and int sin^2(10x+1) dx over an interval of length pi
    const double pi = std::numbers::pi;
    const double c2 = pi / 2 + (std::sin(2 * (10 * sol.x_hi + 1)) - std::sin(2 * (10 * sol.x_lo + 1))) / 40;
    const double s2 = pi - c2;
    const double exact = 100 * std::pow(std::sin(2.0), 2) * c2 + 100 * std::pow(std::cos(2.0), 2) * s2;
    const double err = std::abs(semi.energy(s) - exact);
    if (prev > 0.0) EXPECT_GE(std::log2(prev / err), 3.8) << "n=" << n;
    prev = err;
  }
}

TEST(Semi1D, ConservationAndDissipationOverTime) {
  // Low-wavenumber data compatible with the boundary conditions, so the RK4
  // energy error stays far below the tolerance.
  const int n = 81;
  const double pi = std::numbers::pi;
  auto run = [&](double beta, double gamma, bool interface) {
    Semi1D semi = interface ? Semi1D::two_block(ops_on(2, n, -1, 0), ops_on(2, n, 0, 1), {0.5, gamma},
                                                BoundarySpec::periodic(), BoundarySpec::periodic())
                            : Semi1D::single(ops_on(2, n, 0, 1), BoundarySpec::dirichlet({}, {}, beta),
                                             BoundarySpec::neumann({}, 0.0));
    Vec s(semi.state_size(), 0.0);
    for (int b = 0; b < semi.num_blocks(); ++b)
      for (int i = 0; i < n; ++i) {
        const double x = semi.ops(b).grid.node(i);
        s[semi.u_offset(b) + i] = interface ? std::cos(pi * x) + 0.5 * std::sin(2 * pi * x) : std::sin(pi * x / 2);
        s[semi.v_offset(b) + i] = interface ? 0.3 * std::sin(pi * x) : 0.3 * std::sin(3 * pi * x / 2);
      }
    std::vector<double> E;
    integrate([&](double t, std::span<const double> x, std::span<double> d) { semi.rhs(t, x, d); }, s, 0.0, 2.0,
              0.1 / (n - 1), [&](int, double, std::span<const double> x) { E.push_back(semi.energy(x)); });
    return E;
  };
  const auto cons = run(0.0, 0.0, false);
  EXPECT_LE(std::abs(cons.back() - cons.front()), 1e-10 * cons.front());
  const auto cons2 = run(0.0, 0.0, true);
  EXPECT_LE(std::abs(cons2.back() - cons2.front()), 1e-10 * cons2.front());
  for (const auto& E : {run(-1.0, 0.0, false), run(0.0, -1.0, true)}) {
    for (size_t k = 1; k < E.size(); ++k) EXPECT_LE(E[k] - E[k - 1], 1e-11 * E[0]);  // roundoff in u^T A u
    EXPECT_LT(E.back(), E.front());
  }
}
