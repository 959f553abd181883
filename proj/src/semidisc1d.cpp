#include "sbpwave/semidisc1d.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbpwave {

BoundarySpec BoundarySpec::dirichlet(TimeFn f, TimeFn f_t, double beta) {
  BoundarySpec b;
  b.kind = BcKind::Dirichlet;
  b.f = std::move(f);
  b.f_t = std::move(f_t);
  b.dissipation = beta;
  return b;
}

BoundarySpec BoundarySpec::neumann(TimeFn g, double alpha) {
  BoundarySpec b;
  b.kind = BcKind::Neumann;
  b.g = std::move(g);
  b.dissipation = alpha;
  return b;
}

BoundarySpec BoundarySpec::periodic() {
  BoundarySpec b;
  b.kind = BcKind::Periodic;
  return b;
}

namespace {

double eval(const TimeFn& fn, double t) { return fn ? fn(t) : 0.0; }

void check_bc(const BoundarySpec& b) {
  if (b.dissipation > 0.0) throw std::invalid_argument("boundary dissipation must be <= 0");
}

void check_iface(const InterfaceSpec& s) {
  if (s.gamma > 0.0) throw std::invalid_argument("interface dissipation gamma must be <= 0");
}

}  // namespace

void Semi1D::finalize() {
  size_ = 0;
  for (auto& b : blocks_) {
    b.offset = size_;
    size_ += 2 * static_cast<size_t>(b.ops.n());
    b.factor = factor_augmented(b.ops.A);
  }
}

Semi1D Semi1D::single(SbpOps ops, BoundarySpec left, BoundarySpec right, Forcing1D forcing, InterfaceSpec periodic) {
  check_bc(left);
  check_bc(right);
  if ((left.kind == BcKind::Periodic) != (right.kind == BcKind::Periodic))
    throw std::invalid_argument("periodic boundary must be set on both sides");
  Semi1D s;
  s.blocks_.push_back(Block{std::move(ops), {}, 0});
  s.left_bc_ = std::move(left);
  s.right_bc_ = std::move(right);
  if (s.left_bc_.kind == BcKind::Periodic) {
    check_iface(periodic);
    s.couplings_.push_back({0, 0, periodic});
  }
  s.forcing_ = std::move(forcing);
  s.finalize();
  return s;
}

Semi1D Semi1D::two_block(SbpOps left, SbpOps right, InterfaceSpec iface, BoundarySpec outer_left,
                         BoundarySpec outer_right, Forcing1D forcing) {
  check_iface(iface);
  check_bc(outer_left);
  check_bc(outer_right);
  if ((outer_left.kind == BcKind::Periodic) != (outer_right.kind == BcKind::Periodic))
    throw std::invalid_argument("periodic boundary must be set on both sides");
  const double xl = left.grid.x_hi, xr = right.grid.x_lo;
  if (std::abs(xl - xr) > 1e-12 * std::max(1.0, std::abs(xl)))
    throw std::invalid_argument("blocks do not meet at a common interface point");
  Semi1D s;
  s.blocks_.push_back(Block{std::move(left), {}, 0});
  s.blocks_.push_back(Block{std::move(right), {}, 0});
  s.left_bc_ = std::move(outer_left);
  s.right_bc_ = std::move(outer_right);
  s.couplings_.push_back({0, 1, iface});
  if (s.left_bc_.kind == BcKind::Periodic) s.couplings_.push_back({1, 0, iface});
  s.forcing_ = std::move(forcing);
  s.finalize();
  return s;
}

void Semi1D::rhs(double t, std::span<const double> s, std::span<double> ds) const {
  if (s.size() != size_ || ds.size() != size_) throw std::invalid_argument("Semi1D::rhs: state size mismatch");
  const int nb = num_blocks();
  std::vector<Vec> sat(nb);

  for (int b = 0; b < nb; ++b) {
    const auto& ops = blocks_[b].ops;
    const int n = ops.n();
    sat[b].assign(n, 0.0);
    auto u = s.subspan(u_offset(b), n);
    auto vt = ds.subspan(v_offset(b), n);
    ops.apply_D(u, vt);
    if (forcing_)
      for (int i = 0; i < n; ++i) vt[i] += forcing_(ops.grid.node(i), t);
  }

  {  // outer left end of block 0
    const auto& ops = blocks_[0].ops;
    auto u = s.subspan(u_offset(0), ops.n());
    auto v = s.subspan(v_offset(0), ops.n());
    auto vt = ds.subspan(v_offset(0), ops.n());
    const auto& bc = left_bc_;
    if (bc.kind == BcKind::Dirichlet) {
      const double dv = v[0] - eval(bc.f_t, t);
      ops.d1.axpy(ops.b1 * dv, sat[0]);
      vt[0] += bc.dissipation * dv / ops.H[0];
    } else if (bc.kind == BcKind::Neumann) {
      const double du = ops.d1.dot(u) - eval(bc.g, t);
      ops.d1.axpy(bc.dissipation * du, sat[0]);
      vt[0] += ops.b1 * du / ops.H[0];
    }
  }
  {  // outer right end of the last block
    const int b = nb - 1;
    const auto& ops = blocks_[b].ops;
    const int n = ops.n();
    auto u = s.subspan(u_offset(b), n);
    auto v = s.subspan(v_offset(b), n);
    auto vt = ds.subspan(v_offset(b), n);
    const auto& bc = right_bc_;
    if (bc.kind == BcKind::Dirichlet) {
      const double dv = v[n - 1] - eval(bc.f_t, t);
      ops.dn.axpy(-ops.bn * dv, sat[b]);
      vt[n - 1] += bc.dissipation * dv / ops.H[n - 1];
    } else if (bc.kind == BcKind::Neumann) {
      const double du = ops.dn.dot(u) - eval(bc.g, t);
      ops.dn.axpy(bc.dissipation * du, sat[b]);
      vt[n - 1] -= ops.bn * du / ops.H[n - 1];
    }
  }
  for (const auto& c : couplings_) {
    const auto& L = blocks_[c.left].ops;
    const auto& R = blocks_[c.right].ops;
    const int nl = L.n();
    auto ul = s.subspan(u_offset(c.left), nl);
    auto vl = s.subspan(v_offset(c.left), nl);
    auto ur = s.subspan(u_offset(c.right), R.n());
    auto vr = s.subspan(v_offset(c.right), R.n());
    const double tau = c.spec.tau, gamma = c.spec.gamma;
    const double jump = vl[nl - 1] - vr[0];
    const double flux = L.bn * L.dn.dot(ul) - R.b1 * R.d1.dot(ur);
    L.dn.axpy(-tau * L.bn * jump, sat[c.left]);
    R.d1.axpy(-(1.0 - tau) * R.b1 * jump, sat[c.right]);
    ds[v_offset(c.left) + nl - 1] += (-(1.0 - tau) * flux + gamma * jump) / L.H[nl - 1];
    ds[v_offset(c.right)] += (-tau * flux - gamma * jump) / R.H[0];
  }

  for (int b = 0; b < nb; ++b) {
    const int n = blocks_[b].ops.n();
    auto ut = ds.subspan(u_offset(b), n);
    blocks_[b].factor.solve(sat[b], ut);
    if (constraint_ == MeanConstraint::Weighted) {
      const auto& H = blocks_[b].ops.H;
      double hw = 0.0, hs = 0.0;
      for (int i = 0; i < n; ++i) {
        hw += H[i] * ut[i];
        hs += H[i];
      }
      for (int i = 0; i < n; ++i) ut[i] -= hw / hs;
    }
    auto v = s.subspan(v_offset(b), n);
    for (int i = 0; i < n; ++i) ut[i] += v[i];
  }
}

Vec Semi1D::rhs(double t, std::span<const double> s) const {
  Vec ds(size_);
  rhs(t, s, ds);
  return ds;
}

double Semi1D::energy(std::span<const double> s) const {
  double e = 0.0;
  for (int b = 0; b < num_blocks(); ++b) {
    const auto& ops = blocks_[b].ops;
    const int n = ops.n();
    auto u = s.subspan(u_offset(b), n);
    auto v = s.subspan(v_offset(b), n);
    Vec au(n);
    ops.A.matvec(u, au);
    for (int i = 0; i < n; ++i) e += u[i] * au[i] + ops.H[i] * v[i] * v[i];
  }
  return e;
}

double Semi1D::energy_rate(double t, std::span<const double> s) const {
  const Vec ds = rhs(t, s);
  double r = 0.0;
  for (int b = 0; b < num_blocks(); ++b) {
    const auto& ops = blocks_[b].ops;
    const int n = ops.n();
    auto u = s.subspan(u_offset(b), n);
    auto v = s.subspan(v_offset(b), n);
    Vec au(n);
    ops.A.matvec(u, au);
    for (int i = 0; i < n; ++i)
      r += 2.0 * au[i] * ds[u_offset(b) + i] + 2.0 * ops.H[i] * v[i] * ds[v_offset(b) + i];
  }
  return r;
}

double Semi1D::dissipation_rate(std::span<const double> s) const {
  double r = 0.0;
  auto side = [&](const BoundarySpec& bc, int b, bool left) {
    const auto& ops = blocks_[b].ops;
    const int n = ops.n();
    auto u = s.subspan(u_offset(b), n);
    auto v = s.subspan(v_offset(b), n);
    if (bc.kind == BcKind::Dirichlet) {
      const double x = left ? v[0] : v[n - 1];
      r += 2.0 * bc.dissipation * x * x;
    } else if (bc.kind == BcKind::Neumann) {
      const double x = left ? ops.d1.dot(u) : ops.dn.dot(u);
      r += 2.0 * bc.dissipation * x * x;
    }
  };
  side(left_bc_, 0, true);
  side(right_bc_, num_blocks() - 1, false);
  for (const auto& c : couplings_) {
    const double j = s[v_offset(c.left) + blocks_[c.left].ops.n() - 1] - s[v_offset(c.right)];
    r += 2.0 * c.spec.gamma * j * j;
  }
  return r;
}

double Semi1D::mean_constraint(double t, std::span<const double> s) const {
  const Vec ds = rhs(t, s);
  double m = 0.0;
  for (int b = 0; b < num_blocks(); ++b) {
    const auto& H = blocks_[b].ops.H;
    double sum = 0.0;
    for (int i = 0; i < blocks_[b].ops.n(); ++i)
      sum += (constraint_ == MeanConstraint::Weighted ? H[i] : 1.0) * (ds[u_offset(b) + i] - s[v_offset(b) + i]);
    m = std::max(m, std::abs(sum));
  }
  return m;
}

}  // namespace sbpwave
