#include "sbpwave/semidisc2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbpwave {

Coefficients2D Coefficients2D::constant(const Grid2D& g, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("coefficients must be positive");
  return {Vec(g.size(), a), Vec(g.size(), b)};
}

Coefficients2D Coefficients2D::sample(const Grid2D& g, const std::function<double(double, double)>& a,
                                      const std::function<double(double, double)>& b) {
  Coefficients2D c{Vec(g.size()), Vec(g.size())};
  for (int ix = 0; ix < g.nx(); ++ix) {
    const double x = g.x.node(ix);
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double y = g.y.node(iy);
      const int k = g.index(ix, iy);
      c.a[k] = a(x, y);
      c.b[k] = b(x, y);
      if (!(c.a[k] > 0.0) || !(c.b[k] > 0.0)) throw std::invalid_argument("coefficients must be positive");
    }
  }
  return c;
}

bool Coefficients2D::is_constant() const {
  auto flat = [](const Vec& v) {
    if (v.empty()) return true;
    const double ref = v.front();
    return std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x - ref) <= 1e-14 * std::abs(ref); });
  };
  return flat(a) && flat(b);
}

Semi2D Semi2D::assemble(const Grid2D& grid, const Coefficients2D& coeffs, int p, double theta, Field2D f_t,
                        Field2D forcing) {
  if (theta > 0.0) throw std::invalid_argument("theta must be <= 0");
  const int nx = grid.nx(), ny = grid.ny();
  if (nx < min_points(p) || ny < min_points(p)) throw std::invalid_argument("grid too coarse for this order");
  if (coeffs.a.size() != grid.size() || coeffs.b.size() != grid.size())
    throw std::invalid_argument("coefficient size mismatch");

  Semi2D s;
  s.grid_ = grid;
  s.coeffs_ = coeffs;
  s.p_ = p;
  s.theta_ = theta;
  s.f_t_ = std::move(f_t);
  s.forcing_ = std::move(forcing);

  const bool constant = coeffs.is_constant();
  s.x_lines_.reserve(ny);
  for (int iy = 0; iy < ny; ++iy) {
    if (constant) {
      s.x_lines_.push_back(build_constant_ops(p, grid.x, coeffs.a[0]));
    } else {
      Vec line(nx);
      for (int ix = 0; ix < nx; ++ix) line[ix] = coeffs.a[grid.index(ix, iy)];
      s.x_lines_.push_back(build_variable_ops(p, grid.x, CoefficientProfile::sampled(std::move(line))));
    }
  }
  s.y_lines_.reserve(nx);
  for (int ix = 0; ix < nx; ++ix) {
    if (constant) {
      s.y_lines_.push_back(build_constant_ops(p, grid.y, coeffs.b[0]));
    } else {
      Vec line(coeffs.b.begin() + grid.index(ix, 0), coeffs.b.begin() + grid.index(ix, 0) + ny);
      s.y_lines_.push_back(build_variable_ops(p, grid.y, CoefficientProfile::sampled(std::move(line))));
    }
  }

  const Vec& hx = s.Hx();
  const Vec& hy = s.Hy();
  s.H_.resize(grid.size());
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) s.H_[grid.index(ix, iy)] = hx[ix] * hy[iy];

  std::vector<Triplet> t;
  for (int iy = 0; iy < ny; ++iy) {
    const SymBand& A = s.x_lines_[iy].A;
    const int bw = A.bandwidth();
    for (int i = 0; i < nx; ++i)
      for (int j = std::max(0, i - bw); j <= std::min(nx - 1, i + bw); ++j) {
        const double v = A(i, j);
        if (v != 0.0) t.push_back({grid.index(i, iy), grid.index(j, iy), hy[iy] * v});
      }
  }
  for (int ix = 0; ix < nx; ++ix) {
    const SymBand& A = s.y_lines_[ix].A;
    const int bw = A.bandwidth();
    for (int i = 0; i < ny; ++i)
      for (int j = std::max(0, i - bw); j <= std::min(ny - 1, i + bw); ++j) {
        const double v = A(i, j);
        if (v != 0.0) t.push_back({grid.index(ix, i), grid.index(ix, j), hx[ix] * v});
      }
  }
  s.A_ = Csr::from_triplets(static_cast<int>(grid.size()), std::move(t));
  return s;
}

void Semi2D::apply_D(std::span<const double> u, std::span<double> out) const {
  const int nx = grid_.nx(), ny = grid_.ny();
  Vec line(std::max(nx, ny)), res(std::max(nx, ny));
  for (int ix = 0; ix < nx; ++ix) {
    const auto col = u.subspan(static_cast<size_t>(ix) * ny, ny);
    y_lines_[ix].apply_D(col, out.subspan(static_cast<size_t>(ix) * ny, ny));
  }
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) line[ix] = u[grid_.index(ix, iy)];
    x_lines_[iy].apply_D(std::span<const double>(line.data(), nx), std::span<double>(res.data(), nx));
    for (int ix = 0; ix < nx; ++ix) out[grid_.index(ix, iy)] += res[ix];
  }
}

namespace {

double eval(const Field2D& f, double x, double y, double t) { return f ? f(x, y, t) : 0.0; }

// y += s * stencil, where the stencil runs along x at fixed iy.
void axpy_x(const Grid2D& g, const Stencil& st, int iy, double s, std::span<double> y) {
  for (size_t k = 0; k < st.coeffs.size(); ++k) y[g.index(st.offset + static_cast<int>(k), iy)] += s * st.coeffs[k];
}

void axpy_y(const Grid2D& g, const Stencil& st, int ix, double s, std::span<double> y) {
  for (size_t k = 0; k < st.coeffs.size(); ++k) y[g.index(ix, st.offset + static_cast<int>(k))] += s * st.coeffs[k];
}

}  // namespace

void Semi2D::sat_u(double t, std::span<const double> v, std::span<double> out) const {
  const int nx = grid_.nx(), ny = grid_.ny();
  std::fill(out.begin(), out.end(), 0.0);
  const Vec& hx = Hx();
  const Vec& hy = Hy();
  for (int iy = 0; iy < ny; ++iy) {
    const double y = grid_.y.node(iy);
    const SbpOps& op = x_lines_[iy];
    const double dW = v[grid_.index(0, iy)] - eval(f_t_, grid_.x.x_lo, y, t);
    const double dE = v[grid_.index(nx - 1, iy)] - eval(f_t_, grid_.x.x_hi, y, t);
    axpy_x(grid_, op.d1, iy, hy[iy] * op.b1 * dW, out);
    axpy_x(grid_, op.dn, iy, -hy[iy] * op.bn * dE, out);
  }
  for (int ix = 0; ix < nx; ++ix) {
    const double x = grid_.x.node(ix);
    const SbpOps& op = y_lines_[ix];
    const double dS = v[grid_.index(ix, 0)] - eval(f_t_, x, grid_.y.x_lo, t);
    const double dN = v[grid_.index(ix, ny - 1)] - eval(f_t_, x, grid_.y.x_hi, t);
    axpy_y(grid_, op.d1, ix, hx[ix] * op.b1 * dS, out);
    axpy_y(grid_, op.dn, ix, -hx[ix] * op.bn * dN, out);
  }
}

void Semi2D::v_rhs(double t, std::span<const double> u, std::span<double> out) const {
  const int nx = grid_.nx(), ny = grid_.ny();
  apply_D(u, out);
  if (forcing_) {
    for (int ix = 0; ix < nx; ++ix) {
      const double x = grid_.x.node(ix);
      for (int iy = 0; iy < ny; ++iy) out[grid_.index(ix, iy)] += forcing_(x, grid_.y.node(iy), t);
    }
  }
}

void Semi2D::prepare_pcg(const PcgConfig& cfg) {
  pcg_ = cfg;
  ichol_ = std::make_shared<IcholFactor>(ichol(A_, cfg.ichol_boost, cfg.ichol_drop));
}

void Semi2D::prepare_direct() { direct_ = std::make_shared<AugmentedFactor>(factor_augmented(A_.to_sym_band())); }

namespace {

// Adds the theta boundary term of v_t; s holds [u, v].
void add_dissipation(const Semi2D& semi, double t, std::span<const double> v, std::span<double> vt) {
  const double theta = semi.theta();
  if (theta == 0.0) return;
  const Grid2D& g = semi.grid();
  const int nx = g.nx(), ny = g.ny();
  const Vec& hx = semi.Hx();
  const Vec& hy = semi.Hy();
  const Field2D& f = semi.boundary_rate();
  for (int iy = 0; iy < ny; ++iy) {
    const double y = g.y.node(iy);
    const int w = g.index(0, iy), e = g.index(nx - 1, iy);
    vt[w] += theta * (v[w] - eval(f, g.x.x_lo, y, t)) / hx[0];
    vt[e] += theta * (v[e] - eval(f, g.x.x_hi, y, t)) / hx[nx - 1];
  }
  for (int ix = 0; ix < nx; ++ix) {
    const double x = g.x.node(ix);
    const int s = g.index(ix, 0), n = g.index(ix, ny - 1);
    vt[s] += theta * (v[s] - eval(f, x, g.y.x_lo, t)) / hy[0];
    vt[n] += theta * (v[n] - eval(f, x, g.y.x_hi, t)) / hy[ny - 1];
  }
}

}  // namespace

void Semi2D::rhs_pcg(double t, std::span<const double> s, std::span<double> ds, PcgStats* stats) const {
  if (!ichol_) throw std::logic_error("prepare_pcg has not been called");
  const size_t N = grid_.size();
  auto u = s.first(N), v = s.subspan(N, N);
  auto ut = ds.first(N), vt = ds.subspan(N, N);

  Vec b(N);
  sat_u(t, v, b);
  Vec Av(N);
  A_.matvec(v, Av);
  for (size_t i = 0; i < N; ++i) b[i] += Av[i];

  PcgOptions opt;
  opt.rel_tol = pcg_.rel_tol;
  opt.max_iter = pcg_.max_iter;
  const IcholFactor* M = ichol_.get();
  PcgResult r = pcg([this](std::span<const double> x, std::span<double> y) { A_.matvec(x, y); },
                    [M](std::span<const double> x, std::span<double> y) { M->apply(x, y); }, b, v, opt);
  std::copy(r.x.begin(), r.x.end(), ut.begin());
  if (stats) {
    ++stats->solves;
    stats->iterations += r.iterations;
    stats->max_iterations = std::max(stats->max_iterations, r.iterations);
  }

  v_rhs(t, u, vt);
  add_dissipation(*this, t, v, vt);
}

void Semi2D::rhs_direct(double t, std::span<const double> s, std::span<double> ds) const {
  if (!direct_) throw std::logic_error("prepare_direct has not been called");
  const size_t N = grid_.size();
  auto u = s.first(N), v = s.subspan(N, N);
  auto ut = ds.first(N), vt = ds.subspan(N, N);

  Vec b(N);
  sat_u(t, v, b);
  direct_->solve(b, ut);
  for (size_t i = 0; i < N; ++i) ut[i] += v[i];

  v_rhs(t, u, vt);
  add_dissipation(*this, t, v, vt);
}

double Semi2D::energy(std::span<const double> s) const {
  const size_t N = grid_.size();
  auto u = s.first(N), v = s.subspan(N, N);
  Vec Au(N);
  A_.matvec(u, Au);
  double e = 0.0;
  for (size_t i = 0; i < N; ++i) e += u[i] * Au[i] + H_[i] * v[i] * v[i];
  return e;
}

double Semi2D::energy_rate(std::span<const double> s, std::span<const double> ds) const {
  const size_t N = grid_.size();
  auto u = s.first(N), v = s.subspan(N, N);
  auto ut = ds.first(N), vt = ds.subspan(N, N);
  Vec Aut(N);
  A_.matvec(ut, Aut);
  double r = 0.0;
  for (size_t i = 0; i < N; ++i) r += 2.0 * (u[i] * Aut[i] + H_[i] * v[i] * vt[i]);
  return r;
}

double Semi2D::dissipation_rate(std::span<const double> s) const {
  const int nx = grid_.nx(), ny = grid_.ny();
  auto v = s.subspan(grid_.size());
  const Vec& hx = Hx();
  const Vec& hy = Hy();
  double sum = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    const double w = v[grid_.index(0, iy)], e = v[grid_.index(nx - 1, iy)];
    sum += hy[iy] * (w * w + e * e);
  }
  for (int ix = 0; ix < nx; ++ix) {
    const double so = v[grid_.index(ix, 0)], no = v[grid_.index(ix, ny - 1)];
    sum += hx[ix] * (so * so + no * no);
  }
  return 2.0 * theta_ * sum;
}

// ---------------------------------------------------------------------------

namespace {

// Q^T H^{-1/2} applied to a stencil scaled by s.
Vec project_stencil(const EigPair& e, const Vec& sh, const Stencil& st, double s) {
  Vec out(e.n, 0.0);
  for (size_t m = 0; m < st.coeffs.size(); ++m) {
    const int i = st.offset + static_cast<int>(m);
    const double c = s * st.coeffs[m] / sh[i];
    for (int k = 0; k < e.n; ++k) out[k] += e.q(i, k) * c;
  }
  return out;
}

Vec project_unit(const EigPair& e, const Vec& sh, int i) {
  Vec out(e.n);
  for (int k = 0; k < e.n; ++k) out[k] = e.q(i, k) / sh[i];
  return out;
}

Vec project_ones(const EigPair& e, const Vec& sh) {
  Vec out(e.n, 0.0);
  for (int k = 0; k < e.n; ++k)
    for (int i = 0; i < e.n; ++i) out[k] += e.q(i, k) / sh[i];
  return out;
}

EigPair scaled_eig(const SbpOps& op, Vec& sh) {
  const int n = op.n();
  sh.resize(n);
  for (int i = 0; i < n; ++i) sh[i] = std::sqrt(op.H[i]);
  Vec M = op.A.to_dense();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[static_cast<size_t>(i) * n + j] /= sh[i] * sh[j];
  // symmetrize roundoff from the scaling
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double m = 0.5 * (M[static_cast<size_t>(i) * n + j] + M[static_cast<size_t>(j) * n + i]);
      M[static_cast<size_t>(i) * n + j] = M[static_cast<size_t>(j) * n + i] = m;
    }
  return sym_eig(M, n);
}

}  // namespace

FastDiag FastDiag::build(const Semi2D& semi) {
  if (!semi.coefficients().is_constant()) throw std::invalid_argument("fast diagonalization needs constant coefficients");
  FastDiag f;
  f.nx_ = semi.grid().nx();
  f.ny_ = semi.grid().ny();
  f.theta_ = semi.theta();
  f.grid_ = semi.grid();
  f.f_t_ = semi.boundary_rate();
  f.forcing_ = semi.forcing();
  const SbpOps& ox = semi.x_line(0);
  const SbpOps& oy = semi.y_line(0);
  f.ex_ = scaled_eig(ox, f.shx_);
  f.ey_ = scaled_eig(oy, f.shy_);
  f.pW_ = project_stencil(f.ex_, f.shx_, ox.d1, ox.b1);
  f.pE_ = project_stencil(f.ex_, f.shx_, ox.dn, ox.bn);
  f.qW_ = project_unit(f.ex_, f.shx_, 0);
  f.qE_ = project_unit(f.ex_, f.shx_, f.nx_ - 1);
  f.pS_ = project_stencil(f.ey_, f.shy_, oy.d1, oy.b1);
  f.pN_ = project_stencil(f.ey_, f.shy_, oy.dn, oy.bn);
  f.qS_ = project_unit(f.ey_, f.shy_, 0);
  f.qN_ = project_unit(f.ey_, f.shy_, f.ny_ - 1);
  f.cx_ = project_ones(f.ex_, f.shx_);
  f.cy_ = project_ones(f.ey_, f.shy_);
  return f;
}

void FastDiag::forward(std::span<const double> u, std::span<double> ut) const {
  const int nx = nx_, ny = ny_;
  Vec w(static_cast<size_t>(nx) * ny), t1(w.size(), 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) w[i * ny + j] = shx_[i] * u[i * ny + j] * shy_[j];
  // t1 = Qx^T w
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nx; ++k) {
      const double q = ex_.q(i, k);
      if (q == 0.0) continue;
      for (int j = 0; j < ny; ++j) t1[k * ny + j] += q * w[i * ny + j];
    }
  // ut = t1 Qy
  for (int k = 0; k < nx; ++k)
    for (int l = 0; l < ny; ++l) {
      double s = 0.0;
      for (int j = 0; j < ny; ++j) s += t1[k * ny + j] * ey_.q(j, l);
      ut[k * ny + l] = s;
    }
}

void FastDiag::inverse(std::span<const double> ut, std::span<double> u) const {
  const int nx = nx_, ny = ny_;
  Vec t1(static_cast<size_t>(nx) * ny, 0.0);
  // t1 = Qx ut
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nx; ++k) {
      const double q = ex_.q(i, k);
      for (int l = 0; l < ny; ++l) t1[i * ny + l] += q * ut[k * ny + l];
    }
  // u = t1 Qy^T, then unscale
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int l = 0; l < ny; ++l) s += t1[i * ny + l] * ey_.q(j, l);
      u[i * ny + j] = s / (shx_[i] * shy_[j]);
    }
}

Vec FastDiag::to_diag(std::span<const double> s) const {
  const size_t N = static_cast<size_t>(nx_) * ny_;
  Vec out(2 * N);
  forward(s.first(N), std::span<double>(out).first(N));
  forward(s.subspan(N, N), std::span<double>(out).subspan(N, N));
  return out;
}

Vec FastDiag::from_diag(std::span<const double> st) const {
  const size_t N = static_cast<size_t>(nx_) * ny_;
  Vec out(2 * N);
  inverse(st.first(N), std::span<double>(out).first(N));
  inverse(st.subspan(N, N), std::span<double>(out).subspan(N, N));
  return out;
}

void FastDiag::rhs(double t, std::span<const double> st, std::span<double> dst) const {
  const int nx = nx_, ny = ny_;
  const size_t N = static_cast<size_t>(nx) * ny;
  auto U = st.first(N), V = st.subspan(N, N);
  auto Ut = dst.first(N), Vt = dst.subspan(N, N);

  // Boundary traces in modal coordinates.
  Vec sW(ny, 0.0), sE(ny, 0.0), tW(ny, 0.0), tE(ny, 0.0);
  Vec sS(nx, 0.0), sN(nx, 0.0), tS(nx, 0.0), tN(nx, 0.0);
  for (int k = 0; k < nx; ++k)
    for (int l = 0; l < ny; ++l) {
      const double v = V[k * ny + l], u = U[k * ny + l];
      sW[l] += qW_[k] * v;
      sE[l] += qE_[k] * v;
      tW[l] += pW_[k] * u;
      tE[l] += pE_[k] * u;
      sS[k] += v * qS_[l];
      sN[k] += v * qN_[l];
      tS[k] += u * pS_[l];
      tN[k] += u * pN_[l];
    }

  // Boundary data: Q^T H^{1/2} f_t along each side.
  Vec gW(ny, 0.0), gE(ny, 0.0), gS(nx, 0.0), gN(nx, 0.0);
  if (f_t_) {
    Vec fw(ny), fe(ny), fs(nx), fn(nx);
    for (int j = 0; j < ny; ++j) {
      const double y = grid_.y.node(j);
      fw[j] = f_t_(grid_.x.x_lo, y, t) * shy_[j];
      fe[j] = f_t_(grid_.x.x_hi, y, t) * shy_[j];
    }
    for (int i = 0; i < nx; ++i) {
      const double x = grid_.x.node(i);
      fs[i] = f_t_(x, grid_.y.x_lo, t) * shx_[i];
      fn[i] = f_t_(x, grid_.y.x_hi, t) * shx_[i];
    }
    for (int l = 0; l < ny; ++l)
      for (int j = 0; j < ny; ++j) {
        gW[l] += ey_.q(j, l) * fw[j];
        gE[l] += ey_.q(j, l) * fe[j];
      }
    for (int k = 0; k < nx; ++k)
      for (int i = 0; i < nx; ++i) {
        gS[k] += ex_.q(i, k) * fs[i];
        gN[k] += ex_.q(i, k) * fn[i];
      }
  }
  Vec dW(ny), dE(ny), dS(nx), dN(nx);
  double w_sum = 0.0;  // 1^T w in grid coordinates
  for (int l = 0; l < ny; ++l) {
    dW[l] = sW[l] - gW[l];
    dE[l] = sE[l] - gE[l];
  }
  for (int k = 0; k < nx; ++k) {
    dS[k] = sS[k] - gS[k];
    dN[k] = sN[k] - gN[k];
  }

  for (int k = 0; k < nx; ++k)
    for (int l = 0; l < ny; ++l) {
      const size_t m = static_cast<size_t>(k) * ny + l;
      const double lam = lambda(k, l);
      const double sat = pW_[k] * dW[l] - pE_[k] * dE[l] + dS[k] * pS_[l] - dN[k] * pN_[l];
      const double w = (k == 0 && l == 0) ? 0.0 : sat / lam;
      Ut[m] = V[m] + w;
      w_sum += cx_[k] * cy_[l] * w;
      Vt[m] = -lam * U[m] - qW_[k] * tW[l] + qE_[k] * tE[l] - tS[k] * qS_[l] + tN[k] * qN_[l] +
              theta_ * (qW_[k] * dW[l] + qE_[k] * dE[l] + dS[k] * qS_[l] + dN[k] * qN_[l]);
    }
  // The zero mode of w is fixed by the plain-sum constraint 1^T w = 0.
  Ut[0] -= w_sum / (cx_[0] * cy_[0]);

  if (forcing_) {
    Vec F(N), Ft(N);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) F[i * ny + j] = forcing_(grid_.x.node(i), grid_.y.node(j), t);
    // Q^T H^{1/2} F = forward(H^{-1/2} ... ) : forward applies Q^T H^{1/2}
    forward(F, Ft);
    for (size_t m = 0; m < N; ++m) Vt[m] += Ft[m];
  }
}

double FastDiag::energy(std::span<const double> st) const {
  const size_t N = static_cast<size_t>(nx_) * ny_;
  double e = 0.0;
  for (int k = 0; k < nx_; ++k)
    for (int l = 0; l < ny_; ++l) {
      const size_t m = static_cast<size_t>(k) * ny_ + l;
      e += lambda(k, l) * st[m] * st[m] + st[N + m] * st[N + m];
    }
  return e;
}

}  // namespace sbpwave
