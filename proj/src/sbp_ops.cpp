#include "sbpwave/sbp_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sbpwave/linalg.hpp"
#include "tables.hpp"

namespace sbpwave {

Grid1D Grid1D::uniform(int n, double x_lo, double x_hi) {
  if (n < 2) throw std::invalid_argument("Grid1D: need at least two points");
  if (!(x_hi > x_lo)) throw std::invalid_argument("Grid1D: empty interval");
  return Grid1D{n, x_lo, x_hi};
}

double Grid1D::node(int i) const {
  if (i == n - 1) return x_hi;
  return x_lo + i * h();
}

Vec Grid1D::nodes() const {
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = node(i);
  return x;
}

CoefficientProfile CoefficientProfile::constant(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("coefficient must be positive");
  CoefficientProfile c;
  c.value_ = value;
  return c;
}

CoefficientProfile CoefficientProfile::sampled(Vec values) {
  if (values.empty()) throw std::invalid_argument("empty coefficient profile");
  for (double v : values)
    if (!(v > 0.0)) throw std::invalid_argument("coefficient must be positive");
  CoefficientProfile c;
  c.value_ = values.front();
  c.values_ = std::move(values);
  return c;
}

double Stencil::dot(std::span<const double> u) const {
  double s = 0.0;
  for (size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * u[offset + k];
  return s;
}

void Stencil::axpy(double s, std::span<double> y) const {
  for (size_t k = 0; k < coeffs.size(); ++k) y[offset + k] += s * coeffs[k];
}

void SbpOps::apply_D(std::span<const double> u, std::span<double> y) const { D.matvec(u, y); }

Vec SbpOps::apply_D(std::span<const double> u) const {
  Vec y(n());
  D.matvec(u, y);
  return y;
}

int closure_width(int p) {
  if (p < 1 || p > 3) throw std::invalid_argument("half-order must be 1, 2 or 3");
  return 2 * p;
}

int min_points(int p) { return 2 * closure_width(p); }

namespace {

void check_grid(int p, const Grid1D& g) {
  if (g.n < min_points(p))
    throw std::invalid_argument("grid too small for the order " + std::to_string(2 * p) + " closure: need n >= " +
                                std::to_string(min_points(p)));
  if (!(g.h() > 0.0)) throw std::invalid_argument("grid spacing must be positive");
}

// Fills H, d1, dn, b1, bn and D once A is known.
void finish(SbpOps& ops, double b1, double bn) {
  const auto& t = detail::constant_table(ops.p);
  const int n = ops.n();
  const double h = ops.grid.h();
  ops.H.assign(n, h);
  for (size_t i = 0; i < t.H.size(); ++i) {
    ops.H[i] = h * t.H[i];
    ops.H[n - 1 - i] = h * t.H[i];
  }
  ops.d1.offset = 0;
  ops.d1.coeffs.resize(t.d1.size());
  ops.dn.offset = n - static_cast<int>(t.d1.size());
  ops.dn.coeffs.resize(t.d1.size());
  const int m = static_cast<int>(t.d1.size());
  for (int j = 0; j < m; ++j) {
    ops.d1.coeffs[j] = t.d1[j] / h;
    ops.dn.coeffs[m - 1 - j] = -t.d1[j] / h;
  }
  ops.b1 = b1;
  ops.bn = bn;

  const int bw = std::max(ops.A.bandwidth(), m - 1);
  ops.D = Band(n, bw);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - ops.A.bandwidth()); j <= std::min(n - 1, i + ops.A.bandwidth()); ++j)
      ops.D.set(i, j, -ops.A(i, j));
  for (int j = 0; j < m; ++j) {
    ops.D.add(0, ops.d1.offset + j, -b1 * ops.d1.coeffs[j]);
    ops.D.add(n - 1, ops.dn.offset + j, bn * ops.dn.coeffs[j]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j) ops.D.set(i, j, ops.D(i, j) / ops.H[i]);
}

}  // namespace

SbpOps build_constant_ops(int p, const Grid1D& grid, double b) {
  check_grid(p, grid);
  if (!(b > 0.0)) throw std::invalid_argument("coefficient must be positive");
  const auto& t = detail::constant_table(p);
  const int n = grid.n;
  const int R = static_cast<int>(t.M.size());
  int bw = p;
  for (int i = 0; i < R; ++i) bw = std::max(bw, static_cast<int>(t.M[i].size()) - 1 - i);

  SbpOps ops;
  ops.p = p;
  ops.grid = grid;
  ops.A = SymBand(n, bw);
  const double s = b / grid.h();
  for (int i = R; i < n - R; ++i)
    for (int k = 0; k <= 2 * p; ++k) {
      const int j = i - p + k;
      if (j <= i) ops.A.set(i, j, -s * t.interior[k]);
    }
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < static_cast<int>(t.M[i].size()); ++j) {
      ops.A.set(i, j, s * t.M[i][j]);
      ops.A.set(n - 1 - i, n - 1 - j, s * t.M[i][j]);
    }
  finish(ops, b, b);
  return ops;
}

SbpOps build_variable_ops(int p, const Grid1D& grid, const CoefficientProfile& b) {
  check_grid(p, grid);
  const int n = grid.n;
  if (!b.is_constant() && static_cast<int>(b.values().size()) != n)
    throw std::invalid_argument("coefficient profile length does not match the grid");
  const auto& t = detail::variable_table(p);

  int bw = 0;
  for (int a = 0; a <= 2 * p; ++a)
    for (int c = 0; c <= a; ++c)
      if (t.interior[a][c] != 0.0) bw = std::max(bw, a - c);
  for (const auto& c : t.corrections)
    for (size_t a = 0; a < c.block.size(); ++a)
      for (size_t e = 0; e <= a; ++e)
        if (c.block[a][e] != 0.0) bw = std::max(bw, static_cast<int>(a - e));

  SbpOps ops;
  ops.p = p;
  ops.grid = grid;
  ops.A = SymBand(n, bw);
  const double inv_h = 1.0 / grid.h();

  for (int k = p; k <= n - 1 - p; ++k) {
    const double w = b.at(k) * inv_h;
    for (int a = 0; a <= 2 * p; ++a)
      for (int c = 0; c <= a; ++c)
        if (t.interior[a][c] != 0.0) ops.A.add(k - p + a, k - p + c, w * t.interior[a][c]);
  }
  for (const auto& c : t.corrections) {
    const int m = static_cast<int>(c.block.size());
    const double wl = b.at(c.k) * inv_h;
    const double wr = b.at(n - 1 - c.k) * inv_h;
    for (int a = 0; a < m; ++a)
      for (int e = 0; e <= a; ++e) {
        const double v = c.block[a][e];
        if (v == 0.0) continue;
        ops.A.add(c.first + a, c.first + e, wl * v);
        ops.A.add(n - 1 - c.first - a, n - 1 - c.first - e, wr * v);
      }
  }
  finish(ops, b.at(0), b.at(n - 1));
  return ops;
}

double sbp_residual(const SbpOps& ops) {
  const int n = ops.n();
  const int bw = ops.D.bandwidth();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j) {
      double v = ops.H[i] * ops.D(i, j) + ops.A(i, j);
      if (i == 0 && j >= ops.d1.offset && j < ops.d1.offset + static_cast<int>(ops.d1.coeffs.size()))
        v += ops.b1 * ops.d1.coeffs[j - ops.d1.offset];
      if (i == n - 1 && j >= ops.dn.offset && j < ops.dn.offset + static_cast<int>(ops.dn.coeffs.size()))
        v -= ops.bn * ops.dn.coeffs[j - ops.dn.offset];
      r = std::max(r, std::abs(v));
    }
  return r / ops.A.max_abs();
}

RankReport nullspace_rank_check(const SbpOps& ops) {
  const int n = ops.n();
  if (n > 2000) throw std::invalid_argument("nullspace_rank_check: n too large for a dense eigensolve");
  RankReport rep;
  Vec one(n, 1.0), a1(n);
  ops.A.matvec(one, a1);
  double s = 0.0;
  for (double v : a1) s += v * v;
  rep.a1_norm = std::sqrt(s);
  rep.a_norm = ops.A.max_abs();
  const EigPair e = sym_eig(ops.A.to_dense(), n);
  rep.smallest_eig = e.lambda[0];
  rep.second_smallest_eig = n > 1 ? e.lambda[1] : 0.0;
  const double scale = std::max(std::abs(e.lambda.front()), std::abs(e.lambda.back()));
  for (double l : e.lambda)
    if (std::abs(l) <= 1e-12 * scale) ++rep.near_zero_count;
  return rep;
}

std::complex<double> interior_characteristic_polynomial(int p, std::complex<double> z) {
  const auto& c = detail::constant_table(p).interior;
  std::complex<double> s = 0.0;
  for (size_t k = c.size(); k-- > 0;) s = s * z - c[k];
  return s;
}

std::vector<std::complex<double>> interior_characteristic_roots(int p) {
  if (p != 2) throw std::invalid_argument("characteristic roots are provided for p = 2 only");
  // Palindromic quartic: with w = z + 1/z it reduces to c0 w^2 + c1 w + (c2 - 2 c0) = 0.
  const auto& s = detail::constant_table(p).interior;
  const double c0 = -s[0], c1 = -s[1], c2 = -s[2];
  const std::complex<double> disc = std::sqrt(std::complex<double>(c1 * c1 - 4.0 * c0 * (c2 - 2.0 * c0)));
  std::vector<std::complex<double>> roots;
  for (int sign : {1, -1}) {
    const std::complex<double> w = (-c1 + double(sign) * disc) / (2.0 * c0);
    const std::complex<double> d = std::sqrt(w * w - 4.0);
    roots.push_back((w - d) / 2.0);
    roots.push_back((w + d) / 2.0);
  }
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
  return roots;
}

}  // namespace sbpwave
