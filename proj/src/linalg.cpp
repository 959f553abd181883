#include "sbpwave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbpwave {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void remove_mean(std::span<double> a) {
  if (a.empty()) return;
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  for (double& v : a) v -= m;
}

}  // namespace

AugmentedFactor factor_augmented(const SymBand& A) {
  AugmentedFactor f;
  f.n = A.size();
  f.bw = A.bandwidth();
  const int N = f.n - 1;
  const int bw = f.bw;
  f.L.assign(static_cast<size_t>(std::max(N, 0)) * (bw + 1), 0.0);
  auto L = [&](int i, int j) -> double& { return f.L[static_cast<size_t>(i) * (bw + 1) + (j - i + bw)]; };
  double dmax = 0.0;
  for (int i = 0; i < f.n; ++i) dmax = std::max(dmax, std::abs(A(i, i)));
  for (int i = 0; i < f.n; ++i) {
    double row = 0.0;
    for (int j = std::max(0, i - bw); j <= std::min(f.n - 1, i + bw); ++j) row += A(i, j);
    if (std::abs(row) > 1e-10 * dmax)
      throw AssumptionViolation("constants are not in the nullspace (row " + std::to_string(i) + ")");
  }
  for (int i = 0; i < N; ++i) {
    for (int j = std::max(0, i - bw); j <= i; ++j) {
      double s = A(i, j);
      for (int k = std::max(0, i - bw); k < j; ++k) s -= L(i, k) * L(j, k);
      if (j < i) {
        L(i, j) = s / L(j, j);
      } else {
        if (!(s > 1e-14 * dmax))
          throw AssumptionViolation("matrix is not of rank n-1 with constants in its nullspace (pivot " +
                                    std::to_string(i) + ")");
        L(i, i) = std::sqrt(s);
      }
    }
  }
  return f;
}

void AugmentedFactor::solve(std::span<const double> rhs, std::span<double> w, double* multiplier) const {
  const double m = std::accumulate(rhs.begin(), rhs.end(), 0.0) / n;
  if (multiplier) *multiplier = m;
  const int N = n - 1;
  auto Lc = [&](int i, int j) { return L[static_cast<size_t>(i) * (bw + 1) + (j - i + bw)]; };
  for (int i = 0; i < N; ++i) {
    double s = rhs[i] - m;
    for (int k = std::max(0, i - bw); k < i; ++k) s -= Lc(i, k) * w[k];
    w[i] = s / Lc(i, i);
  }
  for (int i = N - 1; i >= 0; --i) {
    double s = w[i];
    for (int k = i + 1; k <= std::min(N - 1, i + bw); ++k) s -= Lc(k, i) * w[k];
    w[i] = s / Lc(i, i);
  }
  w[n - 1] = 0.0;
  remove_mean(w.first(n));
}

AugmentedSolution solve_augmented(const AugmentedFactor& f, std::span<const double> rhs) {
  AugmentedSolution s;
  s.w.resize(f.n);
  f.solve(rhs, s.w, &s.multiplier);
  return s;
}

EigPair sym_eig(std::span<const double> M, int n) {
  Vec a(M.begin(), M.end());
  if (static_cast<int>(a.size()) != n * n) throw std::invalid_argument("sym_eig: size mismatch");
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(a[i * n + j] - a[j * n + i]) > 1e-13 * std::max(scale, 1e-300))
        throw std::invalid_argument("sym_eig: matrix is not symmetric");
  Vec V(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) V[i * n + i] = 1.0;

  auto off = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) s += a[i * n + j] * a[i * n + j];
    return s;
  };
  double fro = 0.0;
  for (double v : a) fro += v * v;
  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off() <= 1e-32 * fro || fro == 0.0) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        if (std::abs(apq) < 1e-300 || std::abs(apq) <= 1e-18 * std::sqrt(std::abs(app * aqq))) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = V[k * n + p], vkq = V[k * n + q];
          V[k * n + p] = c * vkp - s * vkq;
          V[k * n + q] = s * vkp + c * vkq;
        }
      }
  }
  if (sweep == max_sweeps) throw std::runtime_error("sym_eig: Jacobi iteration did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x * n + x] < a[y * n + y]; });
  EigPair e;
  e.n = n;
  e.lambda.resize(n);
  e.Q.resize(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    e.lambda[k] = a[order[k] * n + order[k]];
    for (int i = 0; i < n; ++i) e.Q[i * n + k] = V[i * n + order[k]];
  }
  return e;
}

PcgResult pcg(const LinearOp& A, const LinearOp& precond, std::span<const double> rhs,
              std::span<const double> x0, const PcgOptions& opt) {
  const size_t n = rhs.size();
  PcgResult res;
  res.x.assign(x0.begin(), x0.end());
  const double normb = norm2(rhs);
  if (normb == 0.0) {
    res.x.assign(n, 0.0);
    return res;
  }
  Vec r(n), z(n), p(n), q(n);

  auto apply_m = [&](const Vec& in, Vec& out) {
    if (precond) precond(in, out);
    else out = in;
    if (opt.deflate_constants) remove_mean(out);
  };

  // Reference norm for the stopping test.
  double ref = normb;
  if (opt.norm == PcgNorm::Preconditioned) {
    Vec b(rhs.begin(), rhs.end());
    if (opt.deflate_constants) remove_mean(b);
    apply_m(b, z);
    ref = std::sqrt(std::max(dot(b, z), 0.0));
    if (ref == 0.0) ref = normb;
  }
  auto converged = [&](double rnorm, double rz) {
    const double m = opt.norm == PcgNorm::Preconditioned ? std::sqrt(std::max(rz, 0.0)) : rnorm;
    res.stop_measure = m / ref;
    return m <= opt.rel_tol * ref;
  };

  A(res.x, q);
  for (size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  if (opt.deflate_constants) remove_mean(r);

  double rnorm = norm2(r);
  res.rel_residual = rnorm / normb;
  if (opt.record_history) res.residual_history.push_back(rnorm);
  apply_m(r, z);
  double rz = dot(r, z);
  if (opt.record_history) res.precond_residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
  if (converged(rnorm, rz)) return res;

  p = z;
  for (int k = 1; k <= opt.max_iter; ++k) {
    A(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw PcgError("pcg: operator is not positive on the search direction", res.x, res.rel_residual);
    const double alpha = rz / pq;
    for (size_t i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (opt.deflate_constants) remove_mean(r);
    rnorm = norm2(r);
    res.iterations = k;
    res.rel_residual = rnorm / normb;
    if (opt.record_history) res.residual_history.push_back(rnorm);
    apply_m(r, z);
    const double rz_new = dot(r, z);
    if (opt.record_history) res.precond_residual_history.push_back(std::sqrt(std::max(rz_new, 0.0)));
    if (converged(rnorm, rz_new)) return res;
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw PcgError("pcg: no convergence within max_iter", res.x, res.rel_residual);
}

IcholFactor ichol(const Csr& A, double diag_boost, double drop_tol) {
  if (diag_boost < 0.0 || drop_tol < 0.0) throw std::invalid_argument("ichol: negative boost or drop tolerance");
  const int n = A.n;
  IcholFactor f;
  f.n = n;
  f.diag_boost = diag_boost;
  f.drop_tol = drop_tol;
  f.colptr.assign(1, 0);

  // pending[i] holds (k, L(i,k)) for finished columns k < i
  std::vector<std::vector<std::pair<int, double>>> pending(n);
  std::vector<int> cursor(n, 0);
  Vec w(n, 0.0);
  std::vector<char> used(n, 0);
  std::vector<int> nz;

  for (int j = 0; j < n; ++j) {
    nz.clear();
    double colnorm = 0.0;
    for (int k = A.ptr[j]; k < A.ptr[j + 1]; ++k) {
      const int i = A.col[k];
      if (i < j) continue;
      colnorm += std::abs(A.val[k]);
      w[i] = (i == j) ? A.val[k] * (1.0 + diag_boost) : A.val[k];
      if (!used[i]) {
        used[i] = 1;
        nz.push_back(i);
      }
    }
    if (!used[j]) {
      used[j] = 1;
      nz.push_back(j);
    }
    for (const auto& [k, ljk] : pending[j]) {
      // column k from row j downwards
      int c = cursor[k];
      const int end = f.colptr[k + 1];
      while (c < end && f.row[c] < j) ++c;
      cursor[k] = c;
      for (; c < end; ++c) {
        const int i = f.row[c];
        w[i] -= f.val[c] * ljk;
        if (!used[i]) {
          used[i] = 1;
          nz.push_back(i);
        }
      }
    }
    pending[j].clear();
    pending[j].shrink_to_fit();
    const double d = w[j];
    if (!(d > 0.0))
      throw std::runtime_error("ichol: non-positive pivot at column " + std::to_string(j) +
                               "; increase the diagonal boost");
    const double ljj = std::sqrt(d);
    std::sort(nz.begin(), nz.end());
    f.row.push_back(j);
    f.val.push_back(ljj);
    const double thresh = drop_tol * colnorm;
    for (int i : nz) {
      if (i != j) {
        const double v = w[i] / ljj;
        if (v != 0.0 && std::abs(v) >= thresh) {
          f.row.push_back(i);
          f.val.push_back(v);
          pending[i].emplace_back(j, v);
        }
      }
      w[i] = 0.0;
      used[i] = 0;
    }
    f.colptr.push_back(static_cast<int>(f.row.size()));
    cursor[j] = f.colptr[j];
  }
  return f;
}

void IcholFactor::apply(std::span<const double> r, std::span<double> z) const {
  Vec y(r.begin(), r.end());
  for (int j = 0; j < n; ++j) {
    y[j] /= val[colptr[j]];
    const double yj = y[j];
    for (int c = colptr[j] + 1; c < colptr[j + 1]; ++c) y[row[c]] -= val[c] * yj;
  }
  for (int j = n - 1; j >= 0; --j) {
    double s = y[j];
    for (int c = colptr[j] + 1; c < colptr[j + 1]; ++c) s -= val[c] * z[row[c]];
    z[j] = s / val[colptr[j]];
  }
}

Vec IcholFactor::to_dense() const {
  Vec d(static_cast<size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int c = colptr[j]; c < colptr[j + 1]; ++c) d[static_cast<size_t>(row[c]) * n + j] = val[c];
  return d;
}

}  // namespace sbpwave
