#include "sbpwave/banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sbpwave {

SymBand::SymBand(int n, int bw) : n_(n), bw_(bw), lo_(static_cast<size_t>(n) * (bw + 1), 0.0) {
  if (n < 1 || bw < 0) throw std::invalid_argument("SymBand: bad shape");
}

double& SymBand::at(int i, int j) {
  if (j > i) std::swap(i, j);
  if (i - j > bw_) throw std::out_of_range("SymBand: entry outside band");
  return lo_[static_cast<size_t>(i) * (bw_ + 1) + (j - i + bw_)];
}

double SymBand::operator()(int i, int j) const {
  if (j > i) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return lo_[static_cast<size_t>(i) * (bw_ + 1) + (j - i + bw_)];
}

void SymBand::set(int i, int j, double v) { at(i, j) = v; }
void SymBand::add(int i, int j, double v) { at(i, j) += v; }

void SymBand::matvec(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) y[i] = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double* row = &lo_[static_cast<size_t>(i) * (bw_ + 1)];
    const int j0 = std::max(0, i - bw_);
    double s = 0.0;
    for (int j = j0; j < i; ++j) {
      const double a = row[j - i + bw_];
      s += a * x[j];
      y[j] += a * x[i];
    }
    y[i] += s + row[bw_] * x[i];
  }
}

void SymBand::scale(double s) {
  for (double& v : lo_) v *= s;
}

double SymBand::max_abs() const {
  double m = 0.0;
  for (double v : lo_) m = std::max(m, std::abs(v));
  return m;
}

Vec SymBand::to_dense() const {
  Vec d(static_cast<size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - bw_); j <= i; ++j) {
      const double v = (*this)(i, j);
      d[static_cast<size_t>(i) * n_ + j] = v;
      d[static_cast<size_t>(j) * n_ + i] = v;
    }
  return d;
}

Band::Band(int n, int bw) : n_(n), bw_(bw), a_(static_cast<size_t>(n) * (2 * bw + 1), 0.0) {
  if (n < 1 || bw < 0) throw std::invalid_argument("Band: bad shape");
}

double Band::operator()(int i, int j) const {
  if (std::abs(i - j) > bw_) return 0.0;
  return a_[static_cast<size_t>(i) * (2 * bw_ + 1) + (j - i + bw_)];
}

void Band::set(int i, int j, double v) {
  if (std::abs(i - j) > bw_) throw std::out_of_range("Band: entry outside band");
  a_[static_cast<size_t>(i) * (2 * bw_ + 1) + (j - i + bw_)] = v;
}

void Band::add(int i, int j, double v) {
  if (std::abs(i - j) > bw_) throw std::out_of_range("Band: entry outside band");
  a_[static_cast<size_t>(i) * (2 * bw_ + 1) + (j - i + bw_)] += v;
}

void Band::matvec(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    const double* row = &a_[static_cast<size_t>(i) * (2 * bw_ + 1)];
    const int j0 = std::max(0, i - bw_);
    const int j1 = std::min(n_ - 1, i + bw_);
    double s = 0.0;
    for (int j = j0; j <= j1; ++j) s += row[j - i + bw_] * x[j];
    y[i] = s;
  }
}

Vec Band::to_dense() const {
  Vec d(static_cast<size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j)
      d[static_cast<size_t>(i) * n_ + j] = (*this)(i, j);
  return d;
}

Csr Csr::from_triplets(int n, std::vector<Triplet> t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Csr m;
  m.n = n;
  m.ptr.assign(n + 1, 0);
  for (size_t k = 0; k < t.size();) {
    const int r = t[k].row;
    const int c = t[k].col;
    if (r < 0 || r >= n || c < 0 || c >= n) throw std::out_of_range("Csr: triplet outside matrix");
    double v = 0.0;
    while (k < t.size() && t[k].row == r && t[k].col == c) v += t[k++].value;
    m.col.push_back(c);
    m.val.push_back(v);
    m.ptr[r + 1]++;
  }
  for (int i = 0; i < n; ++i) m.ptr[i + 1] += m.ptr[i];
  return m;
}

void Csr::matvec(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

double Csr::at(int i, int j) const {
  auto b = col.begin() + ptr[i];
  auto e = col.begin() + ptr[i + 1];
  auto it = std::lower_bound(b, e, j);
  return (it != e && *it == j) ? val[it - col.begin()] : 0.0;
}

int Csr::bandwidth() const {
  int bw = 0;
  for (int i = 0; i < n; ++i)
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) bw = std::max(bw, std::abs(i - col[k]));
  return bw;
}

Vec Csr::to_dense() const {
  Vec d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) d[static_cast<size_t>(i) * n + col[k]] = val[k];
  return d;
}

SymBand Csr::to_sym_band() const {
  SymBand b(n, bandwidth());
  for (int i = 0; i < n; ++i)
    for (int k = ptr[i]; k < ptr[i + 1]; ++k)
      if (col[k] <= i) b.set(i, col[k], val[k]);
  return b;
}

}  // namespace sbpwave
