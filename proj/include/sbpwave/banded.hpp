#pragma once

/// @file banded.hpp
/// Band and compressed-row containers used by the operators and solvers.

#include <span>
#include <vector>

namespace sbpwave {

using Vec = std::vector<double>;

/// Symmetric band matrix. Only the lower band is stored.
class SymBand {
 public:
  SymBand() = default;
  SymBand(int n, int bw);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  /// Entry (i, j) for any i, j; zero outside the band.
  double operator()(int i, int j) const;
  void set(int i, int j, double v);
  void add(int i, int j, double v);

  /// y = A x
  void matvec(std::span<const double> x, std::span<double> y) const;
  void scale(double s);
  double max_abs() const;
  /// Row-major dense copy.
  Vec to_dense() const;

 private:
  double& at(int i, int j);
  int n_ = 0;
  int bw_ = 0;
  Vec lo_;
};

/// Square band matrix with equal lower and upper bandwidth.
class Band {
 public:
  Band() = default;
  Band(int n, int bw);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }
  double operator()(int i, int j) const;
  void set(int i, int j, double v);
  void add(int i, int j, double v);
  void matvec(std::span<const double> x, std::span<double> y) const;
  Vec to_dense() const;

 private:
  int n_ = 0;
  int bw_ = 0;
  Vec a_;
};

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix, columns sorted within each row.
struct Csr {
  int n = 0;
  std::vector<int> ptr;
  std::vector<int> col;
  Vec val;

  /// Duplicate entries are summed.
  static Csr from_triplets(int n, std::vector<Triplet> t);

  void matvec(std::span<const double> x, std::span<double> y) const;
  double at(int i, int j) const;
  int nnz() const { return static_cast<int>(val.size()); }
  /// Largest |i - j| over stored entries.
  int bandwidth() const;
  Vec to_dense() const;
  SymBand to_sym_band() const;
};

}  // namespace sbpwave
