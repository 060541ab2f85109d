#pragma once

// Dense square-or-rectangular matrices over double or Rational entries.
// basis_tag is free-form bookkeeping for the index set an operator lives on
// (conjugate factors of tensor products look identical as real matrices).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "explab/errors.hpp"
#include "explab/rational.hpp"

namespace explab {

inline constexpr int kDenseDimCap = 4000;

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(int rows, int cols, T init = T())
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), init) {
    if (rows < 0 || cols < 0) throw std::domain_error("DenseMatrix: negative size");
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  std::string basis_tag;

  DenseMatrix transpose() const {
    DenseMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  DenseMatrix operator+(const DenseMatrix& o) const {
    require_same_shape(o);
    DenseMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
  }

  DenseMatrix operator-(const DenseMatrix& o) const {
    require_same_shape(o);
    DenseMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  DenseMatrix operator*(const DenseMatrix& o) const {
    if (cols_ != o.rows_) throw std::domain_error("DenseMatrix: shape mismatch in product");
    DenseMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const T aik = (*this)(i, k);
        if (aik == T(0)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  DenseMatrix scaled(const T& factor) const {
    DenseMatrix r = *this;
    for (auto& x : r.data_) x *= factor;
    return r;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::domain_error("DenseMatrix: vector size mismatch");
    std::vector<T> y(static_cast<std::size_t>(rows_), T(0));
    for (int i = 0; i < rows_; ++i) {
      T s = T(0);
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s;
    }
    return y;
  }

  T trace() const {
    if (!is_square()) throw std::domain_error("DenseMatrix: trace of non-square matrix");
    T s = T(0);
    for (int i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
  }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  void require_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::domain_error("DenseMatrix: shape mismatch");
  }

  int rows_, cols_;
  std::vector<T> data_;
};

using Mat = DenseMatrix<double>;
using MatQ = DenseMatrix<Rational>;

inline Mat to_double(const MatQ& m) {
  Mat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  r.basis_tag = m.basis_tag;
  return r;
}

inline double max_abs(const Mat& m) {
  double v = 0;
  for (const double x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

inline double frobenius_norm(const Mat& m) {
  double s = 0;
  for (const double x : m.data()) s += x * x;
  return std::sqrt(s);
}

inline double max_asymmetry(const Mat& m) {
  if (!m.is_square()) throw std::domain_error("max_asymmetry: non-square matrix");
  double v = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j) - m(j, i)));
  return v;
}

// Kronecker product on the row-major composite index (x, y) -> x*ny + y.
template <typename T>
DenseMatrix<T> tensor(const DenseMatrix<T>& a, const DenseMatrix<T>& b, int dim_cap = kDenseDimCap) {
  const std::int64_t rows = static_cast<std::int64_t>(a.rows()) * b.rows();
  const std::int64_t cols = static_cast<std::int64_t>(a.cols()) * b.cols();
  if (rows > dim_cap || cols > dim_cap)
    throw resource_error("tensor: product dimension " + std::to_string(rows) + " exceeds cap " + std::to_string(dim_cap));
  DenseMatrix<T> r(static_cast<int>(rows), static_cast<int>(cols));
  for (int ia = 0; ia < a.rows(); ++ia)
    for (int ja = 0; ja < a.cols(); ++ja) {
      const T v = a(ia, ja);
      if (v == T(0)) continue;
      for (int ib = 0; ib < b.rows(); ++ib)
        for (int jb = 0; jb < b.cols(); ++jb) {
          if (b(ib, jb) == T(0)) continue;
          r(ia * b.rows() + ib, ja * b.cols() + jb) = v * b(ib, jb);
        }
    }
  if (!a.basis_tag.empty() || !b.basis_tag.empty()) r.basis_tag = a.basis_tag + "(x)" + b.basis_tag;
  return r;
}

}  // namespace explab
