#ifndef MMBM_MATRIX_HPP
#define MMBM_MATRIX_HPP

#include <cassert>
#include <initializer_list>
#include <vector>

#include "mmbm/ddouble.hpp"
#include "mmbm/errors.hpp"

namespace mmbm {

// Dense row-major matrix.  Problem sizes here are at most a few hundred, so
// no attempt is made at sparsity or blocking.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T value = T(0))
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, value) {}

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    a_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      assert(static_cast<int>(r.size()) == cols_);
      for (double x : r) a_.push_back(scalar_traits<T>::from_double(x));
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  T* row_ptr(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
  const T* row_ptr(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }

  std::vector<T>& data() { return a_; }
  const std::vector<T>& data() const { return a_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

template <typename T>
using Vec = std::vector<T>;

template <typename T>
Vec<T> ones(int n) {
  return Vec<T>(n, T(1));
}

template <typename T>
T max_abs(const Vec<T>& v) {
  T m(0);
  for (const T& x : v)
    if (scalar_traits<T>::abs(x) > m) m = scalar_traits<T>::abs(x);
  return m;
}

template <typename T>
T max_abs(const Matrix<T>& m) {
  T r(0);
  for (const T& x : m.data())
    if (scalar_traits<T>::abs(x) > r) r = scalar_traits<T>::abs(x);
  return r;
}

// Max row sum of |entries|.
template <typename T>
T inf_norm(const Matrix<T>& m) {
  T best(0);
  for (int i = 0; i < m.rows(); ++i) {
    T s(0);
    for (int j = 0; j < m.cols(); ++j) s += scalar_traits<T>::abs(m(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <typename T>
bool all_nonneg(const Matrix<T>& m) {
  for (const T& x : m.data())
    if (x < T(0)) return false;
  return true;
}

template <typename T>
bool all_nonneg(const Vec<T>& v) {
  for (const T& x : v)
    if (x < T(0)) return false;
  return true;
}

template <typename T>
Matrix<T> to_scalar(const Matrix<double>& m) {
  Matrix<T> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = scalar_traits<T>::from_double(m(i, j));
  return r;
}

template <typename T>
Vec<T> to_scalar(const Vec<double>& v) {
  Vec<T> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = scalar_traits<T>::from_double(v[i]);
  return r;
}

template <typename T>
Matrix<double> to_double(const Matrix<T>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = scalar_traits<T>::to_double(m(i, j));
  return r;
}

template <typename T>
Vec<double> to_double(const Vec<T>& v) {
  Vec<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = scalar_traits<T>::to_double(v[i]);
  return r;
}

}  // namespace mmbm

#endif  // MMBM_MATRIX_HPP
