#ifndef MMBM_KERNELS_HPP
#define MMBM_KERNELS_HPP

#include "mmbm/matrix.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmbm {
namespace kernels {

// Runtime switch between the serial reference kernels and the OpenMP ones.
// Work is always split by output row (or output column for column solves),
// so every output entry is accumulated in exactly the same order in both
// paths and the parallel results are bit-identical to the serial ones.
struct Config {
  bool parallel = true;
  int threshold = 48;       // smallest leading dimension worth forking for
  int gth_threshold = 256;  // rank-1 elimination steps are finer grained
};

inline Config& config() {
  static Config c;
  return c;
}

inline bool use_parallel(int dim) {
#ifdef _OPENMP
  return config().parallel && dim >= config().threshold;
#else
  (void)dim;
  return false;
#endif
}

// ---------------------------------------------------------------------------
// C = A * B
// ---------------------------------------------------------------------------

template <typename T>
void matmul_serial(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  const int m = a.rows(), k = a.cols(), n = b.cols();
  for (int i = 0; i < m; ++i) {
    T* ci = c.row_ptr(i);
    for (int j = 0; j < n; ++j) ci[j] = T(0);
    for (int l = 0; l < k; ++l) {
      const T ail = a(i, l);
      const T* bl = b.row_ptr(l);
      for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

template <typename T>
void matmul_parallel(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  const int m = a.rows(), k = a.cols(), n = b.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    T* ci = c.row_ptr(i);
    for (int j = 0; j < n; ++j) ci[j] = T(0);
    for (int l = 0; l < k; ++l) {
      const T ail = a(i, l);
      const T* bl = b.row_ptr(l);
      for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimensionMismatch, "matmul shapes");
  Matrix<T> c(a.rows(), b.cols());
  if (use_parallel(a.rows()))
    matmul_parallel(a, b, c);
  else
    matmul_serial(a, b, c);
  return c;
}

// y = A x
template <typename T>
Vec<T> matvec(const Matrix<T>& a, const Vec<T>& x) {
  Vec<T> y(a.rows(), T(0));
  for (int i = 0; i < a.rows(); ++i) {
    T s(0);
    const T* ai = a.row_ptr(i);
    for (int j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

// y = x A (row vector times matrix)
template <typename T>
Vec<T> vecmat(const Vec<T>& x, const Matrix<T>& a) {
  Vec<T> y(a.cols(), T(0));
  for (int i = 0; i < a.rows(); ++i) {
    const T xi = x[i];
    const T* ai = a.row_ptr(i);
    for (int j = 0; j < a.cols(); ++j) y[j] += xi * ai[j];
  }
  return y;
}

// ---------------------------------------------------------------------------
// GTH elimination step.  F holds the factors in place: multipliers below the
// diagonal, pivot row above, pivots on the diagonal.  Step k divides column k
// by the pivot, pushes the pivot's share of w onto the remaining rows and
// applies the rank-1 update to the remaining off-diagonal entries only; the
// eliminated diagonal is carried implicitly by (v, w).
// ---------------------------------------------------------------------------

template <typename T>
void gth_step_rows_serial(Matrix<T>& f, Vec<T>& w, int k, T piv, T wk) {
  const int n = f.rows();
  const T* fk = f.row_ptr(k);
  for (int i = k + 1; i < n; ++i) {
    T* fi = f.row_ptr(i);
    const T m = fi[k] / piv;
    fi[k] = m;
    w[i] += (-m) * wk;
    for (int j = k + 1; j < n; ++j) {
      if (j == i) continue;
      fi[j] -= m * fk[j];
    }
  }
}

template <typename T>
void gth_step_rows_parallel(Matrix<T>& f, Vec<T>& w, int k, T piv, T wk) {
  const int n = f.rows();
  const T* fk = f.row_ptr(k);
#pragma omp parallel for schedule(static)
  for (int i = k + 1; i < n; ++i) {
    T* fi = f.row_ptr(i);
    const T m = fi[k] / piv;
    fi[k] = m;
    w[i] += (-m) * wk;
    for (int j = k + 1; j < n; ++j) {
      if (j == i) continue;
      fi[j] -= m * fk[j];
    }
  }
}

template <typename T>
void gth_step_rows(Matrix<T>& f, Vec<T>& w, int k, T piv, T wk) {
#ifdef _OPENMP
  if (config().parallel && f.rows() - k - 1 >= config().gth_threshold) {
    gth_step_rows_parallel(f, w, k, piv, wk);
    return;
  }
#endif
  gth_step_rows_serial(f, w, k, piv, wk);
}

// ---------------------------------------------------------------------------
// Triangular solves against the in-place factors.  Single right-hand sides
// are serial; the multi-RHS drivers fork across independent columns/rows.
// ---------------------------------------------------------------------------

// M x = b for one column b (may alias x).
template <typename T>
void lu_solve_one(const Matrix<T>& f, const T* b, T* x) {
  const int n = f.rows();
  // L y = b, unit lower triangular, multipliers <= 0.
  for (int i = 0; i < n; ++i) {
    T s = b[i];
    const T* fi = f.row_ptr(i);
    for (int k = 0; k < i; ++k) s -= fi[k] * x[k];
    x[i] = s;
  }
  // U x = y.
  for (int i = n - 1; i >= 0; --i) {
    T s = x[i];
    const T* fi = f.row_ptr(i);
    for (int j = i + 1; j < n; ++j) s -= fi[j] * x[j];
    x[i] = s / fi[i];
  }
}

// M^T x = b for one column b.
template <typename T>
void lu_solve_transpose_one(const Matrix<T>& f, const T* b, T* x) {
  const int n = f.rows();
  // U^T z = b, lower triangular with the pivots on the diagonal.
  for (int i = 0; i < n; ++i) {
    T s = b[i];
    for (int k = 0; k < i; ++k) s -= f(k, i) * x[k];
    x[i] = s / f(i, i);
  }
  // L^T x = z, unit upper triangular.
  for (int i = n - 1; i >= 0; --i) {
    T s = x[i];
    for (int k = i + 1; k < n; ++k) s -= f(k, i) * x[k];
    x[i] = s;
  }
}

// X solving M X = B, i.e. X = M^{-1} B, column by column.
template <typename T>
Matrix<T> lu_solve_columns(const Matrix<T>& f, const Matrix<T>& b) {
  const int n = f.rows(), p = b.cols();
  Matrix<T> bt = b.transpose();
  Matrix<T> xt(p, n);
  if (use_parallel(p)) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < p; ++c) lu_solve_one(f, bt.row_ptr(c), xt.row_ptr(c));
  } else {
    for (int c = 0; c < p; ++c) lu_solve_one(f, bt.row_ptr(c), xt.row_ptr(c));
  }
  return xt.transpose();
}

// X solving X M = B, i.e. X = B M^{-1}, row by row through M^T.
template <typename T>
Matrix<T> lu_solve_rows(const Matrix<T>& f, const Matrix<T>& b) {
  const int n = f.rows(), p = b.rows();
  Matrix<T> x(p, n);
  if (use_parallel(p)) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < p; ++r) lu_solve_transpose_one(f, b.row_ptr(r), x.row_ptr(r));
  } else {
    for (int r = 0; r < p; ++r) lu_solve_transpose_one(f, b.row_ptr(r), x.row_ptr(r));
  }
  return x;
}

}  // namespace kernels
}  // namespace mmbm

#endif  // MMBM_KERNELS_HPP
