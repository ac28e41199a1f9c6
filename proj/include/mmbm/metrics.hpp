#ifndef MMBM_METRICS_HPP
#define MMBM_METRICS_HPP

#include "mmbm/ddouble.hpp"
#include "mmbm/matrix.hpp"
#include "mmbm/model.hpp"

namespace mmbm {

inline DDouble to_dd(double x) { return DDouble(x); }
inline DDouble to_dd(DDouble x) { return x; }

template <typename T>
Matrix<DDouble> promote(const Matrix<T>& m) {
  Matrix<DDouble> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = to_dd(m(i, j));
  return r;
}

// Spectral norm by power iteration on A^T A; the start vector is a fixed
// slightly tilted ones vector so results are deterministic.
template <typename T>
T spectral_norm(const Matrix<T>& a, int max_iter = 100) {
  if (a.empty()) return T(0);
  const int n = a.cols();
  Vec<T> x(n);
  for (int j = 0; j < n; ++j) x[j] = T(1) + T(static_cast<double>(j)) / T(8.0 * n);
  T sigma(0);
  for (int it = 0; it < max_iter; ++it) {
    Vec<T> ax = kernels::matvec(a, x);
    Vec<T> y = kernels::vecmat(ax, a);  // A^T (A x) as a row-product
    T norm(0);
    for (const T& v : y) norm += v * v;
    norm = scalar_traits<T>::sqrt(norm);
    if (norm == T(0)) return T(0);
    T prev = sigma;
    T xx(0), xy(0);
    for (int j = 0; j < n; ++j) {
      xx += x[j] * x[j];
      xy += x[j] * y[j];
    }
    sigma = scalar_traits<T>::sqrt(scalar_traits<T>::abs(xy / xx));
    for (int j = 0; j < n; ++j) x[j] = y[j] / norm;
    if (it > 4 && scalar_traits<T>::abs(sigma - prev) <=
                      T(1e-12) * (sigma + T(1e-300)))
      break;
  }
  return sigma;
}

// Relative residual ||X^2 U V - X U D + U Q|| / (||U|| (||V|| + ||D|| + ||Q||))
// of the left invariant pair (X, U), U = [I Psi], X = P - s I.  The numerator
// is evaluated in double-double regardless of the working precision so that
// the metric reflects the solution, not the evaluation.
template <typename T>
double pair_residual(const Matrix<T>& p, T s, const Matrix<T>& psi, const MmbmModel& m) {
  const int l = p.rows();
  const int n = m.n;
  Matrix<DDouble> x = promote(p);
  for (int i = 0; i < l; ++i) x(i, i) = x(i, i) - to_dd(s);
  Matrix<DDouble> u(l, n);
  for (int i = 0; i < l; ++i) {
    u(i, i) = DDouble(1.0);
    for (int j = 0; j < n - l; ++j) u(i, l + j) = to_dd(psi(i, j));
  }
  Matrix<DDouble> xu = kernels::matmul(x, u);
  Matrix<DDouble> xxu = kernels::matmul(x, xu);
  Matrix<DDouble> q = promote(m.Q);
  Matrix<DDouble> uq = kernels::matmul(u, q);
  Matrix<DDouble> num(l, n);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < n; ++j)
      num(i, j) = xxu(i, j) * DDouble(m.v[j]) - xu(i, j) * DDouble(m.d[j]) + uq(i, j);

  DDouble nn = spectral_norm(num);
  DDouble un = spectral_norm(u);
  double maxv = 0.0, maxd = 0.0;
  for (int j = 0; j < n; ++j) {
    maxv = std::max(maxv, std::fabs(m.v[j]));
    maxd = std::max(maxd, std::fabs(m.d[j]));
  }
  DDouble qn = spectral_norm(q);
  DDouble den = un * (DDouble(maxv) + DDouble(maxd) + qn);
  if (den == DDouble(0.0)) return 0.0;
  return scalar_traits<DDouble>::to_double(nn / den);
}

}  // namespace mmbm

#endif  // MMBM_METRICS_HPP
