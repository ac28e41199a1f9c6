#ifndef MMBM_TEST_UTIL_HPP
#define MMBM_TEST_UTIL_HPP

#include <cmath>

#include "mmbm/cr.hpp"
#include "mmbm/rng.hpp"

namespace mmbm::testutil {

// Random QBD triple satisfying the sign assumptions with nu = 1: A and C are
// |randn| matrices scaled by ca/cc, offdiag(B) random nonpositive, and B's
// implied diagonal absorbs the row sums so that (A - B + C) 1 = 0 exactly.
inline QbdTriple<double> random_qbd(int n, uint64_t seed, double ca = 1.0, double cc = 1.0) {
  RandnStream rs(seed);
  QbdTriple<double> q;
  q.n = n;
  q.A = Matrix<double>(n, n);
  q.C = Matrix<double>(n, n);
  q.offB = Matrix<double>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      q.A(i, j) = ca * std::fabs(rs.next());
      q.C(i, j) = cc * std::fabs(rs.next());
      if (i != j) q.offB(i, j) = -std::fabs(rs.next());
    }
  q.nu = ones<double>(n);

  // u from the singular M-matrix B - A - C with the triplet (off, 1, 0).
  TripletRep<double> t;
  t.n = n;
  t.off = Matrix<double>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) t.off(i, j) = q.offB(i, j) - q.A(i, j) - q.C(i, j);
  t.v = ones<double>(n);
  t.w = Vec<double>(n, 0.0);
  q.u = perron_left(t);
  return q;
}

// Random triple with drift bounded away from zero (regenerates until the
// relative drift clears the cut).
inline QbdTriple<double> random_qbd_nonnull(int n, uint64_t seed, double cut = 0.05) {
  for (uint64_t k = 0;; ++k) {
    double ca = 1.0, cc = 1.0;
    if (k % 2 == 0)
      cc = 1.0 + 0.5 * (k % 5);
    else
      ca = 1.0 + 0.5 * (k % 5);
    QbdTriple<double> q = random_qbd(n, seed + 7919 * k, ca, cc);
    auto [d, rec] = drift_d(q);
    double scale = 0.0;
    Vec<double> cn = kernels::matvec(q.C, q.nu), an = kernels::matvec(q.A, q.nu);
    for (int i = 0; i < n; ++i) scale += q.u[i] * (cn[i] + an[i]);
    if (std::fabs(d) > cut * scale) return q;
    (void)rec;
  }
}

// Exactly null-recurrent triple: C = A (entrywise), so u (C - A) 1 = 0.
inline QbdTriple<double> null_recurrent_qbd(int n, uint64_t seed) {
  QbdTriple<double> q = random_qbd(n, seed);
  q.C = q.A;
  TripletRep<double> t;
  t.n = n;
  t.off = Matrix<double>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) t.off(i, j) = q.offB(i, j) - 2.0 * q.A(i, j);
  t.v = ones<double>(n);
  t.w = Vec<double>(n, 0.0);
  q.u = perron_left(t);
  return q;
}

// Scalar triple (n = 1) for closed-form checks.
inline QbdTriple<double> scalar_qbd(double a, double b, double c) {
  QbdTriple<double> q;
  q.n = 1;
  q.A = Matrix<double>(1, 1);
  q.C = Matrix<double>(1, 1);
  q.offB = Matrix<double>(1, 1);
  q.A(0, 0) = a;
  q.C(0, 0) = c;
  q.nu = {1.0};
  q.u = {1.0};
  (void)b;  // b is implied by a + c through the triplet
  return q;
}

template <typename T>
QbdTriple<T> promote_qbd(const QbdTriple<double>& q) {
  return QbdTriple<T>{q.n, to_scalar<T>(q.A), to_scalar<T>(q.C), to_scalar<T>(q.offB),
                      to_scalar<T>(q.nu), to_scalar<T>(q.u)};
}

}  // namespace mmbm::testutil

#endif  // MMBM_TEST_UTIL_HPP
