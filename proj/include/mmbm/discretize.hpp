#ifndef MMBM_DISCRETIZE_HPP
#define MMBM_DISCRETIZE_HPP

#include <string>

#include "mmbm/cr.hpp"
#include "mmbm/ddouble.hpp"
#include "mmbm/model.hpp"

namespace mmbm {

enum class Mode { Auto, PosV, Shifted, SdaLike };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Auto: return "auto";
    case Mode::PosV: return "posv";
    case Mode::Shifted: return "shifted";
    case Mode::SdaLike: return "sda";
  }
  return "?";
}

struct DiscretizeOptions {
  // Compute the guarded diagonal subtractions of C in double-double even when
  // the pipeline runs in double.  The step constraints already make those
  // subtractions safe, so this is off by default.
  bool high_precision_diagonal = false;
};

template <typename T>
struct Discretization {
  double h = 0.0;
  Mode mode = Mode::PosV;
  int n1 = 0, n2 = 0, n3 = 0;
  QbdTriple<T> triple;

  int head() const { return n1 + n2; }
};

namespace detail {

// pos - neg with the h-constraints guaranteeing pos >= 2 neg >= 0.
template <typename T>
T guarded_diff(T pos, T neg, bool high_precision, const char* what) {
  T r;
  if (high_precision) {
    DDouble p(scalar_traits<T>::to_double(pos));
    DDouble q(scalar_traits<T>::to_double(neg));
    r = scalar_traits<T>::from_double(scalar_traits<DDouble>::to_double(p - q));
    if constexpr (std::is_same_v<T, DDouble>) r = pos - neg;
  } else {
    r = pos - neg;
  }
  if (r < T(0))
    fail(ErrorCode::HViolation, std::string(what) + " went negative; h is too large");
  return r;
}

}  // namespace detail

// Plain map y = 1 + hz: A = V/h^2, B = 2V/h^2 + D/h (diagonal, carried by the
// triplet), C = V/h^2 + D/h + Q.  Requires all variances positive.
template <typename T>
Discretization<T> discretize_posv(const MmbmModel& m, double h, const Vec<T>& u,
                                  DiscretizeOptions opt = {}) {
  if (m.n2 + m.n3 > 0)
    fail(ErrorCode::HViolation, "posv discretization needs diag(V) > 0");
  const int n = m.n;
  const T hinv = T(1) / scalar_traits<T>::from_double(h);
  const T hinv2 = hinv * hinv;

  Discretization<T> d;
  d.h = h;
  d.mode = Mode::PosV;
  d.n1 = m.n1;
  d.n2 = m.n2;
  d.n3 = m.n3;
  QbdTriple<T>& q = d.triple;
  q.n = n;
  q.A = Matrix<T>(n, n);
  q.C = Matrix<T>(n, n);
  q.offB = Matrix<T>(n, n);
  for (int i = 0; i < n; ++i) {
    const T vi = scalar_traits<T>::from_double(m.v[i]);
    const T di = scalar_traits<T>::from_double(m.d[i]);
    q.A(i, i) = hinv2 * vi;
    T pos = hinv2 * vi;
    T neg(0);
    if (m.d[i] >= 0.0)
      pos += hinv * di;
    else
      neg += hinv * (-di);
    neg += scalar_traits<T>::from_double(-m.Q(i, i));
    q.C(i, i) = detail::guarded_diff(pos, neg, opt.high_precision_diagonal, "diag(C)");
    for (int j = 0; j < n; ++j)
      if (j != i) q.C(i, j) = scalar_traits<T>::from_double(m.Q(i, j));
  }
  q.nu = ones<T>(n);
  q.u = u;
  return d;
}

// Shifted variant: the zero-variance negative-drift block is moved off
// infinity first, which zeroes the last block column of C exactly.
template <typename T>
Discretization<T> discretize_shifted(const MmbmModel& m, double h, const Vec<T>& u,
                                     DiscretizeOptions opt = {}) {
  const int n = m.n, n1 = m.n1, n2 = m.n2;
  const int e3 = n1 + n2;  // first index of the E3 block
  const T hinv = T(1) / scalar_traits<T>::from_double(h);
  const T hinv2 = hinv * hinv;

  Discretization<T> d;
  d.h = h;
  d.mode = Mode::Shifted;
  d.n1 = m.n1;
  d.n2 = m.n2;
  d.n3 = m.n3;
  QbdTriple<T>& q = d.triple;
  q.n = n;
  q.A = Matrix<T>(n, n);
  q.C = Matrix<T>(n, n);
  q.offB = Matrix<T>(n, n);

  for (int i = 0; i < n; ++i) {
    const T vi = scalar_traits<T>::from_double(m.v[i]);
    const T di = scalar_traits<T>::from_double(m.d[i]);
    if (i < e3) {
      // A diagonal: V/h^2 on E1, zero on E2.
      if (i < n1) q.A(i, i) = hinv2 * vi;
      // C row: guarded diagonal, Q off-diagonal outside E3, zero on E3.
      T pos = i < n1 ? hinv2 * vi : T(0);
      T neg(0);
      if (m.d[i] >= 0.0)
        pos += hinv * di;
      else
        neg += hinv * (-di);
      neg += scalar_traits<T>::from_double(-m.Q(i, i));
      q.C(i, i) = detail::guarded_diff(pos, neg, opt.high_precision_diagonal, "diag(C)");
      for (int j = 0; j < e3; ++j)
        if (j != i) q.C(i, j) = scalar_traits<T>::from_double(m.Q(i, j));
      // offdiag(B): -Q couplings into E3.
      for (int j = e3; j < n; ++j) q.offB(i, j) = -scalar_traits<T>::from_double(m.Q(i, j));
    } else {
      // E3 row: A = -D3/h > 0, B = -D3/h - Q33 (diagonal implied), C = [Q31 Q32 0].
      q.A(i, i) = hinv * (-di);
      for (int j = 0; j < e3; ++j) q.C(i, j) = scalar_traits<T>::from_double(m.Q(i, j));
      for (int j = e3; j < n; ++j)
        if (j != i) q.offB(i, j) = -scalar_traits<T>::from_double(m.Q(i, j));
    }
  }
  q.nu = ones<T>(n);
  q.u = u;
  return d;
}

// Doubling-style variant: the plain coefficients are postmultiplied by the
// inverse of the block lower triangular M-matrix in (offdiag(M), 1, wM) form
// and then reshuffled, which plants exact identity blocks in B and zeroes the
// last block column of C.  The right kernel vector of the resulting triple is
// nu = M 1 = wM rather than the all-ones vector.
template <typename T>
Discretization<T> discretize_sda(const MmbmModel& m, double h, const Vec<T>& u,
                                 DiscretizeOptions opt = {}) {
  const int n = m.n, n1 = m.n1, n2 = m.n2, n3 = m.n3;
  const int e2 = n1, e3 = n1 + n2;
  const T hinv = T(1) / scalar_traits<T>::from_double(h);
  const T hinv2 = hinv * hinv;

  TripletRep<T> tm;
  tm.n = n;
  tm.off = Matrix<T>(n, n);
  tm.v = ones<T>(n);
  tm.w.resize(n);
  for (int i = 0; i < n; ++i) {
    if (i < e2)
      tm.w[i] = hinv2 * scalar_traits<T>::from_double(m.v[i]);
    else if (i < e3)
      tm.w[i] = hinv * scalar_traits<T>::from_double(m.d[i]);
    else {
      tm.w[i] = hinv * scalar_traits<T>::from_double(-m.d[i]);
      for (int j = 0; j < n; ++j)
        if (j != i) tm.off(i, j) = -scalar_traits<T>::from_double(m.Q(i, j));
    }
  }
  GthFactors<T> fm = gth_factor(tm);

  // Rows of the plain C over E1 and E2, then divided by M on the right.
  Matrix<T> crows(e3, n);
  for (int i = 0; i < e3; ++i) {
    for (int j = 0; j < n; ++j)
      if (j != i) crows(i, j) = scalar_traits<T>::from_double(m.Q(i, j));
    T pos = i < n1 ? hinv2 * scalar_traits<T>::from_double(m.v[i]) : T(0);
    T neg(0);
    if (m.d[i] >= 0.0)
      pos += hinv * scalar_traits<T>::from_double(m.d[i]);
    else
      neg += hinv * scalar_traits<T>::from_double(-m.d[i]);
    neg += scalar_traits<T>::from_double(-m.Q(i, i));
    crows(i, i) = detail::guarded_diff(pos, neg, opt.high_precision_diagonal, "diag(C)");
  }
  Matrix<T> chat = kernels::lu_solve_rows(fm.f, crows);

  // Rows of the plain B over E1 (diagonal 2V/h^2 + D/h) and over E3 (-D3/h).
  Matrix<T> b1rows(n1, n);
  for (int i = 0; i < n1; ++i) {
    T pos = (T(2) * hinv2) * scalar_traits<T>::from_double(m.v[i]);
    T neg(0);
    if (m.d[i] >= 0.0)
      pos += hinv * scalar_traits<T>::from_double(m.d[i]);
    else
      neg += hinv * scalar_traits<T>::from_double(-m.d[i]);
    b1rows(i, i) = detail::guarded_diff(pos, neg, opt.high_precision_diagonal, "diag(B)");
  }
  Matrix<T> b1hat = kernels::lu_solve_rows(fm.f, b1rows);
  Matrix<T> b3rows(n3, n);
  for (int i = 0; i < n3; ++i)
    b3rows(i, e3 + i) = hinv * scalar_traits<T>::from_double(-m.d[e3 + i]);
  Matrix<T> b3hat = kernels::lu_solve_rows(fm.f, b3rows);

  // M is block lower triangular, so B11 M^{-1} keeps its support on E1; the
  // solve returns those zeros exactly.
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i && !(b1hat(i, j) == T(0)))
        fail(ErrorCode::Internal, "doubling-style B11 block lost its diagonal structure");

  Discretization<T> d;
  d.h = h;
  d.mode = Mode::SdaLike;
  d.n1 = n1;
  d.n2 = n2;
  d.n3 = n3;
  QbdTriple<T>& q = d.triple;
  q.n = n;
  q.A = Matrix<T>(n, n);
  q.C = Matrix<T>(n, n);
  q.offB = Matrix<T>(n, n);

  for (int i = 0; i < n1; ++i) q.A(i, i) = T(1);
  for (int i = 0; i < n3; ++i)
    for (int j = 0; j < n3; ++j) q.A(e3 + i, e3 + j) = b3hat(i, e3 + j);

  // offdiag(B-check): block (1,3) = -C13, (2,3) = -C23, (3,1) = -B31,
  // (3,2) = -B32; blocks (2,2) and (3,3) are exact identities.
  for (int i = 0; i < e3; ++i)
    for (int j = e3; j < n; ++j) q.offB(i, j) = -chat(i, j);
  for (int i = 0; i < n3; ++i)
    for (int j = 0; j < e3; ++j) q.offB(e3 + i, j) = -b3hat(i, j);

  for (int i = 0; i < e3; ++i)
    for (int j = 0; j < e3; ++j) q.C(i, j) = chat(i, j);

  q.nu = tm.w;  // M 1, all entries positive
  q.u = u;
  return d;
}

// Mode resolution used by the solver: plain map when every state has a
// Brownian component, shifted otherwise; the doubling variant only on request.
inline Mode resolve_mode(const MmbmModel& m, Mode requested) {
  if (requested != Mode::Auto) return requested;
  return (m.n2 + m.n3) == 0 ? Mode::PosV : Mode::Shifted;
}

template <typename T>
Discretization<T> discretize(const MmbmModel& m, double h, const Vec<T>& u, Mode mode,
                             DiscretizeOptions opt = {}) {
  switch (resolve_mode(m, mode)) {
    case Mode::PosV: return discretize_posv<T>(m, h, u, opt);
    case Mode::Shifted: return discretize_shifted<T>(m, h, u, opt);
    case Mode::SdaLike: return discretize_sda<T>(m, h, u, opt);
    case Mode::Auto: break;
  }
  fail(ErrorCode::Internal, "unresolved mode");
}

}  // namespace mmbm

#endif  // MMBM_DISCRETIZE_HPP
