#ifndef MMBM_CR_HPP
#define MMBM_CR_HPP

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mmbm/triplet.hpp"

namespace mmbm {

enum class Recurrence { PositiveRecurrent, NullRecurrent, Transient };

inline const char* recurrence_name(Recurrence r) {
  switch (r) {
    case Recurrence::PositiveRecurrent: return "positive-recurrent";
    case Recurrence::NullRecurrent: return "null-recurrent";
    case Recurrence::Transient: return "transient";
  }
  return "?";
}

// Quadratic QBD triple A - B y + C y^2 with A, C >= 0 and B an M-matrix.
// nu > 0 is a right vector with (A - B + C) nu = 0 and u > 0 the matching
// left Perron row vector; nu is all ones for the standard discretizations
// and a general positive vector for the doubling-style one.  B itself is
// carried as its off-diagonal only: (offdiag(B), nu, (A + C) nu) is a triplet
// representation for it, so its diagonal never has to be stored.
template <typename T>
struct QbdTriple {
  int n = 0;
  Matrix<T> A;
  Matrix<T> C;
  Matrix<T> offB;
  Vec<T> nu;
  Vec<T> u;
};

template <typename T>
TripletRep<T> b_triplet(const QbdTriple<T>& q, const Matrix<T>& a, const Matrix<T>& c,
                        const Matrix<T>& offb) {
  Vec<T> w = kernels::matvec(a, q.nu);
  Vec<T> cnu = kernels::matvec(c, q.nu);
  for (int i = 0; i < q.n; ++i) w[i] += cnu[i];
  return TripletRep<T>{q.n, offb, q.nu, w};
}

// Checks the sign structure and the left identity u (A - B + C) = 0, with B's
// diagonal reconstructed from its triplet.  The componentwise tolerance
// allows for u itself carrying a psi(n)-level GTH rounding error.
template <typename T>
void validate_qbd(const QbdTriple<T>& q) {
  const int n = q.n;
  if (q.A.rows() != n || q.A.cols() != n || q.C.rows() != n || q.C.cols() != n ||
      q.offB.rows() != n || q.offB.cols() != n || static_cast<int>(q.nu.size()) != n ||
      static_cast<int>(q.u.size()) != n)
    fail(ErrorCode::DimensionMismatch, "qbd triple sizes");
  if (!all_nonneg(q.A) || !all_nonneg(q.C))
    fail(ErrorCode::Breakdown, "A and C must be nonnegative");
  for (int i = 0; i < n; ++i) {
    if (!(q.nu[i] > T(0)) || !(q.u[i] > T(0)))
      fail(ErrorCode::Breakdown, "nu and u must be positive");
    for (int j = 0; j < n; ++j)
      if (i != j && q.offB(i, j) > T(0)) fail(ErrorCode::Breakdown, "offdiag(B) must be <= 0");
    if (!(q.offB(i, i) == T(0))) fail(ErrorCode::Breakdown, "diagonal slots of offB must be zero");
  }
  TripletRep<T> tb = b_triplet(q, q.A, q.C, q.offB);
  Vec<T> diag = reconstruct_diag(tb);
  const T tol = T((gth_psi(n) + 4.0 * n) * scalar_traits<T>::eps());
  for (int j = 0; j < n; ++j) {
    // column j of u (A - B + C)
    T pos(0), neg(0);
    for (int i = 0; i < n; ++i) {
      pos += q.u[i] * (q.A(i, j) + q.C(i, j));
      if (i != j) pos += q.u[i] * (-q.offB(i, j));
    }
    neg = q.u[j] * diag[j];
    T dev = scalar_traits<T>::abs(pos - neg);
    if (dev > tol * (pos + neg))
      fail(ErrorCode::Breakdown, "u (A - B + C) != 0 beyond tolerance at column " +
                                     std::to_string(j));
  }
}

// Mean drift d = u (C - A) nu and the recurrence class of its sign.
template <typename T>
std::pair<T, Recurrence> drift_d(const QbdTriple<T>& q) {
  T d(0), scale(0);
  Vec<T> cnu = kernels::matvec(q.C, q.nu);
  Vec<T> anu = kernels::matvec(q.A, q.nu);
  for (int i = 0; i < q.n; ++i) {
    d += q.u[i] * (cnu[i] - anu[i]);
    scale += q.u[i] * (cnu[i] + anu[i]);
  }
  const T thr = T(10.0 * scalar_traits<T>::eps()) * scale;
  Recurrence r;
  if (scalar_traits<T>::abs(d) <= thr)
    r = Recurrence::NullRecurrent;
  else
    r = d < T(0) ? Recurrence::PositiveRecurrent : Recurrence::Transient;
  return {d, r};
}

template <typename T>
struct CrState {
  int k = 0;
  Matrix<T> A;
  Matrix<T> C;
  Matrix<T> offB;
  Matrix<T> offBhat;
  Vec<T> uA;   // u A_k
  Vec<T> Cnu;  // C_k nu
};

template <typename T>
CrState<T> cr_initial_state(const QbdTriple<T>& q) {
  return CrState<T>{0,    q.A, q.C, q.offB, q.offB, kernels::vecmat(q.u, q.A),
                    kernels::matvec(q.C, q.nu)};
}

// One step of the subtraction-free iteration: all applications of B_k^{-1}
// run through the GTH factors of (offdiag(B_k), nu, (A_k + C_k) nu), and the
// two off-diagonal arrays only ever accumulate nonpositive terms.
template <typename T>
CrState<T> cr_step(const CrState<T>& s, const QbdTriple<T>& q) {
  const int n = q.n;
  if (max_abs(s.A) == T(0) && max_abs(s.C) == T(0)) {
    // Absorbing state of the iteration: everything is already converged.
    CrState<T> t = s;
    ++t.k;
    return t;
  }
  GthFactors<T> fb;
  try {
    fb = gth_factor(b_triplet(q, s.A, s.C, s.offB));
  } catch (const Error& e) {
    fail(ErrorCode::Breakdown, std::string("B_k factorization failed: ") + e.what());
  }
  Matrix<T> fa = kernels::lu_solve_columns(fb.f, s.A);  // B_k^{-1} A_k
  Matrix<T> fc = kernels::lu_solve_columns(fb.f, s.C);  // B_k^{-1} C_k

  CrState<T> t;
  t.k = s.k + 1;
  t.A = kernels::matmul(s.A, fa);
  t.C = kernels::matmul(s.C, fc);
  Matrix<T> p1 = kernels::matmul(s.A, fc);  // A_k B_k^{-1} C_k
  Matrix<T> p2 = kernels::matmul(s.C, fa);  // C_k B_k^{-1} A_k
  t.offB = s.offB;
  t.offBhat = s.offBhat;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      t.offB(i, j) -= p1(i, j) + p2(i, j);
      t.offBhat(i, j) -= p2(i, j);
    }
  t.uA = kernels::vecmat(q.u, t.A);
  t.Cnu = kernels::matvec(t.C, q.nu);
  return t;
}

template <typename T>
struct CrOutput {
  Matrix<T> G;
  Matrix<T> R;
  Matrix<T> offBhat;          // offdiag of the converged B-hat
  Vec<T> vhat;                // lim u A_k
  Vec<T> what;                // lim C_k nu
  int iterations = 0;
  Recurrence recurrence = Recurrence::PositiveRecurrent;
  T drift{};
  std::vector<double> deltas;  // per-step change of offdiag(B-hat), for diagnostics

  // Column triplet for B-hat from the first shape of the limit lemma.
  TripletRep<T> bhat_triplet(const QbdTriple<T>& q) const {
    Vec<T> w = kernels::matvec(q.A, q.nu);
    for (int i = 0; i < q.n; ++i) w[i] += what[i];
    return TripletRep<T>{q.n, offBhat, q.nu, w};
  }
  // Transpose triplet from the second shape, used for products on the left.
  TripletRep<T> bhat_transpose_triplet(const QbdTriple<T>& q) const {
    Vec<T> w = kernels::vecmat(q.u, q.C);
    for (int i = 0; i < q.n; ++i) w[i] += vhat[i];
    return TripletRep<T>{q.n, offBhat.transpose(), q.u, w};
  }
};

struct CrOptions {
  double tol = -1.0;   // <= 0 means n * eps of the working scalar
  int max_iter = 64;
};

namespace detail {

// Max entrywise relative change of the converging B-hat triplet data, i.e.
// both offdiag(B-hat) and its w vector A_0 nu + C_k nu (for n = 1 the
// off-diagonal part is empty and w carries all the information).  Entries
// below eps * scale compare against the scale instead of their own magnitude.
template <typename T>
double bhat_delta(const Matrix<T>& oldb, const Matrix<T>& newb, const Vec<T>& oldw,
                  const Vec<T>& neww) {
  const double eps = scalar_traits<T>::eps();
  double scale = scalar_traits<T>::to_double(max_abs(newb));
  scale = std::max(scale, scalar_traits<T>::to_double(max_abs(neww)));
  if (scale == 0.0) return 0.0;
  double delta = 0.0;
  auto update = [&](const T& oldx, const T& newx) {
    const double o = scalar_traits<T>::to_double(scalar_traits<T>::abs(oldx));
    const double d = scalar_traits<T>::to_double(scalar_traits<T>::abs(newx - oldx));
    const double rel = o >= eps * scale ? d / o : d / scale;
    if (rel > delta) delta = rel;
  };
  for (int i = 0; i < newb.rows(); ++i)
    for (int j = 0; j < newb.cols(); ++j)
      if (i != j) update(oldb(i, j), newb(i, j));
  for (size_t i = 0; i < neww.size(); ++i) update(oldw[i], neww[i]);
  return delta;
}

}  // namespace detail

// Runs cyclic reduction to convergence and extracts G = Bhat^{-1} A_0 and
// R = C_0 Bhat^{-1}.  G goes through the column triplet of Bhat, R through
// the transpose triplet, matching the side of the solve each product needs.
template <typename T>
CrOutput<T> cr_run(const QbdTriple<T>& q, CrOptions opt = {},
                   const std::function<void(const CrState<T>&)>& observer = nullptr) {
  validate_qbd(q);
  const int n = q.n;
  double tol = opt.tol > 0.0 ? opt.tol : n * scalar_traits<T>::eps();

  auto [d, rec] = drift_d(q);
  int max_iter = opt.max_iter;
  if (rec == Recurrence::NullRecurrent) max_iter *= 2;  // linear 1/2 convergence

  CrState<T> s = cr_initial_state(q);
  if (observer) observer(s);
  const Vec<T> a0nu = kernels::matvec(q.A, q.nu);
  auto bhat_w = [&](const CrState<T>& st) {
    Vec<T> w = a0nu;
    for (int i = 0; i < n; ++i) w[i] += st.Cnu[i];
    return w;
  };
  const double prod0 =
      scalar_traits<T>::to_double(inf_norm(q.A)) * scalar_traits<T>::to_double(inf_norm(q.C));
  const double prod_floor = tol * tol * (prod0 > 1.0 ? prod0 : 1.0);

  std::vector<double> deltas;
  bool converged = false;
  while (s.k < max_iter) {
    const double prod =
        scalar_traits<T>::to_double(inf_norm(s.A)) * scalar_traits<T>::to_double(inf_norm(s.C));
    if (prod <= prod_floor) {
      converged = true;
      break;
    }
    CrState<T> next = cr_step(s, q);
    if (observer) observer(next);
    const double delta =
        detail::bhat_delta(s.offBhat, next.offBhat, bhat_w(s), bhat_w(next));
    deltas.push_back(delta);
    s = std::move(next);
    if (delta <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail(ErrorCode::NoConvergence,
         "cyclic reduction did not converge in " + std::to_string(max_iter) + " iterations");

  CrOutput<T> out;
  out.offBhat = s.offBhat;
  out.vhat = s.uA;
  out.what = s.Cnu;
  out.iterations = s.k;
  out.recurrence = rec;
  out.drift = d;
  out.deltas = std::move(deltas);

  try {
    GthFactors<T> fcol = gth_factor(out.bhat_triplet(q));
    out.G = kernels::lu_solve_columns(fcol.f, q.A);
    GthFactors<T> frow = gth_factor(out.bhat_transpose_triplet(q));
    out.R = kernels::lu_solve_columns(frow.f, q.C.transpose()).transpose();
  } catch (const Error& e) {
    fail(ErrorCode::Breakdown,
         std::string("converged B-hat is singular (more than one final class?): ") + e.what());
  }
  return out;
}

}  // namespace mmbm

#endif  // MMBM_CR_HPP
