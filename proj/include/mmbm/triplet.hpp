#ifndef MMBM_TRIPLET_HPP
#define MMBM_TRIPLET_HPP

#include <string>
#include <vector>

#include "mmbm/kernels.hpp"
#include "mmbm/matrix.hpp"

namespace mmbm {

// A regular M-matrix M stored without its diagonal: the off-diagonal entries
// (all <= 0, kept in a dense n x n layout whose diagonal slots are zero) plus
// vectors v > 0, w >= 0 with M v = w.  The diagonal is implied by that
// relation, so it never has to be formed by subtracting like-signed numbers.
template <typename T>
struct TripletRep {
  int n = 0;
  Matrix<T> off;
  Vec<T> v;
  Vec<T> w;
};

// Componentwise accuracy bound of a GTH solve, psi(n) = 2/3 (2n+5)(n+2)(n+3)
// units of machine precision.
inline double gth_psi(int n) {
  return (2.0 / 3.0) * (2.0 * n + 5.0) * (n + 2.0) * (n + 3.0);
}

template <typename T>
void validate_triplet(const TripletRep<T>& t, const char* who = "triplet") {
  if (t.off.rows() != t.n || t.off.cols() != t.n || static_cast<int>(t.v.size()) != t.n ||
      static_cast<int>(t.w.size()) != t.n)
    fail(ErrorCode::DimensionMismatch, std::string(who) + ": inconsistent sizes");
  for (int i = 0; i < t.n; ++i) {
    if (!(t.v[i] > T(0))) fail(ErrorCode::Breakdown, std::string(who) + ": v must be positive");
    if (t.w[i] < T(0)) fail(ErrorCode::Breakdown, std::string(who) + ": w must be nonnegative");
    for (int j = 0; j < t.n; ++j) {
      if (i == j) {
        if (!(t.off(i, i) == T(0)))
          fail(ErrorCode::Breakdown, std::string(who) + ": diagonal slot must be zero");
      } else if (t.off(i, j) > T(0)) {
        fail(ErrorCode::Breakdown, std::string(who) + ": off-diagonal entry is positive");
      }
    }
  }
}

// diag_i = (w_i + sum_{j != i} |m_ij| v_j) / v_i, additions of nonnegatives only.
template <typename T>
Vec<T> reconstruct_diag(const TripletRep<T>& t) {
  Vec<T> d(t.n);
  for (int i = 0; i < t.n; ++i) {
    T s = t.w[i];
    for (int j = 0; j < t.n; ++j)
      if (j != i) s += (-t.off(i, j)) * t.v[j];
    d[i] = s / t.v[i];
  }
  return d;
}

// In-place LU factors of M produced by GTH elimination: unit lower part holds
// the multipliers (<= 0), the upper part the pivot rows (off-diagonal <= 0),
// the diagonal the pivots (> 0).  Every pivot is rebuilt from the running
// (v, w) pair, never from a stored diagonal.
template <typename T>
struct GthFactors {
  Matrix<T> f;
  int rank = 0;  // pivots actually processed

  int n() const { return f.rows(); }
};

namespace detail {

template <typename T>
T gth_pivot(const Matrix<T>& f, const Vec<T>& v, const Vec<T>& w, int k) {
  const int n = f.rows();
  T s = w[k];
  const T* fk = f.row_ptr(k);
  for (int j = k + 1; j < n; ++j) s += (-fk[j]) * v[j];
  return s / v[k];
}

}  // namespace detail

template <typename T>
GthFactors<T> gth_factor(const TripletRep<T>& t) {
  const int n = t.n;
  GthFactors<T> g{t.off, 0};
  Vec<T> w = t.w;
  for (int k = 0; k < n; ++k) {
    T piv = detail::gth_pivot(g.f, t.v, w, k);
    if (piv == T(0))
      fail(ErrorCode::SingularMatrix, "zero pivot at elimination step " + std::to_string(k));
    g.f(k, k) = piv;
    kernels::gth_step_rows(g.f, w, k, piv, w[k]);
    ++g.rank;
  }
  return g;
}

template <typename T>
Vec<T> gth_solve(const GthFactors<T>& g, const Vec<T>& u) {
  if (static_cast<int>(u.size()) != g.n()) fail(ErrorCode::DimensionMismatch, "gth_solve rhs");
  for (const T& x : u)
    if (x < T(0)) fail(ErrorCode::Breakdown, "gth_solve rhs must be nonnegative");
  Vec<T> x(u.size());
  kernels::lu_solve_one(g.f, u.data(), x.data());
  return x;
}

template <typename T>
Vec<T> gth_solve(const TripletRep<T>& t, const Vec<T>& u) {
  return gth_solve(gth_factor(t), u);
}

template <typename T>
Vec<T> gth_solve_transpose(const GthFactors<T>& g, const Vec<T>& b) {
  if (static_cast<int>(b.size()) != g.n())
    fail(ErrorCode::DimensionMismatch, "gth_solve_transpose rhs");
  for (const T& x : b)
    if (x < T(0)) fail(ErrorCode::Breakdown, "gth_solve_transpose rhs must be nonnegative");
  Vec<T> x(b.size());
  kernels::lu_solve_transpose_one(g.f, b.data(), x.data());
  return x;
}

template <typename T>
Vec<T> gth_solve_transpose(const TripletRep<T>& t, const Vec<T>& b) {
  return gth_solve_transpose(gth_factor(t), b);
}

template <typename T>
Matrix<T> gth_invert(const TripletRep<T>& t) {
  GthFactors<T> g = gth_factor(t);
  return kernels::lu_solve_columns(g.f, Matrix<T>::identity(t.n));
}

// Left Perron vector u > 0 of a singular irreducible M-matrix: u M = 0,
// normalized to sum 1.  Elimination runs on the first n-1 pivots; the last
// pivot of a singular input is an exact zero because the w updates only ever
// add nonnegative terms to an exactly-zero budget.  The kernel direction is
// then recovered from u L = e_{n-1}.
template <typename T>
Vec<T> perron_left(const TripletRep<T>& t) {
  const int n = t.n;
  Matrix<T> f = t.off;
  Vec<T> w = t.w;
  for (int k = 0; k + 1 < n; ++k) {
    T piv = detail::gth_pivot(f, t.v, w, k);
    if (piv == T(0))
      fail(ErrorCode::Reducible, "zero pivot at step " + std::to_string(k) + " of " +
                                     std::to_string(n));
    f(k, k) = piv;
    kernels::gth_step_rows(f, w, k, piv, w[k]);
  }
  T last = w[n - 1] / t.v[n - 1];
  if (!(last == T(0)))
    fail(ErrorCode::NotSingular, "all pivots bounded away from zero; matrix is nonsingular");

  Vec<T> u(n, T(0));
  u[n - 1] = T(1);
  for (int j = n - 2; j >= 0; --j) {
    T s(0);
    for (int i = j + 1; i < n; ++i) s += (-f(i, j)) * u[i];
    u[j] = s;
  }
  T total(0);
  for (int j = 0; j < n; ++j) {
    if (!(u[j] > T(0))) fail(ErrorCode::Reducible, "kernel vector has a zero component");
    total += u[j];
  }
  for (int j = 0; j < n; ++j) u[j] = u[j] / total;
  return u;
}

// Triplet for the principal submatrix M22 over `kept` (order preserved):
// the new w is w_2 + |M_21| v_1.
template <typename T>
TripletRep<T> sub_triplet(const TripletRep<T>& t, const std::vector<int>& kept) {
  const int n = t.n;
  const int p = static_cast<int>(kept.size());
  std::vector<char> is_kept(n, 0);
  for (int i : kept) {
    if (i < 0 || i >= n || is_kept[i]) fail(ErrorCode::DimensionMismatch, "bad index partition");
    is_kept[i] = 1;
  }
  TripletRep<T> s;
  s.n = p;
  s.off = Matrix<T>(p, p);
  s.v.resize(p);
  s.w.resize(p);
  for (int a = 0; a < p; ++a) {
    const int i = kept[a];
    s.v[a] = t.v[i];
    T wi = t.w[i];
    for (int j = 0; j < n; ++j)
      if (j != i && !is_kept[j]) wi += (-t.off(i, j)) * t.v[j];
    s.w[a] = wi;
    for (int b = 0; b < p; ++b)
      if (b != a) s.off(a, b) = t.off(i, kept[b]);
  }
  return s;
}

// Triplet for the Schur complement S = M11 - M12 M22^{-1} M21 over `block1`,
// plus the nonnegative matrix Psi = -M12 M22^{-1}.  offdiag(S) accumulates
// offdiag(M11) - Psi |M21| (nonpositive terms only) and the new w is
// w_1 + Psi w_2.
template <typename T>
std::pair<TripletRep<T>, Matrix<T>> schur_triplet(const TripletRep<T>& t,
                                                  const std::vector<int>& block1) {
  const int n = t.n;
  std::vector<char> in1(n, 0);
  for (int i : block1) {
    if (i < 0 || i >= n || in1[i]) fail(ErrorCode::DimensionMismatch, "bad index partition");
    in1[i] = 1;
  }
  std::vector<int> block2;
  for (int i = 0; i < n; ++i)
    if (!in1[i]) block2.push_back(i);
  const int p = static_cast<int>(block1.size());
  const int q = static_cast<int>(block2.size());

  GthFactors<T> f22 = gth_factor(sub_triplet(t, block2));

  Matrix<T> n12(p, q);  // |M12|
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) n12(a, b) = -t.off(block1[a], block2[b]);
  Matrix<T> psi = kernels::lu_solve_rows(f22.f, n12);

  Matrix<T> p21(q, p);  // |M21|
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < p; ++a) p21(b, a) = -t.off(block2[b], block1[a]);
  Matrix<T> corr = kernels::matmul(psi, p21);

  TripletRep<T> s;
  s.n = p;
  s.off = Matrix<T>(p, p);
  s.v.resize(p);
  s.w.resize(p);
  for (int a = 0; a < p; ++a) {
    s.v[a] = t.v[block1[a]];
    T wa = t.w[block1[a]];
    for (int b = 0; b < q; ++b) wa += psi(a, b) * t.w[block2[b]];
    s.w[a] = wa;
    for (int b = 0; b < p; ++b)
      if (b != a) s.off(a, b) = t.off(block1[a], block1[b]) - corr(a, b);
  }
  return {s, psi};
}

}  // namespace mmbm

#endif  // MMBM_TRIPLET_HPP
