#ifndef MMBM_PIPELINE_HPP
#define MMBM_PIPELINE_HPP

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "mmbm/discretize.hpp"
#include "mmbm/metrics.hpp"

namespace mmbm {

// c-stable left invariant pair (X, [I Psi]) with X kept as the decomposition
// X = P - s I, P >= 0, so downstream consumers never have to subtract to get
// at the exponential.
template <typename T>
struct InvariantPair {
  T s{};
  Matrix<T> P;    // head x head
  Matrix<T> Psi;  // head x n3

  int head() const { return P.rows(); }

  Matrix<T> dense_X() const {
    Matrix<T> x = P;
    for (int i = 0; i < x.rows(); ++i) x(i, i) -= s;
    return x;
  }
  Matrix<T> dense_U(int n) const {
    Matrix<T> u(head(), n);
    for (int i = 0; i < head(); ++i) {
      u(i, i) = T(1);
      for (int j = 0; j < n - head(); ++j) u(i, head() + j) = Psi(i, j);
    }
    return u;
  }
};

// Deflation of the spurious zero eigenvalues of R.  Besides the pair it keeps
// the factors of the Schur complement S = B11 + Psi B21 and the row
// z = vhat_2 B22^{-1}, both reused by the triplet for -X^T and the density
// coefficients.
template <typename T>
struct Deflation {
  InvariantPair<T> pair;
  GthFactors<T> fs;
  Vec<T> z;
};

template <typename T>
Deflation<T> deflate(const CrOutput<T>& cr, const Discretization<T>& disc) {
  const int l = disc.head();
  const int n3 = disc.n3;
  const QbdTriple<T>& q = disc.triple;
  TripletRep<T> tbhat = cr.bhat_triplet(q);

  Deflation<T> out;
  const T hinv = T(1) / scalar_traits<T>::from_double(disc.h);
  if (n3 == 0) {
    out.fs = gth_factor(tbhat);
    out.pair.Psi = Matrix<T>(l, 0);
    Matrix<T> y = kernels::lu_solve_rows(out.fs.f, q.C);
    out.pair.s = hinv;
    out.pair.P = y;
    for (auto& e : out.pair.P.data()) e *= hinv;
    return out;
  }

  std::vector<int> block1(l), block2(n3);
  for (int i = 0; i < l; ++i) block1[i] = i;
  for (int i = 0; i < n3; ++i) block2[i] = l + i;

  auto [ts, psi] = schur_triplet(tbhat, block1);
  out.fs = gth_factor(ts);
  out.pair.Psi = psi;

  GthFactors<T> f22 = gth_factor(sub_triplet(tbhat, block2));
  Vec<T> vhat2(cr.vhat.begin() + l, cr.vhat.end());
  out.z = gth_solve_transpose(f22, vhat2);

  Matrix<T> c11 = q.C.block(0, 0, l, l);
  Matrix<T> c21 = q.C.block(l, 0, n3, l);
  Matrix<T> numer = kernels::matmul(psi, c21);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) numer(i, j) += c11(i, j);
  Matrix<T> y = kernels::lu_solve_rows(out.fs.f, numer);

  out.pair.s = hinv;
  out.pair.P = y;
  for (auto& e : out.pair.P.data()) e *= hinv;
  return out;
}

// Triplet representation for -X^T: v is the head part of the Perron vector u,
// w is h^{-1} (vhat_1 + vhat_2 B22^{-1} (C21 - B21)) S^{-1}, with C21 - B21
// accumulated as C21 + |B21|.  Also returns that w row separately since it is
// exactly the density coefficient vector.
template <typename T>
std::pair<TripletRep<T>, Vec<T>> x_triplet(const CrOutput<T>& cr, const Deflation<T>& defl,
                                           const Discretization<T>& disc, const Vec<T>& u) {
  const int l = disc.head();
  const int n3 = disc.n3;
  const QbdTriple<T>& q = disc.triple;
  const T hinv = T(1) / scalar_traits<T>::from_double(disc.h);

  Vec<T> row(cr.vhat.begin(), cr.vhat.begin() + l);
  if (n3 > 0) {
    for (int j = 0; j < l; ++j) {
      T acc(0);
      for (int i = 0; i < n3; ++i)
        acc += defl.z[i] * (q.C(l + i, j) + (-cr.offBhat(l + i, j)));
      row[j] += acc;
    }
  }
  Vec<T> w = gth_solve_transpose(defl.fs, row);
  for (auto& e : w) e *= hinv;

  TripletRep<T> t;
  t.n = l;
  t.off = Matrix<T>(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (i != j) t.off(i, j) = -defl.pair.P(j, i);
  t.v = Vec<T>(u.begin(), u.begin() + l);
  t.w = w;

  // Consistency of the two routes to -diag(X): the implied diagonal of the
  // triplet against s - diag(P).  Both sides carry GTH-solve rounding, hence
  // the psi(n)-scaled tolerance.
  Vec<T> implied = reconstruct_diag(t);
  const double ctol = 4.0 * (gth_psi(l) + l + 2.0) * scalar_traits<T>::eps();
  for (int i = 0; i < l; ++i) {
    T direct = defl.pair.s - defl.pair.P(i, i);
    T scale = defl.pair.s + scalar_traits<T>::abs(implied[i]);
    if (scalar_traits<T>::to_double(scalar_traits<T>::abs(implied[i] - direct)) >
        ctol * scalar_traits<T>::to_double(scale))
      fail(ErrorCode::Breakdown, "triplet for -X^T disagrees with the invariant pair at state " +
                                     std::to_string(i));
  }
  return {t, w};
}

// Density coefficients (p0, v): the mass at level zero over E3 is
// vhat_2 B22^{-1} and the density weight is the w row of the -X^T triplet,
// both already on hand after deflation.  Only positive-recurrent models have
// a stationary density.
template <typename T>
std::pair<Vec<T>, Vec<T>> stationary_coeffs(const Deflation<T>& defl, const Vec<T>& xtriplet_w,
                                            Recurrence rec) {
  if (rec != Recurrence::PositiveRecurrent)
    fail(ErrorCode::NotPositiveRecurrent,
         std::string("no stationary density for a ") + recurrence_name(rec) + " model");
  return {defl.z, xtriplet_w};
}

template <typename T>
struct StationarySolution {
  MmbmModel model;
  Mode mode = Mode::PosV;
  double h = 0.0;
  Vec<T> u;            // Perron vector of Q, block order
  T drift_c{};         // u D 1
  T drift_d{};         // discrete drift of the CR triple
  Recurrence recurrence = Recurrence::PositiveRecurrent;
  InvariantPair<T> pair;
  TripletRep<T> xtriplet;
  Vec<T> p0;           // mass at level zero over E3; empty unless positive recurrent
  Vec<T> v_coef;       // density coefficient over the head block
  bool has_density = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> cr_deltas;
};

template <typename T>
Vec<T> generator_perron(const Matrix<double>& q) {
  const int n = q.rows();
  TripletRep<T> t;
  t.n = n;
  t.off = Matrix<T>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) t.off(i, j) = scalar_traits<T>::from_double(-q(i, j));
  t.v = ones<T>(n);
  t.w = Vec<T>(n, T(0));
  return perron_left(t);
}

struct SolveOptions {
  Mode mode = Mode::Auto;
  std::optional<double> h;  // absent: largest safe step, halved
  double tol = -1.0;        // CR stopping tolerance; <= 0 picks n*eps
  int max_iter = 64;
  DiscretizeOptions disc;
};

// Full pipeline: Perron vector, step selection, discretization, cyclic
// reduction, deflation, triplet for -X^T, density coefficients (positive
// recurrent models only), and the residual metric of the computed pair.
template <typename T>
StationarySolution<T> solve(const MmbmModel& m, SolveOptions opt = {}) {
  StationarySolution<T> sol;
  sol.model = m;
  sol.u = generator_perron<T>(m.Q);

  T dc(0);
  for (int i = 0; i < m.n; ++i) dc += sol.u[i] * scalar_traits<T>::from_double(m.d[i]);
  sol.drift_c = dc;

  sol.h = opt.h.value_or(choose_h(m));
  if (!(sol.h > 0.0) || !std::isfinite(sol.h))
    fail(ErrorCode::HViolation, "step h must be positive and finite");
  sol.mode = resolve_mode(m, opt.mode);

  Discretization<T> disc = discretize<T>(m, sol.h, sol.u, sol.mode, opt.disc);
  CrOutput<T> cr = cr_run(disc.triple, CrOptions{opt.tol, opt.max_iter});
  sol.drift_d = cr.drift;
  sol.recurrence = cr.recurrence;
  sol.iterations = cr.iterations;
  sol.cr_deltas = cr.deltas;

  Deflation<T> defl = deflate(cr, disc);
  sol.pair = defl.pair;
  auto [xt, vrow] = x_triplet(cr, defl, disc, sol.u);
  sol.xtriplet = std::move(xt);

  if (sol.recurrence == Recurrence::PositiveRecurrent) {
    std::tie(sol.p0, sol.v_coef) = stationary_coeffs(defl, vrow, sol.recurrence);
    sol.has_density = true;
  }
  sol.residual = pair_residual(sol.pair.P, sol.pair.s, sol.pair.Psi, m);
  return sol;
}

// Density p(x) = v exp(X x) [I Psi] by uniformization: with X = P - s I the
// series for exp(x P) has nonnegative terms only, and the e^{-s x} factor is
// applied last.  x is split into substeps when s x is large enough to
// overflow the intermediate series.
// Largest diagonal of -X, i.e. the smallest shift for which X + shift I is
// nonnegative; read off the triplet so no subtraction is involved.
inline double density_decay_scale(const StationarySolution<double>& sol) {
  Vec<double> mdiag = reconstruct_diag(sol.xtriplet);
  return max_abs(mdiag);
}

inline Vec<double> eval_density(const StationarySolution<double>& sol, double x) {
  if (!sol.has_density)
    fail(ErrorCode::NotPositiveRecurrent, "density requested for a non-positive-recurrent model");
  if (!(x >= 0.0)) fail(ErrorCode::BadSize, "density argument must be >= 0");
  const int l = sol.pair.head();
  const double eps = scalar_traits<double>::eps();

  // The pair's own shift is 1/h, far larger than X calls for.  Re-extract
  // the minimal decomposition X = P2 - s2 I: the off-diagonal part is that of
  // P unchanged, and the diagonal s2 - (-X_ii) uses the accurate -X_ii from
  // the triplet (nonnegative exactly, since s2 is their maximum).
  Vec<double> mdiag = reconstruct_diag(sol.xtriplet);
  const double s2 = max_abs(mdiag);
  Matrix<double> p2 = sol.pair.P;
  for (int i = 0; i < l; ++i) p2(i, i) = s2 - mdiag[i];

  Vec<double> row = sol.v_coef;
  if (x > 0.0 && s2 > 0.0) {
    const long steps = std::max(1L, static_cast<long>(std::ceil(s2 * x / 500.0)));
    const double tau = x / steps;
    const double damp = std::exp(-s2 * tau);
    for (long step = 0; step < steps; ++step) {
      Vec<double> sum = row;
      Vec<double> term = row;
      for (int j = 1; j < 20000; ++j) {
        term = kernels::vecmat(term, p2);
        const double c = tau / j;
        bool small = true;
        for (int i = 0; i < l; ++i) {
          term[i] *= c;
          sum[i] += term[i];
          if (term[i] > eps * sum[i]) small = false;
        }
        if (small) break;
      }
      bool alive = false;
      for (int i = 0; i < l; ++i) {
        row[i] = damp * sum[i];
        if (row[i] != 0.0) alive = true;
      }
      if (!alive) break;  // underflowed to exact zero; it stays there
    }
  }

  Vec<double> p(sol.model.n, 0.0);
  for (int i = 0; i < l; ++i) p[i] = row[i];
  Vec<double> tail = kernels::vecmat(row, sol.pair.Psi);
  for (int j = 0; j < sol.model.n3; ++j) p[l + j] = tail[j];
  return p;  // block order; map with sol.model.to_original for caller order
}

}  // namespace mmbm

#endif  // MMBM_PIPELINE_HPP
