#ifndef MMBM_ORACLE_HPP
#define MMBM_ORACLE_HPP

#include <limits>
#include <string>

#include "mmbm/pipeline.hpp"

namespace mmbm {

// Forward/componentwise error metrics of a candidate solution against a
// reference on the same model, both in (X, [I Psi]) form.
struct ErrorReport {
  double residual = 0.0;  // of the candidate pair, dd-evaluated
  double fwd_X = 0.0;
  double fwd_Psi = 0.0;
  double cw_X = 0.0;
  double cw_Psi = 0.0;
};

namespace detail {

inline double cw_error(const Matrix<DDouble>& cand, const Matrix<DDouble>& ref) {
  double worst = 0.0;
  for (int i = 0; i < ref.rows(); ++i)
    for (int j = 0; j < ref.cols(); ++j) {
      const DDouble r = ref(i, j);
      const DDouble c = cand(i, j);
      if (r == DDouble(0.0)) {
        // Structural zeros must be reproduced exactly.
        if (!(c == DDouble(0.0))) return std::numeric_limits<double>::infinity();
        continue;
      }
      double e = scalar_traits<DDouble>::to_double(abs(c - r) / abs(r));
      if (e > worst) worst = e;
    }
  return worst;
}

inline double norm_error(const Matrix<DDouble>& cand, const Matrix<DDouble>& ref) {
  if (ref.empty()) return 0.0;
  Matrix<DDouble> diff(ref.rows(), ref.cols());
  for (int i = 0; i < ref.rows(); ++i)
    for (int j = 0; j < ref.cols(); ++j) diff(i, j) = cand(i, j) - ref(i, j);
  DDouble dn = spectral_norm(diff);
  DDouble rn = spectral_norm(ref);
  if (rn == DDouble(0.0)) return 0.0;
  return scalar_traits<DDouble>::to_double(dn / rn);
}

}  // namespace detail

template <typename Ta, typename Tb>
ErrorReport compare(const StationarySolution<Ta>& sol, const StationarySolution<Tb>& ref) {
  if (sol.pair.P.rows() != ref.pair.P.rows() || sol.pair.Psi.cols() != ref.pair.Psi.cols() ||
      sol.model.n != ref.model.n)
    fail(ErrorCode::DimensionMismatch, "solutions have different shapes");
  ErrorReport r;
  r.residual = sol.residual;
  Matrix<DDouble> xs = promote(sol.pair.dense_X());
  Matrix<DDouble> xr = promote(ref.pair.dense_X());
  r.fwd_X = detail::norm_error(xs, xr);
  r.cw_X = detail::cw_error(xs, xr);
  if (sol.pair.Psi.cols() > 0) {
    Matrix<DDouble> ps = promote(sol.pair.Psi);
    Matrix<DDouble> pr = promote(ref.pair.Psi);
    r.fwd_Psi = detail::norm_error(ps, pr);
    r.cw_Psi = detail::cw_error(ps, pr);
  }
  return r;
}

// Extended-precision rerun of the same pipeline; accepted as a reference only
// if its own residual clears 1e-28, which a double-double run of a
// componentwise-stable algorithm meets except on severely ill-scaled inputs.
inline StationarySolution<DDouble> oracle_solve(const MmbmModel& m, SolveOptions opt = {}) {
  StationarySolution<DDouble> sol = solve<DDouble>(m, opt);
  if (!(sol.residual <= 1e-28))
    fail(ErrorCode::OracleInconclusive,
         "extended-precision residual " + std::to_string(sol.residual) + " exceeds 1e-28");
  return sol;
}

// Brute-force reference for the minimal nonnegative solution G: functional
// iteration G <- B^{-1} (A + C G^2) from G = 0, monotonically nondecreasing.
template <typename T>
Matrix<T> qbd_fixed_point_G(const QbdTriple<T>& q, double tol = -1.0, long max_iter = 1000000) {
  if (tol <= 0.0) tol = std::is_same_v<T, DDouble> ? 1e-30 : 1e-14;
  GthFactors<T> fb = gth_factor(b_triplet(q, q.A, q.C, q.offB));
  const int n = q.n;
  Matrix<T> g(n, n);
  double prev_delta = 0.0;
  for (long it = 0; it < max_iter; ++it) {
    Matrix<T> g2 = kernels::matmul(g, g);
    Matrix<T> rhs = kernels::matmul(q.C, g2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rhs(i, j) += q.A(i, j);
    Matrix<T> next = kernels::lu_solve_columns(fb.f, rhs);
    double delta = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = scalar_traits<T>::to_double(scalar_traits<T>::abs(next(i, j) - g(i, j)));
        if (d > delta) delta = d;
      }
    g = std::move(next);
    // geometric remainder estimate delta * rho / (1 - rho) from the observed
    // contraction ratio, so the returned iterate is within ~tol of the limit
    const double rho = prev_delta > 0.0 ? std::min(delta / prev_delta, 0.999) : 0.5;
    prev_delta = delta;
    if (delta * rho / (1.0 - rho) <= tol || delta == 0.0) return g;
  }
  fail(ErrorCode::NoConvergence, "fixed-point iteration for G did not converge");
}

}  // namespace mmbm

#endif  // MMBM_ORACLE_HPP
