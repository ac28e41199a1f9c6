#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmbm/rng.hpp"
#include "mmbm/triplet.hpp"

using namespace mmbm;

namespace {

// Triplet from a dense M-matrix plus a chosen v: w = M v (test-only; the
// library never forms w this way).
TripletRep<double> triplet_of(const Matrix<double>& m, const Vec<double>& v) {
  const int n = m.rows();
  TripletRep<double> t;
  t.n = n;
  t.off = Matrix<double>(n, n);
  t.v = v;
  t.w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    for (int j = 0; j < n; ++j) {
      w += m(i, j) * v[j];
      if (i != j) t.off(i, j) = m(i, j);
    }
    t.w[i] = w;
  }
  return t;
}

TripletRep<double> identity_triplet(int n) {
  return triplet_of(Matrix<double>::identity(n), ones<double>(n));
}

// Random invertible regular M-matrix triplet with entries spanning the given
// number of decades.
TripletRep<double> random_triplet(int n, uint64_t seed, double decades = 0.0) {
  RandnStream rs(seed);
  TripletRep<double> t;
  t.n = n;
  t.off = Matrix<double>(n, n);
  t.v.resize(n);
  t.w.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (j != i) t.off(i, j) = -std::fabs(rs.next()) * std::exp(decades * rs.next());
    t.v[i] = std::fabs(rs.next()) * std::exp(decades * rs.next()) + 0.1;
    t.w[i] = std::fabs(rs.next()) * std::exp(decades * rs.next()) + 1e-3;
  }
  return t;
}

Vec<double> random_nonneg_vec(int n, uint64_t seed) {
  RandnStream rs(seed);
  Vec<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = std::fabs(rs.next());
  return u;
}

// Dense M x via reconstructed diagonal (test-only oracle).
Vec<double> apply_dense(const TripletRep<double>& t, const Vec<double>& x) {
  Vec<double> diag = reconstruct_diag(t);
  Vec<double> y(t.n, 0.0);
  for (int i = 0; i < t.n; ++i) {
    double s = diag[i] * x[i];
    for (int j = 0; j < t.n; ++j)
      if (j != i) s += t.off(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace

TEST_CASE("gth_solve on worked examples") {
  // identity
  auto x = gth_solve(identity_triplet(2), Vec<double>{3, 4});
  CHECK(x[0] == 3.0);
  CHECK(x[1] == 4.0);

  // rhs equal to w gives back v
  auto t = triplet_of(Matrix<double>{{2, -1}, {-1, 2}}, {1, 1});
  x = gth_solve(t, Vec<double>{1, 1});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));

  // M = [[3,-1],[-2,4]], inverse [[0.4,0.1],[0.2,0.3]]
  t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  CHECK(t.w[0] == 2.0);
  CHECK(t.w[1] == 2.0);
  x = gth_solve(t, Vec<double>{1, 1});
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gth_solve_transpose on worked examples") {
  auto x = gth_solve_transpose(identity_triplet(2), Vec<double>{1, 2});
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);

  auto t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  x = gth_solve_transpose(t, Vec<double>{1, 1});
  CHECK(x[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(0.4).epsilon(1e-15));

  t = triplet_of(Matrix<double>{{2, -1}, {-1, 2}}, {1, 1});
  x = gth_solve_transpose(t, Vec<double>{3, 3});
  CHECK(x[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("gth_invert on worked examples") {
  auto inv = gth_invert(identity_triplet(3));
  CHECK(inv == Matrix<double>::identity(3));

  auto t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  inv = gth_invert(t);
  CHECK(inv(0, 0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(inv(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(inv(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(inv(1, 1) == doctest::Approx(0.3).epsilon(1e-15));

  t = triplet_of(Matrix<double>{{2, -1}, {-1, 2}}, {1, 1});
  inv = gth_invert(t);
  CHECK(inv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(inv(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("perron_left on worked examples") {
  // Q = [[-1,1],[1,-1]]
  auto t = triplet_of(Matrix<double>{{1, -1}, {-1, 1}}, {1, 1});
  auto u = perron_left(t);
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-15));

  // Q = [[-1,1],[2,-2]]: u Q = 0 gives u = (2/3, 1/3)
  t = triplet_of(Matrix<double>{{1, -1}, {-2, 2}}, {1, 1});
  u = perron_left(t);
  CHECK(u[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // Q = [[-2,1,1],[1,-1,0],[0,1,-1]]: solving u Q = 0 by hand,
  // column 0: -2 u0 + u1 = 0, column 2: u0 - u2 = 0, so u = (1,2,1)/4.
  t = triplet_of(Matrix<double>{{2, -1, -1}, {-1, 1, 0}, {0, -1, 1}}, {1, 1, 1});
  u = perron_left(t);
  CHECK(u[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(0.50).epsilon(1e-15));
  CHECK(u[2] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("perron_left error paths") {
  // nonsingular input
  auto t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  CHECK_THROWS_WITH_AS(perron_left(t), doctest::Contains("NotSingular"), Error);

  // reducible generator: two disconnected singular blocks
  Matrix<double> m{{1, -1, 0, 0}, {-1, 1, 0, 0}, {0, 0, 2, -2}, {0, 0, -2, 2}};
  CHECK_THROWS_WITH_AS(perron_left(triplet_of(m, {1, 1, 1, 1})),
                       doctest::Contains("Reducible"), Error);
}

TEST_CASE("sub_triplet on worked examples") {
  auto t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  auto s = sub_triplet(t, {1});
  CHECK(s.n == 1);
  CHECK(s.v[0] == 1.0);
  CHECK(s.w[0] == 4.0);  // 2 + |-2| * 1

  // keeping everything changes nothing
  auto all = sub_triplet(t, {0, 1});
  CHECK(all.off == t.off);
  CHECK(all.w == t.w);

  // 3x3 generator, keep {1,2}: w = (0 + |1|, 0 + |0|) = (1, 0)
  auto g = triplet_of(Matrix<double>{{2, -1, -1}, {-1, 1, 0}, {0, -1, 1}}, {1, 1, 1});
  s = sub_triplet(g, {1, 2});
  CHECK(s.w[0] == 1.0);
  CHECK(s.w[1] == 0.0);
  // and the reconstructed diagonal of the submatrix is exact: (1, 1)
  auto d = reconstruct_diag(s);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 1.0);
}

TEST_CASE("schur_triplet on worked examples") {
  auto t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  auto [s, psi] = schur_triplet(t, {0});
  CHECK(s.n == 1);
  CHECK(s.w[0] == doctest::Approx(2.5).epsilon(1e-15));  // 2 + 1*(1/4)*2
  CHECK(psi(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  // S = 3 - (-1)(1/4)(-2) = 2.5 and S v1 = w holds
  auto d = reconstruct_diag(s);
  CHECK(d[0] == doctest::Approx(2.5).epsilon(1e-15));

  // block-diagonal: Schur complement is M11 and w is unchanged
  Matrix<double> bd{{5, -1, 0}, {-2, 6, 0}, {0, 0, 3}};
  auto tb = triplet_of(bd, {1, 1, 1});
  auto [s2, psi2] = schur_triplet(tb, {0, 1});
  CHECK(psi2(0, 0) == 0.0);
  CHECK(psi2(1, 0) == 0.0);
  CHECK(s2.w[0] == tb.w[0]);
  CHECK(s2.w[1] == tb.w[1]);
  CHECK(s2.off(0, 1) == -1.0);
  CHECK(s2.off(1, 0) == -2.0);

  // singular 3x3 generator, Schur onto {0}: S = 0 by hand
  auto g = triplet_of(Matrix<double>{{2, -1, -1}, {-1, 1, 0}, {0, -1, 1}}, {1, 1, 1});
  auto [s3, psi3] = schur_triplet(g, {0});
  CHECK(s3.w[0] == 0.0);
  auto d3 = reconstruct_diag(s3);
  CHECK(d3[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(all_nonneg(psi3));
}

TEST_CASE("schur_triplet matches a dense oracle on random instances") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 6;
    auto t = random_triplet(n, 900 + seed);
    std::vector<int> block1{0, 2, 5};
    auto [s, psi] = schur_triplet(t, block1);

    // dense Schur complement via reconstructed diagonal and naive elimination
    Vec<double> diag = reconstruct_diag(t);
    Matrix<double> m = t.off;
    for (int i = 0; i < n; ++i) m(i, i) = diag[i];
    std::vector<int> block2{1, 3, 4};
    Matrix<double> m22(3, 3), m12(3, 3), m21(3, 3), m11(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        m11(a, b) = m(block1[a], block1[b]);
        m12(a, b) = m(block1[a], block2[b]);
        m21(a, b) = m(block2[a], block1[b]);
        m22(a, b) = m(block2[a], block2[b]);
      }
    // 3x3 inverse by Cramer
    auto det3 = [](const Matrix<double>& x) {
      return x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) -
             x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0)) +
             x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
    };
    double det = det3(m22);
    Matrix<double> inv22(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Matrix<double> minor(2, 2);
        int rr = 0;
        for (int r = 0; r < 3; ++r) {
          if (r == b) continue;
          int cc = 0;
          for (int c = 0; c < 3; ++c) {
            if (c == a) continue;
            minor(rr, cc) = m22(r, c);
            ++cc;
          }
          ++rr;
        }
        double cof = minor(0, 0) * minor(1, 1) - minor(0, 1) * minor(1, 0);
        inv22(a, b) = ((a + b) % 2 ? -cof : cof) / det;
      }
    Matrix<double> prod = kernels::matmul(m12, kernels::matmul(inv22, m21));
    Vec<double> sdiag = reconstruct_diag(s);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double expect = m11(a, b) - prod(a, b);
        double got = a == b ? sdiag[a] : s.off(a, b);
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
      }
  }
}

TEST_CASE("reconstruct_diag on worked examples") {
  auto d = reconstruct_diag(identity_triplet(2));
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 1.0);

  auto t = triplet_of(Matrix<double>{{3, -1}, {-2, 4}}, {1, 1});
  d = reconstruct_diag(t);
  CHECK(d[0] == 3.0);
  CHECK(d[1] == 4.0);

  // generator triplet (-Q, 1, 0) for Q = [[-1,1],[2,-2]]
  auto g = triplet_of(Matrix<double>{{1, -1}, {-2, 2}}, {1, 1});
  d = reconstruct_diag(g);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 2.0);
}

TEST_CASE("residual of gth_solve stays small on random instances") {
  const double eps = scalar_traits<double>::eps();
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 48);
    auto t = random_triplet(n, seed);
    auto u = random_nonneg_vec(n, seed + 1000);
    auto x = gth_solve(t, u);
    CHECK(all_nonneg(x));
    auto mx = apply_dense(t, x);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num = std::max(num, std::fabs(mx[i] - u[i]));
      den = std::max(den, std::fabs(u[i]));
    }
    CHECK(num <= 1e3 * eps * den);
  }
}

TEST_CASE("componentwise accuracy against the extended-precision solve") {
  const double eps = scalar_traits<double>::eps();
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 19);
    auto t = random_triplet(n, 3000 + seed, /*decades=*/2.0);
    auto u = random_nonneg_vec(n, 4000 + seed);

    auto x = gth_solve(t, u);

    TripletRep<DDouble> td{t.n, to_scalar<DDouble>(t.off), to_scalar<DDouble>(t.v),
                           to_scalar<DDouble>(t.w)};
    auto xd = gth_solve(td, to_scalar<DDouble>(u));

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double ref = scalar_traits<DDouble>::to_double(xd[i]);
      if (ref == 0.0) {
        CHECK(x[i] == 0.0);
        continue;
      }
      worst = std::max(worst, std::fabs(x[i] - ref) / ref);
    }
    CHECK(worst <= 10.0 * gth_psi(n) * eps);
  }
}

TEST_CASE("sign preservation is exact across outputs") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 4 + static_cast<int>(seed % 12);
    auto t = random_triplet(n, 7000 + seed, 1.5);
    CHECK(all_nonneg(gth_solve(t, random_nonneg_vec(n, seed))));
    CHECK(all_nonneg(gth_solve_transpose(t, random_nonneg_vec(n, seed + 50))));
    CHECK(all_nonneg(gth_invert(t)));
    auto [s, psi] = schur_triplet(t, {0, 1});
    CHECK(all_nonneg(psi));
    CHECK(all_nonneg(s.w));
  }
}

TEST_CASE("integer triplets keep exact arithmetic through sub_triplet") {
  // All quantities stay small integers, so double arithmetic is exact and
  // the reconstructed diagonals must match the rational values bit for bit.
  Matrix<double> m{{7, -2, -1, 0}, {-3, 9, 0, -2}, {0, -4, 8, -1}, {-1, 0, -2, 6}};
  auto t = triplet_of(m, {1, 2, 1, 3});
  auto s = sub_triplet(t, {1, 3});
  auto d = reconstruct_diag(s);
  CHECK(d[0] == 9.0);
  CHECK(d[1] == 6.0);
  auto s2 = sub_triplet(t, {0, 2, 3});
  auto d2 = reconstruct_diag(s2);
  CHECK(d2[0] == 7.0);
  CHECK(d2[1] == 8.0);
  CHECK(d2[2] == 6.0);
}

TEST_CASE("perron_left satisfies u M = 0 to rounding") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 3 + static_cast<int>(seed % 14);
    RandnStream rs(8000 + seed);
    // random irreducible generator
    Matrix<double> q(n, n);
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          q(i, j) = std::fabs(rs.next());
          off += q(i, j);
        }
      q(i, i) = -off;
    }
    TripletRep<double> t;
    t.n = n;
    t.off = Matrix<double>(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) t.off(i, j) = -q(i, j);
    t.v = ones<double>(n);
    t.w.assign(n, 0.0);

    auto u = perron_left(t);
    double norm_m = 0.0;
    for (int i = 0; i < n; ++i) {
      double row = -2.0 * q(i, i);
      norm_m = std::max(norm_m, row);
    }
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      CHECK(u[j] > 0.0);
      sum += u[j];
      double col = 0.0;
      for (int i = 0; i < n; ++i) col += u[i] * (-q(i, j));
      CHECK(std::fabs(col) <= 1e2 * scalar_traits<double>::eps() * norm_m);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("zero pivot reports SingularMatrix") {
  // M = [[0,0],[-1,0]] is the classic non-regular example; force a zero
  // pivot with w = 0 and an empty first row.
  TripletRep<double> t;
  t.n = 2;
  t.off = Matrix<double>(2, 2);
  t.off(1, 0) = -1.0;
  t.v = {1.0, 1.0};
  t.w = {0.0, 0.0};
  // w - |off| v makes the implied diagonal (0, 1); the first pivot is zero.
  t.w[1] = 1.0;
  CHECK_THROWS_WITH_AS(gth_factor(t), doctest::Contains("SingularMatrix"), Error);
}
