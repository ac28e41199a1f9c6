// Times the serial reference kernels against the OpenMP ones on the three
// O(n^3) hot spots: dense multiply, GTH factorization and multi-RHS solves.
// The two paths are bit-identical by construction; this target only reports
// wall time and the observed speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#include "mmbm/rng.hpp"
#include "mmbm/triplet.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mmbm;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

TripletRep<double> random_triplet(int n, uint64_t seed) {
  RandnStream rs(seed);
  TripletRep<double> t;
  t.n = n;
  t.off = Matrix<double>(n, n);
  t.v.assign(n, 1.0);
  t.w.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (j != i) t.off(i, j) = -std::fabs(rs.next());
    t.w[i] = std::fabs(rs.next()) + 0.1;
  }
  return t;
}

Matrix<double> random_matrix(int n, uint64_t seed) {
  RandnStream rs(seed);
  Matrix<double> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::fabs(rs.next());
  return m;
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = now();
    f();
    double t1 = now();
    if (t1 - t0 < best) best = t1 - t0;
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the serial path\n");
#endif
  std::printf("%-10s %6s %12s %12s %8s\n", "kernel", "n", "serial[s]", "parallel[s]", "speedup");

  for (int n : {128, 256, 384, 512}) {
    Matrix<double> a = random_matrix(n, 1), b = random_matrix(n, 2), c(n, n);
    const int reps = n <= 256 ? 5 : 3;

    double ts = time_best_of(reps, [&] { kernels::matmul_serial(a, b, c); });
    double tp = time_best_of(reps, [&] { kernels::matmul_parallel(a, b, c); });
    std::printf("%-10s %6d %12.4f %12.4f %8.2f\n", "matmul", n, ts, tp, ts / tp);

    TripletRep<double> t = random_triplet(n, 3);
    kernels::config().parallel = false;
    double fs = time_best_of(reps, [&] { gth_factor(t); });
    kernels::config().parallel = true;
    double fp = time_best_of(reps, [&] { gth_factor(t); });
    std::printf("%-10s %6d %12.4f %12.4f %8.2f\n", "gth_factor", n, fs, fp, fs / fp);

    GthFactors<double> f = gth_factor(t);
    kernels::config().parallel = false;
    double ss = time_best_of(reps, [&] { kernels::lu_solve_columns(f.f, a); });
    kernels::config().parallel = true;
    double sp = time_best_of(reps, [&] { kernels::lu_solve_columns(f.f, a); });
    std::printf("%-10s %6d %12.4f %12.4f %8.2f\n", "solve_nrhs", n, ss, sp, ss / sp);
  }
  return 0;
}
