#ifndef MMBM_BENCH_HPP
#define MMBM_BENCH_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mmbm/discretize.hpp"
#include "mmbm/rng.hpp"

namespace mmbm {

struct BenchRow {
  std::string problem;
  std::string mode;
  double h = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double fwd_X = 0.0;
  double fwd_Psi = 0.0;
  double cw_X = 0.0;
  double wall_seconds = 0.0;
  std::string status = "ok";  // or the error class that stopped the cell
};

// One row per (family, size, seed, mode) cell: generate, solve, rerun in
// extended precision, compare.  A failing cell records its error class in the
// status column and the batch carries on.
std::vector<BenchRow> run_bench(const std::vector<Family>& families,
                                const std::vector<int>& sizes, int seed_count,
                                const std::vector<Mode>& modes);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_csv(const std::string& path, const std::vector<BenchRow>& rows);

}  // namespace mmbm

#endif  // MMBM_BENCH_HPP
