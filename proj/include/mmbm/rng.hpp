#ifndef MMBM_RNG_HPP
#define MMBM_RNG_HPP

#include <cstdint>
#include <string>

#include "mmbm/model.hpp"

namespace mmbm {

// Counter-based generator: draw i applies the SplitMix64 finalizer to
// seed + (i+1) * 0x9E3779B97F4A7C15.  Stateless in the counter, so streams
// are reproducible and positionable.
uint64_t counter_mix(uint64_t seed, uint64_t counter);

// Standard normal draws via Box-Muller: draw k consumes counters 2k and 2k+1
// and returns sqrt(-2 ln u1) * cos(2 pi u2) with u1 in (0,1], u2 in [0,1).
class RandnStream {
 public:
  explicit RandnStream(uint64_t seed) : seed_(seed) {}

  double next();
  // Heavy-tailed draw spanning many orders of magnitude: randn * exp(5 randn).
  double next_imb();

 private:
  uint64_t seed_;
  uint64_t k_ = 0;
};

enum class Family { Rand, RandS, Imb, ImbS };

const char* family_name(Family f);
Family parse_family(const std::string& s);  // BadSize on unknown names

struct ProblemSpec {
  Family family = Family::Rand;
  int n = 0;
  uint64_t seed = 0;
  Vec<double> v, d;     // raw inputs, original order
  Matrix<double> q;
  MmbmModel model;      // validated, block order

  std::string id() const;
};

// Families: variances |randn|, drifts randn, generator off-diagonals |randn|
// with the diagonal set to the negated off-diagonal row sum.  The *S variants
// zero the last four variances; the imb variants replace every normal draw by
// the heavy-tailed one.  Draw order is v, then d, then the generator row by
// row (diagonal draws are consumed and discarded).
ProblemSpec generate(Family family, int n, uint64_t seed);

}  // namespace mmbm

#endif  // MMBM_RNG_HPP
