#ifndef MMBM_MODEL_HPP
#define MMBM_MODEL_HPP

#include <utility>
#include <vector>

#include "mmbm/cr.hpp"
#include "mmbm/matrix.hpp"

namespace mmbm {

// Validated model data, reordered once into (E1, E2, E3) block order:
// E1 = states with positive variance, E2 = zero variance and positive drift,
// E3 = zero variance and negative drift.  perm[k] is the original index of
// block-ordered state k; the relative order inside each block is preserved.
struct MmbmModel {
  int n = 0;
  int n1 = 0, n2 = 0, n3 = 0;
  Vec<double> v;      // variances, block order
  Vec<double> d;      // drifts, block order
  Matrix<double> Q;   // generator, block order
  std::vector<int> perm;

  int head() const { return n1 + n2; }  // size of the identity block of U

  // Maps a block-ordered state vector back to the caller's original order.
  template <typename S>
  Vec<S> to_original(const Vec<S>& x) const {
    Vec<S> y(x.size());
    for (int k = 0; k < n; ++k) y[perm[k]] = x[k];
    return y;
  }
};

// Checks the generator (exact zero row sums in the canonical accumulation
// order, nonnegative off-diagonal, irreducible), the sign assumptions on V,
// and that no state has both zero variance and zero drift; classifies states
// and reorders them into block order.
MmbmModel validate_and_classify(const Vec<double>& v, const Vec<double>& d,
                                const Matrix<double>& q);

// Left Perron vector of Q (block order), via the triplet (offdiag(-Q), 1, 0).
Vec<double> model_perron(const MmbmModel& m);

// Mean drift u D 1 and its sign class.
std::pair<double, Recurrence> mean_drift(const MmbmModel& m, const Vec<double>& u);
std::pair<double, Recurrence> mean_drift(const MmbmModel& m);

// Largest step h for which every diagonal of the discretized C is a guarded
// subtraction b - a with b >= 2a >= 0, then halved.
double choose_h(const MmbmModel& m);

}  // namespace mmbm

#endif  // MMBM_MODEL_HPP
