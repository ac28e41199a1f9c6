#include "mmbm/model.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "mmbm/triplet.hpp"

namespace mmbm {

namespace {

// Strong connectivity of the positive off-diagonal pattern: forward and
// backward reachability from state 0.
bool irreducible(const Matrix<double>& q) {
  const int n = q.rows();
  if (n <= 1) return true;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      int i = queue.front();
      queue.pop_front();
      for (int j = 0; j < n; ++j) {
        if (seen[j] || i == j) continue;
        double e = pass == 0 ? q(i, j) : q(j, i);
        if (e > 0.0) {
          seen[j] = 1;
          ++count;
          queue.push_back(j);
        }
      }
    }
    if (count < n) return false;
  }
  return true;
}

}  // namespace

MmbmModel validate_and_classify(const Vec<double>& v, const Vec<double>& d,
                                const Matrix<double>& q) {
  const int n = q.rows();
  if (n < 2) fail(ErrorCode::BadSize, "model needs at least 2 states");
  if (q.cols() != n || static_cast<int>(v.size()) != n || static_cast<int>(d.size()) != n)
    fail(ErrorCode::DimensionMismatch, "v, d, q sizes disagree");

  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(v[i]) || !std::isfinite(d[i]))
      fail(ErrorCode::InvalidGenerator, "non-finite model entry");
    if (v[i] < 0.0) fail(ErrorCode::InvalidGenerator, "negative variance at state " +
                                                          std::to_string(i));
    double row = 0.0, scale = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(q(i, j))) fail(ErrorCode::InvalidGenerator, "non-finite rate");
      if (i != j) {
        if (q(i, j) < 0.0)
          fail(ErrorCode::InvalidGenerator, "negative off-diagonal rate at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
        row += q(i, j);
        scale += q(i, j);
      }
    }
    row += q(i, i);
    scale += std::fabs(q(i, i));
    if (std::fabs(row) > 4.0 * n * std::numeric_limits<double>::epsilon() * scale)
      fail(ErrorCode::InvalidGenerator, "row " + std::to_string(i) + " of Q does not sum to zero");
  }
  if (!irreducible(q)) fail(ErrorCode::Reducible, "Q is reducible");

  bool any_v = false;
  for (int i = 0; i < n; ++i) {
    if (v[i] > 0.0) any_v = true;
    if (v[i] == 0.0 && d[i] == 0.0)
      fail(ErrorCode::AssumptionA3, "state " + std::to_string(i) +
                                        " has zero variance and zero drift");
  }
  if (!any_v) fail(ErrorCode::AssumptionA2, "V is identically zero");

  MmbmModel m;
  m.n = n;
  m.perm.reserve(n);
  for (int i = 0; i < n; ++i)
    if (v[i] > 0.0) m.perm.push_back(i);
  m.n1 = static_cast<int>(m.perm.size());
  for (int i = 0; i < n; ++i)
    if (v[i] == 0.0 && d[i] > 0.0) m.perm.push_back(i);
  m.n2 = static_cast<int>(m.perm.size()) - m.n1;
  for (int i = 0; i < n; ++i)
    if (v[i] == 0.0 && d[i] < 0.0) m.perm.push_back(i);
  m.n3 = n - m.n1 - m.n2;

  m.v.resize(n);
  m.d.resize(n);
  m.Q = Matrix<double>(n, n);
  for (int a = 0; a < n; ++a) {
    m.v[a] = v[m.perm[a]];
    m.d[a] = d[m.perm[a]];
    for (int b = 0; b < n; ++b) m.Q(a, b) = q(m.perm[a], m.perm[b]);
  }
  return m;
}

Vec<double> model_perron(const MmbmModel& m) {
  TripletRep<double> t;
  t.n = m.n;
  t.off = Matrix<double>(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (i != j) t.off(i, j) = -m.Q(i, j);
  t.v = ones<double>(m.n);
  t.w = Vec<double>(m.n, 0.0);
  return perron_left(t);
}

std::pair<double, Recurrence> mean_drift(const MmbmModel& m, const Vec<double>& u) {
  double drift = 0.0, scale = 0.0;
  for (int i = 0; i < m.n; ++i) {
    drift += u[i] * m.d[i];
    scale += u[i] * std::fabs(m.d[i]);
  }
  Recurrence r;
  if (std::fabs(drift) <= 10.0 * std::numeric_limits<double>::epsilon() * scale)
    r = Recurrence::NullRecurrent;
  else
    r = drift < 0.0 ? Recurrence::PositiveRecurrent : Recurrence::Transient;
  return {drift, r};
}

std::pair<double, Recurrence> mean_drift(const MmbmModel& m) {
  return mean_drift(m, model_perron(m));
}

double choose_h(const MmbmModel& m) {
  double h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.n1 + m.n2; ++i) {
    const double vi = m.v[i];
    const double di = m.d[i];
    const double qi = -m.Q(i, i);  // >= 0
    double hi = std::numeric_limits<double>::infinity();
    if (di < 0.0) {
      // v >= 2(|d| h + q h^2): largest root of 2q h^2 + 2|d| h - v = 0
      const double ad = -di;
      hi = qi > 0.0 ? (std::sqrt(ad * ad + 2.0 * qi * vi) - ad) / (2.0 * qi) : vi / (2.0 * ad);
    } else if (di > 0.0) {
      // v + d h >= 2 q h^2
      if (qi > 0.0) hi = (di + std::sqrt(di * di + 8.0 * qi * vi)) / (4.0 * qi);
    } else {
      // v >= 2 q h^2
      if (qi > 0.0) hi = std::sqrt(vi / (2.0 * qi));
    }
    if (hi < h) h = hi;
  }
  if (!std::isfinite(h)) {
    // Every binding state is constraint-free; an irreducible generator has
    // negative diagonals, so this cannot happen past validation.
    fail(ErrorCode::Internal, "no finite step constraint");
  }
  return 0.5 * h;
}

}  // namespace mmbm
