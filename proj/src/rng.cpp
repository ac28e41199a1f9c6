#include "mmbm/rng.hpp"

#include <cmath>

namespace mmbm {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

uint64_t counter_mix(uint64_t seed, uint64_t counter) {
  uint64_t x = seed + (counter + 1) * kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double RandnStream::next() {
  const uint64_t a = counter_mix(seed_, 2 * k_);
  const uint64_t b = counter_mix(seed_, 2 * k_ + 1);
  ++k_;
  // u1 in (0,1] so the log is finite; u2 in [0,1).
  const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RandnStream::next_imb() {
  const double z = next();
  const double w = next();
  return z * std::exp(5.0 * w);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Rand: return "rand";
    case Family::RandS: return "rands";
    case Family::Imb: return "imb";
    case Family::ImbS: return "imbs";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "rand") return Family::Rand;
  if (s == "rands") return Family::RandS;
  if (s == "imb") return Family::Imb;
  if (s == "imbs") return Family::ImbS;
  fail(ErrorCode::BadSize, "unknown family '" + s + "'");
}

std::string ProblemSpec::id() const {
  return std::string(family_name(family)) + std::to_string(n) + "#" + std::to_string(seed);
}

ProblemSpec generate(Family family, int n, uint64_t seed) {
  const bool sparse_v = family == Family::RandS || family == Family::ImbS;
  const bool imb = family == Family::Imb || family == Family::ImbS;
  if (n < 2) fail(ErrorCode::BadSize, "n must be at least 2");
  if (sparse_v && n < 5) fail(ErrorCode::BadSize, "the *s families need n >= 5");

  RandnStream rs(seed);
  auto draw = [&]() { return imb ? rs.next_imb() : rs.next(); };

  ProblemSpec p;
  p.family = family;
  p.n = n;
  p.seed = seed;
  p.v.assign(n, 0.0);
  p.d.resize(n);
  p.q = Matrix<double>(n, n);

  const int nv = sparse_v ? n - 4 : n;
  for (int i = 0; i < nv; ++i) p.v[i] = std::fabs(draw());
  for (int i = 0; i < n; ++i) p.d[i] = draw();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.q(i, j) = std::fabs(draw());
  // Snap each row's off-diagonal to a binary grid 2^-40 below its largest
  // entry.  Entries then carry at most ~41 significant bits, the row sum is
  // exact in double arithmetic, and the negated diagonal closes the row to
  // zero exactly as stored -- which is what the triplet (offdiag(-Q), 1, 0)
  // asserts.
  for (int i = 0; i < n; ++i) {
    double big = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) big = std::max(big, p.q(i, j));
    const double grid = std::ldexp(1.0, std::ilogb(big) - 40);
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      p.q(i, j) = std::nearbyint(p.q(i, j) / grid) * grid;
      off += p.q(i, j);
    }
    p.q(i, i) = -off;
  }

  p.model = validate_and_classify(p.v, p.d, p.q);
  return p;
}

}  // namespace mmbm
