#ifndef MMBM_DDOUBLE_HPP
#define MMBM_DDOUBLE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace mmbm {

// Unevaluated sum of two doubles, hi + lo with |lo| <= ulp(hi)/2.  Gives
// roughly 106 bits of mantissa (~32 decimal digits), which is what the
// reference computations in the oracle run on.  The algorithms are the
// classic error-free transformations (Dekker, Knuth, Bailey's qd library).
struct DDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DDouble() = default;
  constexpr DDouble(double h) : hi(h), lo(0.0) {}
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi; }
};

namespace eft {

// s + err == a + b exactly, for any a, b.
inline DDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// Requires |a| >= |b| (or a == 0).
inline DDouble quick_two_sum(double a, double b) {
  double s = a + b;
  double err = b - (s - a);
  return {s, err};
}

// p + err == a * b exactly.
inline DDouble two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

}  // namespace eft

inline DDouble operator+(DDouble a, DDouble b) {
  DDouble s = eft::two_sum(a.hi, b.hi);
  DDouble t = eft::two_sum(a.lo, b.lo);
  double c = s.lo + t.hi;
  DDouble r = eft::quick_two_sum(s.hi, c);
  c = r.lo + t.lo;
  return eft::quick_two_sum(r.hi, c);
}

inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }
inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }

inline DDouble operator*(DDouble a, DDouble b) {
  DDouble p = eft::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return eft::quick_two_sum(p.hi, p.lo);
}

inline DDouble operator/(DDouble a, DDouble b) {
  double q1 = a.hi / b.hi;
  DDouble r = a - DDouble(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - DDouble(q2) * b;
  double q3 = r.hi / b.hi;
  DDouble q = eft::quick_two_sum(q1, q2);
  return q + DDouble(q3);
}

inline DDouble& operator+=(DDouble& a, DDouble b) { return a = a + b; }
inline DDouble& operator-=(DDouble& a, DDouble b) { return a = a - b; }
inline DDouble& operator*=(DDouble& a, DDouble b) { return a = a * b; }
inline DDouble& operator/=(DDouble& a, DDouble b) { return a = a / b; }

inline bool operator==(DDouble a, DDouble b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DDouble a, DDouble b) { return !(a == b); }
inline bool operator<(DDouble a, DDouble b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DDouble a, DDouble b) { return b < a; }
inline bool operator<=(DDouble a, DDouble b) { return !(b < a); }
inline bool operator>=(DDouble a, DDouble b) { return !(a < b); }

inline DDouble abs(DDouble a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline DDouble sqrt(DDouble a) {
  if (a.hi == 0.0 && a.lo == 0.0) return {0.0, 0.0};
  // One Newton step on x = sqrt(a) starting from the double estimate:
  // x' = x + (a - x^2) / (2x), accurate to full dd precision.
  double x = std::sqrt(a.hi);
  DDouble x2 = eft::two_prod(x, x);
  DDouble diff = a - x2;
  double corr = diff.hi / (2.0 * x);
  return eft::quick_two_sum(x, corr);
}

inline bool isfinite(DDouble a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

// Uniform access to the scalar type a numeric routine is instantiated with.
template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr double eps() { return std::numeric_limits<double>::epsilon(); }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static double sqrt(double x) { return std::sqrt(x); }
  static bool finite(double x) { return std::isfinite(x); }
  static constexpr const char* name() { return "double"; }
};

template <>
struct scalar_traits<DDouble> {
  static constexpr double eps() { return 4.93038065763132e-32; }  // 2^-104
  static double to_double(DDouble x) { return x.hi; }
  static DDouble from_double(double x) { return DDouble(x); }
  static DDouble abs(DDouble x) { return mmbm::abs(x); }
  static DDouble sqrt(DDouble x) { return mmbm::sqrt(x); }
  static bool finite(DDouble x) { return mmbm::isfinite(x); }
  static constexpr const char* name() { return "ddouble"; }
};

}  // namespace mmbm

#endif  // MMBM_DDOUBLE_HPP
