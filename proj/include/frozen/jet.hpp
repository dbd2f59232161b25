#pragma once

#include <cmath>

namespace frozen {

// Truncated Taylor jet a + b*h + c*h^2/2 carrying value, first and second
// derivative through the arithmetic. Used to differentiate the g,f listings.
struct Jet {
  double v = 0.0, d = 0.0, dd = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}
  constexpr Jet(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
};

inline constexpr Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline constexpr Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline constexpr Jet operator-(Jet a) { return {-a.v, -a.d, -a.dd}; }
inline constexpr Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
inline constexpr Jet operator*(double s, Jet a) { return {s * a.v, s * a.d, s * a.dd}; }
inline constexpr Jet operator*(Jet a, double s) { return s * a; }

// f(a) for scalar f with derivatives f0,f1,f2 at a.v
inline constexpr Jet compose(Jet a, double f0, double f1, double f2) {
  return {f0, f1 * a.d, f2 * a.d * a.d + f1 * a.dd};
}

inline Jet inv(Jet a) {
  double r = 1.0 / a.v;
  return compose(a, r, -r * r, 2.0 * r * r * r);
}
inline Jet operator/(Jet a, Jet b) { return a * inv(b); }
inline Jet operator/(Jet a, double s) { return a * (1.0 / s); }
inline Jet operator/(double s, Jet a) { return s * inv(a); }

inline Jet pow(Jet a, double p) {
  double f0 = std::pow(a.v, p);
  double f1 = p * std::pow(a.v, p - 1.0);
  double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return compose(a, f0, f1, f2);
}

inline Jet sqrt(Jet a) {
  double s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline Jet& operator+=(Jet& a, Jet b) { return a = a + b; }
inline Jet& operator-=(Jet& a, Jet b) { return a = a - b; }
inline Jet& operator*=(Jet& a, Jet b) { return a = a * b; }

}  // namespace frozen
