#include "frozen/reduction.hpp"

#include <cmath>
#include <numbers>

#include "frozen/errors.hpp"

namespace frozen {

namespace {
constexpr double kCuspTol = 1e-12;

double half_height(double rho) { return 0.5 * (1.0 - rho * rho); }
}  // namespace

double G_of_Z(double Z, double rho) {
  double G2 = Z + 0.5 * (1.0 + rho * rho);
  if (G2 < 0.0) throw DomainError("Z below -(1+rho^2)/2");
  return std::sqrt(G2);
}

double Z_of_G(double G, double rho) { return G * G - 0.5 * (1.0 + rho * rho); }

double lemon_contour(double Z, double rho) {
  const double G2 = Z + 0.5 * (1.0 + rho * rho);
  return (G2 - rho * rho) * (1.0 - G2);
}

double sphere_residual(const XiState& s, double rho) {
  const double E = half_height(rho);
  return s.x1 * s.x1 + s.x2 * s.x2 + s.x3 * s.x3 - E * E;
}

double lemon_residual(const LemonState& s, double rho) {
  const double Xh = lemon_contour(s.Z, rho);
  return s.X * s.X + s.Y * s.Y - Xh * Xh;
}

double pi_residual(const PiState& s, double rho) {
  const double r2 = rho * rho;
  const double a = (1.0 + s.p1) * (1.0 + s.p1) - r2;
  const double b = (1.0 - s.p1) * (1.0 - s.p1) - r2;
  return s.p2 * s.p2 + s.p3 * s.p3 - a * b;
}

XiState delaunay_to_xi(const DelaunayState& s, double rho) {
  const double G2 = s.G * s.G;
  const double w = std::sqrt(std::max(0.0, (G2 - rho * rho) * (1.0 - G2)));
  return {w * std::cos(s.g), w * std::sin(s.g), G2 - 0.5 * (1.0 + rho * rho)};
}

LemonState xi_to_lemon(const XiState& s) {
  return {s.x1 * s.x1 - s.x2 * s.x2, 2.0 * s.x1 * s.x2, s.x3};
}

LemonState delaunay_to_lemon(const DelaunayState& s, double rho) {
  const double G2 = s.G * s.G;
  const double w = (G2 - rho * rho) * (1.0 - G2);
  return {w * std::cos(2.0 * s.g), w * std::sin(2.0 * s.g), G2 - 0.5 * (1.0 + rho * rho)};
}

std::vector<XiState> lemon_to_xi(const LemonState& s, double rho) {
  const double E = half_height(rho);
  const double Xh = lemon_contour(s.Z, rho);
  if (s.Z < -E - 1e-8 || s.Z > E + 1e-8) throw ConstraintError("Z outside [-E, E]");
  const double scale = std::max(E * E, 1e-300);
  if (std::fabs(lemon_residual(s, rho)) > 1e-8 * scale) throw ConstraintError("point is not on the lemon");

  if (std::fabs(s.Z - E) < kCuspTol || std::fabs(s.Z + E) < kCuspTol) return {XiState{0.0, 0.0, s.Z}};

  const double R = std::hypot(s.X, s.Y);
  if (R <= 0.0 || Xh <= 0.0) return {XiState{0.0, 0.0, s.Z}};
  double x1, x2;
  if (s.Y == 0.0) {
    if (s.X > 0.0) {
      x1 = std::sqrt(R);
      x2 = 0.0;
    } else {
      x1 = 0.0;
      x2 = std::sqrt(R);
    }
  } else {
    x2 = std::sqrt(0.5 * (R - s.X));
    x1 = s.Y / (2.0 * x2);
  }
  if (x2 == 0.0) return {XiState{x1, 0.0, s.Z}, XiState{-x1, 0.0, s.Z}};
  return {XiState{x1, x2, s.Z}, XiState{-x1, -x2, s.Z}};
}

PiState xi_to_pi(const XiState& s, double rho) {
  const double den = 2.0 * s.x3 + 1.0 + rho * rho;
  if (!(den > 0.0)) throw DomainError("2 xi3 + 1 + rho^2 must be positive");
  return {std::sqrt(2.0) * s.x2 / std::sqrt(den), -2.0 * s.x1, 2.0 * s.x3 + 2.0 * s.x2 * s.x2 / den};
}

std::vector<DelaunayState> lemon_to_delaunay(const LemonState& s, double rho) {
  const double E = half_height(rho);
  if (std::fabs(s.Z - E) < kCuspTol || std::fabs(s.Z + E) < kCuspTol)
    throw AngleUndefined("g undefined at a cusp of the lemon");
  const double G = G_of_Z(s.Z, rho);
  double twog = std::atan2(s.Y, s.X);
  if (twog < 0.0) twog += 2.0 * std::numbers::pi;
  double g = 0.5 * twog;
  if (g >= std::numbers::pi) g -= std::numbers::pi;
  return {DelaunayState{G, g}, DelaunayState{G, g + std::numbers::pi}};
}

DelaunayState xi_to_delaunay(const XiState& s, double rho) {
  const double E = half_height(rho);
  if (std::fabs(s.x3 - E) < kCuspTol || std::fabs(s.x3 + E) < kCuspTol || (s.x1 == 0.0 && s.x2 == 0.0))
    throw AngleUndefined("g undefined at a cusp");
  double g = std::atan2(s.x2, s.x1);
  if (g < 0.0) g += 2.0 * std::numbers::pi;
  return {G_of_Z(s.x3, rho), g};
}

std::array<double, 2> pi_to_sigma(const PiState& s, double rho) {
  const double a = 1.0 - std::fabs(rho);
  // pi3 = 2 xi3 + pi1^2
  const double xi3 = 0.5 * (s.p3 - s.p1 * s.p1);
  const double G = std::sqrt(std::max(0.0, xi3 + 0.5 * (1.0 + rho * rho)));
  return {a * a - s.p1 * s.p1, G};
}

KeplerInvariants delaunay_to_kepler_invariants(const DelaunayState& s, double rho, double h) {
  const double ci = rho / s.G;
  const double si = std::sqrt(std::max(0.0, 1.0 - ci * ci));
  const double e = std::sqrt(std::max(0.0, 1.0 - s.G * s.G));
  const double cg = std::cos(s.g), sg = std::sin(s.g), ch = std::cos(h), sh = std::sin(h);
  std::array<double, 3> Gv{s.G * si * sh, -s.G * si * ch, s.G * ci};
  std::array<double, 3> A{e * (cg * ch - sg * sh * ci), e * (cg * sh + sg * ch * ci), e * sg * si};
  KeplerInvariants k;
  for (int i = 0; i < 3; ++i) {
    k.x[i] = Gv[i] + A[i];
    k.y[i] = Gv[i] - A[i];
  }
  return k;
}

}  // namespace frozen
