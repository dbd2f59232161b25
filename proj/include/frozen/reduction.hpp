#pragma once

#include <array>
#include <vector>

namespace frozen {

struct DelaunayState {
  double G = 0.0;
  double g = 0.0;  // argument of perigee, radians
};

struct XiState {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;
};

struct LemonState {
  double X = 0.0, Y = 0.0, Z = 0.0;
};

struct PiState {
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
};

struct KeplerInvariants {
  std::array<double, 3> x{}, y{};
};

// Residuals of the three constraint surfaces.
double sphere_residual(const XiState& s, double rho);
double lemon_residual(const LemonState& s, double rho);
double pi_residual(const PiState& s, double rho);

// Contour of the lemon, X^ = E^2 - Z^2 written as (G^2 - rho^2)(1 - G^2).
double lemon_contour(double Z, double rho);

XiState delaunay_to_xi(const DelaunayState& s, double rho);
LemonState xi_to_lemon(const XiState& s);
LemonState delaunay_to_lemon(const DelaunayState& s, double rho);
// All xi-preimages: 1 at the cusps, 2 elsewhere. throws ConstraintError
std::vector<XiState> lemon_to_xi(const LemonState& s, double rho);
// throws DomainError at 2 xi3 + 1 + rho^2 = 0
PiState xi_to_pi(const XiState& s, double rho);
// g in [0, pi) followed by its pi-shift. throws AngleUndefined at the cusps
std::vector<DelaunayState> lemon_to_delaunay(const LemonState& s, double rho);
// throws AngleUndefined at the cusps
DelaunayState xi_to_delaunay(const XiState& s, double rho);

// sigma1 = (1 - |rho|)^2 - pi1^2, sigma2 = G
std::array<double, 2> pi_to_sigma(const PiState& s, double rho);

// x = G + L A, y = G - L A for given node h (L = 1).
KeplerInvariants delaunay_to_kepler_invariants(const DelaunayState& s, double rho, double h);

double G_of_Z(double Z, double rho);
double Z_of_G(double G, double rho);

}  // namespace frozen
