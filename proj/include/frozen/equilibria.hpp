#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frozen/model.hpp"
#include "frozen/reduction.hpp"

namespace frozen {

enum class Kind { E1, E2, Eplus, Eminus, Ebar };
enum class Stability { Unknown, Stable, Unstable, Degenerate };

std::string_view to_string(Kind k);
std::string_view to_string(Stability s);

struct Equilibrium {
  Kind kind = Kind::E1;
  LemonState lemon;
  double G = 0.0;
  std::vector<XiState> xi;
  Stability stability = Stability::Unknown;
  double char_coeff = std::numeric_limits<double>::quiet_NaN();
  std::string label;
  // two s-roots closer than the merge tolerance were fused (saddle-node)
  bool merged = false;

  double eccentricity() const;
  // radians, from cos i = rho / G
  double inclination(double rho) const;
};

// Tangency functions. PoleError when Z is within 1e-10 (relative to 2E) of a
// zero of f.
double s_plus(const ModelParams& p, double Z);
double s_minus(const ModelParams& p, double Z);

// Numerators of s+(G^2 - (1+rho^2)/2) (sign = +1) and of s- (sign = -1),
// written as a rho^4 + b rho^2 + c. p.rho is ignored.
struct RhoQuadratic {
  double a = 0.0, b = 0.0, c = 0.0;
  double at(double rho) const { const double r2 = rho * rho; return (a * r2 + b) * r2 + c; }
};
RhoQuadratic s_polynomial(const ModelParams& p, double G, int sign);

// Admissible roots rho^2 in (0, G^2) of the quadratic, ascending.
std::vector<double> admissible_rho2(const ModelParams& p, double G, int sign);

struct TangencyOptions {
  int grid = 4096;
  int per_decade = 8;            // endpoint / pole refinement density
  double z_tol = 1e-13;
  double merge_tol = 1e-8;
};

// Zeros of f on [-E, E], ascending.
std::vector<double> f_zeros(const ModelParams& p, const TangencyOptions& opt = {});

// Raw roots of s+ (sign = +1) or s- (sign = -1) in (-E, E), ascending.
struct SRoot {
  double Z = 0.0;
  bool merged = false;
};
std::vector<SRoot> s_roots(const ModelParams& p, int sign, const TangencyOptions& opt = {});

std::vector<Equilibrium> find_tangency_equilibria(const ModelParams& p, const TangencyOptions& opt = {});

struct EbarData {
  double Zbar = 0.0, Gbar = 0.0, Xbar = 0.0;
  double Ysq = 0.0;  // E-script Y = Xhat(Zbar)^2 - Xbar^2
};

// Closed-form root of f per model; absent when it falls outside [-E, E].
std::optional<EbarData> ebar_data(const ModelParams& p);
std::optional<std::array<Equilibrium, 2>> find_ebar(const ModelParams& p);

// Full set with stability and labels filled in.
std::vector<Equilibrium> enumerate_equilibria(const ModelParams& p, const TangencyOptions& opt = {});

// Paper-style names E3..E18 from the kind, Z ordering and active thresholds.
void assign_labels(const ModelParams& p, std::vector<Equilibrium>& eqs);

struct LevelCurve {
  std::vector<double> Z, Xtilde, Xhat;
};
// Xtilde = (k - g)/f on the grid. throws PoleError near zeros of f
LevelCurve level_curve(const ModelParams& p, double k, const std::vector<double>& Zgrid);

}  // namespace frozen
