#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "frozen/model.hpp"

namespace frozen {

struct SeriesResult {
  double value = 0.0;
  int order = 0;
  std::vector<double> terms;  // terms[k] multiplies lambda^k, already included
  bool unreliable = false;    // |rho| < 0.05 for the G series
};

struct RhoPair {
  std::optional<double> plus, minus;
};

// rho+ / rho- for J2 and J4, rho~+ / rho~- for REL (absent when the closed
// form is not admissible).
RhoPair rho_crit_exact(const ModelParams& p);

// Printed expansions: orders 0..3 for J2, 0..2 for J4. throws OrderUnsupported
std::pair<SeriesResult, SeriesResult> rho_crit_series(const ModelParams& p, int order);

// The J4 third-order listings contain three misprints. Corrected is
// the default; AsPrinted reproduces the listing verbatim.
enum class Transcription { Corrected, AsPrinted };

// G+ and G- of E3 / E4. J2 and J4 only. throws OrderUnsupported
std::pair<SeriesResult, SeriesResult> G_frozen_series(const ModelParams& p, int order,
                                                      Transcription t = Transcription::Corrected);

double j4_vinti_boundary_series(double lambda);
// j4 with rho+(j4) = rho-(j4), by bisection on the closed forms
double j4_vinti_boundary_direct(double lambda);

// Endpoint values of s+ and s- at Z = -E and Z = E from the closed forms.
struct EndpointS {
  double sp_lo = 0.0, sm_lo = 0.0, sp_hi = 0.0, sm_hi = 0.0;
};
EndpointS endpoint_s_closed(const ModelParams& p);

// J4 pitchforks at E1: zero of s+(-E) (rho_triangle_up, j4 < -31/35) and of
// s-(-E) (rho_triangle_down, j4 < -12/25).
std::optional<double> rho_triangle_up(const ModelParams& p);
std::optional<double> rho_triangle_down(const ModelParams& p);

// jC above which rho~- > rho~+.
double jC_tilde(double lambda);

// Zero-order (lambda -> 0) candidate Z values of the REL model, ascending.
// Absent for jC = 0 or jC rho^2 > 1/80.
std::optional<std::pair<double, double>> rel_order0(const ModelParams& p);

// Zero-order curvature difference of the REL tangency points as a function
// of q = jC rho^2. upper selects the higher-Z pair (E17/E18).
double rel_zero_order_curvature(double q, bool upper);

}  // namespace frozen
