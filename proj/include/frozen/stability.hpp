#pragma once

#include <array>
#include <vector>

#include "frozen/equilibria.hpp"

namespace frozen {

// alpha^2 + C = 0: C > 0 centre, C < 0 saddle.
struct StabilityVerdict {
  double alpha_sq_coeff = 0.0;
  Stability classification = Stability::Unknown;
};

inline constexpr double kTauDeg = 1e-9;

StabilityVerdict classify_E1(const ModelParams& p);
StabilityVerdict classify_E2(const ModelParams& p);

// Same computation as classify_tangency, but reports Degenerate instead of
// throwing.
StabilityVerdict tangency_verdict(const Equilibrium& eq, const ModelParams& p);
// throws DegenerateTangency when the concavity difference is below tolerance
StabilityVerdict classify_tangency(const Equilibrium& eq, const ModelParams& p);

// d^2 Xtilde / dZ^2 at the tangency, level pinned at the equilibrium.
double tangency_curvature(const Equilibrium& eq, const ModelParams& p);

// C = -16 Gbar^2 Ybar^2 f'(Zbar)^2, from the Jacobian of the (X, Z) flow.
// Both points share it.
StabilityVerdict classify_ebar(const std::array<Equilibrium, 2>& pair, const ModelParams& p);

// The expression 4 G^2 (Y^2/Z^2)(2 K_ZZ^2 - 16 f_Z^2 Z^2) as printed, kept
// for comparison only. throws DomainError at Zbar = 0
double ebar_coefficient_as_printed(const ModelParams& p);

struct AuditReport {
  int index_sum = 0;
  bool inconclusive = false;
  bool passed = false;
};

// throws AuditFailure when the sum differs from 2 and no point is degenerate
AuditReport poincare_hopf_audit(const std::vector<Equilibrium>& eqs);

}  // namespace frozen
