#include "frozen/stability.hpp"

#include <cmath>
#include <string>

#include "frozen/errors.hpp"

namespace frozen {

namespace {

Stability from_sign(double C, bool degenerate) {
  if (degenerate) return Stability::Degenerate;
  return C > 0.0 ? Stability::Stable : Stability::Unstable;
}

// f^2 s+ s- at a cusp is g'^2 - 4 E^2 f^2, free of the pole at f = 0.
StabilityVerdict cusp_verdict(const ModelParams& p, double G, double h2) {
  const NormalFormEval e = eval_gf_G(p, G);
  const double E = p.energy_E();
  const double a = e.dg_dZ * e.dg_dZ, b = 4.0 * E * E * e.f_val * e.f_val;
  StabilityVerdict v;
  v.alpha_sq_coeff = 4.0 * h2 * (a - b);
  v.classification = from_sign(v.alpha_sq_coeff, std::fabs(a - b) <= kTauDeg * (a + b));
  return v;
}

}  // namespace

StabilityVerdict classify_E1(const ModelParams& p) { return cusp_verdict(p, p.abs_rho(), p.rho * p.rho); }

StabilityVerdict classify_E2(const ModelParams& p) { return cusp_verdict(p, 1.0, 1.0); }

double tangency_curvature(const Equilibrium& eq, const ModelParams& p) {
  if (eq.kind != Kind::Eplus && eq.kind != Kind::Eminus) throw DomainError("not a tangency equilibrium");
  const double Z = eq.lemon.Z;
  const NormalFormEval e = eval_gf_auto(p, Z);
  const double Xh = lemon_contour(Z, p.rho);
  const double X = eq.kind == Kind::Eplus ? Xh : -Xh;
  const double X1 = -(e.dg_dZ + e.df_dZ * X) / e.f_val;
  return -(e.d2g_dZ2 + e.d2f_dZ2 * X + 2.0 * e.df_dZ * X1) / e.f_val;
}

StabilityVerdict tangency_verdict(const Equilibrium& eq, const ModelParams& p) {
  const double Z = eq.lemon.Z;
  const NormalFormEval e = eval_gf_auto(p, Z);
  const double Xh = lemon_contour(Z, p.rho);
  const double X2 = tangency_curvature(eq, p);
  const double G2 = eq.G * eq.G, f2 = e.f_val * e.f_val;
  const double E = p.energy_E();
  StabilityVerdict v;
  // contour curvature is -2 on the upper branch, +2 on the lower one
  double diff;
  if (eq.kind == Kind::Eplus) {
    diff = X2 + 2.0;
    v.alpha_sq_coeff = 16.0 * G2 * f2 * Xh * diff;
  } else {
    diff = X2 - 2.0;
    v.alpha_sq_coeff = -16.0 * G2 * f2 * Xh * diff;
  }
  const bool degenerate = eq.merged || std::fabs(diff) <= kTauDeg * (std::fabs(X2) + 2.0) || Xh <= kTauDeg * E * E;
  v.classification = from_sign(v.alpha_sq_coeff, degenerate);
  return v;
}

StabilityVerdict classify_tangency(const Equilibrium& eq, const ModelParams& p) {
  StabilityVerdict v = tangency_verdict(eq, p);
  if (v.classification == Stability::Degenerate) throw DegenerateTangency("concavity difference below tolerance");
  return v;
}

StabilityVerdict classify_ebar(const std::array<Equilibrium, 2>& pair, const ModelParams& p) {
  const double Z = pair[0].lemon.Z;
  const double G = pair[0].G;
  const double Y2 = pair[0].lemon.Y * pair[0].lemon.Y;
  const NormalFormEval e = eval_gf_G(p, G);
  const double Xh = lemon_contour(Z, p.rho);
  StabilityVerdict v;
  v.alpha_sq_coeff = -16.0 * G * G * Y2 * e.df_dZ * e.df_dZ;
  v.classification = from_sign(v.alpha_sq_coeff, Y2 <= kTauDeg * Xh * Xh);
  return v;
}

double ebar_coefficient_as_printed(const ModelParams& p) {
  const auto d = ebar_data(p);
  if (!d) throw DomainError("no zero of f inside the lemon");
  if (d->Zbar == 0.0) throw DomainError("Zbar = 0");
  const NormalFormEval e = eval_gf_G(p, d->Gbar);
  const double Kzz = e.d2g_dZ2 + e.d2f_dZ2 * d->Xbar;
  const double Z2 = d->Zbar * d->Zbar;
  return 4.0 * d->Gbar * d->Gbar * (d->Ysq / Z2) * (2.0 * Kzz * Kzz - 16.0 * e.df_dZ * e.df_dZ * Z2);
}

AuditReport poincare_hopf_audit(const std::vector<Equilibrium>& eqs) {
  AuditReport r;
  for (const Equilibrium& e : eqs) {
    const int n = static_cast<int>(e.xi.size());
    switch (e.stability) {
      case Stability::Stable: r.index_sum += n; break;
      case Stability::Unstable: r.index_sum -= n; break;
      default: r.inconclusive = true; break;
    }
  }
  r.passed = !r.inconclusive && r.index_sum == 2;
  if (!r.inconclusive && r.index_sum != 2)
    throw AuditFailure("index sum is " + std::to_string(r.index_sum) + ", expected 2");
  return r;
}

}  // namespace frozen
