#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "frozen/equilibria.hpp"

namespace frozen {

enum class Chart { Xi, DelaunayGg };

struct TrajectorySample {
  double t = 0.0;
  std::array<double, 3> state{};  // (x1,x2,x3) or (g,G,0)
  double K = 0.0;
  double residual = 0.0;  // sphere residual; 0 in the (g,G) chart
};

struct Trajectory {
  Chart chart = Chart::Xi;
  std::vector<TrajectorySample> samples;

  double energy_drift() const;
  double residual_drift() const;
  void write_csv(const std::string& path) const;
};

struct IntegratorOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  bool project = false;     // rescale onto the sphere after each step
  double min_step = 1e-14;  // StepFailure below this
};

// xi-dot = 2G (grad K x xi)
std::array<double, 3> xi_field(const ModelParams& p, const XiState& xi);
double K_xi(const ModelParams& p, const XiState& xi);

// Embedded Runge-Kutta 7(8). t_end may be negative. throws StepFailure
Trajectory integrate_xi(const ModelParams& p, const XiState& xi0, double t_end, double tol = 1e-12,
                        const IntegratorOptions& extra = {});

// dg/dt = dK/dG, dG/dt = -dK/dg. throws ChartExit near G = |rho| or G = 1
Trajectory integrate_gG(const ModelParams& p, double G0, double g0, double t_end, double tol = 1e-12,
                        const IntegratorOptions& extra = {});

// (dK/dG, dK/dg) from the element form.
std::array<double, 2> gG_gradient(const ModelParams& p, double G, double g);

struct Linearization {
  std::complex<double> l1, l2;
  double lambda_sq = 0.0;  // l1^2; negative for a centre
  Stability classification = Stability::Unknown;
};

// Jacobian of the (g,G) flow by differences of its analytic gradient, or of
// the xi-field at the cusps. throws DegenerateLinearization
Linearization linearize_at(const ModelParams& p, const Equilibrium& fixed_point);

struct BruteForceResult {
  std::vector<Equilibrium> candidates;   // geometric route, sorted by kind then Z
  std::vector<XiState> sphere_zeros;     // zeros of F from the Fibonacci grid
};

struct BruteForceOptions {
  int sphere_points = 100000;  // 0 skips the sphere route
};

// Tangency search by differences of K along both contour branches, plus the
// f = 0 line at g = pi/4. Stability from linearize_at.
BruteForceResult brute_force_equilibria(const ModelParams& p, int grid_n, const BruteForceOptions& opt = {});

struct EquivalenceReport {
  int n_analytic = 0, n_oracle = 0;
  double max_dz = 0.0;  // worst |Z| mismatch over matched pairs
  bool count_ok = false, location_ok = false, stability_ok = false;
  bool degenerate = false;  // some analytic point is degenerate; stability not compared there
  bool audit_ok = false;
  std::string detail;

  bool passed() const { return count_ok && location_ok && stability_ok && (degenerate || audit_ok); }
};

// enumerate_equilibria against brute_force_equilibria, matched by kind and Z.
EquivalenceReport compare_with_oracle(const ModelParams& p, int grid_n = 2048, double z_tol = 1e-6);

struct ConservationReport {
  double energy_drift = 0.0, radius_drift = 0.0, reversal_error = 0.0;
};

// Forward to t_end and back again from the end state.
ConservationReport conservation_check(const ModelParams& p, const XiState& xi0, double t_end, double tol = 1e-12);

}  // namespace frozen
