#include <cmath>

#include "doctest.h"
#include "frozen/errors.hpp"
#include "frozen/oracle.hpp"
#include "frozen/series.hpp"
#include "frozen/stability.hpp"

using namespace frozen;

namespace {

const Equilibrium& find(const std::vector<Equilibrium>& v, const std::string& label) {
  for (const Equilibrium& e : v)
    if (e.label == label) return e;
  throw std::runtime_error("missing " + label);
}

}  // namespace

TEST_CASE("the pole of the sphere is a fixed point") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  const double E = p.energy_E();
  const auto F = xi_field(p, {0.0, 0.0, E});
  CHECK(std::hypot(F[0], F[1], F[2]) <= 1e-12);
  const Trajectory t = integrate_xi(p, {0.0, 0.0, E}, 100.0);
  for (const auto& s : t.samples) CHECK(std::hypot(s.state[0], s.state[1]) <= 1e-12);
}

TEST_CASE("libration around E3 stays near its level set") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  const Equilibrium& e3 = find(enumerate_equilibria(p), "E3");
  const DelaunayState d{e3.G + 1e-3, 0.0};
  const XiState x0 = delaunay_to_xi(d, p.rho);
  const Trajectory t = integrate_xi(p, x0, 2000.0);
  CHECK(t.energy_drift() <= 1e-12);
  // bounded: never strays far from the equilibrium in Z
  double dz = 0.0;
  for (const auto& s : t.samples) dz = std::max(dz, std::fabs(s.state[2] - e3.lemon.Z));
  CHECK(dz < 5e-3);
}

TEST_CASE("sphere radius is conserved") {
  const ModelParams p = ModelParams::with_j4(0.3, 0.001, -1.0);
  const double E = p.energy_E();
  const XiState x0{0.5 * E, 0.5 * E, std::sqrt(0.5) * E};
  const Trajectory t = integrate_xi(p, x0, 1e4);
  CHECK(t.residual_drift() <= 1e-9);
  CHECK(t.energy_drift() <= 1e-9);
}

TEST_CASE("time reversal") {
  const ModelParams p = ModelParams::rel(0.21, 0.001, 0.2);
  const double E = p.energy_E();
  const ConservationReport c = conservation_check(p, {0.3 * E, -0.4 * E, std::sqrt(0.75) * E}, 1e3);
  CHECK(c.reversal_error <= 1e-9);
}

TEST_CASE("(g,G) flow at E3 and E4") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  const auto eqs = enumerate_equilibria(p);
  const Equilibrium& e3 = find(eqs, "E3");
  const Trajectory t = integrate_gG(p, e3.G, 0.0, 1e3);
  double dev = 0.0;
  for (const auto& s : t.samples) dev = std::max(dev, std::fabs(s.state[1] - e3.G));
  CHECK(dev <= 1e-8);

  // E4 at g = pi/2: a small kick grows
  const Equilibrium& e4 = find(eqs, "E4");
  const Trajectory u = integrate_gG(p, e4.G + 1e-9, 0.5 * M_PI, 3e3);
  double grow = 0.0;
  for (const auto& s : u.samples) grow = std::max(grow, std::fabs(s.state[1] - e4.G));
  CHECK(grow > 1e-6);
}

TEST_CASE("generic (g,G) orbit stays on its level") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  const Trajectory t = integrate_gG(p, 0.445, 1.0, 2000.0);
  CHECK(t.energy_drift() <= 1e-9);
}

TEST_CASE("chart exits and step failures") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  CHECK_THROWS_AS(integrate_gG(p, 1.0 - 5e-7, 0.3, 1e3), ChartExit);
  CHECK_THROWS_AS(integrate_gG(p, 0.1, 0.0, 1.0), DomainError);
  IntegratorOptions o;
  o.abs_tol = 1e-300;
  const double E = p.energy_E();
  CHECK_THROWS_AS(integrate_xi(p, {0.6 * E, 0.0, 0.8 * E}, 1e3, 1e-300, o), StepFailure);
  CHECK_THROWS_AS(integrate_xi(p, {E, E, 0.0}, 1.0), ConstraintError);
}

TEST_CASE("linearization at the J2 reference point") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  const auto eqs = enumerate_equilibria(p);
  const Linearization l3 = linearize_at(p, find(eqs, "E3"));
  CHECK(std::fabs(l3.l1.real()) < 1e-8);
  CHECK(l3.classification == Stability::Stable);
  const Linearization l4 = linearize_at(p, find(eqs, "E4"));
  CHECK(std::fabs(l4.l1.imag()) < 1e-8);
  CHECK(l4.classification == Stability::Unstable);
  CHECK(std::abs(l3.l1) == doctest::Approx(std::sqrt(find(eqs, "E3").char_coeff)).epsilon(1e-4));
  CHECK(std::abs(l4.l1) == doctest::Approx(std::sqrt(-find(eqs, "E4").char_coeff)).epsilon(1e-4));
}

TEST_CASE("degenerate linearization") {
  const ModelParams base = ModelParams::j2(0.3, 0.001);
  const RhoPair rc = rho_crit_exact(base);
  const ModelParams p = base.with_rho(*rc.plus);
  Equilibrium e2;
  e2.kind = Kind::E2;
  e2.lemon = {0.0, 0.0, p.energy_E()};
  e2.G = 1.0;
  CHECK_THROWS_AS(linearize_at(p, e2), DegenerateLinearization);
}

TEST_CASE("brute force: only the poles at large rho") {
  const BruteForceResult r = brute_force_equilibria(ModelParams::j2(0.9, 0.001), 1024);
  CHECK(r.candidates.size() == 2);
  CHECK(r.sphere_zeros.size() == 2);
  CHECK_THROWS_AS(brute_force_equilibria(ModelParams::j2(0.9, 0.001), 100), DomainError);
}

TEST_CASE("brute force agrees with the analytic inventory") {
  for (const ModelParams& p : {ModelParams::j2(0.2, 0.001), ModelParams::rel(0.207, 0.001, 0.2),
                               ModelParams::with_j4(0.24, 0.001, 0.95), ModelParams::with_j4(0.01, 0.001, 2.0)}) {
    const EquivalenceReport r = compare_with_oracle(p);
    INFO(r.detail);
    CHECK(r.passed());
    CHECK(r.max_dz <= 1e-6);
  }
}

TEST_CASE("sphere zeros count the xi preimages") {
  const ModelParams p = ModelParams::rel(0.207, 0.001, 0.2);
  const BruteForceResult r = brute_force_equilibria(p, 1024);
  CHECK(r.candidates.size() == 6);
  // two poles plus two preimages for each of the four tangency points
  CHECK(r.sphere_zeros.size() == 10);
  for (const XiState& x : r.sphere_zeros) {
    const auto F = xi_field(p, x);
    CHECK(std::hypot(F[0], F[1], F[2]) <= 1e-9);
  }
}
