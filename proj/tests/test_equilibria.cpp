#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "frozen/equilibria.hpp"
#include "frozen/errors.hpp"
#include "frozen/stability.hpp"

using namespace frozen;

namespace {

std::set<std::string> labels(const std::vector<Equilibrium>& v) {
  std::set<std::string> s;
  for (const Equilibrium& e : v) s.insert(e.label);
  return s;
}

// d/dG of K(G, g) along a branch, by differences of the Delaunay form
double branch_slope(const ModelParams& p, double G, double g) {
  const double h = 1e-6;
  return (eval_K_delaunay(p, G + h, g) - eval_K_delaunay(p, G - h, g)) / (2 * h);
}

}  // namespace

TEST_CASE("J2 reference point: four equilibria") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  const auto eqs = enumerate_equilibria(p);
  REQUIRE(eqs.size() == 4);
  CHECK(labels(eqs) == std::set<std::string>{"E1", "E2", "E3", "E4"});
  for (const Equilibrium& e : eqs) {
    if (e.label == "E3") {
      CHECK(e.G == doctest::Approx(0.4424).epsilon(5e-4 / 0.4424));
      CHECK(e.stability == Stability::Stable);
      CHECK(e.xi.size() == 2);
      CHECK(std::fabs(branch_slope(p, e.G, 0.0)) < 1e-8);
    }
    if (e.label == "E4") {
      CHECK(e.G == doctest::Approx(0.4512).epsilon(5e-4 / 0.4512));
      CHECK(e.stability == Stability::Unstable);
      CHECK(std::fabs(branch_slope(p, e.G, M_PI / 2)) < 1e-8);
    }
  }
}

TEST_CASE("s+ and s- vanish at the tangency points") {
  const ModelParams p = ModelParams::with_j4(0.03, 0.001, 2.0);
  for (int sign : {+1, -1})
    for (const SRoot& r : s_roots(p, sign)) {
      const double v = sign > 0 ? s_plus(p, r.Z) : s_minus(p, r.Z);
      CHECK(std::fabs(v) < 1e-6);
    }
}

TEST_CASE("s near a zero of f raises PoleError") {
  const ModelParams p = ModelParams::with_j4(0.24, 0.001, 0.95);
  const auto z = f_zeros(p);
  REQUIRE(!z.empty());
  CHECK_THROWS_AS(s_plus(p, z[0]), PoleError);
  CHECK_NOTHROW(s_plus(p, z[0] + 1e-6));
}

TEST_CASE("rho^2 quadratic in G is consistent with s") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double G = 0.1 + 0.89 * u(rng);
    ModelParams p = i % 3 == 0   ? ModelParams::j2(0.5, 1e-3 * (1 + 9 * u(rng)))
                    : i % 3 == 1 ? ModelParams::with_j4(0.5, 1e-3, -6 + 12 * u(rng))
                                 : ModelParams::rel(0.5, 1e-3, 0.3 * u(rng));
    for (int sign : {+1, -1}) {
      for (double r2 : admissible_rho2(p, G, sign)) {
        const ModelParams q = p.with_rho(std::sqrt(r2));
        CHECK(r2 > 0.0);
        CHECK(r2 < G * G);
        CHECK(std::fabs(s_polynomial(p, G, sign).at(std::sqrt(r2))) <=
              1e-9 * (std::fabs(s_polynomial(p, G, sign).c) + 1.0));
        const double Z = Z_of_G(G, q.rho);
        if (lemon_contour(Z, q.rho) < 1e-6) continue;
        try {
          const double s = sign > 0 ? s_plus(q, Z) : s_minus(q, Z);
          CHECK(std::fabs(s) < 1e-6);
        } catch (const PoleError&) {
        }
      }
    }
  }
}

TEST_CASE("J2 admissible branch matches the closed form with A, B, C, D") {
  for (double l : {1e-4, 1e-3, 1e-2}) {
    const ModelParams p = ModelParams::j2(0.3, l);
    for (double G : {0.05, 0.2, 0.5, 0.8, 1.0}) {
      const double G2 = G * G, G4 = G2 * G2;
      const double A = (49 * G2 - 96 * G - 99) * l + 80 * G4, C = 45 * G2 - 72 * G - 143;
      const double D = 32 * G4 - 15 * G2 * l - 24 * G * l + 21 * l;
      const double B = (A * A - 5 * l * C * D) / 16.0;
      const double r2 = G2 / (5 * l) * (A - 4 * std::sqrt(B)) / C;
      const auto roots = admissible_rho2(p, G, +1);
      REQUIRE(roots.size() == 1);
      CHECK(roots[0] == doctest::Approx(r2).epsilon(1e-9));
    }
  }
}

TEST_CASE("J2 never has the Ebar pair") {
  for (double rho = 0.01; rho < 1.0; rho += 0.01)
    for (double l : {1e-4, 1e-3, 1e-2, 0.1}) {
      const auto d = ebar_data(ModelParams::j2(rho, l));
      if (d) CHECK(d->Ysq < 0.0);
      CHECK(!find_ebar(ModelParams::j2(rho, l)));
    }
}

TEST_CASE("Ebar sits on a zero of f and on the curve K_Z = 0") {
  const ModelParams p = ModelParams::with_j4(0.24, 0.001, 0.95);
  const auto d = ebar_data(p);
  REQUIRE(d);
  const NormalFormEval e = eval_gf_G(p, d->Gbar);
  CHECK(std::fabs(e.f_val) < 1e-12);
  CHECK(std::fabs(e.K_Z(d->Xbar)) < 1e-9 * std::fabs(e.dg_dZ));
  CHECK(d->Ysq > 0.0);
  const auto pair = find_ebar(p);
  REQUIRE(pair);
  CHECK((*pair)[0].lemon.Y == doctest::Approx(-(*pair)[1].lemon.Y));
  CHECK(std::fabs(lemon_residual((*pair)[0].lemon, p.rho)) < 1e-14);
}

TEST_CASE("labels through the J4 regimes") {
  CHECK(labels(enumerate_equilibria(ModelParams::with_j4(0.01, 0.001, 2.0))) ==
        std::set<std::string>{"E1", "E2", "E3", "E4", "E7", "E8", "E9", "E10"});
  CHECK(labels(enumerate_equilibria(ModelParams::with_j4(0.24, 0.001, 0.95))) ==
        std::set<std::string>{"E1", "E2", "E3", "E4", "Ebar1", "Ebar2"});
  CHECK(labels(enumerate_equilibria(ModelParams::with_j4(0.1, 0.001, -1.0))) ==
        std::set<std::string>{"E1", "E2", "E3", "E4", "E11", "E12"});
  CHECK(labels(enumerate_equilibria(ModelParams::rel(0.207, 0.001, 0.2))) ==
        std::set<std::string>{"E1", "E2", "E15", "E16", "E17", "E18"});
  CHECK(labels(enumerate_equilibria(ModelParams::rel(0.1, 0.001, 0.2))) ==
        std::set<std::string>{"E1", "E2", "E15", "E16"});
}

TEST_CASE("level curve through a tangency touches the contour") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  for (const Equilibrium& e : enumerate_equilibria(p)) {
    if (e.kind != Kind::Eplus && e.kind != Kind::Eminus) continue;
    const NormalFormEval ev = eval_gf_auto(p, e.lemon.Z);
    const double k = ev.K(e.lemon.X);
    const double dz = 1e-4;
    const LevelCurve c = level_curve(p, k, {e.lemon.Z - dz, e.lemon.Z, e.lemon.Z + dz});
    CHECK(c.Xtilde[1] == doctest::Approx(e.lemon.X).epsilon(1e-10));
    // same side of the contour on both neighbours: touching, not crossing
    const double s = e.kind == Kind::Eplus ? 1.0 : -1.0;
    const double a = s * c.Xtilde[0] - c.Xhat[0], b = s * c.Xtilde[2] - c.Xhat[2];
    CHECK(a * b > 0.0);
  }
}

TEST_CASE("orbital elements of an equilibrium") {
  const ModelParams p = ModelParams::j2(0.2, 0.001);
  for (const Equilibrium& e : enumerate_equilibria(p)) {
    CHECK(e.eccentricity() == doctest::Approx(std::sqrt(1 - e.G * e.G)));
    CHECK(std::cos(e.inclination(p.rho)) == doctest::Approx(p.rho / e.G));
  }
}
