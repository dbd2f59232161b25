#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "frozen/jet.hpp"

namespace frozen {

enum class Model { J2, J4, REL };

std::string_view to_string(Model m);
Model parse_model(std::string_view name);

// Parameter vector a = (rho, lambda, j4 | jC). Units: L = 1, mu = 1, H = rho.
struct ModelParams {
  Model model = Model::J2;
  double rho = 0.0;
  double lambda = 0.0;
  std::optional<double> j4;
  std::optional<double> jC;

  static ModelParams j2(double rho, double lambda);
  static ModelParams with_j4(double rho, double lambda, double j4);
  static ModelParams rel(double rho, double lambda, double jC);

  // throws ModelError
  void validate() const;

  double j4_value() const { return j4.value_or(0.0); }
  double jC_value() const { return jC.value_or(0.0); }
  double abs_rho() const;
  // E = (1 - rho^2)/2, half-height of the lemon
  double energy_E() const;
  ModelParams with_rho(double r) const;
};

struct PhysicalUnits {
  double mu = 0.0;
  double Rp = 0.0;
  double a = 0.0;
  double J2 = 0.0;
  double J4 = 0.0;
  double c = 0.0;

  static PhysicalUnits from_json_file(const std::string& path);
};

struct NormalFormEval {
  double g_val = 0.0, f_val = 0.0;
  double dg_dZ = 0.0, df_dZ = 0.0;
  double d2g_dZ2 = 0.0, d2f_dZ2 = 0.0;

  double K(double X) const { return g_val + f_val * X; }
  double K_Z(double X) const { return dg_dZ + df_dZ * X; }
  double K_ZZ(double X) const { return d2g_dZ2 + d2f_dZ2 * X; }
};

// g(Z), f(Z) from the per-model listings in Z, derivatives by jets.
// throws DomainError for Z <= -(1+rho^2)/2
NormalFormEval eval_gf(const ModelParams& p, double Z);

// Same functions, evaluated through the orbital-element form in G. Better
// conditioned than the Z listing when G is small (the listing polynomials
// cancel near Z = -1/2). Derivatives are still with respect to Z.
NormalFormEval eval_gf_G(const ModelParams& p, double G);

// Listing for G >= 0.3, element form below. This is what the root finders use.
NormalFormEval eval_gf_auto(const ModelParams& p, double Z);

// Jet versions in the variable Z (listing) and G (element form).
void listing_gf(const ModelParams& p, Jet Z, Jet& g, Jet& f);
void element_gf(const ModelParams& p, Jet G, Jet& g, Jet& f);

// K in Delaunay (G,g) from the element form; independent from eval_gf.
double eval_K_delaunay(const ModelParams& p, double G, double g_angle);

ModelParams nondimensionalize(const PhysicalUnits& phys, Model model);
// H = rho_star * L with L = sqrt(mu a)
double dimensionalize_threshold(double rho_star, const PhysicalUnits& phys);

// Printed H+ / H- series in dimensional form, for comparison.
double H_plus_series(const PhysicalUnits& phys);
double H_minus_series(const PhysicalUnits& phys);

}  // namespace frozen
