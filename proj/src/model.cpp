#include "frozen/model.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "frozen/errors.hpp"

namespace frozen {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::J2: return "j2";
    case Model::J4: return "j4";
    case Model::REL: return "rel";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  if (name == "j2" || name == "J2") return Model::J2;
  if (name == "j4" || name == "J4") return Model::J4;
  if (name == "rel" || name == "REL" || name == "c") return Model::REL;
  throw ModelError("unknown model '" + std::string(name) + "'");
}

ModelParams ModelParams::j2(double rho, double lambda) {
  ModelParams p;
  p.model = Model::J2;
  p.rho = rho;
  p.lambda = lambda;
  return p;
}

ModelParams ModelParams::with_j4(double rho, double lambda, double j4v) {
  ModelParams p;
  p.model = Model::J4;
  p.rho = rho;
  p.lambda = lambda;
  p.j4 = j4v;
  return p;
}

ModelParams ModelParams::rel(double rho, double lambda, double jCv) {
  ModelParams p;
  p.model = Model::REL;
  p.rho = rho;
  p.lambda = lambda;
  p.jC = jCv;
  return p;
}

void ModelParams::validate() const {
  if (!(std::fabs(rho) > 0.0 && std::fabs(rho) < 1.0)) throw ModelError("rho out of range (0 < |rho| < 1)");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ModelError("lambda out of range (0 < lambda < 1)");
  switch (model) {
    case Model::J2:
      if (j4 || jC) throw ModelError("j2 model takes neither j4 nor jC");
      break;
    case Model::J4:
      if (!j4 || jC) throw ModelError("j4 model needs j4 and no jC");
      if (!std::isfinite(*j4)) throw ModelError("j4 must be finite");
      break;
    case Model::REL:
      if (!jC || j4) throw ModelError("rel model needs jC and no j4");
      if (!(*jC >= 0.0) || !std::isfinite(*jC)) throw ModelError("jC must be >= 0");
      break;
  }
}

double ModelParams::abs_rho() const { return std::fabs(rho); }
double ModelParams::energy_E() const { return 0.5 * (1.0 - rho * rho); }

ModelParams ModelParams::with_rho(double r) const {
  ModelParams q = *this;
  q.rho = r;
  return q;
}

PhysicalUnits PhysicalUnits::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UnitsError(std::string("bad physical config: ") + e.what());
  }
  PhysicalUnits u;
  auto get = [&](const char* key, double def, bool required) {
    if (j.contains(key)) return j.at(key).get<double>();
    if (required) throw UnitsError(std::string("physical config lacks '") + key + "'");
    return def;
  };
  u.mu = get("mu", 0.0, true);
  u.Rp = get("rp", 0.0, true);
  u.a = get("a", 0.0, true);
  u.J2 = get("j2", 0.0, true);
  u.J4 = get("j4", 0.0, false);
  u.c = get("c", 299792458.0, false);
  return u;
}

// ---- per-model listings in Z ------------------------------------------

void listing_gf(const ModelParams& p, Jet Z, Jet& g, Jet& f) {
  const double r = p.rho, r2 = r * r, r4 = r2 * r2, r6 = r4 * r2;
  const double l = p.lambda;
  const double s2 = std::sqrt(2.0);
  Jet u = r2 + 2.0 * Z + 1.0;
  Jet W = sqrt(2.0 * r2 + 4.0 * Z + 2.0);
  Jet u52 = pow(u, 2.5), u72 = pow(u, 3.5), u112 = pow(u, 5.5);
  Jet q = -5.0 * r2 + 2.0 * Z + 1.0;
  Jet Z2 = Z * Z, Z3 = Z2 * Z;

  Jet poly = 40.0 * Z3 + (-84.0 * r2 + 20.0) * Z2 + (-74.0 * r4 - 44.0 * r2 - 10.0) * Z +
             (-11.0 * r6 + 273.0 * r4 - r2 - 5.0) + 4.0 * W * q * q;
  g = q / (s2 * u52) - 3.0 * l / (16.0 * s2) * poly / u112;
  f = -1.5 * l * (-29.0 * r2 + 2.0 * Z + 1.0) / (s2 * u112);

  if (p.model == Model::J4) {
    const double j = p.j4_value();
    Jet p4 = -72.0 * Z3 + 12.0 * (51.0 * r2 + 1.0) * Z2 + 3.0 * (-58.0 * r4 - 156.0 * r2 + 22.0) * Z +
             (-249.0 * r6 + 743.0 * r4 - 387.0 * r2 + 21.0);
    g = g - 3.0 * l * j / (16.0 * s2) * p4 / u112;
    f = f + 7.5 * l * j * (-13.0 * r2 + 2.0 * Z + 1.0) / (s2 * u112);
  } else if (p.model == Model::REL) {
    const double c = p.jC_value();
    g = g + c * 0.375 * (5.0 * W - 16.0) / W +
        c * l * q / (2.0 * s2 * u72) * (-29.0 * r2 + 18.0 * W - 58.0 * Z + 43.0);
    f = f - 18.0 * l * c / (s2 * u72);
  }
}

// ---- element form in G ----------------------------------------------------

void element_gf(const ModelParams& p, Jet G, Jet& g, Jet& f) {
  const double r2 = p.rho * p.rho, r4 = r2 * r2;
  const double l = p.lambda;
  Jet G2 = G * G, G3 = G2 * G, G4 = G2 * G2, G5 = G4 * G, G6 = G3 * G3;
  Jet iG5 = inv(G5), iG7 = iG5 * inv(G2), iG11 = iG5 * inv(G6);

  Jet K1 = (G2 - 3.0 * r2) * iG5 / 4.0;
  Jet T2 = 3.0 * l / 128.0 * iG11 *
           (-5.0 * G6 - 4.0 * G5 + 24.0 * r2 * G3 - 36.0 * r4 * G - 35.0 * r4 + (18.0 * r2 + 5.0) * G4 -
            5.0 * (r4 + 2.0 * r2) * G2);
  g = K1 + T2;
  f = -3.0 * l / 64.0 * (G2 - 15.0 * r2) * iG11;

  if (p.model == Model::J4) {
    const double j = p.j4_value();
    g = g - 3.0 * j * l / 128.0 * iG11 * (3.0 * G4 - 30.0 * r2 * G2 + 35.0 * r4) * (5.0 - 3.0 * G2);
    f = f + 15.0 * j * l / 64.0 * (G2 - 7.0 * r2) * iG11;
  } else if (p.model == Model::REL) {
    const double c = p.jC_value();
    Jet A = G2 - 3.0 * r2;
    g = g + 0.375 * c * (5.0 * G - 8.0) * inv(G) +
        l * c / 8.0 * iG7 * (A * (6.0 - 5.0 * G2) - 6.0 * A * (4.0 * G2 - 3.0 * G - 5.0));
    f = f - 9.0 * l * c / 8.0 * iG7;
  }
}

NormalFormEval eval_gf(const ModelParams& p, double Z) {
  const double zmin = -0.5 * (1.0 + p.rho * p.rho);
  if (!(Z > zmin)) throw DomainError("Z at or below -(1+rho^2)/2");
  Jet g, f;
  listing_gf(p, Jet::variable(Z), g, f);
  return {g.v, f.v, g.d, f.d, g.dd, f.dd};
}

NormalFormEval eval_gf_G(const ModelParams& p, double G) {
  if (!(G > 0.0)) throw DomainError("G must be positive");
  Jet g, f;
  element_gf(p, Jet::variable(G), g, f);
  // dZ = 2G dG
  auto toZ = [G](const Jet& h, double& d1, double& d2) {
    d1 = h.d / (2.0 * G);
    d2 = (h.dd - h.d / G) / (4.0 * G * G);
  };
  NormalFormEval e;
  e.g_val = g.v;
  e.f_val = f.v;
  toZ(g, e.dg_dZ, e.d2g_dZ2);
  toZ(f, e.df_dZ, e.d2f_dZ2);
  return e;
}

NormalFormEval eval_gf_auto(const ModelParams& p, double Z) {
  const double G2 = Z + 0.5 * (1.0 + p.rho * p.rho);
  if (!(G2 > 0.0)) throw DomainError("Z at or below -(1+rho^2)/2");
  if (G2 >= 0.09) return eval_gf(p, Z);
  return eval_gf_G(p, std::sqrt(G2));
}

double eval_K_delaunay(const ModelParams& p, double G, double ga) {
  const double r = p.abs_rho();
  if (!(G >= r && G <= 1.0)) throw DomainError("G outside [|rho|, 1]");
  const double r2 = r * r, r4 = r2 * r2, l = p.lambda;
  const double G2 = G * G, G3 = G2 * G, G4 = G2 * G2, G5 = G4 * G, G6 = G3 * G3;
  const double G7 = G6 * G, G11 = G6 * G5;
  const double c2g = std::cos(2.0 * ga);
  const double E2 = (1.0 - G2) * (G2 - r2);

  double K = (G2 - 3.0 * r2) / (4.0 * G5);
  K += 3.0 * l / (128.0 * G11) *
       (-5.0 * G6 - 4.0 * G5 + 24.0 * G3 * r2 - 36.0 * G * r4 - 35.0 * r4 + G4 * (18.0 * r2 + 5.0) -
        5.0 * G2 * (r4 + 2.0 * r2) + 2.0 * (G2 - 15.0 * r2) * (G2 - 1.0) * (G2 - r2) * c2g);
  if (p.model == Model::J4) {
    const double j = p.j4_value();
    K -= 3.0 * j * l / (128.0 * G11) *
         ((3.0 * G4 - 30.0 * G2 * r2 + 35.0 * r4) * (5.0 - 3.0 * G2) - 10.0 * (G2 - 7.0 * r2) * E2 * c2g);
  } else if (p.model == Model::REL) {
    const double c = p.jC_value();
    K += 0.375 * c * (5.0 * G - 8.0) / G;
    K += l * c / (8.0 * G7) *
         ((G2 - 3.0 * r2) * (6.0 - 5.0 * G2) - 6.0 * (G2 - 3.0 * r2) * (4.0 * G2 - 3.0 * G - 5.0) - 9.0 * E2 * c2g);
  }
  return K;
}

ModelParams nondimensionalize(const PhysicalUnits& u, Model model) {
  if (!(u.mu > 0 && u.Rp > 0 && u.a > 0 && u.J2 > 0 && u.c > 0)) throw UnitsError("physical constants must be positive");
  if (!(u.Rp < u.a)) throw UnitsError("Rp must be smaller than a");
  ModelParams p;
  p.model = model;
  const double rp = u.Rp / u.a;
  p.lambda = u.J2 * rp * rp;
  if (model == Model::J4) {
    p.j4 = -u.J4 / (u.J2 * u.J2);
  } else if (model == Model::REL) {
    const double cnd = u.c * std::sqrt(u.a / u.mu);
    p.jC = 1.0 / (p.lambda * cnd * cnd);
  }
  return p;
}

double dimensionalize_threshold(double rho_star, const PhysicalUnits& u) {
  if (!(rho_star > 0.0 && rho_star < 1.0)) throw DomainError("rho_star outside (0,1)");
  return rho_star * std::sqrt(u.mu * u.a);
}

namespace {
double small_q(const PhysicalUnits& u) {
  const double L = std::sqrt(u.mu * u.a);
  return u.J2 * u.mu * u.mu * u.Rp * u.Rp / (L * L * L * L);
}
}  // namespace

double H_plus_series(const PhysicalUnits& u) {
  const double L = std::sqrt(u.mu * u.a), q = small_q(u);
  return L / std::sqrt(5.0) * (1.0 + q / 10.0 - 7.0 / 200.0 * q * q - 7.0 / 800.0 * q * q * q);
}

double H_minus_series(const PhysicalUnits& u) {
  const double L = std::sqrt(u.mu * u.a), q = small_q(u);
  return L / std::sqrt(5.0) * (1.0 - q / 10.0 + 3.0 / 40.0 * q * q - 299.0 / 4000.0 * q * q * q);
}

}  // namespace frozen
