#include "frozen/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "frozen/bifurcation.hpp"
#include "frozen/errors.hpp"
#include "frozen/stability.hpp"

namespace frozen {

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::E1: return "E1";
    case Kind::E2: return "E2";
    case Kind::Eplus: return "Eplus";
    case Kind::Eminus: return "Eminus";
    case Kind::Ebar: return "Ebar";
  }
  return "?";
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Unknown: return "unknown";
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Degenerate: return "degenerate";
  }
  return "?";
}

double Equilibrium::eccentricity() const { return std::sqrt(std::max(0.0, 1.0 - G * G)); }

double Equilibrium::inclination(double rho) const {
  return std::acos(std::clamp(rho / G, -1.0, 1.0));
}

namespace {

constexpr double kPoleTol = 1e-10;

double s_value(const ModelParams& p, double Z, int sign) {
  const NormalFormEval e = eval_gf_auto(p, Z);
  const double E = p.energy_E();
  if (std::fabs(e.f_val) <= kPoleTol * 2.0 * E * std::fabs(e.df_dZ)) throw PoleError("s evaluated at a zero of f");
  const double Xh = lemon_contour(Z, p.rho);
  if (sign > 0) return -(e.dg_dZ + e.df_dZ * Xh) / e.f_val + 2.0 * Z;
  return -(e.dg_dZ - e.df_dZ * Xh) / e.f_val - 2.0 * Z;
}

double f_value(const ModelParams& p, double Z) { return eval_gf_auto(p, Z).f_val; }

// Uniform interior grid plus geometric clusters towards both endpoints.
std::vector<double> base_grid(double E, const TangencyOptions& opt) {
  std::vector<double> z;
  const int n = std::max(opt.grid, 16);
  z.reserve(n + 64 * opt.per_decade);
  for (int i = 1; i < n; ++i) z.push_back(-E + 2.0 * E * i / n);
  const double h = 2.0 * E / n;
  for (int k = 1;; ++k) {
    const double d = h * std::pow(10.0, -double(k) / opt.per_decade);
    if (d < 1e-14 * 2.0 * E) break;
    z.push_back(-E + d);
    z.push_back(E - d);
  }
  return z;
}

template <class F>
double bisect(F&& fn, double a, double b, double fa, double tol) {
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = fn(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

Equilibrium make_point(Kind kind, const LemonState& L, const ModelParams& p) {
  Equilibrium e;
  e.kind = kind;
  e.lemon = L;
  e.G = std::sqrt(std::max(0.0, L.Z + 0.5 * (1.0 + p.rho * p.rho)));
  e.xi = lemon_to_xi(L, p.rho);
  return e;
}

}  // namespace

double s_plus(const ModelParams& p, double Z) { return s_value(p, Z, +1); }
double s_minus(const ModelParams& p, double Z) { return s_value(p, Z, -1); }

RhoQuadratic s_polynomial(const ModelParams& p, double G, int sign) {
  const double l = p.lambda;
  const double G2 = G * G, G3 = G2 * G, G4 = G2 * G2, G5 = G4 * G, G6 = G4 * G2;
  RhoQuadratic q;
  if (p.model == Model::REL) {
    const double c = p.jC_value();
    const double G7 = G6 * G, G8 = G4 * G4, G10 = G8 * G2;
    if (sign > 0) {
      q.a = (-225.0 * G2 + 360.0 * G + 715.0) * l;
      q.b = -2080.0 * G6 * c * l + 1728.0 * G5 * c * l + 160.0 * G6 + 3696.0 * G4 * c * l + 98.0 * G4 * l -
            192.0 * G3 * l - 198.0 * G2 * l;
      q.c = 128.0 * G10 * c + 320.0 * G8 * c * l - 384.0 * G7 * c * l - 32.0 * G8 - 720.0 * G6 * c * l +
            15.0 * G6 * l + 24.0 * G5 * l - 21.0 * G4 * l;
    } else {
      q.a = (315.0 * G2 + 360.0 * G + 55.0) * l;
      q.b = -2560.0 * G6 * c * l + 1728.0 * G5 * c * l + 160.0 * G6 + 4368.0 * G4 * c * l - 350.0 * G4 * l -
            192.0 * G3 * l + 378.0 * G2 * l;
      q.c = 128.0 * G10 * c + 608.0 * G8 * c * l - 384.0 * G7 * c * l - 32.0 * G8 - 1200.0 * G6 * c * l +
            35.0 * G6 * l + 24.0 * G5 * l - 49.0 * G4 * l;
    }
    return q;
  }
  const double j = p.j4_value();  // J2 is j = 0
  if (sign > 0) {
    q.a = (315.0 * G2 * j + 225.0 * G2 - 360.0 * G - 1155.0 * j - 715.0) * l;
    q.b = -2.0 * G2 * (80.0 * G4 + l * (35.0 * G2 * j + 49.0 * G2 - 96.0 * G - 315.0 * j - 99.0));
    q.c = G4 * (32.0 * G4 + l * (-5.0 * G2 * j - 15.0 * G2 - 24.0 * G - 35.0 * j + 21.0));
  } else {
    q.a = (1575.0 * G2 * j - 315.0 * G2 - 360.0 * G - 2695.0 * j - 55.0) * l;
    q.b = -2.0 * G2 * (80.0 * G4 + l * (595.0 * G2 * j - 175.0 * G2 - 96.0 * G - 1035.0 * j + 189.0));
    q.c = G4 * (32.0 * G4 + l * (95.0 * G2 * j - 35.0 * G2 - 24.0 * G - 175.0 * j + 49.0));
  }
  return q;
}

std::vector<double> admissible_rho2(const ModelParams& p, double G, int sign) {
  const RhoQuadratic q = s_polynomial(p, G, sign);
  std::vector<double> out;
  const double D = q.b * q.b - 4.0 * q.a * q.c;
  if (D < 0.0) return out;
  double r1, r2;
  if (q.a == 0.0) {
    if (q.b == 0.0) return out;
    r1 = r2 = -q.c / q.b;
  } else {
    const double t = -0.5 * (q.b + std::copysign(std::sqrt(D), q.b));
    r1 = t / q.a;
    r2 = (t != 0.0) ? q.c / t : r1;
  }
  for (double r : {r1, r2})
    if (r > 0.0 && r < G * G) out.push_back(r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> f_zeros(const ModelParams& p, const TangencyOptions& opt) {
  const double E = p.energy_E();
  std::vector<double> z = base_grid(E, opt);
  z.push_back(-E);
  z.push_back(E);
  std::sort(z.begin(), z.end());
  std::vector<double> fv(z.size());
  for (size_t i = 0; i < z.size(); ++i) fv[i] = f_value(p, z[i]);
  std::vector<double> out;
  for (size_t i = 0; i + 1 < z.size(); ++i) {
    if (fv[i] == 0.0) {
      out.push_back(z[i]);
      continue;
    }
    if ((fv[i] > 0) != (fv[i + 1] > 0) && fv[i + 1] != 0.0)
      out.push_back(bisect([&](double x) { return f_value(p, x); }, z[i], z[i + 1], fv[i], 1e-16));
  }
  if (fv.back() == 0.0) out.push_back(z.back());
  return out;
}

std::vector<SRoot> s_roots(const ModelParams& p, int sign, const TangencyOptions& opt) {
  const double E = p.energy_E();
  std::vector<double> z = base_grid(E, opt);
  const std::vector<double> poles = f_zeros(p, opt);
  const double h = 2.0 * E / std::max(opt.grid, 16);
  for (double zp : poles) {
    for (int k = 0;; ++k) {
      const double d = h * std::pow(10.0, -double(k) / opt.per_decade);
      if (d < 2.0 * kPoleTol * 2.0 * E) break;
      if (zp - d > -E) z.push_back(zp - d);
      if (zp + d < E) z.push_back(zp + d);
    }
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());

  auto sv = [&](double x) {
    try {
      return s_value(p, x, sign);
    } catch (const PoleError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  std::vector<double> s(z.size());
  for (size_t i = 0; i < z.size(); ++i) s[i] = sv(z[i]);

  std::vector<double> roots;
  for (size_t i = 0; i + 1 < z.size(); ++i) {
    const double a = z[i], b = z[i + 1];
    if (!std::isfinite(s[i]) || !std::isfinite(s[i + 1])) continue;
    bool pole_inside = false;
    for (double zp : poles)
      if (zp >= a && zp <= b) pole_inside = true;
    if (pole_inside) continue;
    if (s[i] == 0.0) {
      roots.push_back(a);
      continue;
    }
    if ((s[i] > 0) != (s[i + 1] > 0) && s[i + 1] != 0.0) roots.push_back(bisect(sv, a, b, s[i], opt.z_tol));
  }

  std::vector<SRoot> out;
  for (double r : roots) {
    if (!out.empty() && r - out.back().Z < opt.merge_tol) {
      out.back().Z = 0.5 * (out.back().Z + r);
      out.back().merged = true;
    } else {
      out.push_back({r, false});
    }
  }
  return out;
}

std::vector<Equilibrium> find_tangency_equilibria(const ModelParams& p, const TangencyOptions& opt) {
  std::vector<Equilibrium> out;
  for (int sign : {+1, -1}) {
    for (const SRoot& r : s_roots(p, sign, opt)) {
      const double Xh = lemon_contour(r.Z, p.rho);
      Equilibrium e = make_point(sign > 0 ? Kind::Eplus : Kind::Eminus, {sign * Xh, 0.0, r.Z}, p);
      e.merged = r.merged;
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::optional<EbarData> ebar_data(const ModelParams& p) {
  const double r2 = p.rho * p.rho;
  double G2;
  switch (p.model) {
    case Model::J2:
      G2 = 15.0 * r2;
      break;
    case Model::J4: {
      const double j = p.j4_value();
      const double den = 5.0 * j - 1.0;
      if (den == 0.0) return std::nullopt;
      G2 = 5.0 * r2 * (7.0 * j - 3.0) / den;
      break;
    }
    case Model::REL: {
      // 24 jC G^4 + G^2 - 15 rho^2 = 0, positive root without cancellation
      const double c = p.jC_value();
      G2 = 30.0 * r2 / (1.0 + std::sqrt(1.0 + 1440.0 * c * r2));
      break;
    }
    default:
      return std::nullopt;
  }
  if (!(G2 >= r2 && G2 <= 1.0)) return std::nullopt;
  EbarData d;
  d.Gbar = std::sqrt(G2);
  d.Zbar = G2 - 0.5 * (1.0 + r2);
  const NormalFormEval e = eval_gf_G(p, d.Gbar);
  d.Xbar = -e.dg_dZ / e.df_dZ;
  const double Xh = (G2 - r2) * (1.0 - G2);
  d.Ysq = Xh * Xh - d.Xbar * d.Xbar;
  return d;
}

std::optional<std::array<Equilibrium, 2>> find_ebar(const ModelParams& p) {
  const auto d = ebar_data(p);
  if (!d || d->Ysq < 0.0) return std::nullopt;
  const double Y = std::sqrt(d->Ysq);
  std::array<Equilibrium, 2> pair{make_point(Kind::Ebar, {d->Xbar, Y, d->Zbar}, p),
                                  make_point(Kind::Ebar, {d->Xbar, -Y, d->Zbar}, p)};
  return pair;
}

std::vector<Equilibrium> enumerate_equilibria(const ModelParams& p, const TangencyOptions& opt) {
  p.validate();
  const double E = p.energy_E();
  std::vector<Equilibrium> out;

  Equilibrium e1;
  e1.kind = Kind::E1;
  e1.lemon = {0.0, 0.0, -E};
  e1.G = p.abs_rho();
  e1.xi = {XiState{0.0, 0.0, -E}};
  const StabilityVerdict v1 = classify_E1(p);
  e1.stability = v1.classification;
  e1.char_coeff = v1.alpha_sq_coeff;
  out.push_back(e1);

  Equilibrium e2;
  e2.kind = Kind::E2;
  e2.lemon = {0.0, 0.0, E};
  e2.G = 1.0;
  e2.xi = {XiState{0.0, 0.0, E}};
  const StabilityVerdict v2 = classify_E2(p);
  e2.stability = v2.classification;
  e2.char_coeff = v2.alpha_sq_coeff;
  out.push_back(e2);

  for (Equilibrium& e : find_tangency_equilibria(p, opt)) {
    const StabilityVerdict v = tangency_verdict(e, p);
    e.stability = e.merged ? Stability::Degenerate : v.classification;
    e.char_coeff = v.alpha_sq_coeff;
    out.push_back(std::move(e));
  }

  if (auto pair = find_ebar(p)) {
    const StabilityVerdict v = classify_ebar(*pair, p);
    for (Equilibrium& e : *pair) {
      e.stability = v.classification;
      e.char_coeff = v.alpha_sq_coeff;
      out.push_back(std::move(e));
    }
  }
  assign_labels(p, out);
  return out;
}

namespace {

std::vector<std::string> j4_names(const std::vector<const Equilibrium*>& v, int sign, double j) {
  const size_t n = v.size();
  const bool plus = sign > 0;
  const char* base = plus ? "E3" : "E4";
  const char* merged = plus ? "E5" : "E6";
  const char* low = plus ? "E11" : "E12";
  const char* lo_sn = plus ? "E7" : "E8";
  const char* hi_sn = plus ? "E9" : "E10";
  const double pitch = plus ? -31.0 / 35.0 : -12.0 / 25.0;
  if (n == 1) return {v[0]->merged ? merged : base};
  if (n == 2) {
    if (v[1]->merged) return {base, merged};
    if (v[0]->merged) return {merged, base};
    if (j < pitch) return {low, base};
    return {lo_sn, hi_sn};
  }
  if (n == 3 && j >= pitch) return {base, lo_sn, hi_sn};
  return std::vector<std::string>(n);
}

std::vector<std::string> rel_names(const ModelParams& p, const std::vector<const Equilibrium*>& v, int sign) {
  const size_t n = v.size();
  const bool plus = sign > 0;
  if (!saddle_node(p, sign)) {
    if (n == 1) return {plus ? "E3" : "E4"};
    return std::vector<std::string>(n);
  }
  const char* merged = plus ? "E13" : "E14";
  const char* low = plus ? "E15" : "E16";
  const char* high = plus ? "E17" : "E18";
  if (n == 1) return {v[0]->merged ? merged : low};
  if (n == 2) {
    if (v[1]->merged) return {low, merged};
    return {low, high};
  }
  return std::vector<std::string>(n);
}

}  // namespace

void assign_labels(const ModelParams& p, std::vector<Equilibrium>& eqs) {
  std::vector<const Equilibrium*> plus, minus;
  int ebar = 0;
  for (Equilibrium& e : eqs) {
    switch (e.kind) {
      case Kind::E1: e.label = "E1"; break;
      case Kind::E2: e.label = "E2"; break;
      case Kind::Ebar: e.label = ebar++ == 0 ? "Ebar1" : "Ebar2"; break;
      case Kind::Eplus: plus.push_back(&e); break;
      case Kind::Eminus: minus.push_back(&e); break;
    }
  }
  auto byZ = [](const Equilibrium* a, const Equilibrium* b) { return a->lemon.Z < b->lemon.Z; };
  std::sort(plus.begin(), plus.end(), byZ);
  std::sort(minus.begin(), minus.end(), byZ);

  for (int sign : {+1, -1}) {
    auto& v = sign > 0 ? plus : minus;
    if (v.empty()) continue;
    std::vector<std::string> names;
    switch (p.model) {
      case Model::J2:
        names = v.size() == 1 ? std::vector<std::string>{sign > 0 ? "E3" : "E4"} : std::vector<std::string>(v.size());
        break;
      case Model::J4: names = j4_names(v, sign, p.j4_value()); break;
      case Model::REL: names = rel_names(p, v, sign); break;
    }
    for (size_t i = 0; i < v.size(); ++i) const_cast<Equilibrium*>(v[i])->label = names[i];
  }
}

LevelCurve level_curve(const ModelParams& p, double k, const std::vector<double>& Zgrid) {
  LevelCurve c;
  const double E = p.energy_E();
  for (double Z : Zgrid) {
    const NormalFormEval e = eval_gf_auto(p, Z);
    if (std::fabs(e.f_val) <= kPoleTol * 2.0 * E * std::fabs(e.df_dZ)) throw PoleError("level curve crosses a zero of f");
    c.Z.push_back(Z);
    c.Xtilde.push_back((k - e.g_val) / e.f_val);
    c.Xhat.push_back(lemon_contour(Z, p.rho));
  }
  return c;
}

}  // namespace frozen
