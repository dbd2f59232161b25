#include "frozen/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <functional>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "frozen/errors.hpp"
#include "frozen/series.hpp"
#include "frozen/stability.hpp"

namespace frozen {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::PitchforkE2Plus: return "PitchforkE2_plus";
    case EventKind::PitchforkE2Minus: return "PitchforkE2_minus";
    case EventKind::PitchforkE1Plus: return "PitchforkE1_plus";
    case EventKind::PitchforkE1Minus: return "PitchforkE1_minus";
    case EventKind::SaddleNodePlus: return "SaddleNode_plus";
    case EventKind::SaddleNodeMinus: return "SaddleNode_minus";
    case EventKind::EbarExchangePlus: return "EbarExchange_plus";
    case EventKind::EbarExchangeMinus: return "EbarExchange_minus";
  }
  return "?";
}

std::string_view to_string(Detection d) {
  switch (d) {
    case Detection::ClosedForm: return "ClosedForm";
    case Detection::Maximization: return "Maximization";
    case Detection::RootCoincidence: return "RootCoincidence";
  }
  return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// root of a rho^4 + b rho^2 + c on one branch, without cancellation
double branch_rho2(const RhoQuadratic& q, int b) {
  const double D = q.b * q.b - 4.0 * q.a * q.c;
  if (D < 0.0) return kNaN;
  const double s = std::sqrt(D);
  if (b * q.b <= 0.0) return (-q.b + b * s) / (2.0 * q.a);
  return 2.0 * q.c / (-q.b - b * s);
}

template <class F>
double golden_max(F&& fn, double a, double b, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = fn(x1);
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double bisect_root(F&& fn, double a, double b, double tol) {
  double fa = fn(a);
  for (int i = 0; i < 300 && b - a > tol; ++i) {
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

double ysq_at(const ModelParams& base, double r) {
  const auto d = ebar_data(base.with_rho(r));
  return d ? d->Ysq : kNaN;
}

std::vector<double> rho_scan_grid() {
  std::vector<double> g;
  for (int k = 0; k < 40; ++k) g.push_back(1e-5 * std::pow(100.0, k / 40.0));
  for (int i = 1; i < 1000; ++i) g.push_back(i * 1e-3);
  return g;
}

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::optional<SaddleNode> saddle_node(const ModelParams& base, int sign) {
  const int n = 2048;
  std::optional<SaddleNode> best;
  for (int b : {+1, -1}) {
    auto val = [&](double G) {
      const double r2 = branch_rho2(s_polynomial(base, G, sign), b);
      if (!(r2 > 0.0 && r2 < G * G)) return kNaN;
      return r2;
    };
    std::vector<double> G(n), v(n);
    for (int i = 0; i < n; ++i) {
      G[i] = double(i + 1) / n;
      v[i] = val(G[i]);
    }
    for (int i = 1; i + 1 < n; ++i) {
      if (!std::isfinite(v[i - 1]) || !std::isfinite(v[i]) || !std::isfinite(v[i + 1])) continue;
      if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
      auto safe = [&](double x) {
        const double y = val(x);
        return std::isfinite(y) ? y : -1.0;
      };
      const double Gm = golden_max(safe, G[i - 1], G[i + 1], 1e-10);
      const double r2 = val(Gm);
      if (!std::isfinite(r2)) continue;
      if (!best || std::sqrt(r2) > best->rho) best = SaddleNode{std::sqrt(r2), Gm};
    }
  }
  return best;
}

std::optional<double> ebar_margin(const ModelParams& p, int sign) {
  const auto d = ebar_data(p);
  if (!d) return std::nullopt;
  const double r2 = p.rho * p.rho, G2 = d->Gbar * d->Gbar;
  const double Xh = (G2 - r2) * (1.0 - G2);
  return (Xh - sign * d->Xbar) / (r2 * r2);
}

std::vector<std::pair<double, int>> ebar_crossings(const ModelParams& base) {
  const std::vector<double> grid = rho_scan_grid();
  std::vector<double> y(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) y[i] = ysq_at(base, grid[i]);
  std::vector<std::pair<double, int>> out;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(y[i + 1])) continue;
    if ((y[i] >= 0.0) == (y[i + 1] >= 0.0)) continue;
    auto fn = [&](double r) {
      const double v = ysq_at(base, r);
      return std::isfinite(v) ? v : -1.0;
    };
    const double r = bisect_root(fn, grid[i], grid[i + 1], 1e-13);
    const auto d = ebar_data(base.with_rho(r));
    out.emplace_back(r, d && d->Xbar > 0.0 ? +1 : -1);
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first > b.first; });
  return out;
}

std::vector<BifurcationEvent> detect_events(const ModelParams& base) {
  std::vector<BifurcationEvent> ev;
  const bool rel = base.model == Model::REL;
  const RhoPair rc = rho_crit_exact(base);
  if (rc.plus)
    ev.push_back({*rc.plus, EventKind::PitchforkE2Plus, rel ? "rho_tilde_plus" : "rho_plus",
                  {"E2", rel ? "E17" : "E3"}, Detection::ClosedForm});
  if (rc.minus)
    ev.push_back({*rc.minus, EventKind::PitchforkE2Minus, rel ? "rho_tilde_minus" : "rho_minus",
                  {"E2", rel ? "E18" : "E4"}, Detection::ClosedForm});
  if (auto t = rho_triangle_up(base))
    ev.push_back({*t, EventKind::PitchforkE1Plus, "rho_tri_up", {"E1", "E11"}, Detection::ClosedForm});
  if (auto t = rho_triangle_down(base))
    ev.push_back({*t, EventKind::PitchforkE1Minus, "rho_tri_down", {"E1", "E12"}, Detection::ClosedForm});
  if (auto s = saddle_node(base, +1))
    ev.push_back({s->rho, EventKind::SaddleNodePlus, "rho_sn_plus",
                  rel ? std::vector<std::string>{"E13", "E15", "E17"} : std::vector<std::string>{"E5", "E7", "E9"},
                  Detection::Maximization});
  if (auto s = saddle_node(base, -1))
    ev.push_back({s->rho, EventKind::SaddleNodeMinus, "rho_sn_minus",
                  rel ? std::vector<std::string>{"E14", "E16", "E18"} : std::vector<std::string>{"E6", "E8", "E10"},
                  Detection::Maximization});
  int nplus = 0, nminus = 0;
  for (const auto& [r, type] : ebar_crossings(base)) {
    const int k = type > 0 ? nplus++ : nminus++;
    std::string name = type > 0 ? "rho_diamond" : "rho_square";
    if (k == 1) name += "_bis";
    if (k > 1) name += "_bis" + std::to_string(k);
    ev.push_back({r, type > 0 ? EventKind::EbarExchangePlus : EventKind::EbarExchangeMinus, name,
                  {"Ebar1", "Ebar2"}, Detection::RootCoincidence});
  }
  std::sort(ev.begin(), ev.end(), [](const BifurcationEvent& a, const BifurcationEvent& b) {
    if (a.rho_star != b.rho_star) return a.rho_star > b.rho_star;
    return a.name < b.name;
  });
  return ev;
}

BifurcationDiagram build_diagram(const ModelParams& base) {
  BifurcationDiagram d;
  d.base = base;
  d.events = detect_events(base);
  std::vector<double> cuts{0.0};
  for (auto it = d.events.rbegin(); it != d.events.rend(); ++it)
    if (it->rho_star > cuts.back() + 1e-10 && it->rho_star < 1.0) cuts.push_back(it->rho_star);
  cuts.push_back(1.0);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Regime rg;
    rg.rho_lo = cuts[i];
    rg.rho_hi = cuts[i + 1];
    rg.rho_sample = 0.5 * (rg.rho_lo + rg.rho_hi);
    const std::vector<Equilibrium> eqs = enumerate_equilibria(base.with_rho(rg.rho_sample));
    for (const Equilibrium& e : eqs)
      rg.inventory.push_back((e.label.empty() ? std::string(to_string(e.kind)) : e.label) + ":" +
                             std::string(to_string(e.stability)));
    std::sort(rg.inventory.begin(), rg.inventory.end());
    try {
      rg.audit_passed = poincare_hopf_audit(eqs).passed;
    } catch (const AuditFailure&) {
      rg.audit_passed = false;
    }
    d.regimes.push_back(std::move(rg));
  }
  return d;
}

RegimeRow classify_regime(double j4, double lambda) {
  RegimeRow row;
  row.j4 = j4;
  row.lambda = lambda;
  row.extrapolated = std::fabs(lambda - 0.001) > 1e-15;
  row.diagram = build_diagram(ModelParams::with_j4(0.5, lambda, j4));
  for (const auto& e : row.diagram.events) row.chain.push_back(e.name);
  return row;
}

namespace {

// min over G in (0,1] of 32 G^4 + lambda(...), the rho -> 0 limit of the
// s+ (sign +1) or s- numerator divided by G^4
double small_rho_min(double j, double l, int sign) {
  auto P = [&](double G) {
    const double G2 = G * G;
    if (sign > 0) return 32.0 * G2 * G2 + l * (-(5.0 * j + 15.0) * G2 - 24.0 * G + 21.0 - 35.0 * j);
    return 32.0 * G2 * G2 + l * ((95.0 * j - 35.0) * G2 - 24.0 * G + 49.0 - 175.0 * j);
  };
  const int n = 2000;
  int ib = 1;
  double vb = P(1.0 / n);
  for (int i = 2; i <= n; ++i) {
    const double v = P(double(i) / n);
    if (v < vb) {
      vb = v;
      ib = i;
    }
  }
  const double a = std::max(1e-9, double(ib - 1) / n), b = std::min(1.0, double(ib + 1) / n);
  const double Gm = golden_max([&](double G) { return -P(G); }, a, b, 1e-13);
  return P(Gm);
}

double h_margin(double j, double l, double r) {
  const auto d = ebar_data(ModelParams::with_j4(r, l, j));
  if (!d) return kNaN;
  const double r2 = r * r, G2 = d->Gbar * d->Gbar;
  const double Xh = (G2 - r2) * (1.0 - G2);
  return (Xh - std::fabs(d->Xbar)) / (r2 * r2);
}

double h_extreme(double j, double l, int sgn) {
  const double lo = 0.005, hi = 0.03;
  const int n = 300;
  double best = -std::numeric_limits<double>::infinity(), rb = lo;
  auto fn = [&](double r) {
    const double v = h_margin(j, l, r);
    return std::isfinite(v) ? sgn * v : -1e300;
  };
  for (int i = 0; i <= n; ++i) {
    const double r = lo + (hi - lo) * i / n;
    const double v = fn(r);
    if (v > best) {
      best = v;
      rb = r;
    }
  }
  const double step = (hi - lo) / n;
  const double rm = golden_max(fn, std::max(lo, rb - step), std::min(hi, rb + step), 1e-12);
  return sgn * std::max(best, fn(rm));
}

template <class F>
std::vector<double> scan_roots(F&& fn, double a, double b, double step) {
  std::vector<double> out;
  double x0 = a, f0 = fn(a);
  for (double x = a + step; x <= b + 1e-12; x += step) {
    const double f1 = fn(x);
    if (std::isfinite(f0) && std::isfinite(f1) && (f0 > 0) != (f1 > 0)) {
      out.push_back(bisect_root(
          [&](double t) {
            const double v = fn(t);
            return std::isfinite(v) ? v : f0;
          },
          x0, x, 1e-12));
    }
    x0 = x;
    f0 = f1;
  }
  return out;
}

}  // namespace

std::vector<J4Boundary> scan_j4_boundaries(double l) {
  std::vector<J4Boundary> out;
  const double bif6 = -12.0 / 25.0, bif9 = -31.0 / 35.0;

  const double bif1 = j4_vinti_boundary_direct(l);
  const double bif2 = bisect_root([&](double j) { return small_rho_min(j, l, +1); }, -6.0, 6.0, 1e-13);
  const double bif5 = bisect_root([&](double j) { return small_rho_min(j, l, -1); }, -6.0, 6.0, 1e-13);

  // sign changes of the Ebar margin at vanishing rho
  const double r0 = 1e-7;
  std::vector<double> small = scan_roots([&](double j) { return h_margin(j, l, r0); }, -6.0, 6.0, 0.002);
  std::sort(small.begin(), small.end(), std::greater<>());
  auto pick = [&](size_t i) { return i < small.size() ? small[i] : kNaN; };
  const double bif3 = pick(0), bif4 = pick(1), bif8 = pick(2), bif11 = pick(3);

  double bif7 = kNaN, bif10 = kNaN;
  if (std::isfinite(bif8)) {
    auto r = scan_roots([&](double j) { return h_extreme(j, l, +1); }, bif8, bif6, 1e-4);
    if (!r.empty()) bif7 = r.back();
  }
  if (std::isfinite(bif11)) {
    auto r = scan_roots([&](double j) { return h_extreme(j, l, -1); }, bif11, bif9, 1e-4);
    if (!r.empty()) bif10 = r.front();
  }

  out.push_back({"bif1", bif1, "rho+ = rho-"});
  out.push_back({"bif2", bif2, "saddle-node branch of s+ shrinks to rho = 0"});
  out.push_back({"bif3", bif3, "Ebar margin sign change as rho -> 0"});
  out.push_back({"bif4", bif4, "Ebar margin sign change as rho -> 0"});
  out.push_back({"bif5", bif5, "saddle-node branch of s- shrinks to rho = 0"});
  out.push_back({"bif6", bif6, "s-(-E) = 0 at rho = 0"});
  out.push_back({"bif7", bif7, "interior maximum of the Ebar margin reaches zero"});
  out.push_back({"bif8", bif8, "Ebar margin sign change as rho -> 0"});
  out.push_back({"bif9", bif9, "s+(-E) = 0 at rho = 0"});
  out.push_back({"bif10", bif10, "interior minimum of the Ebar margin reaches zero"});
  out.push_back({"bif11", bif11, "Ebar margin sign change as rho -> 0"});
  return out;
}

void export_diagram(const std::vector<BifurcationDiagram>& diagrams, const std::string& path, ExportFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  export_diagram(diagrams, out, fmt);
  if (!out) throw IoError("write failed for " + path);
}

void export_diagram(const std::vector<BifurcationDiagram>& diagrams, std::ostream& out, ExportFormat fmt) {
  auto param_of = [](const ModelParams& p) { return p.model == Model::REL ? p.jC_value() : p.j4_value(); };
  const bool rel = !diagrams.empty() && diagrams.front().base.model == Model::REL;
  if (fmt == ExportFormat::CSV) {
    out << (rel ? "jC" : "j4") << ",event_kind,rho_star,event\n";
    for (const auto& d : diagrams)
      for (const auto& e : d.events)
        out << num17(param_of(d.base)) << ',' << to_string(e.kind) << ',' << num17(e.rho_star) << ',' << e.name
            << '\n';
  } else {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& d : diagrams) {
      nlohmann::ordered_json jd;
      jd["model"] = std::string(to_string(d.base.model));
      jd["lambda"] = d.base.lambda;
      if (d.base.j4) jd["j4"] = *d.base.j4;
      if (d.base.jC) jd["jC"] = *d.base.jC;
      auto& ev = jd["events"] = nlohmann::ordered_json::array();
      for (const auto& e : d.events)
        ev.push_back({{"name", e.name},
                      {"event_kind", std::string(to_string(e.kind))},
                      {"rho_star", e.rho_star},
                      {"affected", e.affected},
                      {"detection", std::string(to_string(e.detection))}});
      auto& rg = jd["regimes"] = nlohmann::ordered_json::array();
      for (const auto& r : d.regimes)
        rg.push_back({{"rho_lo", r.rho_lo},
                      {"rho_hi", r.rho_hi},
                      {"rho_sample", r.rho_sample},
                      {"inventory", r.inventory},
                      {"audit_passed", r.audit_passed}});
      j.push_back(std::move(jd));
    }
    out << j.dump(2) << '\n';
  }
}

namespace {

std::vector<std::pair<double, double>> trace_zx(const ModelParams& p, double k, const std::vector<double>& Z) {
  std::vector<std::pair<double, double>> pts;
  for (double z : Z) {
    try {
      const LevelCurve c = level_curve(p, k, {z});
      if (std::fabs(c.Xtilde[0]) <= c.Xhat[0]) pts.emplace_back(z, c.Xtilde[0]);
    } catch (const PoleError&) {
    }
  }
  return pts;
}

std::vector<std::pair<double, double>> trace_gG(const ModelParams& p, double k, int n) {
  std::vector<std::pair<double, double>> pts;
  const double r = p.abs_rho();
  for (int i = 1; i < n; ++i) {
    const double G = r + (1.0 - r) * i / n;
    const double Z = Z_of_G(G, p.rho);
    const NormalFormEval e = eval_gf_auto(p, Z);
    const double Xh = lemon_contour(Z, p.rho);
    if (e.f_val == 0.0 || Xh <= 0.0) continue;
    const double c = (k - e.g_val) / (e.f_val * Xh);
    if (c < -1.0 || c > 1.0) continue;
    const double g0 = 0.5 * std::acos(c);
    const double pi = std::numbers::pi;
    for (double g : {g0, pi - g0, pi + g0, 2.0 * pi - g0}) pts.emplace_back(g, G);
  }
  return pts;
}

}  // namespace

PortraitData phase_portrait_data(const ModelParams& p, int n_levels) {
  p.validate();
  PortraitData out;
  const double E = p.energy_E();
  const int nz = 801;
  for (int i = 0; i < nz; ++i) {
    const double z = -E + 2.0 * E * i / (nz - 1);
    out.Z.push_back(z);
    out.Xhat.push_back(lemon_contour(z, p.rho));
  }
  if (auto d = ebar_data(p)) out.Zbar = d->Zbar;

  std::vector<double> Zin(out.Z.begin() + 1, out.Z.end() - 1);
  for (const Equilibrium& eq : enumerate_equilibria(p)) {
    const NormalFormEval e = eval_gf_auto(p, eq.lemon.Z);
    const bool tangency = eq.kind == Kind::Eplus || eq.kind == Kind::Eminus;
    const bool unstable = eq.stability == Stability::Unstable;
    const bool degenerate = eq.stability == Stability::Degenerate;
    if (!tangency && !unstable && !degenerate) continue;
    PortraitLevel lv;
    lv.k = e.g_val + e.f_val * eq.lemon.X;
    lv.kind = unstable ? "separatrix" : degenerate ? "degenerate" : "tangency";
    lv.label = eq.label;
    lv.degenerate = degenerate;
    lv.zx = trace_zx(p, lv.k, Zin);
    lv.gG = trace_gG(p, lv.k, 800);
    out.levels.push_back(std::move(lv));
  }

  if (n_levels > 0) {
    double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
    for (size_t i = 0; i < out.Z.size(); ++i) {
      const NormalFormEval e = eval_gf_auto(p, out.Z[i]);
      for (double s : {-1.0, 1.0}) {
        const double k = e.g_val + s * e.f_val * out.Xhat[i];
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
      }
    }
    for (int i = 1; i <= n_levels; ++i) {
      PortraitLevel lv;
      lv.k = kmin + (kmax - kmin) * i / (n_levels + 1);
      lv.kind = "generic";
      lv.zx = trace_zx(p, lv.k, Zin);
      lv.gG = trace_gG(p, lv.k, 800);
      out.levels.push_back(std::move(lv));
    }
  }
  return out;
}

}  // namespace frozen
