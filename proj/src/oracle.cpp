#include "frozen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "frozen/errors.hpp"
#include "frozen/stability.hpp"

namespace frozen {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;

using State3 = std::array<double, 3>;
using State2 = std::array<double, 2>;

double G_from_x3(double x3, double rho) { return std::sqrt(std::max(0.0, x3 + 0.5 * (1.0 + rho * rho))); }

template <class State, class System, class Observer>
void drive(System&& sys, State x, double t_end, const IntegratorOptions& opt, Observer&& obs) {
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_fehlberg78<State>());
  const double dir = t_end >= 0.0 ? 1.0 : -1.0;
  double t = 0.0;
  double dt = dir * std::min(1e-3, std::fabs(t_end) + 1e-300);
  obs(x, t);
  while (dir * (t_end - t) > 0.0) {
    if (dir * (t + dt - t_end) > 0.0) dt = t_end - t;
    const auto res = stepper.try_step(sys, x, t, dt);
    if (res == odeint::success) {
      obs(x, t);
    } else if (std::fabs(dt) < opt.min_step) {
      throw StepFailure("step size underflow at t = " + std::to_string(t));
    }
  }
}

// 5-point central difference with the step shrunk near the chart ends
double dK_dG(const ModelParams& p, double G, double g) {
  const double r = p.abs_rho();
  const double h = std::min({1e-4, (G - r) / 2.5, (1.0 - G) / 2.5});
  auto K = [&](double x) { return eval_K_delaunay(p, x, g); };
  return (-K(G + 2 * h) + 8 * K(G + h) - 8 * K(G - h) + K(G - 2 * h)) / (12.0 * h);
}

double dK_dg(const ModelParams& p, double G, double g) {
  const double h = 1e-4;
  auto K = [&](double x) { return eval_K_delaunay(p, G, x); };
  return (-K(g + 2 * h) + 8 * K(g + h) - 8 * K(g - h) + K(g - 2 * h)) / (12.0 * h);
}

template <class F>
double bisect(F&& fn, double a, double b) {
  double fa = fn(a);
  for (int i = 0; i < 200; ++i) {
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

std::vector<double> G_grid(const ModelParams& p, int n) {
  const double r = p.abs_rho(), E = p.energy_E();
  std::vector<double> Z;
  for (int i = 1; i < n; ++i) Z.push_back(-E + 2.0 * E * i / n);
  for (double d = 2.0 * E / n; d > 1e-11 * E; d *= 0.5) {
    Z.push_back(-E + d);
    Z.push_back(E - d);
  }
  std::sort(Z.begin(), Z.end());
  std::vector<double> G;
  for (double z : Z) {
    const double g = std::sqrt(z + 0.5 * (1.0 + r * r));
    if (g > r && g < 1.0) G.push_back(g);
  }
  return G;
}

std::pair<std::complex<double>, std::complex<double>> eig2(double a, double b, double c, double d) {
  const double tr = a + d, det = a * d - b * c;
  const std::complex<double> s = std::sqrt(std::complex<double>(0.25 * tr * tr - det));
  return {0.5 * tr + s, 0.5 * tr - s};
}

Equilibrium make_point(const ModelParams& p, Kind kind, const LemonState& L) {
  Equilibrium e;
  e.kind = kind;
  e.lemon = L;
  e.G = G_of_Z(L.Z, p.rho);
  e.xi = lemon_to_xi(L, p.rho);
  try {
    const Linearization lin = linearize_at(p, e);
    e.stability = lin.classification;
    e.char_coeff = -lin.lambda_sq;
  } catch (const DegenerateLinearization&) {
    e.stability = Stability::Degenerate;
  }
  return e;
}

}  // namespace

double Trajectory::energy_drift() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::fabs(s.K - samples.front().K));
  return m;
}

double Trajectory::residual_drift() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::fabs(s.residual - samples.front().residual));
  return m;
}

void Trajectory::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  out << (chart == Chart::Xi ? "t,x1,x2,x3,K,residual\n" : "t,g,G,K,residual\n");
  for (const auto& s : samples) {
    out << s.t << ',' << s.state[0] << ',' << s.state[1];
    if (chart == Chart::Xi) out << ',' << s.state[2];
    out << ',' << s.K << ',' << s.residual << '\n';
  }
}

double K_xi(const ModelParams& p, const XiState& xi) {
  const NormalFormEval e = eval_gf_auto(p, xi.x3);
  return e.K(xi.x1 * xi.x1 - xi.x2 * xi.x2);
}

std::array<double, 3> xi_field(const ModelParams& p, const XiState& s) {
  const NormalFormEval e = eval_gf_auto(p, s.x3);
  const double X = s.x1 * s.x1 - s.x2 * s.x2;
  const double k1 = 2.0 * e.f_val * s.x1, k2 = -2.0 * e.f_val * s.x2, k3 = e.K_Z(X);
  const double w = 2.0 * G_from_x3(s.x3, p.rho);
  return {w * (k2 * s.x3 - k3 * s.x2), w * (k3 * s.x1 - k1 * s.x3), w * (k1 * s.x2 - k2 * s.x1)};
}

Trajectory integrate_xi(const ModelParams& p, const XiState& xi0, double t_end, double tol,
                        const IntegratorOptions& extra) {
  p.validate();
  if (std::fabs(sphere_residual(xi0, p.rho)) > 1e-8) throw ConstraintError("initial point is not on the sphere");
  IntegratorOptions opt = extra;
  opt.rel_tol = tol;
  const double E = p.energy_E();
  Trajectory tr;
  tr.chart = Chart::Xi;
  auto sys = [&](const State3& x, State3& dx, double) {
    const auto F = xi_field(p, XiState{x[0], x[1], x[2]});
    dx = F;
  };
  auto obs = [&](State3& x, double t) {
    if (opt.project) {
      const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      if (n > 0.0)
        for (double& c : x) c *= E / n;
    }
    const XiState s{x[0], x[1], x[2]};
    tr.samples.push_back({t, x, K_xi(p, s), sphere_residual(s, p.rho)});
  };
  drive<State3>(sys, State3{xi0.x1, xi0.x2, xi0.x3}, t_end, opt, obs);
  return tr;
}

std::array<double, 2> gG_gradient(const ModelParams& p, double G, double g) {
  Jet gj, fj;
  element_gf(p, Jet::variable(G), gj, fj);
  const double r2 = p.rho * p.rho, G2 = G * G;
  const double Xh = (G2 - r2) * (1.0 - G2);
  const double XhG = 2.0 * G * (1.0 + r2 - 2.0 * G2);
  const double c = std::cos(2.0 * g), s = std::sin(2.0 * g);
  return {gj.d + (fj.d * Xh + fj.v * XhG) * c, -2.0 * fj.v * Xh * s};
}

Trajectory integrate_gG(const ModelParams& p, double G0, double g0, double t_end, double tol,
                        const IntegratorOptions& extra) {
  p.validate();
  const double r = p.abs_rho();
  if (!(G0 > r && G0 < 1.0)) throw DomainError("G0 must lie strictly between |rho| and 1");
  IntegratorOptions opt = extra;
  opt.rel_tol = tol;
  Trajectory tr;
  tr.chart = Chart::DelaunayGg;
  auto sys = [&](const State2& x, State2& dx, double) {
    const double G = std::clamp(x[1], r + 1e-300, 1.0);
    const auto d = gG_gradient(p, G, x[0]);
    dx = {d[0], -d[1]};
  };
  auto obs = [&](State2& x, double t) {
    if (x[1] - r < 1e-6 || 1.0 - x[1] < 1e-6) throw ChartExit("trajectory reached a cusp of the (g,G) chart");
    tr.samples.push_back({t, {x[0], x[1], 0.0}, eval_K_delaunay(p, x[1], x[0]), 0.0});
  };
  drive<State2>(sys, State2{g0, G0}, t_end, opt, obs);
  return tr;
}

Linearization linearize_at(const ModelParams& p, const Equilibrium& fp) {
  double a, b, c, d;
  if (fp.kind == Kind::E1 || fp.kind == Kind::E2) {
    const double E = p.energy_E();
    const double z = fp.kind == Kind::E1 ? -E : E;
    const double h = 1e-7 * E;
    auto col = [&](int j) {
      XiState up{j == 0 ? h : 0.0, j == 1 ? h : 0.0, z}, dn{j == 0 ? -h : 0.0, j == 1 ? -h : 0.0, z};
      const auto Fu = xi_field(p, up), Fd = xi_field(p, dn);
      return std::array<double, 2>{(Fu[0] - Fd[0]) / (2 * h), (Fu[1] - Fd[1]) / (2 * h)};
    };
    const auto c0 = col(0), c1 = col(1);
    a = c0[0];
    b = c1[0];
    c = c0[1];
    d = c1[1];
  } else {
    const double G = fp.G;
    const double g = 0.5 * std::atan2(fp.lemon.Y, fp.lemon.X);
    const double r = p.abs_rho();
    const double hG = std::min({1e-6, (G - r) / 2.0, (1.0 - G) / 2.0});
    const double hg = 1e-6;
    // state (g, G), field (K_G, -K_g)
    auto V = [&](double gg, double GG) {
      const auto d = gG_gradient(p, GG, gg);
      return std::array<double, 2>{d[0], -d[1]};
    };
    const auto Vgp = V(g + hg, G), Vgm = V(g - hg, G), VGp = V(g, G + hG), VGm = V(g, G - hG);
    a = (Vgp[0] - Vgm[0]) / (2 * hg);
    b = (VGp[0] - VGm[0]) / (2 * hG);
    c = (Vgp[1] - Vgm[1]) / (2 * hg);
    d = (VGp[1] - VGm[1]) / (2 * hG);
  }
  Linearization L;
  std::tie(L.l1, L.l2) = eig2(a, b, c, d);
  if (std::abs(L.l1) < 1e-10 && std::abs(L.l2) < 1e-10) throw DegenerateLinearization("both eigenvalues vanish");
  const double tr = a + d;
  L.lambda_sq = 0.25 * tr * tr - (a * d - b * c);
  L.classification = L.lambda_sq < 0.0 ? Stability::Stable : Stability::Unstable;
  return L;
}

BruteForceResult brute_force_equilibria(const ModelParams& p, int grid_n, const BruteForceOptions& opt) {
  p.validate();
  if (grid_n < 512) throw DomainError("grid_n must be at least 512");
  const double E = p.energy_E();
  BruteForceResult out;
  out.candidates.push_back(make_point(p, Kind::E1, {0.0, 0.0, -E}));
  out.candidates.push_back(make_point(p, Kind::E2, {0.0, 0.0, E}));

  const std::vector<double> G = G_grid(p, grid_n);
  // K restricted to a contour branch is stationary exactly where a level
  // curve touches that branch
  for (int branch : {+1, -1}) {
    const double g0 = branch > 0 ? 0.0 : 0.5 * kPi;
    auto D = [&](double x) { return dK_dG(p, x, g0); };
    std::vector<double> v(G.size());
    for (size_t i = 0; i < G.size(); ++i) v[i] = D(G[i]);
    for (size_t i = 0; i + 1 < G.size(); ++i) {
      if ((v[i] > 0) == (v[i + 1] > 0)) continue;
      const double Gr = bisect(D, G[i], G[i + 1]);
      const double Z = Z_of_G(Gr, p.rho), Xh = lemon_contour(Z, p.rho);
      out.candidates.push_back(make_point(p, branch > 0 ? Kind::Eplus : Kind::Eminus, {branch * Xh, 0.0, Z}));
    }
  }

  // dK/dg vanishes for every g on f = 0; at g = pi/4 it is -2 f Xhat
  {
    const double g45 = 0.25 * kPi;
    auto H = [&](double x) { return dK_dg(p, x, g45); };
    std::vector<double> v(G.size());
    for (size_t i = 0; i < G.size(); ++i) v[i] = H(G[i]);
    for (size_t i = 0; i + 1 < G.size(); ++i) {
      if ((v[i] > 0) == (v[i + 1] > 0)) continue;
      const double Gb = bisect(H, G[i], G[i + 1]);
      const double A = dK_dG(p, Gb, g45), B = dK_dG(p, Gb, 0.0) - A;
      if (B == 0.0) continue;
      const double c = -A / B;
      if (!(std::fabs(c) < 1.0)) continue;
      const double Z = Z_of_G(Gb, p.rho), Xh = lemon_contour(Z, p.rho);
      const double Y = Xh * std::sqrt(1.0 - c * c);
      out.candidates.push_back(make_point(p, Kind::Ebar, {Xh * c, Y, Z}));
      out.candidates.push_back(make_point(p, Kind::Ebar, {Xh * c, -Y, Z}));
    }
  }
  std::stable_sort(out.candidates.begin(), out.candidates.end(), [](const Equilibrium& a, const Equilibrium& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.lemon.Z < b.lemon.Z;
  });

  if (opt.sphere_points > 0) {
    const int N = opt.sphere_points;
    const double ga = kPi * (3.0 - std::sqrt(5.0));
    std::vector<XiState> pts(N);
    std::vector<double> nF(N);
    for (int i = 0; i < N; ++i) {
      const double z = E * (1.0 - 2.0 * (i + 0.5) / N);
      const double rr = std::sqrt(std::max(0.0, E * E - z * z));
      pts[i] = {rr * std::cos(ga * i), rr * std::sin(ga * i), z};
      const auto F = xi_field(p, pts[i]);
      nF[i] = std::hypot(F[0], F[1], F[2]);
    }
    auto dist = [](const XiState& a, const XiState& b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3); };
    // lattice neighbours sit at Fibonacci index offsets
    std::vector<int> offs;
    for (int a = 1, b = 2; a < N; std::tie(a, b) = std::pair{b, a + b}) offs.push_back(a);
    const double reach = 3.0 * std::sqrt(4.0 * kPi / N) * E;
    std::vector<int> minima;
    for (int i = 0; i < N; ++i) {
      bool is_min = true;
      for (int o : offs) {
        for (int j : {i - o, i + o}) {
          if (j < 0 || j >= N || dist(pts[i], pts[j]) > reach) continue;
          if (nF[j] < nF[i]) is_min = false;
        }
        if (!is_min) break;
      }
      if (is_min) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return nF[a] < nF[b]; });
    if (minima.size() > 200) minima.resize(200);
    std::vector<XiState> seeds;
    for (int i : minima) seeds.push_back(pts[i]);
    // Gauss-Newton on the sphere in a local tangent frame
    for (XiState x : seeds) {
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const std::array<double, 3> n{x.x1 / E, x.x2 / E, x.x3 / E};
        std::array<double, 3> t1 = std::fabs(n[2]) < 0.9 ? std::array<double, 3>{-n[1], n[0], 0.0}
                                                          : std::array<double, 3>{0.0, -n[2], n[1]};
        const double l1 = std::hypot(t1[0], t1[1], t1[2]);
        for (double& c : t1) c /= l1;
        const std::array<double, 3> t2{n[1] * t1[2] - n[2] * t1[1], n[2] * t1[0] - n[0] * t1[2],
                                       n[0] * t1[1] - n[1] * t1[0]};
        const auto F0 = xi_field(p, x);
        if (std::hypot(F0[0], F0[1], F0[2]) <= 1e-13 * E) {
          ok = true;
          break;
        }
        const double h = 1e-7 * E;
        std::array<std::array<double, 3>, 2> J;
        for (int j = 0; j < 2; ++j) {
          const auto& t = j == 0 ? t1 : t2;
          const auto Fp = xi_field(p, {x.x1 + h * t[0], x.x2 + h * t[1], x.x3 + h * t[2]});
          const auto Fm = xi_field(p, {x.x1 - h * t[0], x.x2 - h * t[1], x.x3 - h * t[2]});
          for (int i = 0; i < 3; ++i) J[j][i] = (Fp[i] - Fm[i]) / (2 * h);
        }
        double A11 = 0, A12 = 0, A22 = 0, b1 = 0, b2 = 0;
        for (int i = 0; i < 3; ++i) {
          A11 += J[0][i] * J[0][i];
          A12 += J[0][i] * J[1][i];
          A22 += J[1][i] * J[1][i];
          b1 -= J[0][i] * F0[i];
          b2 -= J[1][i] * F0[i];
        }
        const double det = A11 * A22 - A12 * A12;
        if (!(std::fabs(det) > 0.0)) break;
        double u = (A22 * b1 - A12 * b2) / det, w = (A11 * b2 - A12 * b1) / det;
        const double step = std::hypot(u, w), cap = 0.05 * E;
        if (step > cap) {
          u *= cap / step;
          w *= cap / step;
        }
        XiState y{x.x1 + u * t1[0] + w * t2[0], x.x2 + u * t1[1] + w * t2[1], x.x3 + u * t1[2] + w * t2[2]};
        const double ny = std::hypot(y.x1, y.x2, y.x3);
        x = {y.x1 * E / ny, y.x2 * E / ny, y.x3 * E / ny};
      }
      if (!ok) {
        const auto F = xi_field(p, x);
        ok = std::hypot(F[0], F[1], F[2]) <= 1e-9 * E;
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& q : out.sphere_zeros) dup = dup || dist(q, x) < 1e-7 * E;
      if (!dup) out.sphere_zeros.push_back(x);
    }
    std::sort(out.sphere_zeros.begin(), out.sphere_zeros.end(), [](const XiState& a, const XiState& b) {
      if (a.x3 != b.x3) return a.x3 < b.x3;
      if (a.x1 != b.x1) return a.x1 < b.x1;
      return a.x2 < b.x2;
    });
  }
  return out;
}

EquivalenceReport compare_with_oracle(const ModelParams& p, int grid_n, double z_tol) {
  EquivalenceReport r;
  const std::vector<Equilibrium> an = enumerate_equilibria(p);
  BruteForceOptions o;
  o.sphere_points = 0;
  const BruteForceResult bf = brute_force_equilibria(p, grid_n, o);
  r.n_analytic = static_cast<int>(an.size());
  r.n_oracle = static_cast<int>(bf.candidates.size());
  r.count_ok = r.n_analytic == r.n_oracle;
  r.location_ok = true;
  r.stability_ok = true;
  std::vector<bool> used(bf.candidates.size(), false);
  for (const Equilibrium& a : an) {
    if (a.stability == Stability::Degenerate || a.merged) r.degenerate = true;
    int best = -1;
    double bd = 1e300;
    for (size_t i = 0; i < bf.candidates.size(); ++i) {
      const Equilibrium& b = bf.candidates[i];
      if (used[i] || b.kind != a.kind) continue;
      if (a.kind == Kind::Ebar && (a.lemon.Y > 0) != (b.lemon.Y > 0)) continue;
      const double dz = std::fabs(a.lemon.Z - b.lemon.Z);
      if (dz < bd) {
        bd = dz;
        best = static_cast<int>(i);
      }
    }
    const std::string name = a.label.empty() ? std::string(to_string(a.kind)) : a.label;
    if (best < 0) {
      r.location_ok = false;
      r.detail += name + " unmatched; ";
      continue;
    }
    used[best] = true;
    r.max_dz = std::max(r.max_dz, bd);
    if (bd > z_tol) {
      r.location_ok = false;
      r.detail += name + " dZ=" + std::to_string(bd) + "; ";
    }
    const Stability sb = bf.candidates[best].stability;
    if (a.stability != Stability::Degenerate && sb != Stability::Degenerate && a.stability != sb) {
      r.stability_ok = false;
      r.detail += name + " stability " + std::string(to_string(a.stability)) + " vs " +
                  std::string(to_string(sb)) + "; ";
    }
  }
  try {
    r.audit_ok = poincare_hopf_audit(an).passed;
  } catch (const AuditFailure& e) {
    r.audit_ok = false;
    r.detail += std::string(e.what()) + "; ";
  }
  return r;
}

ConservationReport conservation_check(const ModelParams& p, const XiState& xi0, double t_end, double tol) {
  p.validate();
  if (std::fabs(sphere_residual(xi0, p.rho)) > 1e-8) throw ConstraintError("initial point is not on the sphere");
  IntegratorOptions opt;
  opt.rel_tol = tol;
  auto sys = [&](const State3& x, State3& dx, double) { dx = xi_field(p, XiState{x[0], x[1], x[2]}); };
  // running maxima only; long runs would otherwise keep millions of samples
  ConservationReport c;
  auto leg = [&](const State3& start, double t1, bool radius) {
    const XiState s0{start[0], start[1], start[2]};
    const double K0 = K_xi(p, s0), r0 = sphere_residual(s0, p.rho);
    State3 last = start;
    drive<State3>(sys, start, t1, opt, [&](const State3& x, double) {
      const XiState s{x[0], x[1], x[2]};
      c.energy_drift = std::max(c.energy_drift, std::fabs(K_xi(p, s) - K0));
      if (radius) c.radius_drift = std::max(c.radius_drift, std::fabs(sphere_residual(s, p.rho) - r0));
      last = x;
    });
    return last;
  };
  const State3 end = leg({xi0.x1, xi0.x2, xi0.x3}, t_end, true);
  const State3 back = leg(end, -t_end, false);
  c.reversal_error = std::hypot(back[0] - xi0.x1, back[1] - xi0.x2, back[2] - xi0.x3);
  return c;
}

}  // namespace frozen
