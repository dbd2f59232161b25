// frozen-orbits: equilibrium reports, bifurcation sweeps, portrait data and
// oracle verification for the averaged zonal problem.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frozen/bifurcation.hpp"
#include "frozen/errors.hpp"
#include "frozen/oracle.hpp"
#include "frozen/parallel.hpp"
#include "frozen/stability.hpp"

using namespace frozen;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0, kExitVerify = 1, kExitUsage = 2;

struct Common {
  std::string model = "j2";
  std::optional<double> rho, lambda, j4, jC;
  std::string physical;
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c, bool with_rho) {
  app->add_option("--model", c.model, "j2, j4 or rel")->check(CLI::IsMember({"j2", "j4", "rel"}));
  if (with_rho) app->add_option("--rho", c.rho, "H/L, nonzero, |rho| < 1");
  app->add_option("--lambda", c.lambda, "J2 (Rp/a)^2");
  app->add_option("--j4", c.j4, "-J4/J2^2");
  app->add_option("--jc", c.jC, "1/(lambda c^2) in the nondimensional units");
  app->add_option("--physical-config", c.physical, "JSON file with mu, rp, a, j2 and optionally j4, c");
  app->add_option("--threads", c.threads, "worker count (FROZEN_ORBIT_THREADS overrides)");
}

// lambda, j4, jC from flags or the physical config; rho filled by the caller
ModelParams base_params(const Common& c) {
  const Model m = parse_model(c.model);
  ModelParams p;
  if (!c.physical.empty()) {
    p = nondimensionalize(PhysicalUnits::from_json_file(c.physical), m);
  } else {
    if (!c.lambda) throw ModelError("--lambda is required");
    p.model = m;
    p.lambda = *c.lambda;
    if (m == Model::J4) p.j4 = c.j4;
    if (m == Model::REL) p.jC = c.jC;
    if (m != Model::J4 && c.j4) throw ModelError("--j4 only applies to the j4 model");
    if (m != Model::REL && c.jC) throw ModelError("--jc only applies to the rel model");
  }
  return p;
}

ModelParams point_params(const Common& c) {
  ModelParams p = base_params(c);
  if (!c.rho) throw ModelError("--rho is required");
  p.rho = *c.rho;
  p.validate();
  return p;
}

ojson params_json(const ModelParams& p) {
  ojson j;
  j["model"] = std::string(to_string(p.model));
  j["rho"] = p.rho;
  j["lambda"] = p.lambda;
  if (p.j4) j["j4"] = *p.j4;
  if (p.jC) j["jC"] = *p.jC;
  return j;
}

std::string name_of(const Equilibrium& e) { return e.label.empty() ? std::string(to_string(e.kind)) : e.label; }

int cmd_equilibria(const Common& c, bool summary) {
  const ModelParams p = point_params(c);
  const std::vector<Equilibrium> eqs = enumerate_equilibria(p);
  AuditReport audit;
  std::string audit_error;
  try {
    audit = poincare_hopf_audit(eqs);
  } catch (const AuditFailure& e) {
    audit_error = e.what();
  }
  if (summary) {
    std::printf("%-6s %-7s %12s %12s %12s %-10s %12s\n", "label", "kind", "Z", "G", "incl[deg]", "stability", "C");
    for (const Equilibrium& e : eqs)
      std::printf("%-6s %-7s %12.6g %12.6g %12.6g %-10s %12.6g\n", name_of(e).c_str(),
                  std::string(to_string(e.kind)).c_str(), e.lemon.Z, e.G, e.inclination(p.rho) * 180.0 / std::numbers::pi,
                  std::string(to_string(e.stability)).c_str(), e.char_coeff);
    std::printf("index sum %d%s\n", audit.index_sum, audit.inconclusive ? " (inconclusive)" : "");
    return kExitOk;
  }
  ojson out = params_json(p);
  ojson list = ojson::array();
  for (const Equilibrium& e : eqs) {
    ojson j;
    j["label"] = name_of(e);
    j["kind"] = std::string(to_string(e.kind));
    j["Z"] = e.lemon.Z;
    j["X"] = e.lemon.X;
    j["Y"] = e.lemon.Y;
    j["G"] = e.G;
    j["eccentricity"] = e.eccentricity();
    j["inclination_deg"] = e.inclination(p.rho) * 180.0 / std::numbers::pi;
    j["stability"] = std::string(to_string(e.stability));
    j["char_coeff"] = std::isfinite(e.char_coeff) ? ojson(e.char_coeff) : ojson(nullptr);
    j["merged"] = e.merged;
    ojson xi = ojson::array();
    for (const XiState& x : e.xi) xi.push_back({x.x1, x.x2, x.x3});
    j["xi"] = xi;
    list.push_back(j);
  }
  out["count"] = eqs.size();
  out["equilibria"] = list;
  out["audit"] = {{"index_sum", audit.index_sum},
                  {"inconclusive", audit.inconclusive},
                  {"passed", audit.passed && audit_error.empty()}};
  if (!audit_error.empty()) out["audit"]["error"] = audit_error;
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct Sweep {
  std::optional<double> lo, hi, step;
};

std::vector<double> sweep_values(const Sweep& s, std::optional<double> single, const char* what) {
  if (single && !s.lo && !s.hi) return {*single};
  if (!s.lo || !s.hi) throw ModelError(std::string("give --") + what + " or both --" + what + "-min and --" + what + "-max");
  const double step = s.step.value_or(0.01);
  if (!(*s.hi >= *s.lo) || !(step > 0.0) || !std::isfinite(*s.lo) || !std::isfinite(*s.hi))
    throw ModelError("bad range: need min <= max and step > 0");
  const long n = static_cast<long>(std::floor((*s.hi - *s.lo) / step + 1e-9)) + 1;
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(*s.lo + i * step);
  return v;
}

int cmd_bifurcation(const Common& c, const Sweep& sw, const std::string& format, const std::string& out_path) {
  ModelParams base = base_params(c);
  if (base.model == Model::J2) throw ModelError("bifurcation sweeps need the j4 or rel model");
  const bool rel = base.model == Model::REL;
  const std::vector<double> vals =
      !c.physical.empty() ? std::vector<double>{rel ? base.jC_value() : base.j4_value()}
                          : sweep_values(sw, rel ? c.jC : c.j4, rel ? "jc" : "j4");
  const ExportFormat fmt = format == "json" ? ExportFormat::JSON : ExportFormat::CSV;
  base.rho = 0.5;
  std::vector<ModelParams> pts;
  for (double v : vals) {
    ModelParams p = base;
    if (rel)
      p.jC = v;
    else
      p.j4 = v;
    p.validate();
    pts.push_back(p);
  }
  const unsigned threads = resolve_threads(c.threads);
  auto diagrams = parallel_map<BifurcationDiagram>(pts.size(), threads, [&](std::size_t i) {
    if (fmt == ExportFormat::JSON) return build_diagram(pts[i]);
    BifurcationDiagram d;
    d.base = pts[i];
    d.events = detect_events(pts[i]);
    return d;
  });
  if (out_path.empty() || out_path == "-") {
    export_diagram(diagrams, std::cout, fmt);
  } else {
    export_diagram(diagrams, out_path, fmt);
  }
  return kExitOk;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_portrait(Common c, int n_levels, const std::string& rho_event, const std::string& prefix) {
  if (!rho_event.empty()) {
    ModelParams b = base_params(c);
    b.rho = 0.5;
    std::optional<double> found;
    for (const auto& e : detect_events(b))
      if (e.name == rho_event) found = e.rho_star;
    if (!found) throw ModelError("no event named " + rho_event + " for these parameters");
    c.rho = *found;
  }
  const ModelParams p = point_params(c);
  if (n_levels < 0) throw ModelError("--levels must be >= 0");
  const PortraitData d = phase_portrait_data(p, n_levels);

  std::ofstream zx(prefix + "_zx.csv", std::ios::binary), gg(prefix + "_gG.csv", std::ios::binary);
  if (!zx || !gg) throw IoError("cannot write portrait files with prefix " + prefix);
  zx << "level,kind,label,degenerate,k,Z,X\n";
  gg << "level,kind,label,degenerate,k,g,G\n";
  for (size_t i = 0; i < d.Z.size(); ++i) {
    zx << "contour,contour,,0,," << g17(d.Z[i]) << ',' << g17(d.Xhat[i]) << '\n';
    zx << "contour,contour,,0,," << g17(d.Z[i]) << ',' << g17(-d.Xhat[i]) << '\n';
  }
  ojson meta = params_json(p);
  meta["levels"] = ojson::array();
  if (d.Zbar) meta["Zbar"] = *d.Zbar;
  for (size_t i = 0; i < d.levels.size(); ++i) {
    const PortraitLevel& L = d.levels[i];
    const std::string head = std::to_string(i) + ',' + L.kind + ',' + csv_field(L.label) + ',' +
                             (L.degenerate ? "1" : "0") + ',' + g17(L.k) + ',';
    for (const auto& [z, x] : L.zx) zx << head << g17(z) << ',' << g17(x) << '\n';
    for (const auto& [g, G] : L.gG) gg << head << g17(g) << ',' << g17(G) << '\n';
    ojson m;
    m["level"] = i;
    m["kind"] = L.kind;
    m["label"] = L.label;
    m["k"] = L.k;
    m["degenerate"] = L.degenerate;
    if (L.degenerate) m["flag"] = "green/degenerate";
    meta["levels"].push_back(m);
  }
  std::ofstream mf(prefix + "_meta.json", std::ios::binary);
  if (!mf) throw IoError("cannot write " + prefix + "_meta.json");
  mf << meta.dump(2) << '\n';
  std::cout << prefix << "_zx.csv\n" << prefix << "_gG.csv\n" << prefix << "_meta.json\n";
  return kExitOk;
}

std::vector<ModelParams> regression_set(const std::vector<std::string>& models) {
  std::vector<ModelParams> v;
  auto want = [&](const char* m) {
    if (models.empty()) return true;
    for (const auto& s : models)
      if (s == m) return true;
    return false;
  };
  if (want("j2"))
    for (double r : {0.05, 0.2, 0.3, 0.447, 0.6, 0.9}) v.push_back(ModelParams::j2(r, 0.001));
  if (want("j4")) {
    const std::vector<std::pair<double, double>> pts{{2.0, 0.01},   {2.0, 0.04},  {2.0, 0.2},   {0.95, 0.24},
                                                     {0.95, 0.3},   {0.4, 0.01},  {0.0, 0.2},   {-0.6, 0.02},
                                                     {-0.6, 0.1},   {-1.0, 0.05}, {-1.0, 0.2},  {-1.35, 0.003},
                                                     {-1.35, 0.05}, {-3.0, 0.11}, {-3.0, 0.32}, {1.3, 0.03}};
    for (const auto& [j, r] : pts) v.push_back(ModelParams::with_j4(r, 0.001, j));
  }
  if (want("rel"))
    for (double r : {0.1, 0.2017, 0.207, 0.21, 0.22, 0.2517, 0.3}) v.push_back(ModelParams::rel(r, 0.001, 0.2));
  return v;
}

int cmd_verify(const Common& c, const std::vector<std::string>& models, double tol_energy, double t_end) {
  for (const auto& m : models) parse_model(m);
  const std::vector<ModelParams> set = regression_set(models);
  const unsigned threads = resolve_threads(c.threads);
  auto reports = parallel_map<EquivalenceReport>(set.size(), threads, [&](std::size_t i) { return compare_with_oracle(set[i]); });

  bool ok = true;
  std::printf("%-12s %-6s %-34s %-6s %s\n", "check", "model", "parameters", "result", "detail");
  for (size_t i = 0; i < set.size(); ++i) {
    const ModelParams& p = set[i];
    std::ostringstream par;
    par.precision(6);
    par << "rho=" << p.rho << " lambda=" << p.lambda;
    if (p.j4) par << " j4=" << *p.j4;
    if (p.jC) par << " jC=" << *p.jC;
    const EquivalenceReport& r = reports[i];
    std::ostringstream det;
    det.precision(3);
    det << r.n_analytic << "/" << r.n_oracle << " points, max dZ " << r.max_dz;
    if (!r.detail.empty()) det << "; " << r.detail;
    const bool pass = r.passed();
    ok = ok && pass;
    std::printf("%-12s %-6s %-34s %-6s %s\n", "oracle", std::string(to_string(p.model)).c_str(), par.str().c_str(),
                pass ? "PASS" : "FAIL", det.str().c_str());
    std::printf("%-12s %-6s %-34s %-6s %s\n", "audit", std::string(to_string(p.model)).c_str(), par.str().c_str(),
                r.audit_ok || r.degenerate ? "PASS" : "FAIL", r.degenerate ? "degenerate point" : "index sum 2");
  }

  std::vector<ModelParams> cons;
  for (const auto& m : {"j2", "j4", "rel"}) {
    if (!models.empty() && std::find(models.begin(), models.end(), m) == models.end()) continue;
    if (std::string(m) == "j2") cons.push_back(ModelParams::j2(0.3, 0.001));
    if (std::string(m) == "j4") cons.push_back(ModelParams::with_j4(0.3, 0.001, 0.95));
    if (std::string(m) == "rel") cons.push_back(ModelParams::rel(0.3, 0.001, 0.2));
  }
  auto cr = parallel_map<ConservationReport>(cons.size(), threads, [&](std::size_t i) {
    const double E = cons[i].energy_E();
    const double x1 = 0.6 * E, x2 = 0.3 * E;
    return conservation_check(cons[i], {x1, x2, std::sqrt(E * E - x1 * x1 - x2 * x2)}, t_end);
  });
  for (size_t i = 0; i < cons.size(); ++i) {
    const bool pass = cr[i].energy_drift <= tol_energy && cr[i].radius_drift <= 1e-9 && cr[i].reversal_error <= 1e-8;
    ok = ok && pass;
    char det[160];
    std::snprintf(det, sizeof det, "energy %.3g, radius %.3g, reversal %.3g", cr[i].energy_drift, cr[i].radius_drift,
                  cr[i].reversal_error);
    std::printf("%-12s %-6s %-34s %-6s %s\n", "conservation", std::string(to_string(cons[i].model)).c_str(), "rho=0.3",
                pass ? "PASS" : "FAIL", det);
  }
  std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frozen orbits of the averaged zonal satellite problem"};
  app.require_subcommand(1);

  Common c_eq, c_bif, c_por, c_ver;
  bool summary = false;
  auto* eq = app.add_subcommand("equilibria", "list the equilibria and their stability");
  add_common(eq, c_eq, true);
  eq->add_flag("--summary", summary, "human-readable table instead of JSON");

  Sweep j4s, jcs;
  std::string format = "csv", out_path;
  auto* bif = app.add_subcommand("bifurcation", "bifurcation values over a j4 or jC sweep");
  add_common(bif, c_bif, false);
  bif->add_option("--j4-min", j4s.lo);
  bif->add_option("--j4-max", j4s.hi);
  bif->add_option("--jc-min", jcs.lo);
  bif->add_option("--jc-max", jcs.hi);
  std::optional<double> step;
  bif->add_option("--step", step, "sweep step (default 0.01)");
  bif->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  bif->add_option("--out", out_path, "output file, stdout if omitted");

  int n_levels = 8;
  std::string rho_event, prefix = "portrait";
  auto* por = app.add_subcommand("portrait", "level curves in the (Z,X) and (g,G) charts");
  add_common(por, c_por, true);
  por->add_option("--levels", n_levels, "generic levels besides the tangency ones");
  por->add_option("--rho-event", rho_event, "take rho from a detected event, e.g. rho_minus");
  por->add_option("--out-prefix", prefix);

  std::vector<std::string> models;
  double tol_energy = 1e-9, t_end = 1e4;
  auto* ver = app.add_subcommand("verify", "oracle equivalence, index audits and conservation");
  add_common(ver, c_ver, false);
  ver->add_option("--models", models, "subset of j2,j4,rel")->delimiter(',');
  ver->add_option("--tol-energy", tol_energy, "allowed energy drift");
  ver->add_option("--t-end", t_end, "integration time for the conservation checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eq) return cmd_equilibria(c_eq, summary);
    if (*bif) {
      j4s.step = step;
      jcs.step = step;
      return cmd_bifurcation(c_bif, parse_model(c_bif.model) == Model::REL ? jcs : j4s, format, out_path);
    }
    if (*por) return cmd_portrait(c_por, n_levels, rho_event, prefix);
    if (*ver) return cmd_verify(c_ver, models, tol_energy, t_end);
  } catch (const AuditFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerify;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
