#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frozen/equilibria.hpp"

namespace frozen {

enum class EventKind {
  PitchforkE2Plus,    // rho+ (rho~+ for rel)
  PitchforkE2Minus,   // rho-
  PitchforkE1Plus,    // triangle up
  PitchforkE1Minus,   // triangle down
  SaddleNodePlus,     // filled triangle up, filled diamond for rel
  SaddleNodeMinus,    // filled triangle down, filled square for rel
  EbarExchangePlus,   // diamond, diamond-bis
  EbarExchangeMinus,  // square, square-bis
};

enum class Detection { ClosedForm, Maximization, RootCoincidence };

std::string_view to_string(EventKind k);
std::string_view to_string(Detection d);

struct BifurcationEvent {
  double rho_star = 0.0;
  EventKind kind = EventKind::PitchforkE2Plus;
  std::string name;  // rho_plus, rho_sn_minus, rho_diamond_bis, ...
  std::vector<std::string> affected;
  Detection detection = Detection::ClosedForm;
};

struct SaddleNode {
  double rho = 0.0;
  double G = 0.0;
};

// Interior maximum over G of the admissible rho^2 branches of the s+ (sign
// +1) or s- (sign -1) numerator. Absent when no interior maximum exists.
std::optional<SaddleNode> saddle_node(const ModelParams& base, int sign);

// (Xhat - sign Xbar) / rho^4 at Zbar: positive on the side where the Ebar
// pair can exist. Absent when Zbar is outside the lemon.
std::optional<double> ebar_margin(const ModelParams& p, int sign);

// |rho| values where Y-script changes sign, each tagged with the tangency
// family the pair merges into (+1 diamond, -1 square). Descending.
std::vector<std::pair<double, int>> ebar_crossings(const ModelParams& base);

std::vector<BifurcationEvent> detect_events(const ModelParams& base);

struct Regime {
  double rho_lo = 0.0, rho_hi = 1.0;
  double rho_sample = 0.5;
  std::vector<std::string> inventory;  // "E3:stable", ...
  bool audit_passed = false;
};

struct BifurcationDiagram {
  ModelParams base;
  std::vector<BifurcationEvent> events;
  std::vector<Regime> regimes;
};

BifurcationDiagram build_diagram(const ModelParams& base);

struct RegimeRow {
  double j4 = 0.0, lambda = 0.0;
  bool extrapolated = false;     // lambda differs from 0.001
  std::vector<std::string> chain;  // event names, descending in rho
  BifurcationDiagram diagram;
};

RegimeRow classify_regime(double j4, double lambda);

struct J4Boundary {
  std::string name;  // bif1 ... bif11
  double value = 0.0;
  std::string method;
};

// The eleven j4 values that separate the J4 regimes.
std::vector<J4Boundary> scan_j4_boundaries(double lambda);

enum class ExportFormat { CSV, JSON };

// One diagram per sweep value; the first column is j4 or jC.
void export_diagram(const std::vector<BifurcationDiagram>& diagrams, const std::string& path, ExportFormat fmt);
void export_diagram(const std::vector<BifurcationDiagram>& diagrams, std::ostream& out, ExportFormat fmt);

struct PortraitLevel {
  double k = 0.0;
  std::string kind;   // tangency, separatrix, degenerate, generic
  std::string label;  // equilibrium name when tied to one
  bool degenerate = false;
  std::vector<std::pair<double, double>> zx;  // (Z, X)
  std::vector<std::pair<double, double>> gG;  // (g, G)
};

struct PortraitData {
  std::vector<double> Z, Xhat;
  std::optional<double> Zbar;
  std::vector<PortraitLevel> levels;
};

PortraitData phase_portrait_data(const ModelParams& p, int n_levels);

}  // namespace frozen
