#include "frozen/series.hpp"

#include <cmath>

#include "frozen/errors.hpp"

namespace frozen {

namespace {

const double kS5 = std::sqrt(5.0);

SeriesResult sum_terms(std::vector<double> terms, int order) {
  SeriesResult r;
  r.order = order;
  terms.resize(order + 1);
  for (double t : terms) r.value += t;
  r.terms = std::move(terms);
  return r;
}

// 4 sqrt(100 + u) - 40 without cancellation
double root_shift(double u) { return 4.0 * u / (std::sqrt(100.0 + u) + 10.0); }

std::optional<double> admissible(double r2) {
  if (!(r2 > 0.0 && r2 < 1.0)) return std::nullopt;
  return std::sqrt(r2);
}

double bisect_fn(double (*fn)(double, const ModelParams&), const ModelParams& p, double a, double b) {
  double fa = fn(a, p);
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = fn(m, p);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::optional<double> first_root(double (*fn)(double, const ModelParams&), const ModelParams& p) {
  const int n = 4000;
  double prev = fn(1e-12, p);
  double x0 = 1e-12;
  for (int i = 1; i <= n; ++i) {
    const double x = double(i) / n * (1.0 - 1e-12);
    const double v = fn(x, p);
    if ((v > 0) != (prev > 0)) return bisect_fn(fn, p, x0, x);
    prev = v;
    x0 = x;
  }
  return std::nullopt;
}

// numerators of s+(-E) and s-(-E) for J4, up to positive factors
double n_plus_lo(double r, const ModelParams& p) {
  const double l = p.lambda, j = p.j4_value(), r2 = r * r;
  return 8.0 * r2 * r2 + l * (31.0 + 12.0 * r - 7.0 * r2 - 5.0 * j * (3.0 * r2 - 7.0));
}
double n_minus_lo(double r, const ModelParams& p) {
  const double l = p.lambda, j = p.j4_value(), r2 = r * r;
  return 4.0 * r2 * r2 + l * (6.0 * (2.0 + r) - 5.0 * j * (3.0 * r2 - 5.0));
}

double rho_plus_j4(double j, double l) {
  const double u = (60.0 - 280.0 * j) * l + (94.0 + 510.0 * j + 700.0 * j * j) * l * l;
  const double num = (140.0 * j + 73.0) + root_shift(u) / l;
  return num / (5.0 * (84.0 * j + 85.0));
}

double rho_minus_j4(double j, double l) {
  const double u = (160.0 - 540.0 * j) * l - (9.0 - 40.0 * j - 1625.0 * j * j) * l * l;
  const double num = (220.0 * j + 41.0) + root_shift(u) / l;
  return num / (5.0 * (112.0 * j + 73.0));
}

}  // namespace

RhoPair rho_crit_exact(const ModelParams& p) {
  const double l = p.lambda;
  RhoPair out;
  if (p.model == Model::REL) {
    const double c = p.jC_value();
    const double up = 2480.0 * c * l + 60.0 * l + (43681.0 * c * c + 2784.0 * c + 94.0) * l * l;
    const double um = 2960.0 * c * l + 160.0 * l + (48841.0 * c * c + 6602.0 * c - 9.0) * l * l;
    out.plus = admissible((-836.0 * c + 73.0 + root_shift(up) / l) / 425.0);
    out.minus = admissible((-884.0 * c + 41.0 + root_shift(um) / l) / 365.0);
    return out;
  }
  const double j = p.j4_value();
  out.plus = admissible(rho_plus_j4(j, l));
  out.minus = admissible(rho_minus_j4(j, l));
  return out;
}

std::pair<SeriesResult, SeriesResult> rho_crit_series(const ModelParams& p, int order) {
  const double l = p.lambda;
  const double s = 1.0 / kS5;
  if (order < 0) throw OrderUnsupported("negative order");
  if (p.model == Model::J2) {
    if (order > 3) throw OrderUnsupported("rho series for J2 is printed to third order");
    std::vector<double> tp{s, s * l / 10.0, -s * 7.0 / 200.0 * l * l, -s * 7.0 / 800.0 * l * l * l};
    std::vector<double> tm{s, -s * l / 10.0, s * 3.0 / 40.0 * l * l, -s * 299.0 / 4000.0 * l * l * l};
    return {sum_terms(tp, order), sum_terms(tm, order)};
  }
  if (p.model == Model::J4) {
    if (order > 2) throw OrderUnsupported("rho series for J4 is printed to second order");
    const double j = p.j4_value();
    std::vector<double> tp{s, s * (1.0 + 6.0 * j) / 10.0 * l, -s * (7.0 + 20.0 * j - 132.0 * j * j) / 200.0 * l * l};
    std::vector<double> tm{s, -s * (1.0 - 8.0 * j) / 10.0 * l, s * (15.0 - 166.0 * j + 368.0 * j * j) / 200.0 * l * l};
    return {sum_terms(tp, order), sum_terms(tm, order)};
  }
  throw OrderUnsupported("no rho series for the rel model");
}

std::pair<SeriesResult, SeriesResult> G_frozen_series(const ModelParams& p, int order, Transcription t) {
  if (p.model == Model::REL) throw OrderUnsupported("no G series for the rel model");
  if (order < 0 || order > 3) throw OrderUnsupported("G series are printed to third order");
  const double r = p.abs_rho(), l = p.lambda;
  const double j = p.j4_value();
  const double j2 = j * j, j3 = j2 * j;
  const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r, r6 = r3 * r3;
  const double r7 = r6 * r, r11 = r7 * r4;
  const bool printed = t == Transcription::AsPrinted && p.model == Model::J4;

  const double p1 = (-5.0 - 7.0 * j + 20.0 * r2 + 5.0 * j * r2) / (50.0 * kS5 * r3);
  const double p2 = ((printed ? 70.0 : -70.0) - (printed ? 384.0 : 378.0) * j - 392.0 * j2 - 30.0 * kS5 * r -
                     42.0 * kS5 * j * r + 405.0 * r2 + 1215.0 * j * r2 + 70.0 * j2 * r2 + 120.0 * kS5 * r3 +
                     30.0 * kS5 * j * r3 - 500.0 * r4 + 475.0 * j * r4 + 150.0 * j2 * r4) /
                    (25000.0 * kS5 * r7);
  const double p3 =
      (1765.0 - 16569.0 * j - 70021.0 * j2 - 60711.0 * j3 - 1680.0 * kS5 * r - 9072.0 * kS5 * j * r -
       9408.0 * kS5 * j2 * r - 20385.0 * r2 + 86215.0 * j * r2 + 189665.0 * j2 * r2 - 20335.0 * j3 * r2 +
       9720.0 * kS5 * r3 + 29160.0 * kS5 * j * r3 + 1680.0 * kS5 * j2 * r3 + 61550.0 * r4 - 19900.0 * j * r4 +
       265125.0 * j2 * r4 + 53375.0 * j3 * r4 - 12000.0 * kS5 * r5 + 11400.0 * kS5 * j * r5 +
       3600.0 * kS5 * j2 * r5 - 33000.0 * r6 - 316750.0 * j * r6 - 99625.0 * j2 * r6 - 5625.0 * j3 * r6) /
      (25000000.0 * kS5 * r11);

  const double m1 = (125.0 * j * r2 - 41.0 * j - 35.0 * r2 + 9.0) / (100.0 * kS5 * r3);
  const double m2 = (-103125.0 * j2 * r4 + 90450.0 * j2 * r2 - 18573.0 * j2 + 68250.0 * j * r4 +
                     1500.0 * kS5 * j * r3 - 54320.0 * j * r2 - 492.0 * kS5 * j * r + 10022.0 * j - 11025.0 * r4 -
                     420.0 * kS5 * r3 + 7910.0 * r2 + 108.0 * kS5 * r - 1305.0) /
                    (100000.0 * kS5 * r7);
  const double slot = printed ? j2 * j2 : j2 * r4;
  const double m3 =
      -(-106171875.0 * j3 * r6 + 113728125.0 * j2 * r6 + 2475000.0 * kS5 * j2 * r5 + 168643125.0 * j3 * r4 -
        168503125.0 * slot - 2170800.0 * kS5 * j2 * r3 - 80521425.0 * j3 * r2 + 75097235.0 * j2 * r2 +
        445752.0 * kS5 * j2 * r + 12014271.0 * j3 - 10434331.0 * j2 - 39598125.0 * j * r6 -
        1638000.0 * kS5 * j * r5 + 54647375.0 * j * r4 + 1303680.0 * kS5 * j * r3 - 22678075.0 * j * r2 -
        240528.0 * kS5 * j * r + 2929289.0 * j + 4501875.0 * r6 + 264600.0 * kS5 * r5 - 5775175.0 * r4 -
        189840.0 * kS5 * r3 + 2226905.0 * r2 + 31320.0 * kS5 * r - 267309.0) /
      (100000000.0 * kS5 * r11);

  const double g0 = kS5 * r;
  auto a = sum_terms({g0, p1 * l, p2 * l * l, p3 * l * l * l}, order);
  auto b = sum_terms({g0, m1 * l, m2 * l * l, m3 * l * l * l}, order);
  a.unreliable = b.unreliable = r < 0.05;
  return {a, b};
}

double j4_vinti_boundary_series(double l) { return 1.0 - 14.0 / 5.0 * l + 1239.0 / 50.0 * l * l; }

double j4_vinti_boundary_direct(double l) {
  auto d = [l](double j) { return rho_plus_j4(j, l) - rho_minus_j4(j, l); };
  double a = 0.0, b = 2.0;
  double fa = d(a);
  if ((fa > 0) == (d(b) > 0)) throw DomainError("rho+ = rho- not bracketed in j4 in [0, 2]");
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = d(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

EndpointS endpoint_s_closed(const ModelParams& p) {
  const double r = p.abs_rho(), r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r6 = r4 * r2;
  const double l = p.lambda;
  EndpointS s;
  if (p.model == Model::REL) {
    const double c = p.jC_value();
    // overall factors 2 and 4 restored so jC = 0 gives back the J2 values
    const double dlo = l * (12.0 * c * r2 - 7.0);
    s.sp_lo = 2.0 * ((8.0 * r6 - 110.0 * l * r4 + 84.0 * r3 * l + 186.0 * l * r2) * c + 8.0 * r4 - 7.0 * l * r2 +
               12.0 * l * r + 31.0 * l) / dlo;
    s.sm_lo = 4.0 * ((4.0 * r6 - 61.0 * l * r4 + 42.0 * r3 * l + 99.0 * l * r2) * c + 4.0 * r4 + 6.0 * l * r + 12.0 * l) / dlo;
    const double dhi = 2.0 * (-15.0 * r2 + 24.0 * c + 1.0) * l;
    s.sp_hi = (425.0 * l * r4 + (1672.0 * c * l - 146.0 * l + 80.0) * r2 - 392.0 * c * l + 64.0 * c + 9.0 * l - 16.0) / dhi;
    s.sm_hi = (365.0 * l * r4 + (1768.0 * c * l - 82.0 * l + 80.0) * r2 - 488.0 * c * l + 64.0 * c + 5.0 * l - 16.0) / dhi;
    return s;
  }
  const double j = p.j4_value();
  const double dlo = l * (15.0 * j - 7.0);
  s.sp_lo = 2.0 * n_plus_lo(r, p) / dlo;
  s.sm_lo = 4.0 * n_minus_lo(r, p) / dlo;
  const double dhi = l * ((35.0 * j - 15.0) * r2 - 5.0 * j + 1.0);
  s.sp_hi = -0.5 * (16.0 - 80.0 * r2 - l * ((420.0 * j + 425.0) * r4 - (280.0 * j + 146.0) * r2 + 20.0 * j + 9.0)) / dhi;
  s.sm_hi = -0.5 * (16.0 - 80.0 * r2 - l * ((560.0 * j + 365.0) * r4 - (440.0 * j + 82.0) * r2 + 40.0 * j + 5.0)) / dhi;
  return s;
}

std::optional<double> rho_triangle_up(const ModelParams& p) {
  if (p.model != Model::J4 || !(p.j4_value() < -31.0 / 35.0)) return std::nullopt;
  return first_root(n_plus_lo, p);
}

std::optional<double> rho_triangle_down(const ModelParams& p) {
  if (p.model != Model::J4 || !(p.j4_value() < -12.0 / 25.0)) return std::nullopt;
  return first_root(n_minus_lo, p);
}

double jC_tilde(double l) {
  // (397 l - 180 + sqrt(142321 l^2 - 1800 l + 32400)) / (7056 l)
  const double u = -1800.0 * l + 142321.0 * l * l;
  return (397.0 + (-1800.0 + 142321.0 * l) / (std::sqrt(32400.0 + u) + 180.0)) / 7056.0;
}

std::optional<std::pair<double, double>> rel_order0(const ModelParams& p) {
  if (p.model != Model::REL) return std::nullopt;
  const double c = p.jC_value(), r2 = p.rho * p.rho;
  const double disc = 1.0 - 80.0 * c * r2;
  if (!(c > 0.0) || disc < 0.0) return std::nullopt;
  const double a = -4.0 * c * r2 - 4.0 * c + 1.0, s = std::sqrt(disc);
  return std::make_pair((a - s) / (8.0 * c), (a + s) / (8.0 * c));
}

double rel_zero_order_curvature(double q, bool upper) {
  const double w = std::sqrt(1.0 - 80.0 * q);
  const double cubic = 144000.0 * q * q * q - 28400.0 * q * q + 880.0 * q - 7.0;
  const double quad = 10000.0 * q * q - 600.0 * q + 7.0;
  return 16.0 * w * ((upper ? cubic : -cubic) + w * quad);
}

}  // namespace frozen
