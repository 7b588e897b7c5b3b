#include "ptw/indices.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ptw/elliptic.hpp"
#include "ptw/errors.hpp"
#include "ptw/waves.hpp"

namespace ptw {

namespace {

constexpr double pi = std::numbers::pi;

void check_kappa(double kappa) {
  if (!(kappa >= kIndexKappaMin && kappa <= kIndexKappaMax)) {
    throw DomainError("index functions need kappa in [1e-6, 1 - 1e-9], got " +
                      std::to_string(kappa));
  }
}

void check_w(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw DomainError("w must be positive, got " + std::to_string(w));
  }
}

struct KE {
  double k, k2, kp2, K, E, dK, dE;
};

KE elliptic_all(double kappa) {
  check_kappa(kappa);
  const auto [k, bigK, bigE] = complete_elliptic(kappa);
  const auto [dK, dE] = d_complete_elliptic(kappa);
  return {k, k * k, complementary_sq(k), bigK, bigE, dK, dE};
}

// s = sqrt(1 - k^2 + k^4) and ds/dk
ValueSlope quartic_root(double k) {
  const double k2 = k * k;
  const double q = 1.0 - k2 + k2 * k2;
  const double s = std::sqrt(q);
  return {s, (-2.0 * k + 4.0 * k2 * k) / (2.0 * s)};
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo) {
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> first_sign_change(const std::function<double(double)>& f, double lo,
                                        double hi, int points) {
  double prev_k = lo;
  double prev_f = f(lo);
  for (int i = 1; i < points; ++i) {
    const double k = lo + (hi - lo) * i / (points - 1);
    const double fk = f(k);
    if ((fk < 0.0) != (prev_f < 0.0)) return bisect(f, prev_k, k, prev_f);
    prev_k = k;
    prev_f = fk;
  }
  return std::nullopt;
}

// Power series in m = k^2. Below kSeriesKappa several slopes (d/dk of KE,
// (2-k^2)K^2, K^4 q, ...) are O(k^3) remainders of O(k) terms; summing
// the series after dropping coefficients that vanish analytically keeps
// full relative accuracy down to kIndexKappaMin.
constexpr double kSeriesKappa = 0.25;
constexpr int kTerms = 40;
using Series = std::array<double, kTerms>;

const Series& series_K() {
  static const Series s = [] {
    Series c{};
    double t = 1.0;  // (1/2)_n / n!
    for (int n = 0; n < kTerms; ++n) {
      c[n] = pi / 2 * t * t;
      t *= (2.0 * n + 1.0) / (2.0 * n + 2.0);
    }
    return c;
  }();
  return s;
}

const Series& series_E() {
  static const Series s = [] {
    Series c = series_K();
    for (int n = 0; n < kTerms; ++n) c[n] /= 1.0 - 2.0 * n;
    return c;
  }();
  return s;
}

Series poly(double c0, double c1, double c2 = 0.0) {
  Series c{};
  c[0] = c0;
  c[1] = c1;
  c[2] = c2;
  return c;
}

Series operator*(const Series& a, const Series& b) {
  Series c{};
  for (int i = 0; i < kTerms; ++i) {
    for (int j = 0; i + j < kTerms; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Series operator-(const Series& a, const Series& b) {
  Series c{};
  for (int i = 0; i < kTerms; ++i) c[i] = a[i] - b[i];
  return c;
}

Series operator*(double f, const Series& a) {
  Series c{};
  for (int i = 0; i < kTerms; ++i) c[i] = f * a[i];
  return c;
}

// 1/(2 - m)
Series inv_two_minus_m() {
  Series c{};
  for (int n = 0; n < kTerms; ++n) c[n] = std::ldexp(1.0, -(n + 1));
  return c;
}

ValueSlope eval_series(Series c, double kappa) {
  const double m = kappa * kappa;
  for (int n = 1; n < kTerms; ++n) {
    if (std::abs(c[n]) < 1e-13 * std::abs(c[0])) c[n] = 0.0;  // exact zeros
  }
  double value = 0.0;
  double dm = 0.0;
  for (int n = kTerms - 1; n >= 0; --n) {
    value = value * m + c[n];
    if (n > 0) dm = dm * m + n * c[n];
  }
  return {value, 2.0 * kappa * dm};
}

// m^lead * sum_n c_n m^n with c_0 != 0. Leading coefficients that cancel to
// rounding level in a sum are exact zeros and are stripped, so ratios of
// quantities that vanish like powers of m keep full relative accuracy.
struct Laurent {
  int lead = 0;
  Series c{};
};

Laurent normalized(const Series& raw, int lead, double scale) {
  int shift = 0;
  while (shift < kTerms && std::abs(raw[shift]) <= 1e-12 * scale) ++shift;
  if (shift == kTerms) throw ArithmeticError("series cancelled completely");
  Laurent out;
  out.lead = lead + shift;
  for (int n = 0; n + shift < kTerms; ++n) out.c[n] = raw[n + shift];
  return out;
}

double max_abs(const Series& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Laurent lift(const Series& a) { return normalized(a, 0, max_abs(a)); }

Laurent operator*(const Laurent& a, const Laurent& b) {
  return {a.lead + b.lead, a.c * b.c};
}

Laurent operator*(double f, const Laurent& a) { return {a.lead, f * a.c}; }

Laurent combine(const Laurent& a, const Laurent& b, double sign) {
  const int lead = std::min(a.lead, b.lead);
  Series x{}, y{};
  for (int n = 0; n + a.lead - lead < kTerms; ++n) x[n + a.lead - lead] = a.c[n];
  for (int n = 0; n + b.lead - lead < kTerms; ++n) y[n + b.lead - lead] = sign * b.c[n];
  Series raw{};
  for (int n = 0; n < kTerms; ++n) raw[n] = x[n] + y[n];
  return normalized(raw, lead, std::max(max_abs(x), max_abs(y)));
}

Laurent operator+(const Laurent& a, const Laurent& b) { return combine(a, b, 1.0); }
Laurent operator-(const Laurent& a, const Laurent& b) { return combine(a, b, -1.0); }
Laurent operator-(double f, const Laurent& a) { return lift(poly(f, 0.0)) - a; }

Laurent operator/(const Laurent& a, const Laurent& b) {
  Laurent q;
  q.lead = a.lead - b.lead;
  for (int n = 0; n < kTerms; ++n) {
    double v = a.c[n];
    for (int k = 0; k < n; ++k) v -= q.c[k] * b.c[n - k];
    q.c[n] = v / b.c[0];
  }
  return q;
}

Laurent d_dm(const Laurent& a) {
  Series raw{};
  for (int n = 0; n < kTerms; ++n) raw[n] = (a.lead + n) * a.c[n];
  return normalized(raw, a.lead - 1, max_abs(raw));
}

Laurent sqrt_series(const Laurent& a) {
  if (a.lead != 0 || !(a.c[0] > 0.0)) throw ArithmeticError("series square root needs c0 > 0");
  Laurent r;
  r.c[0] = std::sqrt(a.c[0]);
  for (int n = 1; n < kTerms; ++n) {
    double v = a.c[n];
    for (int k = 1; k < n; ++k) v -= r.c[k] * r.c[n - k];
    r.c[n] = v / (2.0 * r.c[0]);
  }
  return r;
}

double value_at(const Laurent& a, double kappa) {
  const double m = kappa * kappa;
  double v = 0.0;
  for (int n = kTerms - 1; n >= 0; --n) v = v * m + a.c[n];
  return v * std::pow(m, a.lead);
}

Laurent lK() { return lift(series_K()); }
Laurent lE() { return lift(series_E()); }
Laurent lpoly(double c0, double c1, double c2 = 0.0) { return lift(poly(c0, c1, c2)); }

Laurent series_M() {
  const Laurent K = lK(), E = lE();
  const Laurent A = 4.0 * E - (pi * pi) * (lpoly(1.0, 0.0) / K);
  const Laurent B = lpoly(2.0, -1.0) * E - 2.0 * (lpoly(1.0, -1.0) * K);
  const Laurent C = E * E - lpoly(1.0, -1.0) * K * K;
  return A * B / (lpoly(2.0, -1.0) * C);
}

// F' G = F_m / (128 (K^4 q)_m): the 2k factors of the k-slopes cancel.
struct FtildeParts {
  Laurent ftilde, bracket;
};

FtildeParts series_Ftilde() {
  const Laurent K = lK(), E = lE();
  const Laurent q = lpoly(1.0, -1.0, 1.0);
  const Laurent s = sqrt_series(q);
  const Laurent K2 = K * K;
  const Laurent F = 16.0 * (K * (3.0 * E + (lpoly(-2.0, 1.0) + s) * K));
  const Laurent fg = d_dm(F) / (128.0 * d_dm(K2 * K2 * q));
  const Laurent br = 1.0 - 16.0 * (s * K2 * fg);
  const Laurent num = 2.0 * F - F * F / (16.0 * (s * K2));
  const Laurent den = F + 256.0 * (K2 * K2 * fg * q) + 4096.0 * (K2 * K2 * K2 * q * s * fg * fg / br);
  return {num / den, br};
}

struct NParts {
  Laurent n, c1;
};

NParts series_N() {
  const Laurent K = lK(), E = lE();
  const Laurent inv2m = lift(inv_two_minus_m());
  const Laurent P = lpoly(2.0, -1.0) * K * K;
  const Laurent ke = K * E;
  const Laurent I1 = (1.0 / 3.0) * (lpoly(4.0, -2.0) * E - lpoly(1.0, -1.0) * K);
  const Laurent Q = K * I1 * inv2m;
  const Laurent Pm = d_dm(P), KEm = d_dm(ke), Qm = d_dm(Q);
  const Laurent c1 = 2.0 * (ke * Pm - P * KEm) / (P * (Pm - 2.0 * KEm));
  const Laurent one_c1 = 1.0 - c1;
  const Laurent J1 = 16.0 * Q;
  const Laurent J2 = 8.0 * (c1 * ke);
  const Laurent J3 = 8.0 * (one_c1 * (3.0 * Q - P * Qm / Pm));
  const Laurent J4 = 32.0 * (c1 * Q);
  const Laurent J5 = 8.0 * (one_c1 * (2.0 * ke - P * KEm / Pm));
  const Laurent D = ke - (lpoly(1.0, -1.0) * K * K + E * E) * inv2m;
  const Laurent sum = J1 + 3.0 * J2 - 2.0 * J3 - 2.0 * J4 + J5;
  return {-1.0 * (sum / (16.0 * D)), c1};
}

// The series are fixed; build them once.
const Laurent& cached_M() { static const Laurent s = series_M(); return s; }
const FtildeParts& cached_Ftilde() { static const FtildeParts s = series_Ftilde(); return s; }
const NParts& cached_N() { static const NParts s = series_N(); return s; }

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = lo + (hi - lo) * i / (points - 1);
  return out;
}

}  // namespace

// -- building blocks ----------------------------------------------------------

ValueSlope aux_F(double kappa) {
  const KE e = elliptic_all(kappa);
  const auto [s, ds] = quartic_root(e.k);
  const double inner = 3.0 * e.E + (e.k2 - 2.0 + s) * e.K;
  const double d_inner = 3.0 * e.dE + (2.0 * e.k + ds) * e.K + (e.k2 - 2.0 + s) * e.dK;
  return {16.0 * e.K * inner, 16.0 * (e.dK * inner + e.K * d_inner)};
}

ValueSlope aux_K4q(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) {
    const Series K2 = series_K() * series_K();
    return eval_series(K2 * K2 * poly(1.0, -1.0, 1.0), kappa);
  }
  const KE e = elliptic_all(kappa);
  const double q = 1.0 - e.k2 + e.k2 * e.k2;
  const double dq = -2.0 * e.k + 4.0 * e.k2 * e.k;
  const double K3 = e.K * e.K * e.K;
  return {K3 * e.K * q, 4.0 * K3 * e.dK * q + K3 * e.K * dq};
}

double aux_G(double kappa) { return 1.0 / (128.0 * aux_K4q(kappa).slope); }

ValueSlope aux_P(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return eval_series(poly(2.0, -1.0) * series_K() * series_K(), kappa);
  const KE e = elliptic_all(kappa);
  return {(2.0 - e.k2) * e.K * e.K, -2.0 * e.k * e.K * e.K + 2.0 * (2.0 - e.k2) * e.K * e.dK};
}

ValueSlope aux_KE(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return eval_series(series_K() * series_E(), kappa);
  const KE e = elliptic_all(kappa);
  return {e.K * e.E, e.dK * e.E + e.K * e.dE};
}

ValueSlope quartic_moment_I1(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) {
    return eval_series((1.0 / 3.0) * (poly(4.0, -2.0) * series_E() - poly(1.0, -1.0) * series_K()),
                       kappa);
  }
  const KE e = elliptic_all(kappa);
  return {((4.0 - 2.0 * e.k2) * e.E - e.kp2 * e.K) / 3.0,
          (-4.0 * e.k * e.E + (4.0 - 2.0 * e.k2) * e.dE + 2.0 * e.k * e.K - e.kp2 * e.dK) / 3.0};
}

ValueSlope aux_Q(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) {
    const Series I1 = (1.0 / 3.0) * (poly(4.0, -2.0) * series_E() - poly(1.0, -1.0) * series_K());
    return eval_series(series_K() * I1 * inv_two_minus_m(), kappa);
  }
  const KE e = elliptic_all(kappa);
  const auto [I1, dI1] = quartic_moment_I1(kappa);
  const double m = 2.0 - e.k2;
  return {e.K * I1 / m, (e.dK / m + 2.0 * e.k * e.K / (m * m)) * I1 + e.K * dI1 / m};
}

// -- index functions ----------------------------------------------------------

double index_M(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return value_at(cached_M(), kappa);
  const KE e = elliptic_all(kappa);
  const double m = 2.0 - e.k2;
  return (4.0 * e.E - pi * pi / e.K) * (m * e.E - 2.0 * e.kp2 * e.K) /
         (m * (e.E * e.E - e.kp2 * e.K * e.K));
}

double ftilde_bracket(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return value_at(cached_Ftilde().bracket, kappa);
  const KE e = elliptic_all(kappa);
  const double s = quartic_root(e.k).value;
  return 1.0 - 16.0 * s * e.K * e.K * aux_F(kappa).slope * aux_G(kappa);
}

double index_Ftilde(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return value_at(cached_Ftilde().ftilde, kappa);
  const KE e = elliptic_all(kappa);
  const double q = 1.0 - e.k2 + e.k2 * e.k2;
  const double s = std::sqrt(q);
  const auto [F, dF] = aux_F(kappa);
  const double G = aux_G(kappa);
  const double br = ftilde_bracket(kappa);
  if (std::abs(br) < 1e-14) {
    throw ArithmeticError("1 - 16 s K^2 F' G vanishes at kappa = " + std::to_string(kappa));
  }
  const double K2 = e.K * e.K;
  const double K4 = K2 * K2;
  const double fg = dF * G;
  const double num = 2.0 * F - F * F / (16.0 * s * K2);
  const double den = F + 256.0 * K4 * fg * q + 4096.0 * K4 * K2 * q * s * fg * fg / br;
  return num / den;
}

double c1_kgz(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return value_at(cached_N().c1, kappa);
  const auto [P, dP] = aux_P(kappa);
  const auto [ke, dke] = aux_KE(kappa);
  return (2.0 * ke * dP - 2.0 * P * dke) / (P * dP - 2.0 * P * dke);
}

double c1_kgz_reduced(double kappa) {
  const KE e = elliptic_all(kappa);
  const double m = 2.0 - e.k2;
  const double EE = e.E * e.E, EK = e.E * e.K, KK = e.K * e.K;
  return (m * EE - 8.0 * e.kp2 * EK + 2.0 * e.kp2 * m * KK) /
         (2.0 * m * m * EK - 2.0 * e.kp2 * m * KK - 2.0 * m * EE);
}

namespace {

double assemble_N(double kappa, double c1) {
  const KE e = elliptic_all(kappa);
  const auto [P, dP] = aux_P(kappa);
  const auto [ke, dke] = aux_KE(kappa);
  const auto [Q, dQ] = aux_Q(kappa);
  const double m = 2.0 - e.k2;
  const double J1 = 16.0 * Q;
  const double J2 = 8.0 * c1 * ke;
  const double J3 = 8.0 * (1.0 - c1) * (3.0 * Q - P / dP * dQ);
  const double J4 = 32.0 * c1 * Q;
  const double J5 = 8.0 * (1.0 - c1) * (2.0 * ke - P * dke / dP);
  const double D = ke - e.kp2 * e.K * e.K / m - e.E * e.E / m;
  return -(J1 + 3.0 * J2 - 2.0 * J3 - 2.0 * J4 + J5) / (16.0 * D);
}

}  // namespace

double index_N(double kappa) {
  check_kappa(kappa);
  if (kappa < kSeriesKappa) return value_at(cached_N().n, kappa);
  return assemble_N(kappa, c1_kgz(kappa));
}

double index_N_reduced_c1(double kappa) { return assemble_N(kappa, c1_kgz_reduced(kappa)); }

double lame_mean_bracket(double kappa) {
  const KE e = elliptic_all(kappa);
  const double s = quartic_root(e.k).value;
  const double k4 = e.k2 * e.k2;
  const double sn2 = e.K - e.E;  // k^2/2 * int_0^{2K} sn^2
  const double sn4 = (2.0 + e.k2) * e.K - 2.0 * (1.0 + e.k2) * e.E;  // 3k^4/2 * int sn^4
  const double a_minus = 1.0 + e.k2 - s;
  const double a_plus = 1.0 + e.k2 + s;
  const double B1 = std::pow((s - 1.0) / e.k2 * e.K + a_minus / e.k2 * e.E, 2);
  const double B2 = std::pow(-(s + 1.0) / e.k2 * e.K + a_plus / e.k2 * e.E, 2);
  const double B3 = e.K - 2.0 * a_minus / e.k2 * sn2 + a_minus * a_minus / (3.0 * k4) * sn4;
  const double B4 = e.K - 2.0 * a_plus / e.k2 * sn2 + a_plus * a_plus / (3.0 * k4) * sn4;
  return B1 / ((e.k2 - 2.0 - 2.0 * s) * B3) + B2 / ((e.k2 - 2.0 + 2.0 * s) * B4);
}

double kgz_linv_ratio(double kappa) {
  return 2.0 * aux_KE(kappa).slope / aux_P(kappa).slope;
}

// -- indices, speeds, thresholds ---------------------------------------------

double index_closed(Model model, double kappa, double w) {
  check_w(w);
  switch (model) {
    case Model::Boussinesq3: return -1.0 / (w * index_M(kappa));
    case Model::Boussinesq2: return -1.0 / (w * index_Ftilde(kappa));
    case Model::KGZ: return -index_N(kappa) / w;
  }
  throw std::logic_error("unhandled model");
}

std::optional<double> mu_star(Model model, double kappa, double w) {
  const double idx = index_closed(model, kappa, w);
  if (!(idx < 0.0)) return std::nullopt;
  return 1.0 / (2.0 * std::sqrt(-idx));
}

double threshold_speed(Model model, double kappa) {
  double f = 0.0;
  switch (model) {
    case Model::Boussinesq3: f = index_M(kappa); break;
    case Model::Boussinesq2: f = index_Ftilde(kappa); break;
    case Model::KGZ: f = index_N(kappa); break;
  }
  if (!(f > 0.0)) {
    throw NoThresholdError("index is nonnegative at kappa = " + std::to_string(kappa) +
                           "; the wave is unstable for every speed");
  }
  if (model == Model::KGZ) return 1.0 / std::sqrt(1.0 + 4.0 * f);
  return std::sqrt(f / (4.0 + f));
}

double threshold_period_map(Model model, double kappa) {
  check_kappa(kappa);
  const double K = complete_elliptic(kappa).bigK;
  const double k2 = kappa * kappa;
  switch (model) {
    case Model::Boussinesq3:
      return K * std::sqrt(2.0 - k2) * std::sqrt(4.0 + index_M(kappa));
    case Model::Boussinesq2:
      return 2.0 * K * std::pow(1.0 - k2 + k2 * k2, 0.25) * std::sqrt(4.0 + index_Ftilde(kappa));
    case Model::KGZ: {
      const double N = index_N(kappa);
      return 4.0 * K * std::sqrt(2.0 - k2) * std::sqrt(N) / std::sqrt(1.0 + 4.0 * N);
    }
  }
  throw std::logic_error("unhandled model");
}

ThresholdSolution kappa_star_for_period(Model model, double T) {
  const double lo = kIndexKappaMin;
  const double hi = kIndexKappaMax;
  auto g = [model, T](double k) { return threshold_period_map(model, k) - T; };

  // Scan uniformly, then along 1 - 10^-j where the map grows like log.
  std::vector<double> nodes = linspace(lo, 0.999, 400);
  for (int j = 4; j <= 9; ++j) nodes.push_back(1.0 - std::pow(10.0, -j));
  nodes.back() = hi;

  double prev_k = nodes.front();
  double prev_g = g(prev_k);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double gk = g(nodes[i]);
    if (std::isfinite(prev_g) && std::isfinite(gk) && (prev_g < 0.0) != (gk < 0.0)) {
      const double kT = bisect(g, prev_k, nodes[i], prev_g);
      return {kT, threshold_speed(model, kT)};
    }
    prev_k = nodes[i];
    prev_g = gk;
  }
  throw OutOfRangeError("period " + std::to_string(T) + " is outside the threshold-map range (" +
                        std::to_string(threshold_period_map(model, lo)) + ", " +
                        std::to_string(threshold_period_map(model, hi)) + ") for " +
                        std::string(model_name(model)));
}

std::optional<double> kappa0_root() { return first_sign_change(index_N, 0.05, 0.995, 400); }

std::optional<double> kappa0_root_reduced_c1() {
  return first_sign_change(index_N_reduced_c1, 0.05, 0.995, 400);
}

double dkappa_dw(Model model, double kappa, double w) {
  check_w(w);
  const double T = period_of(model, kappa, w);
  switch (model) {
    case Model::Boussinesq2: return w * std::pow(T, 4) * aux_G(kappa);
    case Model::Boussinesq3: {
      const KE e = elliptic_all(kappa);
      return T * T / (8.0 * ((2.0 - e.k2) * e.K * e.dK - e.k * e.K * e.K));
    }
    case Model::KGZ: {
      const auto [P, dP] = aux_P(kappa);
      return -P / (w * dP);
    }
  }
  throw std::logic_error("unhandled model");
}

double linv_one_closed(Model model, double kappa, double w) {
  check_w(w);
  switch (model) {
    case Model::Boussinesq2: return period_of(model, kappa, w) / w * ftilde_bracket(kappa);
    case Model::Boussinesq3: {
      const double alpha = std::sqrt(w / (2.0 - kappa * kappa));
      return 2.0 / (alpha * alpha * alpha) * lame_mean_bracket(kappa);
    }
    case Model::KGZ: break;
  }
  throw DomainError("<L^-1 1, 1> has no closed form for the KGZ family");
}

double linv_phi_closed(Model model, double kappa, double w) {
  check_w(w);
  const double T = period_of(model, kappa, w);
  switch (model) {
    case Model::Boussinesq2: {
      const KE e = elliptic_all(kappa);
      const double q = 1.0 - e.k2 + e.k2 * e.k2;
      const auto [F, dF] = aux_F(kappa);
      return -(F + 256.0 * std::pow(e.K, 4) * q * dF * aux_G(kappa)) / T;
    }
    case Model::Boussinesq3: {
      // L d(phi)/dw = -phi at fixed period, so the form is -1/2 d/dw ||phi||^2
      // with ||phi||^2 = 4 alpha E.
      const KE e = elliptic_all(kappa);
      const double alpha = std::sqrt(w / (2.0 - e.k2));
      const double dk_dw = dkappa_dw(model, kappa, w);
      const double dalpha_dw = alpha / (2.0 * w) + alpha * e.k / (2.0 - e.k2) * dk_dw;
      return -2.0 * (dalpha_dw * e.E + alpha * e.dE * dk_dw);
    }
    case Model::KGZ: return -w * T * kgz_linv_ratio(kappa);
  }
  throw std::logic_error("unhandled model");
}

IndexReport index_report(Model model, double kappa, double w) {
  IndexReport r;
  r.model = model;
  r.kappa = kappa;
  r.w = w;
  r.index_closed = index_closed(model, kappa, w);
  r.mu_star = mu_star(model, kappa, w);
  if (r.mu_star) {
    r.c_star = threshold_speed(model, kappa);
    r.stable_iff = "|c| >= c_star";
  } else {
    r.stable_iff = "unstable for all c";
  }
  return r;
}

// -- figure data ----------------------------------------------------------------

double figure_value(int figure, double kappa) {
  check_kappa(kappa);
  switch (figure) {
    case 1: {
      const double M = index_M(kappa);
      return std::sqrt(M / (4.0 + M));
    }
    case 2: return threshold_period_map(Model::Boussinesq3, kappa);
    case 3: {
      const double F = index_Ftilde(kappa);
      return std::sqrt(F / (4.0 + F));
    }
    case 4: return threshold_period_map(Model::Boussinesq2, kappa);
    case 5: return 1.0 / std::sqrt(1.0 + 4.0 * index_N(kappa));
    case 6: return threshold_period_map(Model::KGZ, kappa);
    case 7: return ftilde_bracket(kappa);
    case 8: return lame_mean_bracket(kappa);
    case 9: return kgz_linv_ratio(kappa);
    case 10: return index_N(kappa);
    default: break;
  }
  throw OutOfRangeError("figure id must be 1..10, got " + std::to_string(figure));
}

std::vector<double> default_figure_grid(int figure) {
  switch (figure) {
    case 1: case 2: case 3: case 4: return linspace(0.05, 0.995, 50);
    case 5: case 6: return linspace(kKappa0Claimed + 1e-4, 0.9995, 50);
    case 7: case 8: return linspace(0.05, 0.95, 50);
    case 9: return linspace(1e-3, 0.995, 50);
    case 10: return linspace(0.05, 0.995, 200);
    default: break;
  }
  throw OutOfRangeError("figure id must be 1..10, got " + std::to_string(figure));
}

namespace {

// Terminal approach along kappa = 1 - 10^-j, j = 2..9: the distance to the
// stated limit must shrink at every step.
bool approaches(int figure, double terminal, double& worst_k, double& worst_v) {
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 2; j <= 9; ++j) {
    const double k = j == 9 ? kIndexKappaMax : 1.0 - std::pow(10.0, -j);
    const double v = figure_value(figure, k);
    const double d = std::abs(v - terminal);
    if (!(d < prev)) {
      worst_k = k;
      worst_v = v;
      return false;
    }
    prev = d;
  }
  return true;
}

}  // namespace

FigureScan figure_scan(int figure, std::span<const double> kappa_grid) {
  FigureScan out;
  out.figure = figure;
  if (figure < 1 || figure > 10) {
    throw OutOfRangeError("figure id must be 1..10, got " + std::to_string(figure));
  }
  if (kappa_grid.empty()) throw SizeError("figure grid is empty");
  out.table.reserve(kappa_grid.size());
  for (double k : kappa_grid) out.table.emplace_back(k, figure_value(figure, k));

  auto argmin = [&] {
    return *std::min_element(out.table.begin(), out.table.end(), [](auto& a, auto& b) {
      return !(a.second >= b.second) || a.second < b.second;  // NaN sorts first
    });
  };
  auto set_worst = [&](std::pair<double, double> p) {
    out.worst_kappa = p.first;
    out.worst_value = p.second;
  };
  auto all_positive = [&] {
    return std::all_of(out.table.begin(), out.table.end(), [](auto& p) { return p.second > 0.0; });
  };
  // Smallest forward increment; worst point is the right end of that step.
  auto increasing = [&] {
    bool ok = true;
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < out.table.size(); ++i) {
      const double step = out.table[i].second - out.table[i - 1].second;
      if (!(step > 0.0)) ok = false;
      if (!(step >= min_step)) {
        min_step = std::isnan(step) ? -std::numeric_limits<double>::infinity() : step;
        set_worst(out.table[i]);
      }
    }
    if (out.table.size() == 1) set_worst(out.table.front());
    return ok;
  };
  // Infimum: every value lies above it and the left end of the domain gets
  // within 1e-3 (relative, absolute below 1) of it.
  auto infimum = [&](double inf, double near_k) {
    const bool above = std::all_of(out.table.begin(), out.table.end(),
                                   [inf](auto& p) { return p.second > inf; });
    const double v = figure_value(figure, near_k);
    const bool close = std::abs(v - inf) <= 1e-3 * std::max(1.0, std::abs(inf));
    if (!close) set_worst({near_k, v});
    return above && close;
  };

  switch (figure) {
    case 1: case 3: case 5: {
      const double terminal = figure == 3 ? 0.5 : std::numbers::sqrt2 / 2.0;
      out.claim = "positive, increasing to the terminal value " +
                  std::string(figure == 3 ? "1/2" : "sqrt(2)/2") + " as kappa -> 1";
      set_worst(argmin());
      const bool pos = all_positive();
      double wk = 0.0, wv = 0.0;
      const bool lim = approaches(figure, terminal, wk, wv);
      if (pos && !lim) set_worst({wk, wv});
      out.holds = pos && lim;
      break;
    }
    case 2: case 4: case 6: {
      const double inf = figure == 2 ? std::numbers::sqrt2 * pi : figure == 4 ? 2.0 * pi : 0.0;
      const double near_k = figure == 6 ? kKappa0Claimed + 1e-6 : 1e-3;
      out.claim = std::string("strictly increasing with range infimum ") +
                  (figure == 2 ? "sqrt(2) pi" : figure == 4 ? "2 pi" : "0");
      const bool inc = increasing();
      out.holds = infimum(inf, near_k) && inc;
      break;
    }
    case 7: case 8:
      out.claim = "positive";
      set_worst(argmin());
      out.holds = all_positive();
      break;
    case 9: {
      out.claim = "at most 1/3, tending to 1/3 as kappa -> 0";
      auto mx = *std::max_element(out.table.begin(), out.table.end(),
                                  [](auto& a, auto& b) { return a.second < b.second; });
      set_worst(mx);
      const bool bounded = std::all_of(out.table.begin(), out.table.end(),
                                       [](auto& p) { return p.second <= 1.0 / 3.0; });
      const double v0 = figure_value(9, 1e-3);
      const bool lim = std::abs(v0 - 1.0 / 3.0) <= 1e-3;
      if (bounded && !lim) set_worst({1e-3, v0});
      out.holds = bounded && lim;
      break;
    }
    case 10: {
      out.claim = "exactly one sign change";
      int changes = 0;
      for (std::size_t i = 1; i < out.table.size(); ++i) {
        if ((out.table[i].second < 0.0) != (out.table[i - 1].second < 0.0)) {
          if (changes == 0) set_worst(out.table[i]);
          ++changes;
        }
      }
      if (changes == 0) {
        set_worst(*std::min_element(out.table.begin(), out.table.end(), [](auto& a, auto& b) {
          return std::abs(a.second) < std::abs(b.second);
        }));
      }
      out.holds = changes == 1;
      break;
    }
    default: break;
  }
  return out;
}

}  // namespace ptw
