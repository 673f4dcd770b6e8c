#include "lpcm/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "lpcm/filter_response.hpp"

namespace lpcm {

Theorem1Result theorem1_margin(const NormalizedParams& np) {
  const double d = np.d;
  const double scale = 1.0 / ((1.0 - d) * np.tau_hat);
  Theorem1Result r;
  r.lhs = np.a_ub_hat * scale * (1.0 + d * np.attenuation()) + np.b * np.i_max_hat * scale;
  r.pass = r.lhs < 1.0;
  r.margin = 1.0 - r.lhs;
  return r;
}

Theorem2Coefficients theorem2_coefficients(const NormalizedParams& np) {
  const double d = np.d;
  const double sq = (1.0 - d) * (1.0 - d);
  Theorem2Coefficients k;
  k.k0 = d * (np.t_on_min_hat + np.tau_hat * d - np.tau_hat) / sq;
  k.k1 = 1.0 / (1.0 - d);
  k.k2 = 1.0 + (1.0 + d) * d / sq;
  k.k3 = (d - np.b) / sq;
  return k;
}

Theorem2Result theorem2_margin(const NormalizedParams& np) {
  const Theorem2Coefficients k = theorem2_coefficients(np);
  const double a = np.a_ub_hat / np.tau_hat;
  const double att = np.attenuation();
  Theorem2Result r;
  r.lhs_a = k.k0 / np.tau_hat + k.k1 * a + k.k2 * a * att;
  r.lhs_b = k.k3 * np.i_max_hat / np.tau_hat + a + a * att;
  r.pass = r.lhs_a < 0.5 && r.lhs_b < 0.5;
  r.margin_a = 0.5 - r.lhs_a;
  r.margin_b = 0.5 - r.lhs_b;
  return r;
}

StabilityReport proof_internals(const ConverterParams& cp, const FilterSpec& fs,
                                const InterferenceSpec& is) {
  StabilityReport rep;
  rep.normalized = normalize(cp, fs, is);
  const NormalizedParams& np = rep.normalized;

  const Theorem1Result t1 = theorem1_margin(np);
  rep.thm1_lhs = t1.lhs;
  rep.thm1_pass = t1.pass;
  rep.thm1_margin = t1.margin;
  const Theorem2Result t2 = theorem2_margin(np);
  rep.thm2_lhs_a = t2.lhs_a;
  rep.thm2_lhs_b = t2.lhs_b;
  rep.thm2_pass = t2.pass;
  rep.thm2_margin_a = t2.margin_a;
  rep.thm2_margin_b = t2.margin_b;
  const Theorem2Coefficients k = theorem2_coefficients(np);
  rep.k0 = k.k0;
  rep.k1 = k.k1;
  rep.k2 = k.k2;
  rep.k3 = k.k3;

  const double tau = fs.tau;
  const double m1 = cp.m1;
  const double t_min_on = cp.t_on_min;
  const double d = std::exp(-t_min_on / tau);
  const double b = std::exp(-(t_min_on + cp.t_off) / tau);
  rep.k_1 = std::exp(-cp.t_off / tau);
  rep.k_2 = rep.k_1 - 1.0;

  const double a_ub = is.a_ub();
  const double att = is.empty() ? 0.0 : 1.0 / std::sqrt(1.0 + std::pow(is.omega_l() * tau, 2));
  rep.psi1_max = a_ub / tau + att * a_ub / tau;
  rep.psi2_min = -d / ((1.0 - d) * tau) * (1.0 + (d - 1.0) / (t_min_on / tau)) * m1 * t_min_on -
                 (1.0 + d) / (1.0 - d) * d / tau * a_ub * att;
  rep.psi2_max = (d - b) / ((1.0 - d) * tau) * cp.i_max;
  rep.b_xi = std::max(std::abs(rep.psi2_min - rep.psi1_max), std::abs(rep.psi2_max + rep.psi1_max));
  rep.gain_G = 2.0 / m1;
  rep.gain_F = 1.0 / (1.0 - d);
  rep.small_gain_product = rep.gain_G * rep.gain_F * rep.b_xi;
  const double scale = 1.0 / (m1 * (1.0 - d));
  rep.internal_lhs_a = (rep.psi1_max - rep.psi2_min) * scale;
  rep.internal_lhs_b = (rep.psi2_max + rep.psi1_max) * scale;
  return rep;
}

double psi1_at(const InterferenceSpec& is, double tau, double t_on) {
  const ForcedResponse fr(is, tau);
  return fr.zero_state_slope(t_on);
}

double psi2_transition(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
                       double i_c, double t_on) {
  const double tau = fs.tau;
  const double dp = std::exp(-t_on / tau);
  const double bp = std::exp(-(t_on + cp.t_off) / tau);
  const double zs = ForcedResponse(is, tau).zero_state(t_on);
  return (dp - bp) / ((1.0 - dp) * tau) * i_c -
         dp / ((1.0 - dp) * tau) * (1.0 + (dp - 1.0) / (t_on / tau)) * cp.m1 * t_on -
         dp / ((1.0 - dp) * tau) * zs;
}

}  // namespace lpcm
