#pragma once

#include "lpcm/params.hpp"

namespace lpcm {

/// Continuity criterion: lhs < 1 guarantees a continuous static mapping
/// from command to operating point.
struct Theorem1Result {
  double lhs = 0.0;
  bool pass = false;
  double margin = 0.0;  ///< 1 - lhs
};

Theorem1Result theorem1_margin(const NormalizedParams& np);

struct Theorem2Coefficients {
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

Theorem2Coefficients theorem2_coefficients(const NormalizedParams& np);

/// Large-signal stability criterion: both lhs values below 1/2.
struct Theorem2Result {
  double lhs_a = 0.0;
  double lhs_b = 0.0;
  bool pass = false;
  double margin_a = 0.0;  ///< 1/2 - lhs_a
  double margin_b = 0.0;  ///< 1/2 - lhs_b
};

Theorem2Result theorem2_margin(const NormalizedParams& np);

/// Both criteria with every intermediate bound, in physical units.
struct StabilityReport {
  NormalizedParams normalized;
  double thm1_lhs = 0.0;
  bool thm1_pass = false;
  double thm1_margin = 0.0;
  double thm2_lhs_a = 0.0;
  double thm2_lhs_b = 0.0;
  bool thm2_pass = false;
  double thm2_margin_a = 0.0;
  double thm2_margin_b = 0.0;
  double k0 = 0.0, k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double k_1 = 0.0;  ///< K1 = exp(-t_off/tau)
  double k_2 = 0.0;  ///< K2 = exp(-t_off/tau) - 1
  double psi1_max = 0.0;  ///< [A/s]
  double psi2_min = 0.0;  ///< [A/s]
  double psi2_max = 0.0;  ///< [A/s]
  double b_xi = 0.0;      ///< gain bound of the memoryless nonlinearity [A/s]
  double gain_G = 0.0;    ///< [s/A]
  double gain_F = 0.0;
  double small_gain_product = 0.0;
  /// The two small-gain branches rebuilt from the psi bounds, scaled by
  /// 1/(m1*(1-d)); each is below 1/2 exactly when its branch holds.
  /// Comparable to thm2_lhs_a/b.
  double internal_lhs_a = 0.0;
  double internal_lhs_b = 0.0;
};

StabilityReport proof_internals(const ConverterParams& cp, const FilterSpec& fs,
                                const InterferenceSpec& is);

/// psi2 along the transition relation between command, previous peak and
/// on time (locked-phase interference evaluated from the on-interval start).
double psi2_transition(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
                       double i_c, double t_on);

/// psi1(t_on) = g'(t_on) + exp(-t_on/tau)*g(0)/tau.
double psi1_at(const InterferenceSpec& is, double tau, double t_on);

}  // namespace lpcm
