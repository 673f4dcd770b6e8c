#pragma once

#include <span>
#include <vector>

#include "lpcm/cycle_map.hpp"

namespace lpcm {

/// Small-signal model of the cycle map at an operating point:
///   i_p[n] = i_p[n-1] + m1*t_on[n]
///   i_c[n] = b*i_c[n-1] + c1*i_p[n] + c2*t_on[n]
struct LinearizedModel {
  double c1 = 0.0;
  double c2 = 0.0;          ///< [A/s]
  double b_pole = 0.0;      ///< exp(-T/tau), zero of P(z) = 1 - b z^-1
  double d = 0.0;           ///< exp(-T_on/tau)
  double gain_K = 0.0;      ///< 1/(1 - exp(-T_on/tau))
  double psi1 = 0.0;        ///< interference part of c2 [A/s]
  double psi2 = 0.0;        ///< command/valley part of c2 [A/s]
  double crossing_slope = 0.0;  ///< c2 + m1*c1, filter-output slope at the crossing
  double lambda_cl = 0.0;   ///< closed-loop pole c2/(c2 + m1*c1)
  /// w(T_on)/tau + (d/tau)*spectral_moment: the shortcut form of psi1,
  /// reported for comparison only.
  double psi1_moment_form = 0.0;
};

/// Requires locked phase or no interference; throws ModelError when the
/// crossing slope is not positive.
LinearizedModel linearize(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
                          const InterferenceSpec& is);

/// Central-difference derivative of the one-cycle map i_p[n-1] -> i_p[n]
/// at the operating point, with the crossing solved to machine resolution.
double fd_jacobian(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
                   const InterferenceSpec& is, double h_step);

struct LocusPoint {
  double kappa = 0.0;
  double pole = 0.0;
};

/// Pole of the loop with the comparator feedback scaled by kappa:
/// lambda = c2/(c2 + kappa*m1*c1). `unfiltered` gives the branch with the
/// comparator reading the sense signal directly (c1 = 1, c2 = w'(T_on)).
std::vector<LocusPoint> root_locus(const OperatingPoint& op, const ConverterParams& cp,
                                   const FilterSpec& fs, const InterferenceSpec& is,
                                   std::span<const double> gains, bool unfiltered = false);

}  // namespace lpcm
