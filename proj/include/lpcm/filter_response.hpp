#pragma once

#include <vector>

#include "lpcm/params.hpp"

namespace lpcm {

/// Closed-form responses of the first-order low-pass h(t) = exp(-t/tau)/tau.
/// All time arguments are measured from the start of the input (t >= 0);
/// negative times throw std::domain_error.
class FilterKernels {
 public:
  explicit FilterKernels(double tau);

  double tau() const { return tau_; }

  /// Impulse response h(t).
  double h(double t) const;
  /// Zero-input response q(t) = exp(-t/tau), q(0) = 1.
  double q(double t) const;
  /// |H(j omega)| = 1/sqrt(1 + omega^2 tau^2).
  double magnitude(double omega) const;
  /// Phase lag atan(omega*tau) of H(j omega).
  double phase_lag(double omega) const;
  /// Zero-state response to the unit step, 1 - exp(-t/tau).
  double step(double t) const;
  /// Zero-state response to slope*t, slope*(t + (exp(-t/tau) - 1)*tau).
  double ramp(double slope, double t) const;

 private:
  double tau_;
};

/// Steady-state (forced) response g(t) of the filter to a tone sum, with
/// the helpers that the crossing equations need.
class ForcedResponse {
 public:
  struct Component {
    double gain;   // A/sqrt(1 + omega^2 tau^2)
    double lag;    // atan(omega*tau)
    double omega;
    double phase;  // interference phase minus lag
  };

  ForcedResponse(const InterferenceSpec& is, double tau);

  const std::vector<Component>& components() const { return comps_; }
  double tau() const { return tau_; }
  bool empty() const { return comps_.empty(); }

  /// g(t).
  double g(double t) const;
  /// g'(t).
  double g_prime(double t) const;
  /// g(0).
  double g0() const { return g0_; }
  /// Zero-state response to w(t)u(t): g(t) - g(0)*exp(-t/tau).
  double zero_state(double t) const;
  /// Time derivative of zero_state.
  double zero_state_slope(double t) const;

  /// Copy with every tone phase advanced by omega*dt.
  ForcedResponse shifted(double dt) const;

 private:
  ForcedResponse() = default;
  std::vector<Component> comps_;
  double tau_ = 0.0;
  double g0_ = 0.0;
};

double interference_zero_state(const InterferenceSpec& is, double tau, double t);
double g_prime(const InterferenceSpec& is, double tau, double t);

/// Proof bounds |g(t)| <= A_ub/sqrt(1+(omega_l tau)^2) and |g'(t)| <= A_ub/tau.
struct GBounds {
  double g_abs_max;
  double gprime_abs_max;
};

GBounds g_bounds(const InterferenceSpec& is, double tau);
/// Same bounds from hatted values, in physical units via the recorded base.
GBounds g_bounds(const NormalizedParams& np);

/// sum(-A_i cos(phi_i)/omega_i): the antiderivative of w at t = 0.
double spectral_moment(const InterferenceSpec& is);

}  // namespace lpcm
