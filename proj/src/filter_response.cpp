#include "lpcm/filter_response.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpcm {
namespace {

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("filter response evaluated at negative time");
}

}  // namespace

FilterKernels::FilterKernels(double tau) : tau_(tau) { validate(FilterSpec{tau}); }

double FilterKernels::h(double t) const {
  require_nonnegative_time(t);
  return std::exp(-t / tau_) / tau_;
}

double FilterKernels::q(double t) const {
  require_nonnegative_time(t);
  return std::exp(-t / tau_);
}

double FilterKernels::magnitude(double omega) const {
  const double x = omega * tau_;
  return 1.0 / std::sqrt(1.0 + x * x);
}

double FilterKernels::phase_lag(double omega) const { return std::atan(omega * tau_); }

double FilterKernels::step(double t) const {
  require_nonnegative_time(t);
  return -std::expm1(-t / tau_);
}

double FilterKernels::ramp(double slope, double t) const {
  require_nonnegative_time(t);
  return slope * (t + std::expm1(-t / tau_) * tau_);
}

ForcedResponse::ForcedResponse(const InterferenceSpec& is, double tau) : tau_(tau) {
  comps_.reserve(is.components.size());
  for (const auto& c : is.components) {
    const double x = c.omega * tau;
    const double lag = std::atan(x);
    comps_.push_back({c.amp / std::sqrt(1.0 + x * x), lag, c.omega, c.phase - lag});
  }
  g0_ = g(0.0);
}

double ForcedResponse::g(double t) const {
  double sum = 0.0;
  for (const auto& c : comps_) sum += c.gain * std::sin(c.omega * t + c.phase);
  return sum;
}

double ForcedResponse::g_prime(double t) const {
  double sum = 0.0;
  for (const auto& c : comps_) sum += c.gain * c.omega * std::cos(c.omega * t + c.phase);
  return sum;
}

double ForcedResponse::zero_state(double t) const {
  if (comps_.empty()) return 0.0;
  return g(t) - g0_ * std::exp(-t / tau_);
}

double ForcedResponse::zero_state_slope(double t) const {
  if (comps_.empty()) return 0.0;
  return g_prime(t) + g0_ * std::exp(-t / tau_) / tau_;
}

ForcedResponse ForcedResponse::shifted(double dt) const {
  ForcedResponse out;
  out.tau_ = tau_;
  out.comps_ = comps_;
  for (auto& c : out.comps_) c.phase = std::fmod(c.phase + c.omega * dt, 2.0 * std::numbers::pi);
  out.g0_ = out.g(0.0);
  return out;
}

double interference_zero_state(const InterferenceSpec& is, double tau, double t) {
  require_nonnegative_time(t);
  return ForcedResponse(is, tau).zero_state(t);
}

double g_prime(const InterferenceSpec& is, double tau, double t) {
  return ForcedResponse(is, tau).g_prime(t);
}

GBounds g_bounds(const InterferenceSpec& is, double tau) {
  if (is.empty()) return {0.0, 0.0};
  const double a = is.a_ub();
  const double x = is.omega_l() * tau;
  return {a / std::sqrt(1.0 + x * x), a / tau};
}

GBounds g_bounds(const NormalizedParams& np) {
  const double a = np.a_ub_hat * np.m1_ref * np.t_base;
  return {a * np.attenuation(), a / (np.tau_hat * np.t_base)};
}

double spectral_moment(const InterferenceSpec& is) {
  double sum = 0.0;
  for (const auto& c : is.components) sum -= c.amp * std::cos(c.phase) / c.omega;
  return sum;
}

}  // namespace lpcm
