#include "lpcm/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lpcm {
namespace {

void require_positive(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
  if (v <= 0.0) throw ValidationError(field, "must be positive");
}

}  // namespace

const char* to_string(PhaseMode mode) {
  return mode == PhaseMode::locked ? "locked" : "freerun";
}

double InterferenceSpec::a_ub() const {
  double sum = 0.0;
  for (const auto& c : components) sum += c.amp;
  return sum;
}

double InterferenceSpec::omega_l() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : components) lo = std::min(lo, c.omega);
  return lo;
}

double InterferenceSpec::omega_max() const {
  double hi = 0.0;
  for (const auto& c : components) hi = std::max(hi, c.omega);
  return hi;
}

InterferenceSpec InterferenceSpec::at_time(double t_abs) const {
  if (phase_mode == PhaseMode::locked || t_abs == 0.0) return *this;
  InterferenceSpec out = *this;
  for (auto& c : out.components) c.phase = std::fmod(c.phase + c.omega * t_abs, 2.0 * std::numbers::pi);
  return out;
}

InterferenceSpec InterferenceSpec::with_phase_offset(double delta) const {
  InterferenceSpec out = *this;
  for (auto& c : out.components) c.phase += delta;
  return out;
}

double InterferenceSpec::value(double t) const {
  double w = 0.0;
  for (const auto& c : components) w += c.amp * std::sin(c.omega * t + c.phase);
  return w;
}

double InterferenceSpec::derivative(double t) const {
  double w = 0.0;
  for (const auto& c : components) w += c.amp * c.omega * std::cos(c.omega * t + c.phase);
  return w;
}

double NormalizedParams::attenuation() const {
  if (std::isinf(omega_l_hat)) return 0.0;
  const double x = 2.0 * std::numbers::pi * omega_l_hat * tau_hat;
  return 1.0 / std::sqrt(1.0 + x * x);
}

void validate(const ConverterParams& cp) {
  require_positive(cp.m1, "m1");
  require_positive(cp.m2, "m2");
  require_positive(cp.t_off, "t_off");
  require_positive(cp.t_on_min, "t_on_min");
  require_positive(cp.i_max, "i_max");
  if (!std::isfinite(cp.i_c)) throw ValidationError("i_c", "must be finite");
  if (cp.i_c < 0.0 || cp.i_c > cp.i_max) throw ValidationError("i_c", "must lie in [0, i_max]");
}

void validate(const FilterSpec& fs) { require_positive(fs.tau, "tau"); }

void validate(const InterferenceSpec& is) {
  for (const auto& c : is.components) {
    if (!std::isfinite(c.amp) || c.amp < 0.0) throw ValidationError("amp", "must be finite and >= 0");
    require_positive(c.omega, "omega");
    if (!std::isfinite(c.phase)) throw ValidationError("phase", "must be finite");
  }
}

NormalizedParams normalize(const ConverterParams& cp, const FilterSpec& fs,
                           const InterferenceSpec& is) {
  validate(cp);
  validate(fs);
  validate(is);
  const double t_base = cp.t_off;
  const double i_base = cp.m1 * t_base;
  const double omega_hat = is.empty() ? std::numeric_limits<double>::infinity()
                                      : is.omega_l() * t_base / (2.0 * std::numbers::pi);
  return make_normalized(fs.tau / t_base, cp.t_on_min / t_base, is.a_ub() / i_base, omega_hat,
                         cp.i_max / i_base, t_base, cp.m1);
}

NormalizedParams make_normalized(double tau_hat, double t_on_min_hat, double a_ub_hat,
                                 double omega_l_hat, double i_max_hat, double t_base,
                                 double m1_ref) {
  require_positive(tau_hat, "tau_hat");
  require_positive(t_on_min_hat, "t_on_min_hat");
  if (!(a_ub_hat >= 0.0) || std::isinf(a_ub_hat)) throw ValidationError("a_ub_hat", "must be finite and >= 0");
  if (!(omega_l_hat > 0.0)) throw ValidationError("omega_l_hat", "must be positive");
  if (!(i_max_hat >= 0.0) || std::isinf(i_max_hat)) throw ValidationError("i_max_hat", "must be finite and >= 0");
  NormalizedParams np;
  np.tau_hat = tau_hat;
  np.t_on_min_hat = t_on_min_hat;
  np.t_min_hat = t_on_min_hat + 1.0;
  np.a_ub_hat = a_ub_hat;
  np.omega_l_hat = omega_l_hat;
  np.i_max_hat = i_max_hat;
  np.b = std::exp(-np.t_min_hat / tau_hat);
  np.d = std::exp(-t_on_min_hat / tau_hat);
  np.t_base = t_base;
  np.m1_ref = m1_ref;
  return np;
}

PhysicalParams denormalize(const NormalizedParams& np, PhaseMode mode) {
  PhysicalParams p;
  const double i_base = np.m1_ref * np.t_base;
  p.converter.m1 = np.m1_ref;
  p.converter.m2 = np.m1_ref;
  p.converter.t_off = np.t_base;
  p.converter.t_on_min = np.t_on_min_hat * np.t_base;
  p.converter.i_max = np.i_max_hat * i_base;
  p.converter.i_c = p.converter.i_max;
  p.filter.tau = np.tau_hat * np.t_base;
  p.interference.phase_mode = mode;
  if (!std::isinf(np.omega_l_hat)) {
    p.interference.components.push_back(
        {np.a_ub_hat * i_base, 2.0 * std::numbers::pi * np.omega_l_hat / np.t_base, 0.0});
  }
  return p;
}

}  // namespace lpcm
