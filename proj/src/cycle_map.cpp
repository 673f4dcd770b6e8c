#include "lpcm/cycle_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpcm/bracketing.hpp"

namespace lpcm {

CycleMap::CycleMap(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
                   const CrossingSettings& settings)
    : cp_(cp),
      is_(is),
      forced_(is, fs.tau),
      tau_(fs.tau),
      k_off_(std::exp(-cp.t_off / fs.tau)),
      freerun_(is.phase_mode == PhaseMode::freerun && !is.empty()) {
  validate(cp);
  validate(fs);
  validate(is);
  tol_ = settings.tol == 0.0 ? 1e-10 * cp.t_off : std::max(settings.tol, 0.0);
  if (settings.step > 0.0) {
    step_ = settings.step;
  } else {
    double base = std::min(fs.tau, cp.t_off);
    if (!is.empty()) base = std::min(base, 2.0 * std::numbers::pi / is.omega_max());
    step_ = base / 50.0;
    if (settings.dt_max > 0.0) step_ = std::min(step_, settings.dt_max);
  }
  t_max_ = settings.t_max > 0.0 ? settings.t_max : cp.t_on_min + 50.0 * std::max(fs.tau, cp.t_off);
}

ForcedResponse CycleMap::forced_for(const CycleState& cs) const {
  return freerun_ ? forced_.shifted(cs.t_abs) : forced_;
}

double CycleMap::output_with(const CycleState& cs, const ForcedResponse& fr, double t) const {
  const double em = std::expm1(-t / tau_);  // exp(-t/tau) - 1
  const double e = 1.0 + em;
  const double i_v = cs.i_p_prev - cp_.m2 * cp_.t_off;
  double y = cs.y_prev * k_off_ * e - i_v * em + cp_.m1 * (t + em * tau_);
  if (!fr.empty()) y += fr.g(t) - fr.g0() * e;
  return y;
}

double CycleMap::slope_with(const CycleState& cs, const ForcedResponse& fr, double t) const {
  const double e = std::exp(-t / tau_);
  const double i_v = cs.i_p_prev - cp_.m2 * cp_.t_off;
  double s = (i_v - cs.y_prev * k_off_) * e / tau_ + cp_.m1 * (1.0 - e);
  if (!fr.empty()) s += fr.g_prime(t) + fr.g0() * e / tau_;
  return s;
}

double CycleMap::output(const CycleState& cs, double t) const {
  if (!(t >= 0.0)) throw std::domain_error("filter output evaluated at negative time");
  return output_with(cs, forced_for(cs), t);
}

double CycleMap::slope(const CycleState& cs, double t) const {
  if (!(t >= 0.0)) throw std::domain_error("filter slope evaluated at negative time");
  return slope_with(cs, forced_for(cs), t);
}

double CycleMap::sense(const CycleState& cs, double t) const {
  const double i_v = cs.i_p_prev - cp_.m2 * cp_.t_off;
  return i_v + cp_.m1 * t + is_.at_time(cs.t_abs).value(t);
}

OnTime CycleMap::solve_on_time(const CycleState& cs, bool full_scan) const {
  const ForcedResponse fr = forced_for(cs);
  const double target = cp_.i_c;
  const auto f = [&](double t) { return output_with(cs, fr, t) - target; };
  const CrossingScan scan = scan_first_crossing(f, cp_.t_on_min, t_max_, step_, tol_ > 0.0 ? tol_ : -1.0, full_scan);
  if (!scan.found) throw NoCrossingError(cs.n, t_max_);
  OnTime out;
  out.t_on = scan.t;
  out.clamped = scan.at_start;
  out.slope = slope_with(cs, fr, scan.t);
  out.monotone = scan.monotone && (out.clamped || out.slope > 0.0);
  out.crossings = scan.upward_crossings;
  return out;
}

CycleState CycleMap::advance(const CycleState& cs, OnTime* info) const {
  const OnTime on = solve_on_time(cs);
  if (info != nullptr) *info = on;
  CycleState next;
  next.i_p_prev = cs.i_p_prev - cp_.m2 * cp_.t_off + cp_.m1 * on.t_on;
  next.y_prev = on.clamped ? output_with(cs, forced_for(cs), on.t_on) : cp_.i_c;
  next.t_abs = cs.t_abs + on.t_on + cp_.t_off;
  next.n = cs.n + 1;
  return next;
}

double filter_output(const CycleState& cs, const ConverterParams& cp, const FilterSpec& fs,
                     const InterferenceSpec& is, double t) {
  return CycleMap(cp, fs, is).output(cs, t);
}

OnTime solve_on_time(const CycleState& cs, const ConverterParams& cp, const FilterSpec& fs,
                     const InterferenceSpec& is) {
  return CycleMap(cp, fs, is).solve_on_time(cs);
}

CycleState advance_cycle(const CycleState& cs, const ConverterParams& cp, const FilterSpec& fs,
                         const InterferenceSpec& is) {
  return CycleMap(cp, fs, is).advance(cs);
}

OperatingPoint equilibrium(const ConverterParams& cp, const FilterSpec& fs,
                           const InterferenceSpec& is, double i_c) {
  validate(cp);
  validate(fs);
  validate(is);
  if (!(i_c > 0.0) || i_c > cp.i_max) throw ValidationError("i_c", "command must lie in (0, i_max]");
  if (is.phase_mode == PhaseMode::freerun && !is.empty())
    throw ModelError("equilibrium requires locked interference phase or no interference");
  const double t_on = cp.balanced_on_time();
  if (t_on < cp.t_on_min) throw ModelError("balanced on time m2*t_off/m1 is below t_on_min");

  const FilterKernels k(fs.tau);
  const double period = t_on + cp.t_off;
  const double b = std::exp(-period / fs.tau);
  const double one_minus_d = k.step(t_on);
  const double zs = ForcedResponse(is, fs.tau).zero_state(t_on);

  OperatingPoint op;
  op.i_c = i_c;
  op.t_on = t_on;
  op.period = period;
  op.i_v = (i_c * (1.0 - b) - k.ramp(cp.m1, t_on) - zs) / one_minus_d;
  op.i_p = op.i_v + cp.m2 * cp.t_off;
  if (op.i_v < -1e-12 * std::max(i_c, cp.i_max))
    throw ModelError("command infeasible: steady-state valley current is negative");
  return op;
}

double reconstruct_command(const OperatingPoint& op, const ConverterParams& cp,
                           const FilterSpec& fs, const InterferenceSpec& is) {
  const double tau = fs.tau;
  const double d = std::exp(-op.t_on / tau);
  const double b = std::exp(-(op.t_on + cp.t_off) / tau);
  const ForcedResponse fr(is, tau);
  return (1.0 - d) / (1.0 - b) * (op.i_p - cp.m2 * cp.t_off) +
         (1.0 + (d - 1.0) / (op.t_on / tau)) * cp.m1 * op.t_on / (1.0 - b) +
         (fr.g(op.t_on) - fr.g0() * d) / (1.0 - b);
}

}  // namespace lpcm
