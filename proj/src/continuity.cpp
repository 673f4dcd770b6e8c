#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lpcm/cycle_map.hpp"

namespace lpcm {
namespace {

// slope(t) = m1 + c*exp(-t/tau) + sum gain*omega*cos(omega*t + phase)
struct SlopeProfile {
  double m1;
  double c;
  double tau;
  std::vector<ForcedResponse::Component> tones;
  double t0;
  double step;
  long count;

  double at(long k) const {
    const double t = t0 + static_cast<double>(k) * step;
    double s = m1 + c * std::exp(-t / tau);
    for (const auto& tone : tones) s += tone.gain * tone.omega * std::cos(tone.omega * t + tone.phase);
    return s;
  }
};

SlopeProfile make_profile(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
                          bool worst_case, const CycleState& state, const ContinuitySettings& settings) {
  validate(cp);
  validate(fs);
  validate(is);
  CycleState cs = state;
  if (worst_case) {
    cs.i_p_prev = cp.m2 * cp.t_off;
    cs.y_prev = cp.i_max;
    cs.t_abs = 0.0;
  }
  ForcedResponse fr(is, fs.tau);
  if (is.phase_mode == PhaseMode::freerun) fr = fr.shifted(cs.t_abs);
  const double i_v = cs.i_p_prev - cp.m2 * cp.t_off;
  const double k_off = std::exp(-cp.t_off / fs.tau);

  SlopeProfile p;
  p.m1 = cp.m1;
  p.tau = fs.tau;
  p.c = (i_v - cs.y_prev * k_off + fr.g0()) / fs.tau - cp.m1;
  p.tones = fr.components();
  p.t0 = cp.t_on_min;
  p.step = settings.step > 0.0 ? settings.step : (cp.t_on_min + cp.t_off) / 1e4;
  double t_max = settings.t_max;
  if (t_max <= 0.0) {
    t_max = cp.t_on_min + 10.0 * std::max(fs.tau, cp.t_off);
    if (!is.empty()) t_max += 2.0 * std::numbers::pi / is.omega_l();
  }
  p.count = static_cast<long>(std::floor((t_max - p.t0) / p.step)) + 1;
  return p;
}

ContinuityResult finish(const SlopeProfile& p, double min_slope, long at) {
  ContinuityResult r;
  r.min_slope = min_slope;
  r.t_at_min = p.t0 + static_cast<double>(at) * p.step;
  r.monotone = min_slope > 0.0;
  r.samples = p.count;
  return r;
}

}  // namespace

ContinuityResult continuity_check_serial(const ConverterParams& cp, const FilterSpec& fs,
                                         const InterferenceSpec& is, bool worst_case,
                                         const CycleState& state, const ContinuitySettings& settings) {
  const SlopeProfile p = make_profile(cp, fs, is, worst_case, state, settings);
  double best = std::numeric_limits<double>::infinity();
  long at = 0;
  for (long k = 0; k < p.count; ++k) {
    const double s = p.at(k);
    if (s < best) {
      best = s;
      at = k;
    }
  }
  return finish(p, best, at);
}

ContinuityResult continuity_check(const ConverterParams& cp, const FilterSpec& fs,
                                  const InterferenceSpec& is, bool worst_case,
                                  const CycleState& state, const ContinuitySettings& settings) {
  const SlopeProfile p = make_profile(cp, fs, is, worst_case, state, settings);
  double best = std::numeric_limits<double>::infinity();
  long at = 0;
#pragma omp parallel
  {
    double local_best = std::numeric_limits<double>::infinity();
    long local_at = 0;
#pragma omp for schedule(static) nowait
    for (long k = 0; k < p.count; ++k) {
      const double s = p.at(k);
      if (s < local_best) {
        local_best = s;
        local_at = k;
      }
    }
    // Ties resolve to the smallest index so the result matches the serial scan.
#pragma omp critical
    if (local_best < best || (local_best == best && local_at < at)) {
      best = local_best;
      at = local_at;
    }
  }
  return finish(p, best, at);
}

ContinuityResult continuity_check_phases(const ConverterParams& cp, const FilterSpec& fs,
                                         const InterferenceSpec& is, int n_phases,
                                         const ContinuitySettings& settings) {
  const int count = is.empty() ? 1 : std::max(n_phases, 1);
  ContinuityResult worst;
  worst.min_slope = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    const double offset = 2.0 * std::numbers::pi * k / count;
    const ContinuityResult r = continuity_check(cp, fs, is.with_phase_offset(offset), true, {}, settings);
    if (r.min_slope < worst.min_slope) worst = r;
  }
  return worst;
}

}  // namespace lpcm
