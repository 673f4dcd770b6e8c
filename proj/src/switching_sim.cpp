#include "lpcm/switching_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "lpcm/bracketing.hpp"

namespace lpcm {
namespace {

void append_off_interval(std::vector<WaveSample>& wave, const ConverterParams& cp, const InterferenceSpec& local,
                         double t_start, double t_on, double i_p, double y_switch, double tau, double dt,
                         int variant, bool filtered) {
  for (long k = 0;; ++k) {
    const double s = static_cast<double>(k) * dt;
    if (s >= cp.t_off) break;
    WaveSample w;
    w.t = t_start + s;
    w.i_l = i_p - cp.m2 * s;
    w.i_m = w.i_l + local.value(t_on + s);
    w.y = filtered ? y_switch * std::exp(-s / tau) : 0.0;
    w.variant = variant;
    wave.push_back(w);
  }
}

double steady_peak_scale(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is) {
  double peak = cp.i_max;
  try {
    InterferenceSpec none;
    none.phase_mode = PhaseMode::locked;
    if (cp.i_c > 0.0) peak = std::max(peak, equilibrium(cp, fs, none, cp.i_c).i_p);
  } catch (const std::exception&) {
    // no interference-free steady state: fall back to i_max
  }
  return peak + 2.0 * is.a_ub() / (1.0 - std::exp(-cp.t_on_min / fs.tau));
}

struct PeakRun {
  std::vector<double> peaks;
  bool non_monotone = false;
  std::optional<DivergenceReason> failure;
};

PeakRun run_peaks(const CycleMap& map, const CycleState& init, int n_cycles, double lo, double hi) {
  PeakRun run;
  run.peaks.reserve(n_cycles);
  constexpr int kHistory = 8;
  std::array<CycleState, kHistory> history{};
  int stored = 0;
  CycleState s = init;
  for (int n = 0; n < n_cycles; ++n) {
    OnTime on;
    try {
      s = map.advance(s, &on);
    } catch (const NoCrossingError&) {
      run.failure = DivergenceReason::no_crossing;
      return run;
    }
    if (!on.monotone) run.non_monotone = true;
    run.peaks.push_back(s.i_p_prev);
    if (!(s.i_p_prev >= lo && s.i_p_prev <= hi)) {
      run.failure = DivergenceReason::bound_exit;
      return run;
    }
    if (!map.autonomous()) continue;
    // An autonomous map that revisits a state repeats exactly from then on.
    for (int k = 1; k <= std::min(stored, kHistory); ++k) {
      const CycleState& past = history[(stored - k) % kHistory];
      if (past.i_p_prev == s.i_p_prev && past.y_prev == s.y_prev) {
        while (static_cast<int>(run.peaks.size()) < n_cycles) run.peaks.push_back(run.peaks[run.peaks.size() - k]);
        return run;
      }
    }
    history[stored % kHistory] = s;
    ++stored;
  }
  return run;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::stable: return "stable";
    case Classification::unstable: return "unstable";
    case Classification::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(DivergenceReason r) {
  switch (r) {
    case DivergenceReason::no_crossing: return "no_crossing";
    case DivergenceReason::bound_exit: return "bound_exit";
    case DivergenceReason::oscillation: return "oscillation";
  }
  return "?";
}

Trajectory simulate(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
                    const CycleState& init, int n_cycles, const CrossingSettings& settings, double wave_dt,
                    int variant) {
  if (n_cycles < 1) throw ValidationError("n_cycles", "must be at least 1");
  const CycleMap map(cp, fs, is, settings);
  Trajectory traj;
  traj.cycles.reserve(n_cycles);
  CycleState s = init;
  for (int k = 0; k < n_cycles; ++k) {
    OnTime on;
    const CycleState next = map.advance(s, &on);
    CycleRecord rec;
    rec.n = s.n;
    rec.t_abs = s.t_abs;
    rec.t_on = on.t_on;
    rec.i_p = next.i_p_prev;
    rec.i_v = s.i_p_prev - cp.m2 * cp.t_off;
    rec.clamped = on.clamped;
    rec.monotone = on.monotone;
    traj.cycles.push_back(rec);
    if (wave_dt > 0.0) {
      const InterferenceSpec local = is.at_time(s.t_abs);
      for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * wave_dt;
        if (t >= on.t_on) break;
        WaveSample w;
        w.t = s.t_abs + t;
        w.i_l = rec.i_v + cp.m1 * t;
        w.i_m = w.i_l + local.value(t);
        w.y = map.output(s, t);
        w.variant = variant;
        traj.wave.push_back(w);
      }
      append_off_interval(traj.wave, cp, local, s.t_abs + on.t_on, on.t_on, rec.i_p, next.y_prev, fs.tau,
                          wave_dt, variant, true);
    }
    s = next;
  }
  return traj;
}

Trajectory simulate_unfiltered(const ConverterParams& cp, const InterferenceSpec& is, double i_p0, int n_cycles,
                               double wave_dt, int variant) {
  if (n_cycles < 1) throw ValidationError("n_cycles", "must be at least 1");
  validate(cp);
  validate(is);
  double step = cp.t_off;
  if (!is.empty()) step = std::min(step, 2.0 * std::numbers::pi / is.omega_max());
  step /= 50.0;
  const double t_max = cp.t_on_min + 50.0 * cp.t_off;
  Trajectory traj;
  double i_p = i_p0;
  double t_abs = 0.0;
  for (int n = 0; n < n_cycles; ++n) {
    const InterferenceSpec local = is.at_time(t_abs);
    const double i_v = i_p - cp.m2 * cp.t_off;
    const auto f = [&](double t) { return i_v + cp.m1 * t + local.value(t) - cp.i_c; };
    const CrossingScan scan = scan_first_crossing(f, cp.t_on_min, t_max, step, 1e-10 * cp.t_off);
    if (!scan.found) throw NoCrossingError(n, t_max);
    CycleRecord rec;
    rec.n = n;
    rec.t_abs = t_abs;
    rec.t_on = scan.t;
    rec.i_v = i_v;
    rec.i_p = i_v + cp.m1 * scan.t;
    rec.clamped = scan.at_start;
    rec.monotone = scan.monotone;
    traj.cycles.push_back(rec);
    if (wave_dt > 0.0) {
      for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * wave_dt;
        if (t >= rec.t_on) break;
        WaveSample w;
        w.t = t_abs + t;
        w.i_l = i_v + cp.m1 * t;
        w.i_m = w.i_l + local.value(t);
        w.y = w.i_m;
        w.variant = variant;
        traj.wave.push_back(w);
      }
      append_off_interval(traj.wave, cp, local, t_abs + rec.t_on, rec.t_on, rec.i_p, 0.0, 1.0, wave_dt, variant,
                          false);
    }
    i_p = rec.i_p;
    t_abs += rec.t_on + cp.t_off;
  }
  return traj;
}

std::vector<WaveSample> comparison_waveforms(const ConverterParams& cp, const FilterSpec& fs,
                                             const InterferenceSpec& is, double i_p0, int n_cycles,
                                             double wave_dt) {
  if (!(wave_dt > 0.0)) throw ValidationError("dt_max", "waveform spacing must be positive");
  InterferenceSpec none;
  none.phase_mode = is.phase_mode;
  CycleState init;
  init.i_p_prev = i_p0;
  init.y_prev = cp.i_c;
  std::vector<WaveSample> out;
  const auto take = [&](Trajectory&& t) { out.insert(out.end(), t.wave.begin(), t.wave.end()); };
  take(simulate_unfiltered(cp, none, i_p0, n_cycles, wave_dt, 0));
  take(simulate_unfiltered(cp, is, i_p0, n_cycles, wave_dt, 1));
  take(simulate(cp, fs, none, init, n_cycles, {}, wave_dt, 2));
  take(simulate(cp, fs, is, init, n_cycles, {}, wave_dt, 3));
  return out;
}

StabilityVerdict classify_stability(const ConverterParams& cp, const FilterSpec& fs,
                                    const InterferenceSpec& is, std::span<const CycleState> inits,
                                    int n_cycles, double eps, const CrossingSettings& settings) {
  if (inits.empty()) throw ValidationError("inits", "at least one initial state is required");
  if (!(eps > 0.0)) throw ValidationError("eps", "must be positive");
  if (n_cycles < 1) throw ValidationError("n_cycles", "must be at least 1");

  const CycleMap map(cp, fs, is, settings);
  const double scale = steady_peak_scale(cp, fs, is);
  const double tol = eps * std::max(cp.i_c, 1e-6);
  const int window = std::max(1, n_cycles / 10);

  StabilityVerdict v;
  std::vector<PeakRun> runs;
  runs.reserve(inits.size());
  for (const CycleState& init : inits) {
    runs.push_back(run_peaks(map, init, n_cycles, -0.5 * scale, 2.0 * scale));
    v.non_monotone_sense = v.non_monotone_sense || runs.back().non_monotone;
    if (runs.back().failure) {
      v.classification = Classification::unstable;
      v.reason = runs.back().failure;
      v.cycles_to_converge = -1;
      return v;
    }
  }

  double max_spread = 0.0;
  double mean_lo = std::numeric_limits<double>::infinity();
  double mean_hi = -mean_lo;
  long converge = 0;
  int oscillation_period = 0;
  for (const PeakRun& run : runs) {
    const auto& p = run.peaks;
    const auto first = p.end() - window;
    const auto [mn, mx] = std::minmax_element(first, p.end());
    const double spread = *mx - *mn;
    double mean = 0.0;
    for (auto it = first; it != p.end(); ++it) mean += *it;
    mean /= window;
    max_spread = std::max(max_spread, spread);
    mean_lo = std::min(mean_lo, mean);
    mean_hi = std::max(mean_hi, mean);

    long last_out = -1;
    for (long n = 0; n < static_cast<long>(p.size()); ++n)
      if (std::abs(p[n] - p.back()) > tol) last_out = n;
    converge = std::max(converge, last_out + 1);

    if (spread > tol && oscillation_period == 0) {
      const int w0 = static_cast<int>(p.size()) - window;
      for (int k = 2; k <= 8 && k < window; ++k) {
        double worst = 0.0;
        for (int n = w0 + k; n < static_cast<int>(p.size()); ++n) worst = std::max(worst, std::abs(p[n] - p[n - k]));
        if (worst <= 1e-3 * spread) {
          oscillation_period = k;
          break;
        }
      }
    }
  }

  v.residual = max_spread;
  if (max_spread <= tol && mean_hi - mean_lo <= tol) {
    v.classification = Classification::stable;
    v.cycles_to_converge = converge;
  } else if (oscillation_period > 0) {
    v.classification = Classification::unstable;
    v.reason = DivergenceReason::oscillation;
    v.period = oscillation_period;
  } else {
    v.classification = Classification::inconclusive;
  }
  return v;
}

std::vector<CycleState> spread_initial_states(const ConverterParams& cp, int count,
                                              std::optional<std::uint64_t> seed) {
  if (count < 1) throw ValidationError("inits", "at least one initial state is required");
  std::vector<CycleState> out(count);
  std::mt19937_64 rng(seed.value_or(0));
  std::uniform_real_distribution<double> frac(0.1, 1.5);
  for (int k = 0; k < count; ++k) {
    double f = 0.8;
    if (seed) {
      f = frac(rng);
    } else if (count > 1) {
      f = 0.1 + 1.4 * k / (count - 1);
    }
    out[k].i_p_prev = f * cp.i_c;
    out[k].y_prev = cp.i_c;
  }
  return out;
}

double xi_eval(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
               const InterferenceSpec& is, double t_on_dev) {
  const double tau = fs.tau;
  const double k1 = std::exp(-cp.t_off / tau);
  const ForcedResponse fr(is, tau);
  return (op.i_c * k1 - op.i_v) * (std::exp(-(op.t_on + t_on_dev) / tau) - std::exp(-op.t_on / tau)) +
         fr.zero_state(op.t_on + t_on_dev) - fr.zero_state(op.t_on);
}

double xi_slope(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
                const InterferenceSpec& is, double t_on_dev) {
  const double tau = fs.tau;
  const double k1 = std::exp(-cp.t_off / tau);
  const double t = op.t_on + t_on_dev;
  return -(op.i_c * k1 - op.i_v) * std::exp(-t / tau) / tau + ForcedResponse(is, tau).zero_state_slope(t);
}

double ie_step(double ie_prev, double t_on, double tau, double u) { return std::exp(-t_on / tau) * ie_prev + u; }

}  // namespace lpcm
