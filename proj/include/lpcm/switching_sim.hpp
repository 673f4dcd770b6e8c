#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpcm/config.hpp"
#include "lpcm/cycle_map.hpp"

namespace lpcm {

struct CycleRecord {
  long n = 0;
  double t_abs = 0.0;  ///< on-interval start
  double t_on = 0.0;
  double i_p = 0.0;    ///< peak at the end of the on-interval
  double i_v = 0.0;    ///< valley at the start of the on-interval
  bool clamped = false;
  bool monotone = true;
};

/// Dense waveform sample. Variants: 0 unfiltered without interference,
/// 1 unfiltered with interference, 2 filtered without interference,
/// 3 filtered with interference.
struct WaveSample {
  double t = 0.0;
  double i_l = 0.0;  ///< inductor current
  double i_m = 0.0;  ///< raw sense signal, inductor current plus interference
  double y = 0.0;    ///< comparator input (filter output; blanked sense when unfiltered)
  int variant = 0;
};

struct Trajectory {
  std::vector<CycleRecord> cycles;
  std::vector<WaveSample> wave;
};

/// Runs `n_cycles` of the exact cycle map from `init`. With `wave_dt` > 0
/// the waveform is reconstructed from the closed forms at that spacing and
/// tagged `variant`. NoCrossingError propagates with the cycle index.
Trajectory simulate(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
                    const CycleState& init, int n_cycles, const CrossingSettings& settings = {},
                    double wave_dt = 0.0, int variant = 3);

/// One simulated on-time/peak sequence of the loop with the comparator
/// reading the sense signal directly.
Trajectory simulate_unfiltered(const ConverterParams& cp, const InterferenceSpec& is, double i_p0,
                               int n_cycles, double wave_dt = 0.0, int variant = 1);

/// The four filter on/off x interference on/off traces from the same
/// starting peak, concatenated in variant order.
std::vector<WaveSample> comparison_waveforms(const ConverterParams& cp, const FilterSpec& fs,
                                             const InterferenceSpec& is, double i_p0, int n_cycles,
                                             double wave_dt);

enum class Classification { stable, unstable, inconclusive };
enum class DivergenceReason { no_crossing, bound_exit, oscillation };

const char* to_string(Classification c);
const char* to_string(DivergenceReason r);

struct StabilityVerdict {
  Classification classification = Classification::inconclusive;
  long cycles_to_converge = -1;
  double residual = 0.0;  ///< worst trailing-window spread (or pairwise gap in freerun)
  std::optional<DivergenceReason> reason;
  int period = 0;         ///< detected oscillation period
  bool non_monotone_sense = false;
  std::string scope = "empirical-global";
};

/// Empirical stability over a set of initial states.
///
/// Locked or absent interference: stable when every trajectory's last 10%
/// of peaks spreads by at most eps*max(i_c, 1e-6) and all window means
/// agree within the same tolerance. The same rule applies to freerun
/// interference, where the peaks keep a forced ripple, so only designs whose
/// ripple stays within tolerance can be classified stable.
/// Unstable on NoCrossing, on a peak leaving [-0.5*S, 2*S], or on a
/// period-k (k <= 8) oscillation above tolerance, where S is the larger of
/// i_max and the interference-free steady-state peak, plus
/// 2*A_ub/(1 - exp(-t_on_min/tau)). Anything else is inconclusive.
StabilityVerdict classify_stability(const ConverterParams& cp, const FilterSpec& fs,
                                    const InterferenceSpec& is, std::span<const CycleState> inits,
                                    int n_cycles, double eps, const CrossingSettings& settings = {});

/// `count` initial states with peaks over [0.1*i_c, 1.5*i_c]: evenly
/// spaced, or drawn from a seeded generator when `seed` is set. The
/// previous output starts at the command.
std::vector<CycleState> spread_initial_states(const ConverterParams& cp, int count,
                                              std::optional<std::uint64_t> seed = std::nullopt);

/// The memoryless nonlinearity of the block model,
/// xi(dt) = [I_c*K1 - I_v]*[exp(-(T_on+dt)/tau) - exp(-T_on/tau)]
///          + zs(T_on + dt) - zs(T_on),
/// with zs the zero-state interference response (locked phase).
double xi_eval(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
               const InterferenceSpec& is, double t_on_dev);

/// Analytic d(xi)/d(dt).
double xi_slope(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
                const InterferenceSpec& is, double t_on_dev);

/// Recursion of the F block: i_e[n] = exp(-t_on/tau)*i_e[n-1] + u.
double ie_step(double ie_prev, double t_on, double tau, double u);

}  // namespace lpcm
