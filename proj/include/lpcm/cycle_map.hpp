#pragma once

#include <stdexcept>
#include <string>

#include "lpcm/filter_response.hpp"
#include "lpcm/params.hpp"

namespace lpcm {

/// State at the start of an on-interval.
struct CycleState {
  double i_p_prev = 0.0;  ///< peak current of the previous cycle
  double y_prev = 0.0;    ///< filter output at the previous switch-off
  double t_abs = 0.0;     ///< absolute time of this on-interval start
  long n = 0;
};

struct OperatingPoint {
  double i_c = 0.0;
  double i_p = 0.0;
  double i_v = 0.0;
  double t_on = 0.0;
  double period = 0.0;
};

struct OnTime {
  double t_on = 0.0;
  double slope = 0.0;      ///< filter-output slope at the switch-off instant
  bool clamped = false;    ///< output was already above the command at t_on_min
  bool monotone = true;    ///< no sampled decrease of the output before the crossing
  int crossings = 0;       ///< upward crossings seen (all of them with a full scan)
};

/// The comparator never trips within the search horizon.
class NoCrossingError : public std::runtime_error {
 public:
  NoCrossingError(long cycle, double t_max)
      : std::runtime_error("no comparator crossing within " + std::to_string(t_max) +
                           " s in cycle " + std::to_string(cycle)),
        cycle_(cycle) {}

  long cycle() const noexcept { return cycle_; }

 private:
  long cycle_;
};

/// A requested model quantity does not exist for these parameters
/// (infeasible command, freerun fixed point, non-monotone crossing).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Knobs of the crossing search. Zero selects the default: tol = 1e-10*t_off,
/// step = min(tau, t_off, 2*pi/omega_max)/50 (capped by dt_max when set),
/// t_max = t_on_min + 50*max(tau, t_off). A negative tol bisects to machine
/// resolution.
struct CrossingSettings {
  double tol = 0.0;
  double step = 0.0;
  double dt_max = 0.0;
  double t_max = 0.0;
};

/// The exact cycle-to-cycle map of the filtered peak-current loop.
///
/// During the off-interval the sense input is blanked, so the filter only
/// decays; during the on-interval it integrates i_v + m1*t + w(t). The
/// comparator ends the on-interval at the first time t >= t_on_min where
/// the output reaches the command.
class CycleMap {
 public:
  CycleMap(const ConverterParams& cp, const FilterSpec& fs, const InterferenceSpec& is,
           const CrossingSettings& settings = {});

  const ConverterParams& converter() const { return cp_; }
  double tau() const { return tau_; }
  double tol() const { return tol_; }
  double step() const { return step_; }
  double t_max() const { return t_max_; }
  /// True when the map does not depend on t_abs.
  bool autonomous() const { return !freerun_; }

  /// Filter output at local time t of the on-interval.
  double output(const CycleState& cs, double t) const;
  /// d/dt of output.
  double slope(const CycleState& cs, double t) const;
  /// Sense input i_m(t) = i_v + m1*t + w(t) during the on-interval.
  double sense(const CycleState& cs, double t) const;

  OnTime solve_on_time(const CycleState& cs, bool full_scan = false) const;

  CycleState advance(const CycleState& cs, OnTime* info = nullptr) const;

 private:
  ForcedResponse forced_for(const CycleState& cs) const;
  double output_with(const CycleState& cs, const ForcedResponse& fr, double t) const;
  double slope_with(const CycleState& cs, const ForcedResponse& fr, double t) const;

  ConverterParams cp_;
  InterferenceSpec is_;
  ForcedResponse forced_;
  double tau_;
  double k_off_;  // exp(-t_off/tau)
  bool freerun_;
  double tol_;
  double step_;
  double t_max_;
};

double filter_output(const CycleState& cs, const ConverterParams& cp, const FilterSpec& fs,
                     const InterferenceSpec& is, double t);
OnTime solve_on_time(const CycleState& cs, const ConverterParams& cp, const FilterSpec& fs,
                     const InterferenceSpec& is);
CycleState advance_cycle(const CycleState& cs, const ConverterParams& cp, const FilterSpec& fs,
                         const InterferenceSpec& is);

/// Periodic steady state for command i_c. Requires locked phase or no
/// interference. Throws ModelError when the balanced on time is below
/// t_on_min or the valley current comes out negative.
OperatingPoint equilibrium(const ConverterParams& cp, const FilterSpec& fs,
                           const InterferenceSpec& is, double i_c);

/// Command reconstructed from an operating point through the steady-state
/// crossing identity; equals op.i_c for a true equilibrium.
double reconstruct_command(const OperatingPoint& op, const ConverterParams& cp,
                           const FilterSpec& fs, const InterferenceSpec& is);

struct ContinuityResult {
  bool monotone = true;
  double min_slope = 0.0;
  double t_at_min = 0.0;  ///< local on-interval time of the minimum
  long samples = 0;
};

/// Sampling grid of the continuity check. Zero selects the defaults:
/// step = (t_on_min + t_off)/1e4 and horizon t_on_min + 10*max(tau, t_off)
/// plus one period of the slowest tone.
struct ContinuitySettings {
  double step = 0.0;
  double t_max = 0.0;
};

/// Dense scan of the filter-output slope over [t_on_min, t_max]. With
/// `worst_case` the state is the corner used for the continuity bound:
/// previous output at i_max and zero valley current. Otherwise `state`
/// supplies the previous peak, previous output and interference phase.
/// OpenMP-parallel; continuity_check_serial is the reference.
ContinuityResult continuity_check(const ConverterParams& cp, const FilterSpec& fs,
                                  const InterferenceSpec& is, bool worst_case,
                                  const CycleState& state = {}, const ContinuitySettings& settings = {});
ContinuityResult continuity_check_serial(const ConverterParams& cp, const FilterSpec& fs,
                                         const InterferenceSpec& is, bool worst_case,
                                         const CycleState& state = {},
                                         const ContinuitySettings& settings = {});

/// Worst-case continuity check minimized over `n_phases` equally spaced
/// phase offsets applied to every tone.
ContinuityResult continuity_check_phases(const ConverterParams& cp, const FilterSpec& fs,
                                         const InterferenceSpec& is, int n_phases,
                                         const ContinuitySettings& settings = {});

}  // namespace lpcm
