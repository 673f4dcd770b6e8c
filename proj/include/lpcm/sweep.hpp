#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpcm/config.hpp"
#include "lpcm/switching_sim.hpp"

namespace lpcm {

/// Inclusive axis start:stop:count.
struct Axis {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double at(int k) const;
  static Axis parse(std::string_view text, const std::string& name);
};

struct GridSpec {
  Axis tau_hat;
  Axis a_hat;
  Axis omega_hat;

  std::size_t size() const;
};

struct GridPoint {
  double tau_hat = 0.0;
  double a_hat = 0.0;
  double omega_hat = 0.0;
  double thm1_lhs = 0.0;
  double thm2_lhs_a = 0.0;
  double thm2_lhs_b = 0.0;
  bool thm_pass = false;  ///< both stability inequalities hold
  Classification sim_verdict = Classification::inconclusive;
  long cycles_to_converge = -1;
};

struct SweepOptions {
  int n_phases = 8;
  int n_inits = 5;
  int n_cycles = 500;
  double eps = 1e-3;
  std::optional<std::uint64_t> seed;
};

/// Theorem predictions against simulation over a (tau_hat, a_hat,
/// omega_hat) grid. Points are stored row-major with tau_hat outermost.
struct RegionGrid {
  GridSpec spec;
  std::vector<GridPoint> points;
  long theorem_pass = 0;
  long simulated_stable = 0;
  long containment_violations = 0;  ///< theorem passes but simulation is not stable
};

/// Evaluates one grid point on top of `base`: a single tone of amplitude
/// a_hat*m1*t_off at 2*pi*omega_hat/t_off and tau = tau_hat*t_off. The
/// verdict is the worst over `n_phases` equally spaced tone phases.
GridPoint evaluate_point(const Config& base, double tau_hat, double a_hat, double omega_hat,
                         const SweepOptions& opt);

/// Base design of the stock sweep: m1 = 1, m2 = 1.25, t_off = t_on_min = 1,
/// i_c = i_max = 1.25, locked phase. The sweep overrides tau and the tone.
Config default_sweep_base();

/// OpenMP-parallel over grid points; output does not depend on the thread count.
RegionGrid sweep(const Config& base, const GridSpec& grid, const SweepOptions& opt);
/// Single-threaded reference.
RegionGrid sweep_serial(const Config& base, const GridSpec& grid, const SweepOptions& opt);

inline constexpr int kSweepFormatVersion = 1;

std::string sweep_csv(const RegionGrid& grid);

}  // namespace lpcm
