#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpcm {

/// Raised when a parameter record violates its invariants. `field()` names
/// the offending key as it appears in the configuration file.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Physical constants of a constant off-time peak current-mode converter.
/// Slopes in A/s, times in s, currents in A.
struct ConverterParams {
  double m1 = 0.0;        ///< on-slope of the inductor current
  double m2 = 0.0;        ///< magnitude of the off-slope
  double t_off = 0.0;     ///< fixed off time
  double t_on_min = 0.0;  ///< minimum on time (comparator blanking)
  double i_max = 0.0;     ///< largest admissible peak-current command
  double i_c = 0.0;       ///< peak-current command

  /// On time that balances the current ripple over one period.
  double balanced_on_time() const { return m2 * t_off / m1; }

  friend bool operator==(const ConverterParams&, const ConverterParams&) = default;
};

/// First-order low-pass filter on the current-sense path.
struct FilterSpec {
  double tau = 0.0;  ///< time constant [s]

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// One interference component A*sin(omega*t + phase).
struct Tone {
  double amp = 0.0;
  double omega = 0.0;
  double phase = 0.0;

  friend bool operator==(const Tone&, const Tone&) = default;
};

/// How the interference phase relates to the switching instants.
/// `locked` restarts every tone at each on-interval start; `freerun`
/// evaluates the tones in absolute time.
enum class PhaseMode { locked, freerun };

const char* to_string(PhaseMode mode);

/// Amplitude- and bandwidth-limited interference as a finite tone sum.
struct InterferenceSpec {
  std::vector<Tone> components;
  PhaseMode phase_mode = PhaseMode::freerun;

  bool empty() const { return components.empty(); }

  /// Amplitude budget, the sum of tone amplitudes.
  double a_ub() const;

  /// Lowest tone frequency; +inf without tones.
  double omega_l() const;

  /// Highest tone frequency; 0 without tones.
  double omega_max() const;

  /// Phases as seen from an on-interval starting at absolute time `t_abs`.
  /// Locked mode ignores `t_abs`.
  InterferenceSpec at_time(double t_abs) const;

  /// Same tones with every phase shifted by `delta`.
  InterferenceSpec with_phase_offset(double delta) const;

  /// Instantaneous interference at local time t.
  double value(double t) const;

  /// Time derivative of the interference at local time t.
  double derivative(double t) const;

  friend bool operator==(const InterferenceSpec&, const InterferenceSpec&) = default;
};

/// Dimensionless quantities of the stability criteria. Times are measured
/// in units of `t_base` and currents in units of `m1_ref * t_base`.
struct NormalizedParams {
  double tau_hat = 0.0;
  double a_ub_hat = 0.0;
  double i_max_hat = 0.0;
  double omega_l_hat = std::numeric_limits<double>::infinity();
  double t_on_min_hat = 0.0;
  double t_min_hat = 0.0;
  double b = 0.0;  ///< decay over the minimum period
  double d = 0.0;  ///< decay over the minimum on time
  double t_base = 1.0;
  double m1_ref = 1.0;

  /// The attenuation 1/sqrt(1 + (2*pi*omega_l_hat*tau_hat)^2); 0 without tones.
  double attenuation() const;
};

void validate(const ConverterParams& cp);
void validate(const FilterSpec& fs);
void validate(const InterferenceSpec& is);

/// Normalizes with the off time as the time base.
NormalizedParams normalize(const ConverterParams& cp, const FilterSpec& fs,
                           const InterferenceSpec& is);

/// Builds the record directly from hatted values (t_base = m1_ref = 1
/// unless given). `omega_l_hat` may be +inf for no interference.
NormalizedParams make_normalized(double tau_hat, double t_on_min_hat, double a_ub_hat,
                                 double omega_l_hat, double i_max_hat, double t_base = 1.0,
                                 double m1_ref = 1.0);

struct PhysicalParams {
  ConverterParams converter;
  FilterSpec filter;
  InterferenceSpec interference;
};

/// Inverse of normalize using the recorded base. Produces a single tone of
/// amplitude a_ub_hat*m1*t_base at 2*pi*omega_l_hat/t_base (no tone when
/// omega_l_hat is infinite), m2 = m1 and i_c = i_max.
PhysicalParams denormalize(const NormalizedParams& np, PhaseMode mode = PhaseMode::locked);

}  // namespace lpcm
