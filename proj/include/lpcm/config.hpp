#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lpcm/params.hpp"

namespace lpcm {

/// Simulation knobs. Zero for `dt_max` and `tol` selects the automatic
/// value derived from the converter and filter constants.
struct SimSettings {
  double dt_max = 0.0;  ///< cap on the crossing-bracket step and waveform spacing [s]
  int n_cycles = 500;
  double tol = 0.0;     ///< crossing tolerance [s]
  double eps = 1e-3;    ///< relative convergence threshold for classification

  friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct Config {
  ConverterParams converter;
  FilterSpec filter;
  InterferenceSpec interference;
  SimSettings sim;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Malformed configuration text. `line()` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parses and validates configuration text. Throws ConfigError on syntax
/// problems and ValidationError on out-of-range values.
Config parse_config(std::string_view text, const std::string& source = "<config>");

Config load_config(const std::filesystem::path& path);

/// Canonical text form: every table in fixed order, every key present,
/// numbers in shortest round-trip notation.
std::string to_canonical(const Config& cfg);

}  // namespace lpcm
