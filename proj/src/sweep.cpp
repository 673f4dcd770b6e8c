#include "lpcm/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lpcm/criteria.hpp"
#include "lpcm/number_format.hpp"

namespace lpcm {
namespace {

int severity(Classification c) {
  switch (c) {
    case Classification::unstable: return 0;
    case Classification::inconclusive: return 1;
    case Classification::stable: return 2;
  }
  return 0;
}

void tally(RegionGrid& grid) {
  for (const GridPoint& p : grid.points) {
    const bool stable = p.sim_verdict == Classification::stable;
    grid.theorem_pass += p.thm_pass;
    grid.simulated_stable += stable;
    grid.containment_violations += p.thm_pass && !stable;
  }
}

std::vector<std::array<double, 3>> grid_coordinates(const GridSpec& grid) {
  std::vector<std::array<double, 3>> coords;
  coords.reserve(grid.size());
  for (int i = 0; i < grid.tau_hat.count; ++i)
    for (int j = 0; j < grid.a_hat.count; ++j)
      for (int k = 0; k < grid.omega_hat.count; ++k)
        coords.push_back({grid.tau_hat.at(i), grid.a_hat.at(j), grid.omega_hat.at(k)});
  return coords;
}

}  // namespace

Config default_sweep_base() {
  return parse_config(R"([converter]
m1 = 1
m2 = 1.25
t_off = 1
t_on_min = 1
i_max = 1.25
i_c = 1.25

[filter]
tau = 1

[interference_mode]
phase = "locked"
)",
                      "<default sweep base>");
}

double Axis::at(int k) const {
  if (count <= 1) return start;
  if (k == count - 1) return stop;
  return start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
}

Axis Axis::parse(std::string_view text, const std::string& name) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw ValidationError(name, "expected start:stop:count");
  Axis a;
  double count = 0.0;
  if (!parse_number(text.substr(0, c1), a.start) || !parse_number(text.substr(c1 + 1, c2 - c1 - 1), a.stop) ||
      !parse_number(text.substr(c2 + 1), count))
    throw ValidationError(name, "expected start:stop:count");
  if (!std::isfinite(a.start) || !std::isfinite(a.stop)) throw ValidationError(name, "endpoints must be finite");
  if (count < 1 || count != std::floor(count) || count > 1e6) throw ValidationError(name, "count must be a positive integer");
  a.count = static_cast<int>(count);
  return a;
}

std::size_t GridSpec::size() const {
  return static_cast<std::size_t>(tau_hat.count) * a_hat.count * omega_hat.count;
}

GridPoint evaluate_point(const Config& base, double tau_hat, double a_hat, double omega_hat,
                         const SweepOptions& opt) {
  GridPoint pt;
  pt.tau_hat = tau_hat;
  pt.a_hat = a_hat;
  pt.omega_hat = omega_hat;

  const ConverterParams& cp = base.converter;
  const double t_base = cp.t_off;
  FilterSpec fs{tau_hat * t_base};
  InterferenceSpec is;
  is.phase_mode = base.interference.phase_mode;
  is.components.push_back({a_hat * cp.m1 * t_base, 2.0 * std::numbers::pi * omega_hat / t_base, 0.0});

  const NormalizedParams np = normalize(cp, fs, is);
  const Theorem1Result t1 = theorem1_margin(np);
  const Theorem2Result t2 = theorem2_margin(np);
  pt.thm1_lhs = t1.lhs;
  pt.thm2_lhs_a = t2.lhs_a;
  pt.thm2_lhs_b = t2.lhs_b;
  pt.thm_pass = t2.pass;

  const auto inits = spread_initial_states(cp, opt.n_inits, opt.seed);
  CrossingSettings cs;
  cs.tol = base.sim.tol;
  cs.dt_max = base.sim.dt_max;
  // A zero-amplitude tone has no phase to screen.
  const int phases = a_hat == 0.0 ? 1 : std::max(opt.n_phases, 1);
  Classification worst = Classification::stable;
  long cycles = 0;
  for (int k = 0; k < phases; ++k) {
    const InterferenceSpec shifted = is.with_phase_offset(2.0 * std::numbers::pi * k / phases);
    StabilityVerdict v;
    try {
      v = classify_stability(cp, fs, shifted, inits, opt.n_cycles, opt.eps, cs);
    } catch (const std::exception&) {
      v.classification = Classification::inconclusive;
    }
    if (severity(v.classification) < severity(worst)) worst = v.classification;
    cycles = std::max(cycles, v.cycles_to_converge);
    if (worst == Classification::unstable) break;
  }
  pt.sim_verdict = worst;
  pt.cycles_to_converge = worst == Classification::stable ? cycles : -1;
  return pt;
}

RegionGrid sweep_serial(const Config& base, const GridSpec& grid, const SweepOptions& opt) {
  RegionGrid out;
  out.spec = grid;
  for (const auto& c : grid_coordinates(grid)) out.points.push_back(evaluate_point(base, c[0], c[1], c[2], opt));
  tally(out);
  return out;
}

RegionGrid sweep(const Config& base, const GridSpec& grid, const SweepOptions& opt) {
  RegionGrid out;
  out.spec = grid;
  const auto coords = grid_coordinates(grid);
  out.points.resize(coords.size());
  const long n = static_cast<long>(coords.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out.points[i] = evaluate_point(base, coords[i][0], coords[i][1], coords[i][2], opt);
  tally(out);
  return out;
}

std::string sweep_csv(const RegionGrid& grid) {
  std::ostringstream out;
  out << "tau_hat,a_hat,omega_hat,thm1_lhs,thm2_lhs_a,thm2_lhs_b,thm_pass,sim_verdict,cycles_to_converge,"
         "format_version\n";
  for (const GridPoint& p : grid.points) {
    out << format_number(p.tau_hat) << ',' << format_number(p.a_hat) << ',' << format_number(p.omega_hat) << ','
        << format_number(p.thm1_lhs) << ',' << format_number(p.thm2_lhs_a) << ',' << format_number(p.thm2_lhs_b)
        << ',' << (p.thm_pass ? "true" : "false") << ',' << to_string(p.sim_verdict) << ','
        << p.cycles_to_converge << ',' << kSweepFormatVersion << '\n';
  }
  return out.str();
}

}  // namespace lpcm
