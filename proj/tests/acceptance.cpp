#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "lpcm/criteria.hpp"
#include "lpcm/cycle_map.hpp"
#include "lpcm/filter_response.hpp"
#include "lpcm/linearization.hpp"
#include "lpcm/sweep.hpp"
#include "lpcm/switching_sim.hpp"
#include "oracles.hpp"

using namespace lpcm;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

GridSpec acceptance_grid() {
  return {Axis::parse("0.25:2:8", "tau"), Axis::parse("0:0.5:11", "amp"), Axis::parse("0.5:4:8", "freq")};
}

// Shared by criteria 4 and 6.
const RegionGrid& acceptance_sweep() {
  static const RegionGrid grid = sweep(default_sweep_base(), acceptance_grid(), SweepOptions{});
  return grid;
}

Outcome closed_forms_vs_quadrature() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const double tau = 0.05 + 3.0 * u(rng);
    const double amp = 2.0 * u(rng);
    const double omega = 0.2 + 20.0 * u(rng);
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const double t = 5.0 * u(rng);
    const double m1 = 0.1 + 3.0 * u(rng);
    const FilterKernels k(tau);
    InterferenceSpec is;
    is.components.push_back({amp, omega, phi});
    const double e_step = std::abs(k.step(t) - oracle::convolve([](double) { return 1.0; }, tau, t));
    const double e_ramp = std::abs(k.ramp(m1, t) - oracle::convolve([&](double s) { return m1 * s; }, tau, t));
    const double e_zs = std::abs(interference_zero_state(is, tau, t) -
                                 oracle::convolve([&](double s) { return is.value(s); }, tau, t));
    worst = std::max({worst, e_step, e_ramp, e_zs});
  }
  if (!(worst <= 1e-8)) fail(o, "max abs error " + num(worst));
  o.detail = o.pass ? "max abs error " + num(worst) : o.detail;
  return o;
}

Outcome linearization_vs_jacobian() {
  Outcome o;
  const ConverterParams unit{1.0, 1.0, 1.0, 0.5, 2.0, 2.0};
  const OperatingPoint op0 = equilibrium(unit, FilterSpec{1.0}, {}, 2.0);
  const double lam0 = fd_jacobian(op0, unit, FilterSpec{1.0}, {}, 1e-6);
  const double lin0 = linearize(op0, unit, FilterSpec{1.0}, {}).lambda_cl;
  if (std::abs(lam0 - 0.45213) > 1e-4 * 0.45213) fail(o, "worked point numeric pole " + num(lam0));
  if (std::abs(lin0 - lam0) > 1e-4 * std::abs(lam0)) fail(o, "worked point analytic pole " + num(lin0));

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    ConverterParams cp;
    cp.m1 = 0.5 + 1.5 * u(rng);
    cp.m2 = 0.5 + 1.5 * u(rng);
    cp.t_off = 0.5 + 1.5 * u(rng);
    const double t_on = cp.m2 * cp.t_off / cp.m1;
    cp.t_on_min = t_on * (0.2 + 0.6 * u(rng));
    const FilterSpec fs{t_on * (0.3 + 2.7 * u(rng))};
    const FilterKernels k(fs.tau);
    const double b = std::exp(-(t_on + cp.t_off) / fs.tau);
    // Smallest command with a nonnegative valley current, scaled up.
    const double floor = k.ramp(cp.m1, t_on) / (1.0 - b);
    cp.i_c = floor * (1.2 + 2.0 * u(rng));
    cp.i_max = cp.i_c;
    const OperatingPoint op = equilibrium(cp, fs, {}, cp.i_c);
    const double lin = linearize(op, cp, fs, {}).lambda_cl;
    const double fd = fd_jacobian(op, cp, fs, {}, 1e-6 * op.i_p);
    const double rel = std::abs(lin - fd) / std::abs(fd);
    worst = std::max(worst, rel);
  }
  if (!(worst <= 1e-4)) fail(o, "max relative gap " + num(worst));
  if (o.pass) o.detail = "worked pole " + num(lam0) + ", max relative gap " + num(worst);
  return o;
}

Outcome theorem1_soundness() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int accepted = 0;
  int violations = 0;
  double min_slope = INFINITY;
  while (accepted < 200) {
    const double tau = 0.1 + 4.9 * u(rng);
    const double ton = 0.1 + 2.9 * u(rng);
    const double a = 0.4 * u(rng) * u(rng);
    const double w = 0.2 + 4.8 * u(rng);
    const double i = 3.0 * u(rng);
    const NormalizedParams np = make_normalized(tau, ton, a, w, i);
    if (theorem1_margin(np).margin < 0.05) continue;
    ++accepted;
    const PhysicalParams pp = denormalize(np);
    ContinuitySettings cs;
    cs.step = np.t_min_hat * np.t_base / 1e4;
    const ContinuityResult r = continuity_check_phases(pp.converter, pp.filter, pp.interference, 8, cs);
    min_slope = std::min(min_slope, r.min_slope);
    if (!r.monotone) ++violations;
  }
  if (violations > 0) fail(o, std::to_string(violations) + " monotonicity violations");
  if (o.pass) o.detail = "200 sets, smallest slope " + num(min_slope);
  return o;
}

Outcome theorem2_containment() {
  Outcome o;
  const RegionGrid& g = acceptance_sweep();
  if (g.points.size() != 704) fail(o, "grid size " + std::to_string(g.points.size()));
  if (g.containment_violations != 0) fail(o, std::to_string(g.containment_violations) + " containment violations");
  if (g.theorem_pass == 0) fail(o, "no theorem-passing point on the grid");
  if (o.pass)
    o.detail = std::to_string(g.theorem_pass) + " passing points, " + std::to_string(g.simulated_stable) +
               " stable, 0 violations";
  return o;
}

Outcome trivial_reductions() {
  Outcome o;
  const double lhs = theorem1_margin(make_normalized(0.7, 0.9, 0.0, 1.0, 0.0)).lhs;
  if (lhs != 0.0) fail(o, "thm1 lhs " + num(lhs));

  const ConverterParams cp{1.0, 1.25, 1.0, 0.5, 1.25, 1.25};
  const FilterSpec fast{1e-3 * cp.t_off};
  for (const CycleState& init : spread_initial_states(cp, 5)) {
    const Trajectory t = simulate(cp, fast, {}, init, 10);
    for (std::size_t n = 2; n < t.cycles.size(); ++n)
      if (std::abs(t.cycles[n].i_p - cp.i_c) > 1e-3 * cp.i_c)
        fail(o, "deadbeat limit: cycle " + std::to_string(n) + " peak " + num(t.cycles[n].i_p));
  }

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    ConverterParams p{0.5 + u(rng), 0.5 + u(rng), 0.5 + u(rng), 0.0, 0.0, 0.0};
    const double t_on = p.m2 * p.t_off / p.m1;
    p.t_on_min = 0.5 * t_on;
    const FilterSpec fs{0.2 + u(rng)};
    InterferenceSpec is;
    is.phase_mode = PhaseMode::locked;
    is.components.push_back({0.02 * u(rng), 1.0 + 10.0 * u(rng), 6.0 * u(rng)});
    const double b = std::exp(-(t_on + p.t_off) / fs.tau);
    p.i_c = (FilterKernels(fs.tau).ramp(p.m1, t_on) + 0.05) / (1.0 - b) * (1.5 + u(rng));
    p.i_max = p.i_c;
    const OperatingPoint op = equilibrium(p, fs, is, p.i_c);
    worst = std::max(worst, std::abs(reconstruct_command(op, p, fs, is) - p.i_c) / p.i_c);
  }
  if (!(worst <= 1e-10)) fail(o, "identity relative error " + num(worst));
  if (o.pass) o.detail = "identity relative error " + num(worst);
  return o;
}

Outcome proof_internals_consistency() {
  Outcome o;
  double worst_slope_gap = 0.0;
  double worst_ratio = 0.0;
  int checked = 0;
  const Config base = default_sweep_base();
  const ConverterParams& cp = base.converter;
  for (const GridPoint& p : acceptance_sweep().points) {
    const FilterSpec fs{p.tau_hat * cp.t_off};
    InterferenceSpec is;
    is.phase_mode = PhaseMode::locked;
    is.components.push_back({p.a_hat * cp.m1 * cp.t_off, 2.0 * std::numbers::pi * p.omega_hat / cp.t_off, 0.0});
    const StabilityReport rep = proof_internals(cp, fs, is);
    for (int k = 0; k < 8; ++k) {
      const InterferenceSpec shifted = is.with_phase_offset(2.0 * std::numbers::pi * k / 8);
      OperatingPoint op;
      try {
        op = equilibrium(cp, fs, shifted, cp.i_c);
      } catch (const std::exception&) {
        continue;
      }
      // Fourth-order central difference.
      const double h = 1e-4 * op.t_on;
      const auto xi = [&](double dt) { return xi_eval(op, cp, fs, shifted, dt); };
      const double fd = (8.0 * (xi(h) - xi(-h)) - (xi(2.0 * h) - xi(-2.0 * h))) / (12.0 * h);
      const double psi = psi1_at(shifted, fs.tau, op.t_on) + psi2_transition(cp, fs, shifted, op.i_c, op.t_on);
      worst_slope_gap = std::max(worst_slope_gap, std::abs(fd - psi));
      if (!p.thm_pass) continue;
      ++checked;
      const double hi = std::max(20.0 * fs.tau, op.t_on) - op.t_on;
      const double lo = cp.t_on_min - op.t_on;
      const int samples = 20000;
      for (int s = 0; s <= samples; ++s) {
        const double dt = lo + (hi - lo) * s / samples;
        worst_ratio = std::max(worst_ratio, std::abs(xi_slope(op, cp, fs, shifted, dt)) / rep.b_xi);
      }
    }
  }
  if (!(worst_slope_gap <= 1e-8)) fail(o, "slope gap " + num(worst_slope_gap));
  if (checked == 0) fail(o, "no theorem-passing point to check");
  if (!(worst_ratio <= 1.0)) fail(o, "max |xi'|/B_xi " + num(worst_ratio));
  if (o.pass)
    o.detail = "slope gap " + num(worst_slope_gap) + ", max |xi'|/B_xi " + num(worst_ratio) + " over " +
               std::to_string(checked) + " cases";
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "lpcm_acceptance";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "design.toml";
  std::ofstream(cfg) << R"([converter]
m1 = 1
m2 = 1.25
t_off = 1
t_on_min = 1
i_max = 1.25

[filter]
tau = 0.5

[interference_mode]
phase = "locked"

[[interference]]
amp = 0.02
omega = 9.42477796076938
phase = 0.4
)";
  const std::string exe = LPCM_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"check", "check --config " + cfg.string() + " --seed 7"},
      {"simulate", "simulate --config " + cfg.string() + " --seed 7 --cycles 200"},
      {"sweep", "sweep --config " + cfg.string() + " --seed 7 --tau 0.25:2:4 --amp 0:0.5:4 --freq 0.5:4:3"},
  };
  for (const auto& [name, args] : runs) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / (name + std::to_string(k) + ".out");
      const std::string cmd = "\"" + exe + "\" " + args + " --out \"" + out.string() + "\" 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) fail(o, name + " exited with an error");
      outputs[k] = slurp(out);
    }
    if (outputs[0].empty()) fail(o, name + " produced no output");
    if (outputs[0] != outputs[1]) fail(o, name + " outputs differ");
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = "check, simulate, sweep byte-identical";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "closed-form responses match quadrature", 5.0, closed_forms_vs_quadrature},
      {2, "linearized pole matches finite-difference Jacobian", 10.0, linearization_vs_jacobian},
      {3, "theorem 1 soundness under dense slope sampling", 60.0, theorem1_soundness},
      {4, "theorem 2 containment over the sweep grid", 300.0, theorem2_containment},
      {5, "trivial reductions", 60.0, trivial_reductions},
      {6, "proof internals consistency", 60.0, proof_internals_consistency},
      {7, "determinism of seeded CLI runs", 60.0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = seconds_since(t0);
    if (o.pass && secs > c.budget_s) {
      o.pass = false;
      o.detail = "over time budget";
    }
    failed += !o.pass;
    std::printf("[%s] %d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
