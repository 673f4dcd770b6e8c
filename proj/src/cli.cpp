#include "lpcm/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "lpcm/config.hpp"
#include "lpcm/criteria.hpp"
#include "lpcm/linearization.hpp"
#include "lpcm/number_format.hpp"
#include "lpcm/sweep.hpp"
#include "lpcm/switching_sim.hpp"

namespace lpcm {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::string report_json(const StabilityReport& r) {
  ordered_json j;
  const NormalizedParams& np = r.normalized;
  j["normalized"] = {{"tau_hat", number_json(np.tau_hat)},
                     {"a_ub_hat", number_json(np.a_ub_hat)},
                     {"i_max_hat", number_json(np.i_max_hat)},
                     {"omega_l_hat", number_json(np.omega_l_hat)},
                     {"t_on_min_hat", number_json(np.t_on_min_hat)},
                     {"t_min_hat", number_json(np.t_min_hat)},
                     {"b", number_json(np.b)},
                     {"d", number_json(np.d)},
                     {"t_base", number_json(np.t_base)}};
  j["thm1_lhs"] = number_json(r.thm1_lhs);
  j["thm1_pass"] = r.thm1_pass;
  j["thm1_margin"] = number_json(r.thm1_margin);
  j["thm2_lhs_a"] = number_json(r.thm2_lhs_a);
  j["thm2_lhs_b"] = number_json(r.thm2_lhs_b);
  j["thm2_pass"] = r.thm2_pass;
  j["thm2_margin_a"] = number_json(r.thm2_margin_a);
  j["thm2_margin_b"] = number_json(r.thm2_margin_b);
  j["k0"] = number_json(r.k0);
  j["k1"] = number_json(r.k1);
  j["k2"] = number_json(r.k2);
  j["k3"] = number_json(r.k3);
  j["K1"] = number_json(r.k_1);
  j["K2"] = number_json(r.k_2);
  j["psi1_max"] = number_json(r.psi1_max);
  j["psi2_min"] = number_json(r.psi2_min);
  j["psi2_max"] = number_json(r.psi2_max);
  j["b_xi"] = number_json(r.b_xi);
  j["gain_G"] = number_json(r.gain_G);
  j["gain_F"] = number_json(r.gain_F);
  j["small_gain_product"] = number_json(r.small_gain_product);
  j["internal_lhs_a"] = number_json(r.internal_lhs_a);
  j["internal_lhs_b"] = number_json(r.internal_lhs_b);
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << "n,t_abs,t_on,i_p,i_v,clamped\n";
  for (const CycleRecord& c : t.cycles)
    out << c.n << ',' << format_number(c.t_abs) << ',' << format_number(c.t_on) << ',' << format_number(c.i_p)
        << ',' << format_number(c.i_v) << ',' << (c.clamped ? 1 : 0) << '\n';
  return out.str();
}

std::string waveform_csv(const std::vector<WaveSample>& wave) {
  std::ostringstream out;
  out << "t,i_L,i_m,y_filter,variant_id\n";
  for (const WaveSample& w : wave)
    out << format_number(w.t) << ',' << format_number(w.i_l) << ',' << format_number(w.i_m) << ','
        << format_number(w.y) << ',' << w.variant << '\n';
  return out.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

CrossingSettings crossing_settings(const Config& cfg) {
  CrossingSettings cs;
  cs.tol = cfg.sim.tol;
  cs.dt_max = cfg.sim.dt_max;
  return cs;
}

double initial_peak(const Config& cfg, std::optional<double> ip0, std::optional<std::uint64_t> seed) {
  if (ip0) return *ip0;
  if (seed) return spread_initial_states(cfg.converter, 1, seed).front().i_p_prev;
  return cfg.converter.i_c;
}

double waveform_spacing(const Config& cfg, double requested) {
  if (requested > 0.0) return requested;
  if (cfg.sim.dt_max > 0.0) return cfg.sim.dt_max;
  return std::min(cfg.filter.tau, cfg.converter.t_off) / 20.0;
}

std::vector<double> kappa_values(const Axis& axis) {
  std::vector<double> k;
  for (int i = 0; i < axis.count; ++i) k.push_back(axis.at(i));
  return k;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis of filtered constant off-time peak current-mode control", "lpcm"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;

  std::optional<int> cycles;
  std::optional<double> ip0;
  std::string wave_path;
  double wave_dt = 0.0;
  std::string tau_axis = "0.25:2:8";
  std::string amp_axis = "0:0.5:11";
  std::string freq_axis = "0.5:4:8";
  int phases = 8;
  int inits = 5;
  std::optional<double> eps;
  bool strict = false;
  bool serial = false;
  std::string kappa_axis = "0:10:101";
  bool unfiltered = false;

  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "output file (default: standard output)");
    sub->add_option("--seed", seed, "seed for randomized initial conditions");
  };

  auto* check = app.add_subcommand("check", "evaluate both criteria and emit a JSON report");
  common(check, true);

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate the cycle map and emit a trajectory CSV");
  common(simulate_cmd, true);
  simulate_cmd->add_option("--cycles", cycles, "number of cycles (default: [sim] n_cycles)");
  simulate_cmd->add_option("--ip0", ip0, "initial previous peak current [A] (default: i_c)");
  simulate_cmd->add_option("--waveform", wave_path, "also write the dense waveform CSV here");
  simulate_cmd->add_option("--dt", wave_dt, "waveform sample spacing [s]");

  auto* waveforms = app.add_subcommand("waveforms", "emit the four filter/interference comparison traces");
  common(waveforms, true);
  waveforms->add_option("--cycles", cycles, "cycles per variant (default 5)");
  waveforms->add_option("--ip0", ip0, "initial previous peak current [A] (default: i_c)");
  waveforms->add_option("--dt", wave_dt, "sample spacing [s]");

  auto* sweep_cmd = app.add_subcommand("sweep", "map theorem predictions against simulation over a grid");
  common(sweep_cmd, false);
  sweep_cmd->add_option("--tau", tau_axis, "tau_hat axis start:stop:count")->capture_default_str();
  sweep_cmd->add_option("--amp", amp_axis, "a_hat axis start:stop:count")->capture_default_str();
  sweep_cmd->add_option("--freq", freq_axis, "omega_hat axis start:stop:count")->capture_default_str();
  sweep_cmd->add_option("--phases", phases, "interference phases screened per point")->capture_default_str();
  sweep_cmd->add_option("--inits", inits, "initial conditions per phase")->capture_default_str();
  sweep_cmd->add_option("--cycles", cycles, "cycles per trajectory (default: [sim] n_cycles)");
  sweep_cmd->add_option("--eps", eps, "relative convergence threshold (default: [sim] eps)");
  sweep_cmd->add_flag("--strict", strict, "exit 2 when a theorem-passing point is not simulated stable");
  sweep_cmd->add_flag("--serial", serial, "use the single-threaded reference sweep");

  auto* locus = app.add_subcommand("rootlocus", "emit the closed-loop pole versus feedback scaling");
  common(locus, true);
  locus->add_option("--kappa", kappa_axis, "kappa axis start:stop:count")->capture_default_str();
  locus->add_flag("--unfiltered", unfiltered, "branch with the comparator reading the sense signal directly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (check->parsed()) {
      const Config cfg = load_config(config_path);
      write_text(out_path, report_json(proof_internals(cfg.converter, cfg.filter, cfg.interference)), out);
    } else if (simulate_cmd->parsed()) {
      const Config cfg = load_config(config_path);
      CycleState init;
      init.i_p_prev = initial_peak(cfg, ip0, seed);
      init.y_prev = cfg.converter.i_c;
      const double dt = wave_path.empty() ? 0.0 : waveform_spacing(cfg, wave_dt);
      const Trajectory t = simulate(cfg.converter, cfg.filter, cfg.interference, init,
                                    cycles.value_or(cfg.sim.n_cycles), crossing_settings(cfg), dt);
      write_text(out_path, trajectory_csv(t), out);
      if (!wave_path.empty()) write_text(wave_path, waveform_csv(t.wave), out);
    } else if (waveforms->parsed()) {
      const Config cfg = load_config(config_path);
      const auto wave = comparison_waveforms(cfg.converter, cfg.filter, cfg.interference,
                                             initial_peak(cfg, ip0, seed), cycles.value_or(5),
                                             waveform_spacing(cfg, wave_dt));
      write_text(out_path, waveform_csv(wave), out);
    } else if (sweep_cmd->parsed()) {
      const Config base = config_path.empty() ? default_sweep_base()
                                              : load_config(config_path);
      GridSpec grid{Axis::parse(tau_axis, "tau"), Axis::parse(amp_axis, "amp"), Axis::parse(freq_axis, "freq")};
      SweepOptions opt;
      opt.n_phases = phases;
      opt.n_inits = inits;
      opt.n_cycles = cycles.value_or(base.sim.n_cycles);
      opt.eps = eps.value_or(base.sim.eps);
      opt.seed = seed;
      if (opt.n_phases < 1) throw ValidationError("phases", "must be at least 1");
      if (opt.n_inits < 1) throw ValidationError("inits", "must be at least 1");
      if (opt.n_cycles < 1) throw ValidationError("cycles", "must be at least 1");
      if (!(opt.eps > 0.0)) throw ValidationError("eps", "must be positive");
      const RegionGrid result = serial ? sweep_serial(base, grid, opt) : sweep(base, grid, opt);
      write_text(out_path, sweep_csv(result), out);
      err << "points=" << result.points.size() << " theorem_pass=" << result.theorem_pass
          << " simulated_stable=" << result.simulated_stable
          << " containment_violations=" << result.containment_violations << '\n';
      if (strict && result.containment_violations > 0) {
        err << "error: theorem-passing points not classified stable\n";
        return 2;
      }
    } else if (locus->parsed()) {
      const Config cfg = load_config(config_path);
      const OperatingPoint op = equilibrium(cfg.converter, cfg.filter, cfg.interference, cfg.converter.i_c);
      const auto gains = kappa_values(Axis::parse(kappa_axis, "kappa"));
      std::ostringstream csv;
      csv << "kappa,pole_re,pole_im\n";
      for (const LocusPoint& p : root_locus(op, cfg.converter, cfg.filter, cfg.interference, gains, unfiltered))
        csv << format_number(p.kappa) << ',' << format_number(p.pole) << ",0\n";
      write_text(out_path, csv.str(), out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace lpcm
