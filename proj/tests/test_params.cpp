#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

#include "lpcm/config.hpp"
#include "lpcm/number_format.hpp"
#include "lpcm/params.hpp"

using namespace lpcm;

namespace {

ConverterParams unit_converter() { return {1.0, 1.0, 1.0, 1.0, 1.0, 1.0}; }

std::string field_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("normalize unit parameters") {
  const NormalizedParams np = normalize(unit_converter(), FilterSpec{1.0}, {});
  CHECK(np.tau_hat == 1.0);
  CHECK(np.t_on_min_hat == 1.0);
  CHECK(np.t_min_hat == 2.0);
  CHECK(np.d == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(np.b == doctest::Approx(0.135335).epsilon(1e-6));
  CHECK(np.a_ub_hat == 0.0);
  CHECK(np.i_max_hat == 1.0);
  CHECK(std::isinf(np.omega_l_hat));
  CHECK(np.attenuation() == 0.0);
}

TEST_CASE("normalize with one tone") {
  ConverterParams cp{2.0, 2.0, 0.5, 0.5, 1.0, 1.0};
  InterferenceSpec is;
  is.components.push_back({0.3, 20.0, 0.0});
  const NormalizedParams np = normalize(cp, FilterSpec{1.5}, is);
  CHECK(np.tau_hat == doctest::Approx(3.0));
  CHECK(np.a_ub_hat == doctest::Approx(0.3));
  CHECK(np.omega_l_hat == doctest::Approx(20.0 * 0.5 / (2.0 * std::numbers::pi)));
  CHECK(np.omega_l_hat == doctest::Approx(1.5915).epsilon(1e-4));
}

TEST_CASE("small tau drives the decay constants to zero") {
  const NormalizedParams np = normalize(unit_converter(), FilterSpec{1e-3}, {});
  CHECK(np.d < 1e-300);
  CHECK(np.b <= np.d);
  CHECK(np.b < np.d + 1e-300);
}

TEST_CASE("normalized invariants") {
  for (double tau : {0.05, 0.3, 1.0, 7.0}) {
    const NormalizedParams np = normalize({1.0, 2.0, 0.7, 0.4, 3.0, 1.0}, FilterSpec{tau}, {});
    CHECK(np.t_min_hat == doctest::Approx(np.t_on_min_hat + 1.0));
    CHECK(0.0 < np.b);
    CHECK(np.b < np.d);
    CHECK(np.d < 1.0);
  }
}

TEST_CASE("normalization is invariant under unit rescaling") {
  ConverterParams cp{1.3, 0.9, 0.8, 0.6, 2.0, 1.5};
  InterferenceSpec is;
  is.components.push_back({0.2, 5.0, 0.4});
  is.components.push_back({0.1, 9.0, 1.0});
  const NormalizedParams ref = normalize(cp, FilterSpec{0.7}, is);
  const double ts = 1e-6;  // seconds to microseconds style rescale
  const double cs = 3.0;   // current rescale
  ConverterParams cp2{cp.m1 * cs / ts, cp.m2 * cs / ts, cp.t_off * ts, cp.t_on_min * ts, cp.i_max * cs, cp.i_c * cs};
  InterferenceSpec is2 = is;
  for (Tone& t : is2.components) {
    t.amp *= cs;
    t.omega /= ts;
  }
  const NormalizedParams np = normalize(cp2, FilterSpec{0.7 * ts}, is2);
  CHECK(np.tau_hat == doctest::Approx(ref.tau_hat).epsilon(1e-12));
  CHECK(np.a_ub_hat == doctest::Approx(ref.a_ub_hat).epsilon(1e-12));
  CHECK(np.i_max_hat == doctest::Approx(ref.i_max_hat).epsilon(1e-12));
  CHECK(np.omega_l_hat == doctest::Approx(ref.omega_l_hat).epsilon(1e-12));
  CHECK(np.d == doctest::Approx(ref.d).epsilon(1e-12));
  CHECK(np.b == doctest::Approx(ref.b).epsilon(1e-12));
}

TEST_CASE("denormalize inverts make_normalized") {
  const NormalizedParams np = make_normalized(0.8, 1.2, 0.05, 1.7, 0.9, 2e-6, 3e5);
  const PhysicalParams pp = denormalize(np);
  const NormalizedParams back = normalize(pp.converter, pp.filter, pp.interference);
  CHECK(back.tau_hat == doctest::Approx(0.8));
  CHECK(back.t_on_min_hat == doctest::Approx(1.2));
  CHECK(back.a_ub_hat == doctest::Approx(0.05));
  CHECK(back.omega_l_hat == doctest::Approx(1.7));
  CHECK(back.i_max_hat == doctest::Approx(0.9));
  CHECK(pp.interference.phase_mode == PhaseMode::locked);
  CHECK(denormalize(make_normalized(1, 1, 0, INFINITY, 1)).interference.empty());
}

TEST_CASE("validation names the field") {
  auto cp = unit_converter();
  CHECK(field_of([&] { validate(FilterSpec{-1.0}); }) == "tau");
  CHECK(field_of([&] { validate(FilterSpec{NAN}); }) == "tau");
  cp.m1 = 0.0;
  CHECK(field_of([&] { validate(cp); }) == "m1");
  cp = unit_converter();
  cp.t_off = INFINITY;
  CHECK(field_of([&] { validate(cp); }) == "t_off");
  cp = unit_converter();
  cp.i_c = 2.0;
  CHECK(field_of([&] { validate(cp); }) == "i_c");
  InterferenceSpec is;
  is.components.push_back({-0.1, 1.0, 0.0});
  CHECK(field_of([&] { validate(is); }) == "amp");
  is.components[0] = {0.1, 0.0, 0.0};
  CHECK(field_of([&] { validate(is); }) == "omega");
}

TEST_CASE("interference derived quantities") {
  InterferenceSpec is;
  CHECK(is.a_ub() == 0.0);
  CHECK(std::isinf(is.omega_l()));
  is.components = {{0.2, 3.0, 0.0}, {0.5, 1.5, 1.0}};
  CHECK(is.a_ub() == doctest::Approx(0.7));
  CHECK(is.omega_l() == 1.5);
  CHECK(is.omega_max() == 3.0);
  CHECK(is.value(0.3) == doctest::Approx(0.2 * std::sin(0.9) + 0.5 * std::sin(0.45 + 1.0)));
  CHECK(is.derivative(0.3) == doctest::Approx(0.6 * std::cos(0.9) + 0.75 * std::cos(1.45)));
}

TEST_CASE("phase modes") {
  InterferenceSpec is;
  is.components = {{1.0, 2.0, 0.5}};
  is.phase_mode = PhaseMode::locked;
  CHECK(is.at_time(3.0).value(0.1) == is.value(0.1));
  is.phase_mode = PhaseMode::freerun;
  CHECK(is.at_time(3.0).value(0.1) == doctest::Approx(std::sin(2.0 * 3.1 + 0.5)));
}

TEST_CASE("config minimal defaults") {
  const Config cfg = parse_config(R"(
[converter]
m1 = 1
m2 = 1
t_off = 1e-6
t_on_min = 2e-7
i_max = 3

[filter]
tau = 5e-7
)");
  CHECK(cfg.interference.empty());
  CHECK(cfg.interference.phase_mode == PhaseMode::freerun);
  CHECK(cfg.converter.i_c == 3.0);
  CHECK(cfg.sim.n_cycles == 500);
  CHECK(cfg.sim.eps == 1e-3);
}

TEST_CASE("config errors") {
  const std::string head = "[converter]\nm1 = 1\nm2 = 1\nt_off = 1\nt_on_min = 1\ni_max = 1\n";
  CHECK(field_of([&] { parse_config(head + "[filter]\ntau = -1\n"); }) == "tau");
  CHECK(field_of([&] { parse_config(head); }) == "tau");
  CHECK_THROWS_AS(parse_config(head + "[filter]\ntau = 1\nbogus = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(head + "[filter]\ntau = 1\ntau = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(head + "[filter]\ntau = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(head + "[filter]\ntau = 1\n[interference_mode]\nphase = \"sideways\"\n"),
                  std::exception);
  try {
    parse_config(head + "[filter]\ntau = 1\nbogus = 2\n");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 9);
  }
}

TEST_CASE("config canonical round trip") {
  const Config cfg = parse_config(R"(# comment
[converter]
m1 = 2.5e5   # A/s
m2 = 1.5e5
t_off = 4e-6
t_on_min = 1e-6
i_max = 10
i_c = 7.25

[filter]
tau = 3.3e-7

[interference_mode]
phase = "locked"

[[interference]]
amp = 0.25
omega = 6.283185307179586e6
phase = 0.1

[[interference]]
amp = 0.125
omega = 1e7

[sim]
n_cycles = 200
eps = 1e-4
)");
  REQUIRE(cfg.interference.components.size() == 2);
  CHECK(cfg.interference.components[1].phase == 0.0);
  CHECK(cfg.interference.phase_mode == PhaseMode::locked);
  const std::string text = to_canonical(cfg);
  const Config again = parse_config(text);
  CHECK(again == cfg);
  CHECK(to_canonical(again) == text);

  const auto path = std::filesystem::temp_directory_path() / "lpcm_roundtrip.toml";
  std::ofstream(path) << text;
  CHECK(load_config(path) == cfg);
  std::filesystem::remove(path);
  CHECK_THROWS(load_config(path));
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 6.02214076e23, 0.45213180419509413}) {
    double back = 0.0;
    REQUIRE(parse_number(format_number(v), back));
    CHECK(back == v);
  }
  CHECK(format_number(INFINITY) == "inf");
  double x = 0.0;
  CHECK(parse_number("+3", x));
  CHECK(x == 3.0);
  CHECK_FALSE(parse_number("3x", x));
  CHECK_FALSE(parse_number("", x));
}
