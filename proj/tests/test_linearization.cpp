#include <doctest.h>

#include <array>
#include <cmath>

#include "lpcm/criteria.hpp"
#include "lpcm/linearization.hpp"

using namespace lpcm;

namespace {

const ConverterParams kUnit{1.0, 1.0, 1.0, 0.5, 2.0, 2.0};

InterferenceSpec locked_tone(double amp, double omega, double phase) {
  InterferenceSpec is;
  is.phase_mode = PhaseMode::locked;
  is.components.push_back({amp, omega, phase});
  return is;
}

}  // namespace

TEST_CASE("worked example") {
  const FilterSpec fs{1.0};
  const OperatingPoint op = equilibrium(kUnit, fs, {}, 2.0);
  const LinearizedModel lm = linearize(op, kUnit, fs, {});
  CHECK(lm.c1 == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(lm.c2 == doctest::Approx(-2.0 * std::exp(-2.0) + std::exp(-1.0) * 2.153781).epsilon(1e-6));
  CHECK(lm.c2 == doctest::Approx(0.52167).epsilon(1e-5));
  CHECK(lm.lambda_cl == doctest::Approx(0.45213).epsilon(1e-5));
  CHECK(lm.b_pole == doctest::Approx(std::exp(-2.0)));
  CHECK(lm.gain_K == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))));
  CHECK(lm.psi1 == 0.0);
  CHECK(fd_jacobian(op, kUnit, fs, {}, 1e-6) == doctest::Approx(lm.lambda_cl).epsilon(1e-6));
}

TEST_CASE("crossing slope equals the filter slope at the crossing") {
  const InterferenceSpec is = locked_tone(0.05, 4.0, 0.2);
  const FilterSpec fs{0.6};
  const OperatingPoint op = equilibrium(kUnit, fs, is, 2.0);
  const LinearizedModel lm = linearize(op, kUnit, fs, is);
  const CycleMap map(kUnit, fs, is);
  CHECK(lm.crossing_slope == doctest::Approx(map.slope({op.i_p, op.i_c, 0.0, 0}, op.t_on)).epsilon(1e-10));
  CHECK(lm.c2 == doctest::Approx(lm.psi1 + lm.psi2));
  CHECK(lm.psi1 == doctest::Approx(psi1_at(is, fs.tau, op.t_on)).epsilon(1e-12));
  CHECK(lm.psi2 == doctest::Approx(psi2_transition(kUnit, fs, is, op.i_c, op.t_on)).epsilon(1e-10));
  CHECK(fd_jacobian(op, kUnit, fs, is, 1e-6) == doctest::Approx(lm.lambda_cl).epsilon(1e-6));
}

TEST_CASE("deadbeat limit") {
  const FilterSpec fs{1e-3};
  const OperatingPoint op = equilibrium(kUnit, fs, {}, 2.0);
  CHECK(std::abs(linearize(op, kUnit, fs, {}).lambda_cl) < 1e-6);
  CHECK(std::abs(fd_jacobian(op, kUnit, fs, {}, 1e-6)) < 1e-2);
}

TEST_CASE("freerun interference is refused") {
  InterferenceSpec is;
  is.components.push_back({0.1, 1.0, 0.0});
  OperatingPoint op = equilibrium(kUnit, FilterSpec{1.0}, {}, 2.0);
  CHECK_THROWS_AS(linearize(op, kUnit, FilterSpec{1.0}, is), ModelError);
}

TEST_CASE("root locus") {
  const FilterSpec fs{1.0};
  const OperatingPoint op = equilibrium(kUnit, fs, {}, 2.0);
  const std::array<double, 4> gains{0.0, 1.0, 10.0, 1e9};
  const auto locus = root_locus(op, kUnit, fs, {}, gains);
  REQUIRE(locus.size() == 4);
  CHECK(locus[0].pole == 1.0);
  CHECK(locus[1].pole == doctest::Approx(0.45213).epsilon(1e-5));
  CHECK(locus[2].pole < locus[1].pole);
  CHECK(locus[3].pole == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(locus[1].kappa == 1.0);

  const auto raw = root_locus(op, kUnit, fs, {}, gains, true);
  CHECK(raw[0].pole == 1.0);
  CHECK(raw[1].pole == doctest::Approx(0.0));
}
