#include "lpcm/linearization.hpp"

#include <cmath>

namespace lpcm {
namespace {

void require_fixed_point(const InterferenceSpec& is) {
  if (is.phase_mode == PhaseMode::freerun && !is.empty())
    throw ModelError("linearization requires locked interference phase or no interference");
}

double pole(double c1, double c2, double m1, double kappa) {
  const double den = c2 + kappa * m1 * c1;
  if (kappa == 0.0 || den == 0.0) return 1.0;
  return c2 / den;
}

}  // namespace

LinearizedModel linearize(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
                          const InterferenceSpec& is) {
  require_fixed_point(is);
  const double tau = fs.tau;
  const FilterKernels k(tau);
  const ForcedResponse fr(is, tau);

  LinearizedModel lm;
  lm.d = std::exp(-op.t_on / tau);
  lm.b_pole = std::exp(-op.period / tau);
  lm.c1 = k.step(op.t_on);
  lm.gain_K = 1.0 / lm.c1;
  lm.psi1 = fr.zero_state_slope(op.t_on);
  lm.psi2 = -lm.b_pole / tau * op.i_c + lm.d / tau * op.i_v;
  lm.c2 = lm.psi2 + lm.psi1;
  lm.crossing_slope = lm.c2 + cp.m1 * lm.c1;
  lm.psi1_moment_form = is.value(op.t_on) / tau + lm.d / tau * spectral_moment(is);
  if (!(lm.crossing_slope > 0.0))
    throw ModelError("filter output does not cross the command upward at the operating point");
  lm.lambda_cl = lm.c2 / lm.crossing_slope;
  return lm;
}

double fd_jacobian(const OperatingPoint& op, const ConverterParams& cp, const FilterSpec& fs,
                   const InterferenceSpec& is, double h_step) {
  require_fixed_point(is);
  ConverterParams at = cp;
  at.i_c = op.i_c;
  CrossingSettings cs;
  cs.tol = -1.0;
  const CycleMap map(at, fs, is, cs);
  const auto peak_after = [&](double i_p_prev) {
    CycleState s;
    s.i_p_prev = i_p_prev;
    s.y_prev = op.i_c;
    OnTime on;
    const CycleState next = map.advance(s, &on);
    if (on.clamped) throw ModelError("perturbed cycle hit the minimum on time");
    return next.i_p_prev;
  };
  return (peak_after(op.i_p + h_step) - peak_after(op.i_p - h_step)) / (2.0 * h_step);
}

std::vector<LocusPoint> root_locus(const OperatingPoint& op, const ConverterParams& cp,
                                   const FilterSpec& fs, const InterferenceSpec& is,
                                   std::span<const double> gains, bool unfiltered) {
  require_fixed_point(is);
  double c1 = 1.0;
  double c2 = is.derivative(op.t_on);
  if (!unfiltered) {
    const LinearizedModel lm = linearize(op, cp, fs, is);
    c1 = lm.c1;
    c2 = lm.c2;
  }
  std::vector<LocusPoint> out;
  out.reserve(gains.size());
  for (const double kappa : gains) out.push_back({kappa, pole(c1, c2, cp.m1, kappa)});
  return out;
}

}  // namespace lpcm
