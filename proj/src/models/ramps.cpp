#include <cmath>

#include "ecd/errors.hpp"
#include "ecd/models.hpp"

namespace ecd {

RampKind parse_ramp_kind(const std::string& name) {
  if (name == "linear") return RampKind::linear;
  if (name == "local_adiabatic") return RampKind::local_adiabatic;
  if (name == "boundary_cancel") return RampKind::boundary_cancel;
  throw DomainError("unknown ramp kind '" + name + "' (linear | local_adiabatic | boundary_cancel)");
}

std::string ramp_kind_name(RampKind kind) {
  switch (kind) {
    case RampKind::linear:
      return "linear";
    case RampKind::local_adiabatic:
      return "local_adiabatic";
    case RampKind::boundary_cancel:
      return "boundary_cancel";
  }
  return "linear";
}

Schedule ramp_schedule(RampKind kind, double lambda_start, double lambda_end, double tau, double coupling) {
  if (!(tau > 0.0)) throw DomainError("ramp_schedule: tau must be positive");
  const double a = lambda_start;
  const double delta = lambda_end - lambda_start;
  switch (kind) {
    case RampKind::linear:
      return Schedule([a, delta, tau](double t) { return a + delta * (t / tau); },
                      [delta, tau](double) { return delta / tau; }, 0.0, tau);
    case RampKind::boundary_cancel:
      return Schedule(
          [a, delta, tau](double t) {
            const double s = t / tau;
            if (s >= 1.0) return a + delta;
            return a + delta * (s * s * s * (10.0 + s * (-15.0 + 6.0 * s)));
          },
          [delta, tau](double t) {
            const double s = t / tau;
            return delta / tau * 30.0 * s * s * (1.0 - s) * (1.0 - s);
          },
          0.0, tau);
    case RampKind::local_adiabatic: {
      if (!(coupling > 0.0)) throw DomainError("local_adiabatic ramp needs a positive gap coupling");
      // dlambda/dt = k (4 g^2 + lambda^2)  =>  lambda = 2 g tan(u), u linear in t.
      const double two_g = 2.0 * coupling;
      const double u0 = std::atan(lambda_start / two_g);
      const double u1 = std::atan(lambda_end / two_g);
      const double b = lambda_end;
      return Schedule(
          [two_g, u0, u1, tau, b](double t) {
            if (t >= tau) return b;
            return two_g * std::tan(u0 + (u1 - u0) * (t / tau));
          },
          [two_g, u0, u1, tau](double t) {
            const double c = std::cos(u0 + (u1 - u0) * (t / tau));
            return two_g * (u1 - u0) / (tau * c * c);
          },
          0.0, tau);
    }
  }
  throw DomainError("ramp_schedule: unknown kind");
}

Schedule local_adiabatic_ramp(const std::function<double(double)>& gap, double lambda_start, double lambda_end,
                              double tau, int nodes) {
  if (!(tau > 0.0)) throw DomainError("local_adiabatic_ramp: tau must be positive");
  if (nodes < 3) throw DomainError("local_adiabatic_ramp: need at least 3 nodes");
  if (lambda_start == lambda_end) return Schedule::constant(lambda_start).with_domain(0.0, tau);
  // s(lambda) = int dlambda / gap^2, normalized; then invert by interpolation.
  std::vector<double> lam(nodes);
  std::vector<double> w(nodes);
  for (int k = 0; k < nodes; ++k) {
    lam[k] = lambda_start + (lambda_end - lambda_start) * k / (nodes - 1);
    const double g = gap(lam[k]);
    if (!(g > 0.0)) throw DomainError("local_adiabatic_ramp: gap must be positive along the path");
    w[k] = 1.0 / (g * g);
  }
  std::vector<double> cum(nodes, 0.0);
  const double h = std::abs(lambda_end - lambda_start) / (nodes - 1);
  for (int k = 1; k < nodes; ++k) cum[k] = cum[k - 1] + 0.5 * h * (w[k] + w[k - 1]);
  std::vector<double> t(nodes);
  for (int k = 0; k < nodes; ++k) t[k] = tau * cum[k] / cum.back();
  return Schedule::sampled(std::move(t), std::move(lam));
}

double dispersive_coupling(double g1, double g2, double detuning) {
  if (detuning == 0.0) throw DomainError("dispersive_coupling: detuning must be nonzero");
  return g1 * g2 / (2.0 * detuning);
}

}  // namespace ecd
