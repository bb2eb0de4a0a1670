#include <cmath>
#include <memory>

#include "ecd/errors.hpp"
#include "ecd/models.hpp"

namespace ecd {

namespace three_level {

namespace {
Operator pair(int r, int c, cplx upper) {
  Matrix m = Matrix::Zero(3, 3);
  m(r, c) = upper;
  m(c, r) = std::conj(upper);
  return Operator::hermitian(m);
}
}  // namespace

Operator x01() { return pair(0, 1, 1.0); }
Operator y01() { return pair(0, 1, cplx(0.0, -1.0)); }
Operator x12() { return pair(1, 2, 1.0); }
Operator p1() { return outer(3, 1, 1); }
Operator y02() { return pair(0, 2, cplx(0.0, -1.0)); }

}  // namespace three_level

Schedule gaussian_pulse(double peak, double center, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian_pulse: sigma must be positive");
  return Schedule(
      [peak, center, sigma](double t) {
        const double x = (t - center) / sigma;
        return peak * std::exp(-x * x);
      },
      [peak, center, sigma](double t) {
        const double x = (t - center) / sigma;
        return -2.0 * x / sigma * peak * std::exp(-x * x);
      });
}

namespace {

// Normalized pulse vector (p, s) and its time derivative.
struct Mixing {
  double p, s, pd, sd;
};

Mixing mixing(const Schedule& pump, const Schedule& stokes, double t) {
  const double P = pump(t);
  const double S = stokes(t);
  const double n = std::hypot(P, S);
  if (!(n > 0.0)) throw DomainError("STIRAP: both pulses vanish; mixing angle undefined");
  const double p = P / n;
  const double s = S / n;
  const double pu = pump.derivative(t) / n;
  const double su = stokes.derivative(t) / n;
  const double radial = p * pu + s * su;
  return {p, s, pu - p * radial, su - s * radial};
}

}  // namespace

ControlHamiltonian bright_projector(const Schedule& pump, const Schedule& stokes) {
  ControlHamiltonian k(2);
  k.add(Schedule([pump, stokes](double t) { return std::pow(mixing(pump, stokes, t).p, 2); },
                 [pump, stokes](double t) {
                   const Mixing m = mixing(pump, stokes, t);
                   return 2.0 * m.p * m.pd;
                 }),
        outer(2, 0, 0), "p^2");
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  k.add(Schedule([pump, stokes](double t) {
          const Mixing m = mixing(pump, stokes, t);
          return m.p * m.s;
        },
                 [pump, stokes](double t) {
                   const Mixing m = mixing(pump, stokes, t);
                   return m.pd * m.s + m.p * m.sd;
                 }),
        Operator::hermitian(x), "p s");
  k.add(Schedule([pump, stokes](double t) { return std::pow(mixing(pump, stokes, t).s, 2); },
                 [pump, stokes](double t) {
                   const Mixing m = mixing(pump, stokes, t);
                   return 2.0 * m.s * m.sd;
                 }),
        outer(2, 1, 1), "s^2");
  return k;
}

Schedule stirap_cd_rabi(const Schedule& pump, const Schedule& stokes) {
  auto k = std::make_shared<ControlHamiltonian>(bright_projector(pump, stokes));
  return Schedule::numeric([k](double t) { return 2.0 * cd_field_matrix(k->at(t), k->derivative_at(t), t, 1.0)(0, 1).imag(); },
                           1e-5);
}

StirapModel stirap_model(const StirapParams& p) {
  if (!(p.sigma > 0.0)) throw DomainError("stirap_model: sigma must be positive");
  if (p.delay < 0.0) throw DomainError("stirap_model: delay d must be >= 0 (counter-intuitive ordering)");
  if (!(p.omega_peak > 0.0)) throw DomainError("stirap_model: peak Rabi frequency must be positive");

  const Schedule pump = gaussian_pulse(p.omega_peak, 0.5 * p.delay, p.sigma);
  const Schedule stokes = gaussian_pulse(p.omega_peak, -0.5 * p.delay, p.sigma);
  const Schedule omega_cd = stirap_cd_rabi(pump, stokes);
  const double t0 = -7.0 * p.sigma;
  const double t1 = 3.5 * p.sigma;

  ControlHamiltonian h(3);
  double carrier = 0.0;
  if (p.cd == StirapCd::fmod) {
    if (!(p.carrier_sigma > 0.0)) throw DomainError("stirap_model: fmod carrier must be positive");
    carrier = p.carrier_sigma / p.sigma;
    // Rounding can leave the tails a few ulp below zero; the magnitude is what the sidebands need.
    const Schedule magnitude(
        [omega_cd](double t) {
          const double v = omega_cd(t);
          return v < 0.0 && v > -1e-12 ? 0.0 : v;
        },
        [omega_cd](double t) { return omega_cd.derivative(t); });
    const FmodPulses mod = synthesize_fmod_stirap(pump, stokes, magnitude, carrier, p.phi_minus, t0);
    h.add(mod.pump.scaled(0.5), three_level::x01(), "pump/2");
    h.add(mod.stokes.scaled(0.5), three_level::x12(), "stokes/2");
  } else {
    h.add(pump.scaled(0.5), three_level::x01(), "pump/2");
    h.add(stokes.scaled(0.5), three_level::x12(), "stokes/2");
  }
  if (p.detuning != 0.0) h.add(p.detuning, three_level::p1(), "Delta_1");
  if (p.cd == StirapCd::exact) h.add(omega_cd.scaled(-0.5), three_level::y02(), "CD");
  return {h, pump, stokes, omega_cd, t0, t1, carrier};
}

TimeDependentHamiltonian stirap_protocol(const StirapModel& model) {
  TimeDependentHamiltonian td(model.h);
  if (model.carrier > 0.0) td.set_carrier(model.carrier).set_carrier_origin(model.t_start);
  return td;
}

}  // namespace ecd
