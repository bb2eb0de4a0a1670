#include <cmath>

#include "ecd/errors.hpp"
#include "ecd/models.hpp"

namespace ecd {

ControlHamiltonian lz_hamiltonian_lambda(double omega) {
  if (!(omega > 0.0)) throw DomainError("lz_model: coupling Omega must be positive");
  ControlHamiltonian h(2);
  h.add(Schedule::identity(), pauli::z(), "lambda sigma_z");
  h.add(omega, pauli::x(), "Omega sigma_x");
  return h;
}

ControlHamiltonian lz_model(double v, double omega) {
  return lz_hamiltonian_lambda(omega).reparametrized(Schedule::linear(v, 0.0));
}

Schedule lz_cd_schedule(const LzSetup& s) {
  const double v = s.v;
  const double w = s.coupling;
  if (!(w > 0.0)) throw DomainError("lz: coupling Omega must be positive");
  return Schedule([v, w](double t) { return cd_field_lz(v * t, v, w); },
                  [v, w](double t) {
                    const double d = v * v * t * t + w * w;
                    return v * v * v * w * t / (d * d);
                  },
                  s.t_start, s.t_end);
}

TimeDependentHamiltonian lz_protocol(const LzSetup& s, LzProtocol protocol) {
  if (!(s.t_end > s.t_start)) throw DomainError("lz: need t_end > t_start");
  ControlHamiltonian h = lz_model(s.v, s.coupling);
  switch (protocol) {
    case LzProtocol::adiabatic:
      return TimeDependentHamiltonian(h);
    case LzProtocol::exact_cd:
      h.add(lz_cd_schedule(s), pauli::y(), "f_CD sigma_y");
      return TimeDependentHamiltonian(h);
    case LzProtocol::ecd: {
      const FourierPulse pulse = synthesize_ecd_two_level(lz_cd_schedule(s), s.omega, s.phi, s.t_start, s.t_end);
      TimeDependentHamiltonian td(h + pulse.control_hamiltonian(two_level_ecd_operators(), s.envelope));
      td.set_carrier(s.omega).set_carrier_origin(s.t_start);
      return td;
    }
  }
  throw DomainError("lz: unknown protocol");
}

Vector lz_ground_state(double lambda, double omega) {
  const double r = std::hypot(lambda, omega);
  Vector g(2);
  if (lambda >= 0.0) {
    g << omega, -(lambda + r);
  } else {
    g << lambda - r, omega;
  }
  g.normalize();
  Eigen::Index k = 0;
  g.cwiseAbs().maxCoeff(&k);
  if (g(k).real() < 0.0) g = -g;
  return g;
}

}  // namespace ecd
