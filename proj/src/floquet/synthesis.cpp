#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ecd/errors.hpp"
#include "ecd/floquet.hpp"
#include "ecd/log.hpp"

namespace ecd {

namespace {

void require_positive_omega(double omega, const char* who) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError(std::string(who) + ": omega must be positive and finite");
  }
}

// Largest |d/dt log|f|| over the interval centres, where f is nonzero.
double max_log_rate(const Schedule& f, const std::vector<double>& ts) {
  double rate = 0.0;
  for (double t : ts) {
    const double v = f(t);
    if (std::abs(v) > 1e-300) rate = std::max(rate, std::abs(f.derivative(t) / v));
  }
  return rate;
}

}  // namespace

FourierPulse synthesize_ecd_two_level(const Schedule& f_cd, double omega, double phi, double t_start, double t_end) {
  require_positive_omega(omega, "synthesize_ecd_two_level");
  if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw DomainError("synthesize_ecd_two_level: need a finite window t_end > t_start");
  }
  const double period = 2.0 * std::numbers::pi / omega;
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t_end - t_start) / period - 1e-9)));

  std::vector<HarmonicSet> sets;
  std::vector<double> centers;
  sets.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double tn = t_start + (static_cast<double>(n) + 0.5) * period;
    centers.push_back(tn);
    const double f = f_cd(tn);
    if (!std::isfinite(f)) throw DomainError("synthesize_ecd_two_level: non-finite f_cd sample");
    const double a = std::sqrt(omega * std::abs(f));
    const double b = f >= 0.0 ? a : -a;
    HarmonicSet set = HarmonicSet::zeros(2, 1);
    set.cos_amp(0, 0) = -a;
    set.sin_amp(1, 0) = -b;
    sets.push_back(std::move(set));
  }

  const double rate = max_log_rate(f_cd, centers);
  if (omega < 10.0 * rate) {
    std::ostringstream os;
    os << "synthesize_ecd_two_level: omega=" << omega << " is below 10x the f_cd rate " << rate;
    warn(os.str());
  }
  return FourierPulse(omega, phi, t_start, std::move(sets));
}

FourierPulse synthesize_ecd_two_level(const Schedule& f_cd, double omega, double phi) {
  return synthesize_ecd_two_level(f_cd, omega, phi, f_cd.t_start(), f_cd.t_end());
}

double two_level_amplitude_a(const FourierPulse& pulse, std::size_t n) {
  return -pulse.interval(n).cos_amp(0, 0);
}

double two_level_amplitude_b(const FourierPulse& pulse, std::size_t n) {
  return -pulse.interval(n).sin_amp(1, 0);
}

std::vector<Operator> two_level_ecd_operators() {
  return {pauli::x(), pauli::z()};
}

double fmod_sideband_amplitude(double omega, double omega_cd) {
  if (omega_cd < 0.0) {
    std::ostringstream os;
    os << "fmod sideband: Omega_CD must be a non-negative magnitude, got " << omega_cd;
    throw DomainError(os.str());
  }
  return 2.0 * std::sqrt(omega * omega_cd);
}

FmodPulses synthesize_fmod_stirap(const Schedule& pump, const Schedule& stokes, const Schedule& omega_cd, double omega,
                                  double phi_minus, double t_ref) {
  require_positive_omega(omega, "synthesize_fmod_stirap");
  const double lo = std::max({pump.t_start(), stokes.t_start(), omega_cd.t_start()});
  const double hi = std::min({pump.t_end(), stokes.t_end(), omega_cd.t_end()});
  if (std::isfinite(lo) && std::isfinite(hi) && hi > lo) {
    constexpr int samples = 1001;
    for (int k = 0; k < samples; ++k) fmod_sideband_amplitude(omega, omega_cd(lo + (hi - lo) * k / (samples - 1)));
  }

  const double phi_plus = phi_minus - 0.5 * std::numbers::pi;
  auto modulated = [omega_cd, omega, t_ref](const Schedule& base, double phi) {
    auto amp = [omega_cd, omega](double t) { return fmod_sideband_amplitude(omega, omega_cd(t)); };
    auto amp_dot = [omega_cd, omega](double t) {
      const double c = omega_cd(t);
      return c > 0.0 ? std::sqrt(omega / c) * omega_cd.derivative(t) : 0.0;
    };
    return Schedule(
        [base, amp, omega, t_ref, phi](double t) { return base(t) + amp(t) * std::cos(omega * (t - t_ref) + phi); },
        [base, amp, amp_dot, omega, t_ref, phi](double t) {
          const double th = omega * (t - t_ref) + phi;
          return base.derivative(t) + amp_dot(t) * std::cos(th) - amp(t) * omega * std::sin(th);
        },
        base.t_start(), base.t_end());
  };
  return {modulated(pump, phi_minus), modulated(stokes, phi_plus)};
}

BellEcdCoupling synthesize_ecd_bell(const Schedule& h, double omega, double t_ref) {
  require_positive_omega(omega, "synthesize_ecd_bell");
  auto envelope = [h, omega](double t) {
    const double v = h(t);
    if (v < 0.0) {
      std::ostringstream os;
      os << "synthesize_ecd_bell: h(t) must be non-negative, got " << v << " at t=" << t;
      throw DomainError(os.str());
    }
    return std::sqrt(2.0 * omega * v);
  };
  auto envelope_dot = [h, omega](double t) {
    const double v = h(t);
    return v > 0.0 ? std::sqrt(omega / (2.0 * v)) * h.derivative(t) : 0.0;
  };
  Schedule q1(
      [envelope, omega, t_ref](double t) { return envelope(t) * std::cos(omega * (t - t_ref)); },
      [envelope, envelope_dot, omega, t_ref](double t) {
        const double th = omega * (t - t_ref);
        return envelope_dot(t) * std::cos(th) - envelope(t) * omega * std::sin(th);
      },
      h.t_start(), h.t_end());
  Schedule q2(
      [envelope, omega, t_ref](double t) { return envelope(t) * std::sin(omega * (t - t_ref)); },
      [envelope, envelope_dot, omega, t_ref](double t) {
        const double th = omega * (t - t_ref);
        return envelope_dot(t) * std::sin(th) + envelope(t) * omega * std::cos(th);
      },
      h.t_start(), h.t_end());
  return {q1, q2};
}

}  // namespace ecd
