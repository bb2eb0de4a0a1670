#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecd/errors.hpp"
#include "ecd/floquet.hpp"

namespace ecd {

HarmonicSet HarmonicSet::zeros(int controls, int harmonics) {
  return {Eigen::VectorXd::Zero(controls), Eigen::MatrixXd::Zero(controls, harmonics),
          Eigen::MatrixXd::Zero(controls, harmonics)};
}

struct FourierPulse::Envelopes {
  // [kind][control * harmonics + harmonic]; kind 0 = offset (harmonic 0 only), 1 = sin, 2 = cos.
  std::vector<MonotoneCubic> splines[3];
};

FourierPulse::FourierPulse(double omega, double phi, double t_start, std::vector<HarmonicSet> intervals)
    : omega_(omega), phi_(phi), t_start_(t_start), intervals_(std::move(intervals)) {
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) throw DomainError("FourierPulse: omega must be positive");
  if (intervals_.empty()) throw DomainError("FourierPulse: need at least one interval");
  controls_ = static_cast<int>(intervals_.front().offset.size());
  harmonics_ = static_cast<int>(intervals_.front().sin_amp.cols());
  if (harmonics_ < 1) throw DomainError("FourierPulse: need at least one harmonic");
  for (const auto& set : intervals_) {
    if (set.offset.size() != controls_ || set.sin_amp.rows() != controls_ || set.cos_amp.rows() != controls_ ||
        set.sin_amp.cols() != harmonics_ || set.cos_amp.cols() != harmonics_) {
      throw DimensionError("FourierPulse: inconsistent amplitude set shapes");
    }
    if (!set.offset.allFinite() || !set.sin_amp.allFinite() || !set.cos_amp.allFinite()) {
      throw DomainError("FourierPulse: non-finite amplitude");
    }
  }

  auto env = std::make_shared<Envelopes>();
  std::vector<double> centers(intervals_.size());
  for (std::size_t n = 0; n < intervals_.size(); ++n) centers[n] = interval_center(n);
  std::vector<double> values(intervals_.size());
  for (int i = 0; i < controls_; ++i) {
    for (std::size_t n = 0; n < intervals_.size(); ++n) values[n] = intervals_[n].offset(i);
    env->splines[0].emplace_back(centers, values);
    for (int j = 0; j < harmonics_; ++j) {
      for (std::size_t n = 0; n < intervals_.size(); ++n) values[n] = intervals_[n].sin_amp(i, j);
      env->splines[1].emplace_back(centers, values);
      for (std::size_t n = 0; n < intervals_.size(); ++n) values[n] = intervals_[n].cos_amp(i, j);
      env->splines[2].emplace_back(centers, values);
    }
  }
  envelopes_ = std::move(env);
}

double FourierPulse::period() const {
  return 2.0 * std::numbers::pi / omega_;
}

double FourierPulse::t_end() const {
  return t_start_ + static_cast<double>(intervals_.size()) * period();
}

double FourierPulse::interval_center(std::size_t n) const {
  return t_start_ + (static_cast<double>(n) + 0.5) * period();
}

std::size_t FourierPulse::interval_index(double t) const {
  const double x = std::floor((t - t_start_) / period());
  if (x <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(x), intervals_.size() - 1);
}

double FourierPulse::envelope(int kind, int control, int harmonic, double t, EnvelopeMode mode,
                              bool derivative) const {
  if (mode == EnvelopeMode::discrete) {
    if (derivative) return 0.0;
    const HarmonicSet& set = intervals_[interval_index(t)];
    if (kind == 0) return set.offset(control);
    return kind == 1 ? set.sin_amp(control, harmonic) : set.cos_amp(control, harmonic);
  }
  const std::size_t idx = kind == 0 ? static_cast<std::size_t>(control)
                                    : static_cast<std::size_t>(control * harmonics_ + harmonic);
  const MonotoneCubic& s = envelopes_->splines[kind][idx];
  return derivative ? s.derivative(t) : s.value(t);
}

double FourierPulse::coefficient(int control, double t, EnvelopeMode mode) const {
  if (control < 0 || control >= controls_) throw DimensionError("FourierPulse: control index out of range");
  const double theta = phase(t);
  double c = envelope(0, control, 0, t, mode, false);
  for (int j = 1; j <= harmonics_; ++j) {
    c += envelope(1, control, j - 1, t, mode, false) * std::sin(j * theta);
    c += envelope(2, control, j - 1, t, mode, false) * std::cos(j * theta);
  }
  return c;
}

double FourierPulse::coefficient_derivative(int control, double t, EnvelopeMode mode) const {
  if (control < 0 || control >= controls_) throw DimensionError("FourierPulse: control index out of range");
  const double theta = phase(t);
  double d = envelope(0, control, 0, t, mode, true);
  for (int j = 1; j <= harmonics_; ++j) {
    const double s = envelope(1, control, j - 1, t, mode, false);
    const double c = envelope(2, control, j - 1, t, mode, false);
    d += envelope(1, control, j - 1, t, mode, true) * std::sin(j * theta);
    d += envelope(2, control, j - 1, t, mode, true) * std::cos(j * theta);
    d += j * omega_ * (s * std::cos(j * theta) - c * std::sin(j * theta));
  }
  return d;
}

Schedule FourierPulse::control_schedule(int control, EnvelopeMode mode) const {
  FourierPulse self = *this;
  return Schedule([self, control, mode](double t) { return self.coefficient(control, t, mode); },
                  [self, control, mode](double t) { return self.coefficient_derivative(control, t, mode); },
                  t_start_, t_end());
}

ControlHamiltonian FourierPulse::control_hamiltonian(const std::vector<Operator>& ops, EnvelopeMode mode) const {
  if (static_cast<int>(ops.size()) != controls_) throw DimensionError("FourierPulse: one operator per control needed");
  ControlHamiltonian h(ops.front().dim());
  for (int i = 0; i < controls_; ++i) h.add(control_schedule(i, mode), ops[i], "fourier_" + std::to_string(i));
  return h;
}

FourierComponents::FourierComponents(int harmonics, std::vector<Matrix> components)
    : harmonics_(harmonics), components_(std::move(components)) {
  if (harmonics_ < 0 || components_.size() != static_cast<std::size_t>(2 * harmonics_ + 1)) {
    throw DimensionError("FourierComponents: expected 2L+1 matrices");
  }
}

Matrix FourierComponents::operator[](int m) const {
  if (m < -harmonics_ || m > harmonics_) return Matrix::Zero(dim(), dim());
  return components_[static_cast<std::size_t>(m + harmonics_)];
}

Operator fourier_components(const FourierPulse& pulse, const std::vector<Operator>& ops, int m, std::size_t n) {
  if (static_cast<int>(ops.size()) != pulse.controls()) {
    throw DimensionError("fourier_components: one operator per control needed");
  }
  const int dim = ops.front().dim();
  Matrix out = Matrix::Zero(dim, dim);
  const int j = std::abs(m);
  if (j > pulse.harmonics()) return Operator::general(out);
  const HarmonicSet& set = pulse.interval(n);
  const cplx i{0.0, 1.0};
  for (int c = 0; c < pulse.controls(); ++c) {
    cplx coeff;
    if (m == 0) {
      coeff = set.offset(c);
    } else {
      const double s = set.sin_amp(c, j - 1);
      const double k = set.cos_amp(c, j - 1);
      // sin(j theta) = (e^{ij theta} - e^{-ij theta}) / 2i with theta = omega t + phi.
      const cplx sgn = m > 0 ? 1.0 : -1.0;
      coeff = std::exp(sgn * i * static_cast<double>(j) * pulse.phi()) * (sgn * s / (2.0 * i) + k / 2.0);
    }
    if (coeff != cplx{}) out += coeff * ops[c].matrix();
  }
  return Operator::general(out);
}

FourierComponents all_fourier_components(const FourierPulse& pulse, const std::vector<Operator>& ops,
                                         std::size_t n) {
  std::vector<Matrix> comps;
  for (int m = -pulse.harmonics(); m <= pulse.harmonics(); ++m) {
    comps.push_back(fourier_components(pulse, ops, m, n).matrix());
  }
  return FourierComponents(pulse.harmonics(), std::move(comps));
}

}  // namespace ecd
