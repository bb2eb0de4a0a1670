#pragma once

#include <memory>
#include <vector>

#include "ecd/control_hamiltonian.hpp"
#include "ecd/operator.hpp"
#include "ecd/schedule.hpp"

namespace ecd {

/// Harmonic amplitudes of one drive period.
/// c_i(theta) = offset_i + sum_j [sin_amp(i, j-1) sin(j theta) + cos_amp(i, j-1) cos(j theta)]
struct HarmonicSet {
  Eigen::VectorXd offset;
  Eigen::MatrixXd sin_amp;
  Eigen::MatrixXd cos_amp;

  static HarmonicSet zeros(int controls, int harmonics);
};

enum class EnvelopeMode { interpolated, discrete };

/// Periodic control ansatz with per-interval amplitude sets.
///
/// Interval n covers [t_start + nT, t_start + (n+1)T] and the drive phase is
/// theta(t) = omega (t - t_start) + phi, so every interval starts at phase phi.
/// In interpolated mode each amplitude is a monotone cubic through the interval
/// centres; in discrete mode it is piecewise constant per interval.
class FourierPulse {
 public:
  FourierPulse(double omega, double phi, double t_start, std::vector<HarmonicSet> intervals);

  double omega() const { return omega_; }
  double phi() const { return phi_; }
  double period() const;
  int harmonics() const { return harmonics_; }
  int controls() const { return controls_; }
  double t_start() const { return t_start_; }
  double t_end() const;
  std::size_t interval_count() const { return intervals_.size(); }
  const HarmonicSet& interval(std::size_t n) const { return intervals_.at(n); }
  double interval_center(std::size_t n) const;
  std::size_t interval_index(double t) const;

  double phase(double t) const { return omega_ * (t - t_start_) + phi_; }

  double coefficient(int control, double t, EnvelopeMode mode = EnvelopeMode::interpolated) const;
  double coefficient_derivative(int control, double t, EnvelopeMode mode = EnvelopeMode::interpolated) const;
  Schedule control_schedule(int control, EnvelopeMode mode = EnvelopeMode::interpolated) const;
  ControlHamiltonian control_hamiltonian(const std::vector<Operator>& ops,
                                         EnvelopeMode mode = EnvelopeMode::interpolated) const;

 private:
  struct Envelopes;

  double envelope(int kind, int control, int harmonic, double t, EnvelopeMode mode, bool derivative) const;

  double omega_;
  double phi_;
  double t_start_;
  int harmonics_;
  int controls_;
  std::vector<HarmonicSet> intervals_;
  std::shared_ptr<const Envelopes> envelopes_;
};

/// Fourier components H_m for |m| <= L of one interval, stored at index m + L.
class FourierComponents {
 public:
  FourierComponents(int harmonics, std::vector<Matrix> components);

  int harmonics() const { return harmonics_; }
  int dim() const { return static_cast<int>(components_.front().rows()); }
  /// Zero matrix for |m| > L.
  Matrix operator[](int m) const;

 private:
  int harmonics_;
  std::vector<Matrix> components_;
};

/// H_m = (1/T) int_0^T H(t) e^{-i m omega t} dt of interval n, in closed form.
Operator fourier_components(const FourierPulse& pulse, const std::vector<Operator>& ops, int m, std::size_t n = 0);
FourierComponents all_fourier_components(const FourierPulse& pulse, const std::vector<Operator>& ops,
                                         std::size_t n = 0);

struct MagnusResult {
  Operator h_f;
  /// Frobenius norm of the anti-Hermitian part discarded by hermitization.
  double antihermitian_residue = 0.0;
};

/// Floquet-Magnus effective Hamiltonian at order 1 or 2:
/// H_0 + (1/omega) [ sum_{m>=1} (1/m)[H_m, H_-m] + sum_{m!=0} (1/m)[H_0, H_m] e^{i m omega t0} ].
MagnusResult magnus_floquet(const FourierComponents& components, double omega, double t0, int order);

/// F1(t, t') = -sum_{m!=0} (1/m)(e^{i m omega t} - e^{i m omega t'}) H_m; K(t) ~ exp(F1 / omega).
Operator micromotion_f1(const FourierComponents& components, double omega, double t, double t_ref);

/// Two-level eCD pulse on controls (sigma_x, sigma_z) matching f_cd sigma_y stroboscopically.
/// Per interval: A = sqrt(omega |f_cd(t_n)|), B = sign(f_cd(t_n)) A with sign(0) = +1, and
/// c_x = -A cos(theta), c_z = -B sin(theta).
FourierPulse synthesize_ecd_two_level(const Schedule& f_cd, double omega, double phi, double t_start, double t_end);
FourierPulse synthesize_ecd_two_level(const Schedule& f_cd, double omega, double phi);

/// A^[n] and B^[n] of a two-level eCD pulse.
double two_level_amplitude_a(const FourierPulse& pulse, std::size_t n);
double two_level_amplitude_b(const FourierPulse& pulse, std::size_t n);

/// Operators (sigma_x, sigma_z) matching the controls of synthesize_ecd_two_level.
std::vector<Operator> two_level_ecd_operators();

struct FmodPulses {
  Schedule pump;
  Schedule stokes;
};

/// Sideband amplitude 2 sqrt(omega Omega_CD) that reproduces i Omega_CD/2 on the (0,2) element.
double fmod_sideband_amplitude(double omega, double omega_cd);

/// Omega_-(t) + a cos(omega (t - t_ref) + phi_-), Omega_+(t) + a cos(omega (t - t_ref) + phi_- - pi/2),
/// a = fmod_sideband_amplitude(omega, Omega_CD(t)).
FmodPulses synthesize_fmod_stirap(const Schedule& pump, const Schedule& stokes, const Schedule& omega_cd, double omega,
                                  double phi_minus, double t_ref = 0.0);

struct BellEcdCoupling {
  /// Multiplies sigma_1^+ a + h.c.
  Schedule qubit1;
  /// Multiplies sigma_2^+ a + h.c.
  Schedule qubit2;
};

/// sqrt(2 omega h(t)) [cos(omega (t - t_ref)) on qubit 1, sin(omega (t - t_ref)) on qubit 2].
BellEcdCoupling synthesize_ecd_bell(const Schedule& h, double omega, double t_ref = 0.0);

}  // namespace ecd
