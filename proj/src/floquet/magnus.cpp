#include <cmath>
#include <sstream>

#include "ecd/errors.hpp"
#include "ecd/floquet.hpp"
#include "ecd/log.hpp"

namespace ecd {

MagnusResult magnus_floquet(const FourierComponents& components, double omega, double t0, int order) {
  if (order != 1 && order != 2) throw DomainError("magnus_floquet: order must be 1 or 2");
  if (!(omega > 0.0)) throw DomainError("magnus_floquet: omega must be positive");
  const int L = components.harmonics();
  const Matrix h0 = components[0];
  Matrix raw = h0;
  if (order == 2) {
    Matrix second = Matrix::Zero(h0.rows(), h0.cols());
    for (int m = 1; m <= L; ++m) {
      const Matrix hp = components[m];
      const Matrix hm = components[-m];
      second += (hp * hm - hm * hp) / static_cast<double>(m);
    }
    for (int m = -L; m <= L; ++m) {
      if (m == 0) continue;
      const Matrix hmat = components[m];
      const cplx phase = std::polar(1.0, m * omega * t0);
      second += (phase / static_cast<double>(m)) * (h0 * hmat - hmat * h0);
    }
    raw += second / omega;
  }
  const Matrix anti = 0.5 * (raw - raw.adjoint());
  MagnusResult result{Operator::hermitian(0.5 * (raw + raw.adjoint())), anti.norm()};
  const double scale = result.h_f.norm();
  if (result.antihermitian_residue > 1e-8 * scale) {
    std::ostringstream os;
    os << "magnus_floquet: discarded anti-Hermitian residue " << result.antihermitian_residue << " (|H_F| = " << scale
       << ")";
    warn(os.str());
  }
  return result;
}

Operator micromotion_f1(const FourierComponents& components, double omega, double t, double t_ref) {
  if (!(omega > 0.0)) throw DomainError("micromotion_f1: omega must be positive");
  const int L = components.harmonics();
  Matrix f = Matrix::Zero(components.dim(), components.dim());
  for (int m = -L; m <= L; ++m) {
    if (m == 0) continue;
    const cplx w = std::polar(1.0, m * omega * t) - std::polar(1.0, m * omega * t_ref);
    f -= (w / static_cast<double>(m)) * components[m];
  }
  return Operator::general(f);
}

}  // namespace ecd
