#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ecd {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class OperatorKind { hermitian, unitary, general };

/// Dense square operator tagged with a validated kind.
///
/// Hermitian operators are checked at construction against a relative tolerance
/// of 1e-12 (max |M - M^dagger| <= 1e-12 * max |M|). Unitary operators are checked
/// against max |U^dagger U - I| <= 1e-9.
class Operator {
 public:
  static constexpr double hermitian_tol = 1e-12;
  static constexpr double unitary_tol = 1e-9;

  Operator() = default;

  static Operator hermitian(Matrix m);
  static Operator unitary(Matrix m);
  static Operator general(Matrix m);
  static Operator identity(int dim);
  static Operator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  OperatorKind kind() const { return kind_; }
  const Matrix& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }

  Operator adjoint() const;

  /// Frobenius norm.
  double norm() const { return m_.norm(); }

 private:
  Operator(Matrix m, OperatorKind kind) : m_(std::move(m)), kind_(kind) {}

  Matrix m_;
  OperatorKind kind_ = OperatorKind::general;
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(double s, const Operator& a);
Operator operator*(cplx s, const Operator& a);

bool is_hermitian(const Matrix& m, double rel_tol = Operator::hermitian_tol);
bool is_unitary(const Matrix& m, double tol = Operator::unitary_tol);

Operator commutator(const Operator& a, const Operator& b);

/// Tr(A^dagger B).
cplx hs_inner(const Operator& a, const Operator& b);

/// exp(-i s H) from the eigendecomposition of H.
Operator expm_i(const Operator& h, double s);
Matrix expm_i(const Matrix& h, double s);

Operator tensor(const Operator& a, const Operator& b);

/// Truncated annihilation operator a|k> = sqrt(k)|k-1> on n levels.
Operator build_ladder(int n);

/// Standard Pauli matrices in the basis (|0>, |1>) with sigma_z = diag(1, -1)
/// and sigma_pm = (sigma_x +- i sigma_y) / 2.
namespace pauli {
Operator x();
Operator y();
Operator z();
Operator plus();
Operator minus();
}  // namespace pauli

/// |r><c| on dim levels.
Operator outer(int dim, int r, int c);

}  // namespace ecd
