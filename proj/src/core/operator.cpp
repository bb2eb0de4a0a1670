#include "ecd/operator.hpp"

#include <cmath>
#include <string>

#include "ecd/errors.hpp"

namespace ecd {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("operator must be a non-empty square matrix, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

void require_same_dim(const Operator& a, const Operator& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

}  // namespace

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return dev <= rel_tol * scale;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::hermitian(Matrix m) {
  require_square(m);
  if (!m.allFinite()) throw NotHermitianError("operator has non-finite entries");
  if (!is_hermitian(m)) {
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    throw NotHermitianError("operator is not Hermitian (max |M - M^dagger| = " + std::to_string(dev) + ")");
  }
  // Remove rounding-level asymmetry so downstream eigensolvers see an exact Hermitian matrix.
  Matrix h = 0.5 * (m + m.adjoint());
  return Operator(std::move(h), OperatorKind::hermitian);
}

Operator Operator::unitary(Matrix m) {
  require_square(m);
  if (!is_unitary(m)) {
    const Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    throw NotUnitaryError("operator is not unitary (max |U^dagger U - I| = " +
                          std::to_string(d.cwiseAbs().maxCoeff()) + ")");
  }
  return Operator(std::move(m), OperatorKind::unitary);
}

Operator Operator::general(Matrix m) {
  require_square(m);
  return Operator(std::move(m), OperatorKind::general);
}

Operator Operator::identity(int dim) {
  if (dim <= 0) throw DimensionError("identity: dimension must be positive");
  return Operator(Matrix::Identity(dim, dim), OperatorKind::hermitian);
}

Operator Operator::zero(int dim) {
  if (dim <= 0) throw DimensionError("zero: dimension must be positive");
  return Operator(Matrix::Zero(dim, dim), OperatorKind::hermitian);
}

Operator Operator::adjoint() const {
  return Operator(m_.adjoint(), kind_);
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator+");
  const bool herm = a.kind() == OperatorKind::hermitian && b.kind() == OperatorKind::hermitian;
  Matrix m = a.matrix() + b.matrix();
  return herm ? Operator::hermitian(std::move(m)) : Operator::general(std::move(m));
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator-");
  const bool herm = a.kind() == OperatorKind::hermitian && b.kind() == OperatorKind::hermitian;
  Matrix m = a.matrix() - b.matrix();
  return herm ? Operator::hermitian(std::move(m)) : Operator::general(std::move(m));
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator*");
  Matrix m = a.matrix() * b.matrix();
  if (a.kind() == OperatorKind::unitary && b.kind() == OperatorKind::unitary) {
    return Operator::unitary(std::move(m));
  }
  return Operator::general(std::move(m));
}

Operator operator*(double s, const Operator& a) {
  Matrix m = s * a.matrix();
  return a.kind() == OperatorKind::hermitian ? Operator::hermitian(std::move(m)) : Operator::general(std::move(m));
}

Operator operator*(cplx s, const Operator& a) {
  return Operator::general(s * a.matrix());
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return Operator::general(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

cplx hs_inner(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "hs_inner");
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return a.matrix().conjugate().cwiseProduct(b.matrix()).sum();
}

Matrix expm_i(const Matrix& h, double s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw Error("expm_i: eigendecomposition failed");
  const Eigen::VectorXd& e = es.eigenvalues();
  Vector phases(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) phases(k) = std::polar(1.0, -s * e(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Operator expm_i(const Operator& h, double s) {
  if (h.kind() != OperatorKind::hermitian) throw NotHermitianError("expm_i: operator must be Hermitian");
  return Operator::unitary(expm_i(h.matrix(), s));
}

Operator tensor(const Operator& a, const Operator& b) {
  const int da = a.dim();
  const int db = b.dim();
  Matrix m(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
  }
  if (a.kind() == OperatorKind::hermitian && b.kind() == OperatorKind::hermitian) return Operator::hermitian(m);
  if (a.kind() == OperatorKind::unitary && b.kind() == OperatorKind::unitary) return Operator::unitary(m);
  return Operator::general(m);
}

Operator build_ladder(int n) {
  if (n < 2) throw DimensionError("build_ladder: need at least 2 levels");
  Matrix m = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
  return Operator::general(m);
}

Operator outer(int dim, int r, int c) {
  if (r < 0 || c < 0 || r >= dim || c >= dim) throw DimensionError("outer: index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(r, c) = 1.0;
  return r == c ? Operator::hermitian(m) : Operator::general(m);
}

namespace pauli {

Operator x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator::hermitian(m);
}

Operator y() {
  const cplx i{0.0, 1.0};
  Matrix m(2, 2);
  m << 0, -i, i, 0;
  return Operator::hermitian(m);
}

Operator z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator::hermitian(m);
}

Operator plus() {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  return Operator::general(m);
}

Operator minus() {
  Matrix m(2, 2);
  m << 0, 0, 1, 0;
  return Operator::general(m);
}

}  // namespace pauli

}  // namespace ecd
