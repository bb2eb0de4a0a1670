#include <doctest.h>

#include <random>

#include "ecd/errors.hpp"
#include "ecd/operator.hpp"

using namespace ecd;

namespace {

Matrix random_matrix(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return m;
}

// exp(-i s H) by scaling and squaring of a truncated Taylor series.
Matrix taylor_expm(const Matrix& h, double s) {
  const int squarings = 12;
  const Matrix a = cplx(0.0, -s / std::pow(2.0, squarings)) * h;
  Matrix term = Matrix::Identity(h.rows(), h.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("hermitian construction validates and rejects") {
  Matrix m(2, 2);
  m << 1, cplx(0, 1), cplx(0, -1), 2;
  CHECK(Operator::hermitian(m).kind() == OperatorKind::hermitian);
  m(0, 1) = 3.0;
  CHECK_THROWS_AS(Operator::hermitian(m), NotHermitianError);
  CHECK_THROWS_AS(Operator::hermitian(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("unitary construction validates") {
  CHECK_NOTHROW(Operator::unitary(pauli::x().matrix()));
  CHECK_THROWS_AS(Operator::unitary(2.0 * pauli::x().matrix()), NotUnitaryError);
}

TEST_CASE("pauli algebra") {
  const Matrix x = pauli::x().matrix();
  const Matrix y = pauli::y().matrix();
  const Matrix z = pauli::z().matrix();
  CHECK((x * y - cplx(0, 1) * z).norm() < 1e-15);
  CHECK((commutator(pauli::x(), pauli::y()).matrix() - cplx(0, 2) * z).norm() < 1e-15);
  CHECK((pauli::plus().matrix() - 0.5 * (x + cplx(0, 1) * y)).norm() < 1e-15);
  CHECK(pauli::plus()(0, 1) == cplx(1.0, 0.0));
  CHECK(z(0, 0).real() == 1.0);
}

TEST_CASE("hs_inner is Tr(A^dagger B)") {
  std::mt19937 rng(1);
  const Operator a = Operator::general(random_matrix(rng, 3));
  const Operator b = Operator::general(random_matrix(rng, 3));
  const cplx expected = (a.matrix().adjoint() * b.matrix()).trace();
  CHECK(std::abs(hs_inner(a, b) - expected) < 1e-12);
  CHECK(std::abs(hs_inner(pauli::y(), pauli::y()) - cplx(2.0, 0.0)) < 1e-15);
}

TEST_CASE("expm_i matches a Taylor-series oracle and is unitary") {
  std::mt19937 rng(3);
  for (int n : {2, 3, 5}) {
    const Matrix r = random_matrix(rng, n);
    const Operator h = Operator::hermitian(0.5 * (r + r.adjoint()));
    const Operator u = expm_i(h, 0.7);
    CHECK(u.kind() == OperatorKind::unitary);
    CHECK((u.matrix() - taylor_expm(h.matrix(), 0.7)).norm() < 1e-11);
  }
}

TEST_CASE("tensor and ladder") {
  const Operator a = build_ladder(4);
  CHECK(a.dim() == 4);
  CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
  const Matrix n = (a.adjoint() * a).matrix();
  for (int k = 0; k < 4; ++k) CHECK(std::abs(n(k, k) - static_cast<double>(k)) < 1e-14);
  const Operator t = tensor(pauli::z(), Operator::identity(3));
  CHECK(t.dim() == 6);
  CHECK(t(4, 4).real() == -1.0);
  CHECK(outer(3, 0, 2)(0, 2) == cplx(1.0, 0.0));
}

TEST_CASE("arithmetic keeps dimensions consistent") {
  CHECK_THROWS_AS(pauli::x() + Operator::identity(3), DimensionError);
  const Operator s = pauli::x() + pauli::z();
  CHECK(s.kind() == OperatorKind::hermitian);
  CHECK(std::abs(s.norm() - 2.0) < 1e-15);
}
