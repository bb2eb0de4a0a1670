#include "ecd/control_hamiltonian.hpp"

#include "ecd/errors.hpp"

namespace ecd {

ControlHamiltonian::ControlHamiltonian(int dim) : dim_(dim) {
  if (dim <= 0) throw DimensionError("control Hamiltonian dimension must be positive");
}

ControlHamiltonian& ControlHamiltonian::add(Schedule coefficient, Operator op, std::string label) {
  if (op.dim() != dim_) {
    throw DimensionError("control term '" + label + "' has dimension " + std::to_string(op.dim()) + ", expected " +
                         std::to_string(dim_));
  }
  if (op.kind() != OperatorKind::hermitian) {
    // Re-validate: a general-kind operator may still be Hermitian.
    op = Operator::hermitian(op.matrix());
  }
  terms_.push_back({std::move(coefficient), std::move(op), std::move(label)});
  return *this;
}

ControlHamiltonian& ControlHamiltonian::add(double constant, Operator op, std::string label) {
  return add(Schedule::constant(constant), std::move(op), std::move(label));
}

Matrix ControlHamiltonian::at(double lambda) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (const auto& term : terms_) {
    const double c = term.coefficient(lambda);
    if (c != 0.0) h.noalias() += c * term.op.matrix();
  }
  return h;
}

Matrix ControlHamiltonian::derivative_at(double lambda) const {
  Matrix d = Matrix::Zero(dim_, dim_);
  for (const auto& term : terms_) {
    const double c = term.coefficient.derivative(lambda);
    if (c != 0.0) d.noalias() += c * term.op.matrix();
  }
  return d;
}

Operator ControlHamiltonian::operator_at(double lambda) const {
  return Operator::hermitian(at(lambda));
}

ControlHamiltonian ControlHamiltonian::reparametrized(const Schedule& lambda_of_t) const {
  ControlHamiltonian out(dim_);
  for (const auto& term : terms_) out.add(term.coefficient.compose(lambda_of_t), term.op, term.label);
  return out;
}

ControlHamiltonian ControlHamiltonian::operator+(const ControlHamiltonian& other) const {
  if (other.dim_ != dim_) throw DimensionError("cannot add control Hamiltonians of different dimension");
  ControlHamiltonian out = *this;
  for (const auto& term : other.terms_) out.terms_.push_back(term);
  return out;
}

}  // namespace ecd
