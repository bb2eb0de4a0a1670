#pragma once

#include <string>
#include <vector>

#include "ecd/operator.hpp"
#include "ecd/schedule.hpp"

namespace ecd {

struct ControlTerm {
  Schedule coefficient;
  Operator op;
  std::string label;
};

/// H(lambda) = sum_i c_i(lambda) H_i with Hermitian, equally sized H_i.
class ControlHamiltonian {
 public:
  explicit ControlHamiltonian(int dim);

  ControlHamiltonian& add(Schedule coefficient, Operator op, std::string label = {});
  ControlHamiltonian& add(double constant, Operator op, std::string label = {});

  int dim() const { return dim_; }
  const std::vector<ControlTerm>& terms() const { return terms_; }

  Matrix at(double lambda) const;
  /// dH/dlambda from the coefficient derivatives.
  Matrix derivative_at(double lambda) const;
  Operator operator_at(double lambda) const;

  /// Every coefficient composed with lambda(t).
  ControlHamiltonian reparametrized(const Schedule& lambda_of_t) const;

  /// Term list concatenation.
  ControlHamiltonian operator+(const ControlHamiltonian& other) const;

 private:
  int dim_;
  std::vector<ControlTerm> terms_;
};

}  // namespace ecd
