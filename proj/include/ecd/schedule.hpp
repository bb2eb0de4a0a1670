#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace ecd {

/// Real function of time together with its derivative.
///
/// Closed-form schedules carry an analytic derivative; sampled schedules use a
/// monotone cubic (Fritsch-Carlson) interpolant and differentiate it exactly.
class Schedule {
 public:
  using Fn = std::function<double(double)>;

  Schedule() : Schedule(constant(0.0)) {}
  Schedule(Fn value, Fn derivative, double t_start = -std::numeric_limits<double>::infinity(),
           double t_end = std::numeric_limits<double>::infinity());

  static Schedule constant(double c);
  /// slope * t + intercept
  static Schedule linear(double slope, double intercept);
  /// Identity map t -> t; used for parameter-as-time Hamiltonians.
  static Schedule identity();
  /// Derivative by central finite difference with step h.
  static Schedule numeric(Fn value, double h = 1e-5, double t_start = -std::numeric_limits<double>::infinity(),
                          double t_end = std::numeric_limits<double>::infinity());
  /// Monotone cubic interpolation of (t_k, y_k); constant extrapolation outside the nodes.
  static Schedule sampled(std::vector<double> t, std::vector<double> y);

  double operator()(double t) const { return value_(t); }
  double derivative(double t) const { return derivative_(t); }

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }

  /// (this o inner)(t) = this(inner(t)) with chain-rule derivative and inner's domain.
  Schedule compose(const Schedule& inner) const;

  Schedule operator+(const Schedule& other) const;
  Schedule operator*(const Schedule& other) const;
  Schedule scaled(double s) const;

  Schedule with_domain(double t_start, double t_end) const;

 private:
  Fn value_;
  Fn derivative_;
  double t_start_;
  double t_end_;
};

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace ecd
