#include "ecd/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "ecd/errors.hpp"

namespace ecd {

Schedule::Schedule(Fn value, Fn derivative, double t_start, double t_end)
    : value_(std::move(value)), derivative_(std::move(derivative)), t_start_(t_start), t_end_(t_end) {
  if (!value_ || !derivative_) throw DomainError("schedule needs both value and derivative");
  if (!(t_start_ <= t_end_)) throw DomainError("schedule domain must satisfy t_start <= t_end");
}

Schedule Schedule::constant(double c) {
  return Schedule([c](double) { return c; }, [](double) { return 0.0; });
}

Schedule Schedule::linear(double slope, double intercept) {
  return Schedule([slope, intercept](double t) { return slope * t + intercept; }, [slope](double) { return slope; });
}

Schedule Schedule::identity() {
  return linear(1.0, 0.0);
}

Schedule Schedule::numeric(Fn value, double h, double t_start, double t_end) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  Fn v = value;
  return Schedule(
      std::move(value), [v, h](double t) { return (v(t + h) - v(t - h)) / (2.0 * h); }, t_start, t_end);
}

Schedule Schedule::sampled(std::vector<double> t, std::vector<double> y) {
  auto spline = std::make_shared<MonotoneCubic>(std::move(t), std::move(y));
  const double a = spline->x_front();
  const double b = spline->x_back();
  return Schedule([spline](double x) { return spline->value(x); }, [spline](double x) { return spline->derivative(x); },
                  a, b);
}

Schedule Schedule::compose(const Schedule& inner) const {
  Fn outer_v = value_;
  Fn outer_d = derivative_;
  Schedule in = inner;
  return Schedule([outer_v, in](double t) { return outer_v(in(t)); },
                  [outer_d, in](double t) { return outer_d(in(t)) * in.derivative(t); }, inner.t_start_,
                  inner.t_end_);
}

Schedule Schedule::operator+(const Schedule& other) const {
  Schedule a = *this;
  Schedule b = other;
  return Schedule([a, b](double t) { return a(t) + b(t); },
                  [a, b](double t) { return a.derivative(t) + b.derivative(t); }, std::max(t_start_, other.t_start_),
                  std::min(t_end_, other.t_end_));
}

Schedule Schedule::operator*(const Schedule& other) const {
  Schedule a = *this;
  Schedule b = other;
  return Schedule([a, b](double t) { return a(t) * b(t); },
                  [a, b](double t) { return a.derivative(t) * b(t) + a(t) * b.derivative(t); },
                  std::max(t_start_, other.t_start_), std::min(t_end_, other.t_end_));
}

Schedule Schedule::scaled(double s) const {
  Schedule a = *this;
  return Schedule([a, s](double t) { return s * a(t); }, [a, s](double t) { return s * a.derivative(t); }, t_start_,
                  t_end_);
}

Schedule Schedule::with_domain(double t_start, double t_end) const {
  return Schedule(value_, derivative_, t_start, t_end);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw DimensionError("sampled schedule: x and y sizes differ");
  if (n < 1) throw DomainError("sampled schedule: need at least one node");
  for (std::size_t k = 1; k < n; ++k) {
    if (!(x_[k] > x_[k - 1])) throw DomainError("sampled schedule: nodes must be strictly increasing");
  }
  m_.assign(n, 0.0);
  if (n == 1) return;
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
  if (n == 2) {
    m_[0] = m_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      m_[k] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland form), keeps monotone data monotone.
      const double h0 = x_[k] - x_[k - 1];
      const double h1 = x_[k + 1] - x_[k];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      m_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) {
      m = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(m) > std::abs(3.0 * d0)) {
      m = 3.0 * d0;
    }
    return m;
  };
  m_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
  m_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  if (x_.size() == 1 || x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x_.size() == 1 || x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / h;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / h;
  const double d11 = 3 * s2 - 2 * s;
  return d00 * y_[k] + d10 * m_[k] + d01 * y_[k + 1] + d11 * m_[k + 1];
}

}  // namespace ecd
