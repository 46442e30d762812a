#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <cmath>
#include <vector>

#include "spinenc/errors.hpp"

namespace spinenc {

// y ~ a x^b
struct ScalingFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // rms of log(y) - log(a x^b)
};

namespace detail {
inline double log_rms(const std::vector<double>& xs, const std::vector<double>& ys, double a, double b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::log(ys[i]) - std::log(a) - b * std::log(xs[i]);
    acc += r * r;
  }
  return std::sqrt(acc / xs.size());
}

inline void check_positive(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size(), "fit: x and y sizes differ");
  require(xs.size() >= 2, "fit: need at least two points");
  for (std::size_t i = 0; i < xs.size(); ++i)
    require(xs[i] > 0.0 && ys[i] > 0.0, "fit: power-law data must be positive");
}
}  // namespace detail

// Linear least squares on (log x, log y).
inline ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  detail::check_positive(xs, ys);
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(xs[i]);
    rhs(i) = std::log(ys[i]);
  }
  const Eigen::Vector2d p = A.colPivHouseholderQr().solve(rhs);
  ScalingFit fit{std::exp(p(0)), p(1), 0.0};
  fit.residual = detail::log_rms(xs, ys, fit.a, fit.b);
  return fit;
}

// Least squares on y itself (not its log), started from the log-space fit.
// Large-y points dominate, as in an ordinary nonlinear curve fit.
inline ScalingFit fit_power_law_nonlinear(const std::vector<double>& xs, const std::vector<double>& ys) {
  const ScalingFit start = fit_power_law(xs, ys);

  struct Functor : Eigen::DenseFunctor<double> {
    const std::vector<double>& x;
    const std::vector<double>& y;
    Functor(const std::vector<double>& xv, const std::vector<double>& yv)
        : Eigen::DenseFunctor<double>(2, static_cast<int>(xv.size())), x{xv}, y{yv} {}
    int operator()(const InputType& p, ValueType& f) const {
      for (std::size_t i = 0; i < x.size(); ++i) f(i) = p(0) * std::pow(x[i], p(1)) - y[i];
      return 0;
    }
    int df(const InputType& p, JacobianType& j) const {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double xb = std::pow(x[i], p(1));
        j(i, 0) = xb;
        j(i, 1) = p(0) * xb * std::log(x[i]);
      }
      return 0;
    }
  };

  Functor functor(xs, ys);
  Eigen::LevenbergMarquardt<Functor> lm(functor);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  Eigen::VectorXd p(2);
  p << start.a, start.b;
  lm.minimize(p);
  require(p(0) > 0.0, "fit: nonlinear power-law fit did not converge to a > 0");
  ScalingFit fit{p(0), p(1), 0.0};
  fit.residual = detail::log_rms(xs, ys, fit.a, fit.b);
  return fit;
}

// Least squares for y = C / x: C = sum(y/x) / sum(1/x^2).
inline double fit_inverse(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size() && !xs.empty(), "fit_inverse: bad input sizes");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] != 0.0, "fit_inverse: x must be nonzero");
    num += ys[i] / xs[i];
    den += 1.0 / (xs[i] * xs[i]);
  }
  return num / den;
}

}  // namespace spinenc
