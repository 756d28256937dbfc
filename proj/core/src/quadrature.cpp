#include "condana/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "condana/errors.hpp"

namespace condana {

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, a, b, 1e-13, &error, &l1);
  if (!std::isfinite(value) || error > std::max(abs_tol, 1e-12 * l1)) {
    throw ConvergenceError("integrate: error estimate " + std::to_string(error) +
                               " exceeds tolerance on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           {value}, error);
  }
  return value;
}

double integrate_piecewise(const std::function<double(double)>& f,
                           std::vector<double> breakpoints, double abs_tol) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  double total = 0.0;
  const double per_segment =
      breakpoints.size() > 1 ? abs_tol / static_cast<double>(breakpoints.size() - 1) : abs_tol;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    total += integrate(f, breakpoints[i], breakpoints[i + 1], per_segment);
  }
  return total;
}

}  // namespace condana
