#pragma once

#include <functional>
#include <vector>

namespace condana {

/// Adaptive double-exponential quadrature of f over [a, b].
///
/// Endpoint singularities of logarithmic type are integrated accurately; the
/// integrand is never called at a or b. Throws ConvergenceError if the error
/// estimate exceeds `abs_tol` (after the integrator gives up refining).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

/// Sum of integrate() over consecutive segments of the sorted, de-duplicated
/// breakpoints. Put every kink and singularity of f in `breakpoints`.
double integrate_piecewise(const std::function<double(double)>& f,
                           std::vector<double> breakpoints, double abs_tol = 1e-10);

}  // namespace condana
