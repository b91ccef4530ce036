#pragma once

#include <functional>

namespace mosaic {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (15-point) on [a, b] for smooth integrands.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12);

/// Double-exponential rule; tolerates integrable endpoint singularities.
double integrate_endpoint_singular(const Integrand& f, double a, double b, double rel_tol = 1e-13);

/// Composite Simpson with `panels` (even) subintervals. Slow; used as an oracle.
double integrate_simpson(const Integrand& f, double a, double b, long panels);

}  // namespace mosaic
