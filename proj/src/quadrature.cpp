#include "mosaic/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mosaic/errors.hpp"

namespace mosaic {

double integrate(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol, &error);
}

double integrate_endpoint_singular(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule.integrate([&](double x) { return f(x); }, a, b, rel_tol);
}

double integrate_simpson(const Integrand& f, double a, double b, long panels) {
  if (panels < 2 || panels % 2 != 0) throw DomainError("simpson: panel count must be even and >= 2");
  const double h = (b - a) / static_cast<double>(panels);
  double odd = 0.0, even = 0.0;
  for (long i = 1; i < panels; ++i) {
    const double v = f(a + h * static_cast<double>(i));
    (i % 2 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace mosaic
