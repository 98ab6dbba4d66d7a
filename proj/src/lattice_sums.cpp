#include "nlslab/lattice_sums.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

#include "nlslab/parallel.hpp"
#include "nlslab/spectral_core.hpp"

namespace nlslab {

void SupSumReport::finalize() {
  sup = 0.0;
  argsup = 0;
  max_tail = 0.0;
  certified = !points.empty();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (i == 0 || pt.value > sup) {
      sup = pt.value;
      argsup = i;
    }
    max_tail = std::max(max_tail, pt.tail_bound);
    certified = certified && pt.certified && std::isfinite(pt.value);
  }
}

double bracket_tail_integral(double x, double gamma) {
  if (!(gamma > 0.5)) throw std::invalid_argument("bracket_tail_integral: gamma > 1/2 violated");
  if (x < 0.0) throw std::invalid_argument("bracket_tail_integral: x >= 0 violated");
  // t = tan-type substitution: int_x^inf (1+t^2)^{-g} dt = B(1/(1+x^2); g - 1/2, 1/2) / 2
  return 0.5 * boost::math::beta(gamma - 0.5, 0.5, 1.0 / (1.0 + x * x));
}

SumPoint linear_sum(double alpha, double shift, double exponent, long long K) {
  if (!(exponent > 1.0)) throw std::invalid_argument("linear_sum: exponent > 1 violated");
  const double a = std::abs(alpha);
  if (!(a > 0.0)) throw std::invalid_argument("linear_sum: alpha must be nonzero");
  if (K < 1) throw std::invalid_argument("linear_sum: K >= 1 violated");
  // n + shift in [-K, K]
  const long long lo = static_cast<long long>(std::ceil(-shift - static_cast<double>(K)));
  const long long hi = static_cast<long long>(std::floor(-shift + static_cast<double>(K)));
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long long n = lo; n <= hi; ++n) terms.push_back(std::pow(bracket(a * (static_cast<double>(n) + shift)), -exponent));
  const double head = pairwise_sum(terms);
  const double gamma = exponent / 2.0;
  // right tail starts at x = hi + 1 + shift, left at x = -(lo - 1 + shift); both >= K > 0
  const double xr = static_cast<double>(hi + 1) + shift;
  const double xl = -(static_cast<double>(lo - 1) + shift);
  const auto tail = [&](double x) { return bracket_tail_integral(a * x, gamma) / a; };
  const double lower = tail(xr) + tail(xl);
  const double upper = tail(xr - 0.5) + tail(xl - 0.5);
  SumPoint out;
  out.value = head + lower;
  out.tail_bound = upper - lower;
  out.certified = out.tail_bound < kCertifiedFraction * out.value;
  return out;
}

SumPoint quadratic_sum(double a, double c, double d, double gamma, long long K) {
  if (!(gamma > 0.5)) throw std::invalid_argument("quadratic_sum: gamma > 1/2 violated");
  if (!(a > 0.0)) throw std::invalid_argument("quadratic_sum: a > 0 violated");
  if (K < 1) throw std::invalid_argument("quadratic_sum: K >= 1 violated");
  const double root = std::sqrt(std::abs(d) / a);
  const double reach = std::max(static_cast<double>(K), 4.0 * root + 16.0);
  const long long lo = static_cast<long long>(std::ceil(c - reach));
  const long long hi = static_cast<long long>(std::floor(c + reach));
  const auto g = [&](double x) { return std::pow(bracket(a * x * x + d), -gamma); };
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long long n = lo; n <= hi; ++n) terms.push_back(g(static_cast<double>(n) - c));
  const double head = pairwise_sum(terms);
  boost::math::quadrature::exp_sinh<double> integrator;
  const auto tail = [&](double x0) {
    return integrator.integrate([&](double u) { return g(x0 + u); }, 1e-12);
  };
  const double xr = static_cast<double>(hi + 1) - c;
  const double xl = c - static_cast<double>(lo - 1);
  const double lower = tail(xr) + tail(xl);
  const double upper = tail(xr - 0.5) + tail(xl - 0.5);
  SumPoint out;
  out.value = head + lower;
  out.tail_bound = std::max(0.0, upper - lower);
  out.certified = out.tail_bound < kCertifiedFraction * out.value;
  return out;
}

}  // namespace nlslab
