#include "nlslab/window.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

namespace nlslab {
namespace {

double e_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double e_gauss(double x) { return x > 0.0 ? std::exp(-1.0 / (x * x)) : 0.0; }

}  // namespace

std::string WindowShape::name() const {
  std::string base;
  switch (profile) {
    case TransitionProfile::Exponential: base = "exponential"; break;
    case TransitionProfile::Gaussian: base = "gaussian"; break;
    case TransitionProfile::RaisedCosine: base = "raised-cosine"; break;
  }
  return base + "/" + std::to_string(width).substr(0, 4);
}

double window_profile(const WindowShape& shape, double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 1.0 + shape.width) return 0.0;
  const double x = (a - 1.0) / shape.width;
  switch (shape.profile) {
    case TransitionProfile::Exponential: {
      const double up = e_exp(1.0 - x);
      return up / (up + e_exp(x));
    }
    case TransitionProfile::Gaussian: {
      const double up = e_gauss(1.0 - x);
      return up / (up + e_gauss(x));
    }
    case TransitionProfile::RaisedCosine:
      return 0.5 * (1.0 + std::cos(std::numbers::pi * x));
  }
  return 0.0;
}

Window::Window(WindowShape shape, double scale) : shape_(shape), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("Window: scale must be positive");
  if (!(shape.width > 0.0) || shape.width > 1.0)
    throw std::invalid_argument("Window: transition width must lie in (0, 1]");
}

double Window::operator()(double t) const { return window_profile(shape_, t / scale_); }

complex Window::moment(int k, double sigma) const {
  if (k < 0) throw std::invalid_argument("Window::moment: negative power");
  using boost::math::quadrature::gauss;
  // psi is even: the integral over [-S, S] folds onto [0, S].
  const double support_end = support();
  const double cycles = std::abs(sigma) * support_end / (2.0 * std::numbers::pi);
  const auto panels_for = [&](double length) {
    return std::max(4, static_cast<int>(std::ceil(4.0 * cycles * length / support_end)) + 4);
  };
  const bool even = (k % 2 == 0);
  const auto integrand = [&](double t) {
    const double base = std::pow(t, k) * (*this)(t);
    return even ? base * std::cos(sigma * t) : base * std::sin(sigma * t);
  };
  double total = 0.0;
  const auto integrate = [&](double a, double b, int panels) {
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) total += gauss<double, 20>::integrate(integrand, a + i * h, a + (i + 1) * h);
  };
  integrate(0.0, scale_, panels_for(scale_));
  const double transition = support_end - scale_;
  integrate(scale_, support_end, 2 * panels_for(transition));
  return even ? complex(2.0 * total, 0.0) : complex(0.0, -2.0 * total);
}

double Window::third_derivative_l1() const {
  const int steps = 40000;
  const double a = scale_;
  const double b = support();
  const double h = (b - a) / steps;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = a + (i + 0.5) * h;
    const double d3 = ((*this)(t + 2 * h) - 2 * (*this)(t + h) + 2 * (*this)(t - h) - (*this)(t - 2 * h)) /
                      (2.0 * h * h * h);
    total += std::abs(d3) * h;
  }
  return 2.0 * total;
}

std::vector<WindowShape> window_family() {
  std::vector<WindowShape> out;
  for (auto profile : {TransitionProfile::Exponential, TransitionProfile::Gaussian, TransitionProfile::RaisedCosine})
    for (double width : {0.5, 0.75, 1.0}) out.push_back({profile, width});
  return out;
}

std::vector<double> sample_window(const Window& w, const std::vector<double>& times) {
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = w(times[i]);
  return out;
}

}  // namespace nlslab
