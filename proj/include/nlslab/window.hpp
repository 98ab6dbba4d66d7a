#pragma once

// Smooth time cutoffs psi with psi = 1 on [-1, 1] and support in [-2, 2],
// their time-Fourier transforms and polynomial moments.

#include <string>
#include <vector>

#include "nlslab/spectral_core.hpp"

namespace nlslab {

enum class TransitionProfile { Exponential, Gaussian, RaisedCosine };

/// psi(t) = 1 for |t| <= 1, decays to 0 on 1 <= |t| <= 1 + width, 0 beyond.
/// Exponential: E(1 - x) / (E(1 - x) + E(x)) with E(x) = e^{-1/x}, x the
/// normalised position in the transition; Gaussian uses e^{-1/x^2}; the
/// raised cosine is (1 + cos(pi x)) / 2.
struct WindowShape {
  TransitionProfile profile = TransitionProfile::Exponential;
  double width = 1.0;

  std::string name() const;
  friend bool operator==(const WindowShape&, const WindowShape&) = default;
};

/// psi(t / T) for a shape and a scale T > 0.
class Window {
 public:
  explicit Window(WindowShape shape = {}, double scale = 1.0);

  const WindowShape& shape() const { return shape_; }
  double scale() const { return scale_; }
  double support() const { return (1.0 + shape_.width) * scale_; }
  double plateau() const { return scale_; }

  double operator()(double t) const;
  /// int t^k psi(t/T) e^{-i sigma t} dt by composite Gauss-Legendre.
  complex moment(int k, double sigma) const;
  /// psi-hat(tau) = moment(0, tau); real because psi is even.
  double hat(double tau) const { return moment(0, tau).real(); }

  /// ||d^3/dt^3 psi(t/T)||_{L^1}, by finite differences on a fine grid.
  double third_derivative_l1() const;

 private:
  WindowShape shape_;
  double scale_;
};

/// Profile value on the unit scale.
double window_profile(const WindowShape& shape, double t);

/// 3 profiles x widths {0.5, 0.75, 1.0}.
std::vector<WindowShape> window_family();

/// Samples of w on each grid time.
std::vector<double> sample_window(const Window& w, const std::vector<double>& times);

}  // namespace nlslab
