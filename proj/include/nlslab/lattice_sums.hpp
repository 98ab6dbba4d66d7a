#pragma once

// Truncated lattice sums with rigorous integral enclosures of the omitted tails.

#include <string>
#include <vector>

namespace nlslab {

/// A sum known to lie in [value, value + tail_bound].
struct SumPoint {
  std::vector<double> parameters;
  double value = 0.0;
  double tail_bound = 0.0;
  /// tail_bound < 1% of value
  bool certified = false;
};

inline constexpr double kCertifiedFraction = 0.01;

struct SupSumReport {
  std::string name;
  std::vector<std::string> parameter_names;
  std::string grid;
  long long truncation = 0;
  std::vector<SumPoint> points;
  double sup = 0.0;
  std::size_t argsup = 0;
  double max_tail = 0.0;
  bool certified = false;

  /// Fills sup, argsup, max_tail and certified from the points.
  void finalize();
};

/// sum_n <alpha (n + shift)>^{-exponent}, |alpha| >= 1e-300, exponent > 1.
/// Terms with |n + shift| <= K are summed; the two tails are enclosed by
/// integrals of the convex decreasing profile.
SumPoint linear_sum(double alpha, double shift, double exponent, long long K);

/// sum_n <a (n - c)^2 + d>^{-gamma}, a > 0, gamma > 1/2. The summation window
/// grows with sqrt(|d| / a) so that the tails start past the roots of
/// a x^2 + d, where the profile is convex and decreasing.
SumPoint quadratic_sum(double a, double c, double d, double gamma, long long K);

/// int_x^infinity (1 + t^2)^{-gamma} dt for x >= 0, gamma > 1/2.
double bracket_tail_integral(double x, double gamma);

}  // namespace nlslab
