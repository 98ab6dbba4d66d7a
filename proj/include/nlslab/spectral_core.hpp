#pragma once

// Coefficient-space representation of periodic data and the weighted
// sequence norms H^{s,p}.

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace nlslab {

using complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Japanese bracket <x> = (1 + x^2)^{1/2}.
double bracket(double x);

/// Truncated Fourier series sum_{|n|<=N} a(n) e^{inx} of a distribution on a
/// torus. Mode indices are integer frequencies; a state on the torus of period
/// 2*pi/lambda only populates multiples of lambda. Immutable once built.
class FourierState {
 public:
  /// coeffs[n + N] holds a(n). Throws std::invalid_argument on a size mismatch,
  /// negative radius, non-positive period or non-finite amplitudes.
  FourierState(int radius, std::vector<complex> coeffs, double period = kTwoPi);

  static FourierState zero(int radius, double period = kTwoPi);
  static FourierState single_mode(int radius, int mode, complex amplitude,
                                  double period = kTwoPi);

  int radius() const { return radius_; }
  double period() const { return period_; }
  std::size_t size() const { return coeffs_.size(); }

  /// a(n); zero outside the truncation.
  complex operator[](int n) const {
    return (n < -radius_ || n > radius_) ? complex{} : coeffs_[static_cast<std::size_t>(n + radius_)];
  }
  std::span<const complex> coefficients() const { return coeffs_; }

  FourierState scaled(complex factor) const;
  /// Same amplitudes in a wider (or equal) truncation.
  FourierState padded(int radius) const;

  friend bool operator==(const FourierState&, const FourierState&) = default;

 private:
  int radius_;
  double period_;
  std::vector<complex> coeffs_;
};

FourierState operator+(const FourierState& a, const FourierState& b);
FourierState operator-(const FourierState& a, const FourierState& b);

/// Regularity/integrability exponents. p is used by H^{s,p}, b by X^{s,b}.
struct NormSpec {
  double s = 0.0;
  double p = 2.0;
  double b = 0.55;

  /// Throws std::invalid_argument when an exponent is non-finite or p < 1.
  void validate() const;
};

/// (sum_n <n>^{ps} |a(n)|^p)^{1/p}, times (2*pi/L)^{1/p - 1} on a torus of
/// period L. The factor is the lattice measure of the rescaled torus, so that
/// rescale() moves norms by lambda^{1+s+1/p} at high frequency; it is exactly 1
/// on the standard torus. Throws for p < 1.
double hsp_norm(const FourierState& f, double s, double p);

/// hsp_norm(f, s, 2).
double hs_norm(const FourierState& f, double s);

/// a(n) = <n>^alpha for |n| <= N.
FourierState power_data(double alpha, int radius);

/// Zero-mean data on the edge of H^{s0,p}: a(n) = <n>^{-s0-1/p} for
/// 1 <= |n| <= N and a(0) = 0, so the truncated norm diverges like (log N)^{1/p}.
FourierState power_edge_data(double s0, double p, int radius);

/// |a(n)| = <n>^{-s0-1/p} (1 + log<n>)^{-2/p} with independent uniform phases
/// drawn from a 64-bit Mersenne twister seeded with `seed`. The moduli do not
/// depend on the seed, and the H^{s0,p} norm stays bounded as N grows.
FourierState random_data(double s0, double p, int radius, std::uint64_t seed);

/// t = 0 slice of lambda^2 u(lambda^2 t, lambda x): amplitude lambda^2 a(n) is
/// moved to mode lambda*n and the period divided by lambda. Integer lambda only.
FourierState rescale(const FourierState& f, int lambda);

}  // namespace nlslab
