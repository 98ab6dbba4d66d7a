#include "nlslab/spectral_core.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace nlslab {

double bracket(double x) { return std::hypot(1.0, x); }

FourierState::FourierState(int radius, std::vector<complex> coeffs, double period)
    : radius_(radius), period_(period), coeffs_(std::move(coeffs)) {
  if (radius_ < 0) throw std::invalid_argument("FourierState: radius must be >= 0");
  if (!(period_ > 0.0) || !std::isfinite(period_))
    throw std::invalid_argument("FourierState: period must be positive and finite");
  if (coeffs_.size() != static_cast<std::size_t>(2 * radius_ + 1))
    throw std::invalid_argument("FourierState: expected 2N+1 coefficients, got " +
                                std::to_string(coeffs_.size()));
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("FourierState: non-finite amplitude");
  }
}

FourierState FourierState::zero(int radius, double period) {
  return FourierState(radius, std::vector<complex>(static_cast<std::size_t>(2 * std::max(radius, 0) + 1)),
                      period);
}

FourierState FourierState::single_mode(int radius, int mode, complex amplitude, double period) {
  if (mode < -radius || mode > radius)
    throw std::invalid_argument("FourierState::single_mode: mode outside truncation");
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius + 1));
  coeffs[static_cast<std::size_t>(mode + radius)] = amplitude;
  return FourierState(radius, std::move(coeffs), period);
}

FourierState FourierState::scaled(complex factor) const {
  std::vector<complex> out(coeffs_);
  for (auto& c : out) c *= factor;
  return FourierState(radius_, std::move(out), period_);
}

FourierState FourierState::padded(int radius) const {
  if (radius < radius_) throw std::invalid_argument("FourierState::padded: radius shrinks");
  std::vector<complex> out(static_cast<std::size_t>(2 * radius + 1));
  for (int n = -radius_; n <= radius_; ++n) out[static_cast<std::size_t>(n + radius)] = (*this)[n];
  return FourierState(radius, std::move(out), period_);
}

namespace {

FourierState combine(const FourierState& a, const FourierState& b, double sign) {
  if (a.period() != b.period()) throw std::invalid_argument("FourierState: period mismatch");
  const int radius = std::max(a.radius(), b.radius());
  std::vector<complex> out(static_cast<std::size_t>(2 * radius + 1));
  for (int n = -radius; n <= radius; ++n) out[static_cast<std::size_t>(n + radius)] = a[n] + sign * b[n];
  return FourierState(radius, std::move(out), a.period());
}

}  // namespace

FourierState operator+(const FourierState& a, const FourierState& b) { return combine(a, b, 1.0); }
FourierState operator-(const FourierState& a, const FourierState& b) { return combine(a, b, -1.0); }

void NormSpec::validate() const {
  if (!std::isfinite(s) || !std::isfinite(p) || !std::isfinite(b))
    throw std::invalid_argument("NormSpec: exponents must be finite");
  if (p < 1.0) throw std::invalid_argument("NormSpec: p >= 1 violated");
}

double hsp_norm(const FourierState& f, double s, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("hsp_norm: p >= 1 violated");
  const int radius = f.radius();
  double total = 0.0;
  if (p == 2.0) {
    for (int n = -radius; n <= radius; ++n) total += std::pow(bracket(n), 2.0 * s) * std::norm(f[n]);
  } else {
    for (int n = -radius; n <= radius; ++n)
      total += std::pow(bracket(n), p * s) * std::pow(std::abs(f[n]), p);
  }
  const double lattice = kTwoPi / f.period();
  const double measure = lattice == 1.0 ? 1.0 : std::pow(lattice, 1.0 / p - 1.0);
  return measure * std::pow(total, 1.0 / p);
}

double hs_norm(const FourierState& f, double s) { return hsp_norm(f, s, 2.0); }

FourierState power_data(double alpha, int radius) {
  if (radius < 0) throw std::invalid_argument("power_data: N >= 0 violated");
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius + 1));
  for (int n = -radius; n <= radius; ++n)
    coeffs[static_cast<std::size_t>(n + radius)] = std::pow(bracket(n), alpha);
  return FourierState(radius, std::move(coeffs));
}

FourierState power_edge_data(double s0, double p, int radius) {
  if (!(p >= 1.0)) throw std::invalid_argument("power_edge_data: p >= 1 violated");
  if (radius < 0) throw std::invalid_argument("power_edge_data: N >= 0 violated");
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius + 1));
  for (int n = -radius; n <= radius; ++n) {
    if (n != 0) coeffs[static_cast<std::size_t>(n + radius)] = std::pow(bracket(n), -s0 - 1.0 / p);
  }
  return FourierState(radius, std::move(coeffs));
}

FourierState random_data(double s0, double p, int radius, std::uint64_t seed) {
  if (!(p >= 1.0)) throw std::invalid_argument("random_data: p >= 1 violated");
  if (radius < 0) throw std::invalid_argument("random_data: N >= 0 violated");
  std::mt19937_64 rng(seed);
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius + 1));
  for (int n = -radius; n <= radius; ++n) {
    const double weight = bracket(n);
    const double modulus = std::pow(weight, -s0 - 1.0 / p) * std::pow(1.0 + std::log(weight), -2.0 / p);
    // 53 random bits mapped to [0, 1); the engine's output sequence is fixed by the standard.
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    coeffs[static_cast<std::size_t>(n + radius)] = std::polar(modulus, kTwoPi * unit);
  }
  return FourierState(radius, std::move(coeffs));
}

FourierState rescale(const FourierState& f, int lambda) {
  if (lambda <= 0) throw std::invalid_argument("rescale: lambda >= 1 violated");
  if (lambda == 1) return f;
  const int radius = lambda * f.radius();
  const double gain = static_cast<double>(lambda) * lambda;
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius + 1));
  for (int n = -f.radius(); n <= f.radius(); ++n)
    coeffs[static_cast<std::size_t>(lambda * n + radius)] = gain * f[n];
  return FourierState(radius, std::move(coeffs), f.period() / lambda);
}

}  // namespace nlslab
