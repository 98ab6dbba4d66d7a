#pragma once

// Linear Schrodinger flow in coefficient space, sampled space-time fields and
// exact exponential-sum representations of Duhamel iterates.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/spectral_core.hpp"

namespace nlslab {

/// Sign of the nonlinearity, restricted to +1 or -1.
class Kappa {
 public:
  /// Throws std::invalid_argument unless sign is +1 or -1.
  explicit Kappa(int sign);
  static Kappa plus() { return Kappa(1); }
  static Kappa minus() { return Kappa(-1); }
  double value() const { return sign_; }
  int sign() const { return sign_; }
  friend bool operator==(Kappa, Kappa) = default;

 private:
  int sign_;
};

/// ef(n) * e^{-i n^2 t} for every mode.
FourierState evolve(const FourierState& f, double t);

/// Uniform grid t_k = -T_max + 2 T_max k / (M - 1), k = 0..M-1.
class TimeGrid {
 public:
  TimeGrid(double t_max, std::size_t samples);

  double t_max() const { return t_max_; }
  std::size_t size() const { return samples_; }
  double step() const { return 2.0 * t_max_ / static_cast<double>(samples_ - 1); }
  double operator[](std::size_t k) const;
  std::vector<double> times() const;

  /// True when M > (2N)^2 T_max / pi, i.e. phases of the quadratic product are resolved.
  bool resolves(int radius) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_max_;
  std::size_t samples_;
};

/// Mode coefficients on |n| <= N at every grid time. Slice k, mode n lives at
/// data[k * (2N + 1) + n + N].
class SpaceTimeField {
 public:
  SpaceTimeField(TimeGrid grid, int radius, double period = kTwoPi);
  SpaceTimeField(TimeGrid grid, int radius, std::vector<complex> data, double period = kTwoPi);

  const TimeGrid& grid() const { return grid_; }
  int radius() const { return radius_; }
  double period() const { return period_; }
  std::size_t width() const { return static_cast<std::size_t>(2 * radius_ + 1); }

  complex& at(std::size_t k, int n) { return data_[k * width() + static_cast<std::size_t>(n + radius_)]; }
  complex at(std::size_t k, int n) const {
    return data_[k * width() + static_cast<std::size_t>(n + radius_)];
  }
  FourierState slice(std::size_t k) const;
  void set_slice(std::size_t k, const FourierState& f);

  const std::vector<complex>& data() const { return data_; }
  std::vector<complex>& data() { return data_; }

  /// Throws std::invalid_argument when grids, radii or periods differ.
  void require_compatible(const SpaceTimeField& other, const char* where) const;

  SpaceTimeField& operator+=(const SpaceTimeField& other);
  SpaceTimeField& operator-=(const SpaceTimeField& other);
  SpaceTimeField& operator*=(complex factor);

  /// Same samples on a wider or equal radius (zero-filled).
  SpaceTimeField padded(int radius) const;

  friend bool operator==(const SpaceTimeField&, const SpaceTimeField&) = default;

 private:
  TimeGrid grid_;
  int radius_;
  double period_;
  std::vector<complex> data_;
};

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator*(complex c, SpaceTimeField a);

/// Slice k equals evolve(f, t_k).
SpaceTimeField sample_free_field(const FourierState& f, const TimeGrid& grid);

enum class ProductRange { Truncated, Full };

/// Slice-wise coefficients of conj(u) conj(v): mode p receives
/// sum_n conj(u(n)) conj(v(-n-p)). Output radius N (Truncated) or 2N (Full).
SpaceTimeField conjugate_product(const SpaceTimeField& u, const SpaceTimeField& v,
                                 ProductRange range = ProductRange::Truncated);
SpaceTimeField conjugate_square(const SpaceTimeField& u, ProductRange range = ProductRange::Truncated);

/// amplitude * t^power * e^{i frequency t}
struct PhaseTerm {
  double frequency = 0.0;
  int power = 0;
  complex amplitude{};
};

/// Sorts by (power, frequency), merges equal keys and drops exact zeros.
void canonicalize(std::vector<PhaseTerm>& terms);

/// Space-time field known in closed form: mode n at time t equals
/// e^{-i n^2 t} * sum_j A_j t^{k_j} e^{i w_j t}. Terms are produced per mode on
/// demand so that fields with O(N^2) terms never need to be stored.
class ExponentialSumField {
 public:
  using Generator = std::function<std::vector<PhaseTerm>(int)>;

  ExponentialSumField(int radius, Generator generator, double period = kTwoPi);

  int radius() const { return radius_; }
  double period() const { return period_; }
  /// Canonical terms of mode n (empty outside the truncation).
  std::vector<PhaseTerm> terms(int n) const;
  complex value(int n, double t) const;
  FourierState at(double t) const;
  SpaceTimeField sample(const TimeGrid& grid) const;

  /// Freezes the generator output; useful when the same field is queried often.
  ExponentialSumField cached() const;

 private:
  int radius_;
  double period_;
  Generator generator_;
};

/// Free Schrodinger evolution of f.
ExponentialSumField free_field(const FourierState& f);

/// -i kappa int_0^t e^{i(t-t')Delta} conj(e^{it'Delta} f) conj(e^{it'Delta} g) dt',
/// truncated to |p| <= max radius. Mode p collects the n and -n-p pairs of the
/// resonance denominator Omega(n,p) = n^2 + (n+p)^2 + p^2.
ExponentialSumField bilinear_iterate_field(const FourierState& f, const FourierState& g, Kappa kappa);

/// First Picard iterate u_1 as an exact field.
ExponentialSumField first_iterate_field(const FourierState& f, Kappa kappa);

/// Slice-wise conj(a) conj(b) of two exact fields, truncated to |p| <= radius
/// (default: max of the input radii).
ExponentialSumField conjugate_product_field(const ExponentialSumField& a, const ExponentialSumField& b,
                                           std::optional<int> radius = std::nullopt);

/// -i kappa int_0^t e^{i(t-t')Delta} F(t') dt' in closed form.
ExponentialSumField duhamel_field(const ExponentialSumField& field, Kappa kappa);

/// Omega(n,p) = n^2 + (n+p)^2 + p^2 as an exact integer.
long long resonance_denominator(long long n, long long p);

}  // namespace nlslab
