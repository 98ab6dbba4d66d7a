#include "nlslab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "nlslab/parallel.hpp"

namespace nlslab {

Kappa::Kappa(int sign) : sign_(sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("kappa must be +1 or -1");
}

FourierState evolve(const FourierState& f, double t) {
  if (t == 0.0) return f;
  std::vector<complex> out(f.size());
  const int radius = f.radius();
  for (int n = -radius; n <= radius; ++n) {
    const double phase = -static_cast<double>(n) * n * t;
    out[static_cast<std::size_t>(n + radius)] = f[n] * std::polar(1.0, phase);
  }
  return FourierState(radius, std::move(out), f.period());
}

TimeGrid::TimeGrid(double t_max, std::size_t samples) : t_max_(t_max), samples_(samples) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("TimeGrid: T_max must be positive");
  if (samples < 2) throw std::invalid_argument("TimeGrid: M >= 2 violated");
}

double TimeGrid::operator[](std::size_t k) const {
  if (k + 1 == samples_) return t_max_;
  return -t_max_ + 2.0 * t_max_ * static_cast<double>(k) / static_cast<double>(samples_ - 1);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(samples_);
  for (std::size_t k = 0; k < samples_; ++k) out[k] = (*this)[k];
  return out;
}

bool TimeGrid::resolves(int radius) const {
  const double bound = 4.0 * static_cast<double>(radius) * radius * t_max_ / std::numbers::pi;
  return static_cast<double>(samples_) > bound;
}

SpaceTimeField::SpaceTimeField(TimeGrid grid, int radius, double period)
    : SpaceTimeField(grid, radius,
                     std::vector<complex>(grid.size() * static_cast<std::size_t>(2 * std::max(radius, 0) + 1)),
                     period) {}

SpaceTimeField::SpaceTimeField(TimeGrid grid, int radius, std::vector<complex> data, double period)
    : grid_(grid), radius_(radius), period_(period), data_(std::move(data)) {
  if (radius_ < 0) throw std::invalid_argument("SpaceTimeField: radius must be >= 0");
  if (!(period_ > 0.0)) throw std::invalid_argument("SpaceTimeField: period must be positive");
  if (data_.size() != grid_.size() * width())
    throw std::invalid_argument("SpaceTimeField: data size does not match M * (2N+1)");
  for (const auto& c : data_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("SpaceTimeField: non-finite amplitude");
  }
}

FourierState SpaceTimeField::slice(std::size_t k) const {
  if (k >= grid_.size()) throw std::out_of_range("SpaceTimeField::slice");
  const auto begin = data_.begin() + static_cast<std::ptrdiff_t>(k * width());
  return FourierState(radius_, std::vector<complex>(begin, begin + static_cast<std::ptrdiff_t>(width())), period_);
}

void SpaceTimeField::set_slice(std::size_t k, const FourierState& f) {
  if (k >= grid_.size()) throw std::out_of_range("SpaceTimeField::set_slice");
  if (f.radius() != radius_ || f.period() != period_)
    throw std::invalid_argument("SpaceTimeField::set_slice: radius or period mismatch");
  std::copy(f.coefficients().begin(), f.coefficients().end(),
            data_.begin() + static_cast<std::ptrdiff_t>(k * width()));
}

void SpaceTimeField::require_compatible(const SpaceTimeField& other, const char* where) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument(std::string(where) + ": time grid mismatch");
  if (radius_ != other.radius_) throw std::invalid_argument(std::string(where) + ": radius mismatch");
  if (period_ != other.period_) throw std::invalid_argument(std::string(where) + ": period mismatch");
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& other) {
  require_compatible(other, "SpaceTimeField::+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& other) {
  require_compatible(other, "SpaceTimeField::-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(complex factor) {
  for (auto& c : data_) c *= factor;
  return *this;
}

SpaceTimeField SpaceTimeField::padded(int radius) const {
  if (radius < radius_) throw std::invalid_argument("SpaceTimeField::padded: radius shrinks");
  SpaceTimeField out(grid_, radius, period_);
  for (std::size_t k = 0; k < grid_.size(); ++k)
    for (int n = -radius_; n <= radius_; ++n) out.at(k, n) = at(k, n);
  return out;
}

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
SpaceTimeField operator*(complex c, SpaceTimeField a) { return a *= c; }

SpaceTimeField sample_free_field(const FourierState& f, const TimeGrid& grid) {
  SpaceTimeField out(grid, f.radius(), f.period());
  parallel_for(grid.size(), [&](std::size_t k) { out.set_slice(k, evolve(f, grid[k])); });
  return out;
}

SpaceTimeField conjugate_product(const SpaceTimeField& u, const SpaceTimeField& v, ProductRange range) {
  u.require_compatible(v, "conjugate_product");
  const int radius = u.radius();
  const int out_radius = range == ProductRange::Full ? 2 * radius : radius;
  SpaceTimeField out(u.grid(), out_radius, u.period());
  parallel_for(u.grid().size(), [&](std::size_t k) {
    for (int p = -out_radius; p <= out_radius; ++p) {
      // -n-p must stay inside [-N, N]
      const int lo = std::max(-radius, -radius - p);
      const int hi = std::min(radius, radius - p);
      complex acc{};
      for (int n = lo; n <= hi; ++n) acc += std::conj(u.at(k, n) * v.at(k, -n - p));
      out.at(k, p) = acc;
    }
  });
  return out;
}

SpaceTimeField conjugate_square(const SpaceTimeField& u, ProductRange range) {
  return conjugate_product(u, u, range);
}

void canonicalize(std::vector<PhaseTerm>& terms) {
  std::sort(terms.begin(), terms.end(), [](const PhaseTerm& a, const PhaseTerm& b) {
    return a.power != b.power ? a.power < b.power : a.frequency < b.frequency;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (out > 0 && terms[out - 1].power == terms[i].power && terms[out - 1].frequency == terms[i].frequency) {
      terms[out - 1].amplitude += terms[i].amplitude;
    } else {
      terms[out++] = terms[i];
    }
  }
  terms.resize(out);
  std::erase_if(terms, [](const PhaseTerm& t) { return t.amplitude == complex{}; });
}

ExponentialSumField::ExponentialSumField(int radius, Generator generator, double period)
    : radius_(radius), period_(period), generator_(std::move(generator)) {
  if (radius_ < 0) throw std::invalid_argument("ExponentialSumField: radius must be >= 0");
  if (!generator_) throw std::invalid_argument("ExponentialSumField: empty generator");
}

std::vector<PhaseTerm> ExponentialSumField::terms(int n) const {
  if (n < -radius_ || n > radius_) return {};
  return generator_(n);
}

complex ExponentialSumField::value(int n, double t) const {
  complex acc{};
  for (const auto& term : terms(n))
    acc += term.amplitude * std::pow(t, term.power) * std::polar(1.0, term.frequency * t);
  return acc * std::polar(1.0, -static_cast<double>(n) * n * t);
}

FourierState ExponentialSumField::at(double t) const {
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius_ + 1));
  for (int n = -radius_; n <= radius_; ++n) coeffs[static_cast<std::size_t>(n + radius_)] = value(n, t);
  return FourierState(radius_, std::move(coeffs), period_);
}

SpaceTimeField ExponentialSumField::sample(const TimeGrid& grid) const {
  SpaceTimeField out(grid, radius_, period_);
  parallel_for(static_cast<std::size_t>(2 * radius_ + 1), [&](std::size_t index) {
    const int n = static_cast<int>(index) - radius_;
    const auto mode_terms = terms(n);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      complex acc{};
      for (const auto& term : mode_terms)
        acc += term.amplitude * std::pow(t, term.power) * std::polar(1.0, term.frequency * t);
      out.at(k, n) = acc * std::polar(1.0, -static_cast<double>(n) * n * t);
    }
  });
  return out;
}

ExponentialSumField ExponentialSumField::cached() const {
  auto table = std::make_shared<std::vector<std::vector<PhaseTerm>>>(static_cast<std::size_t>(2 * radius_ + 1));
  parallel_for(table->size(), [&](std::size_t i) { (*table)[i] = generator_(static_cast<int>(i) - radius_); });
  const int radius = radius_;
  return ExponentialSumField(
      radius, [table, radius](int n) { return (*table)[static_cast<std::size_t>(n + radius)]; }, period_);
}

ExponentialSumField free_field(const FourierState& f) {
  return ExponentialSumField(
      f.radius(),
      [f](int n) {
        std::vector<PhaseTerm> out;
        if (f[n] != complex{}) out.push_back({0.0, 0, f[n]});
        return out;
      },
      f.period());
}

long long resonance_denominator(long long n, long long p) { return n * n + (n + p) * (n + p) + p * p; }

ExponentialSumField bilinear_iterate_field(const FourierState& f, const FourierState& g, Kappa kappa) {
  if (f.period() != g.period()) throw std::invalid_argument("bilinear_iterate_field: period mismatch");
  const int radius = std::max(f.radius(), g.radius());
  const double k = kappa.value();
  return ExponentialSumField(
      radius,
      [f, g, k](int p) {
        std::vector<PhaseTerm> out;
        const int nf = f.radius();
        const int ng = g.radius();
        const int lo = std::max(-nf, -ng - p);
        const int hi = std::min(nf, ng - p);
        if (lo > hi) return out;
        // Pair n with -n-p through m = 2n + p; Omega = (m^2 + 3p^2) / 2 depends on |m| only.
        const long long p2 = static_cast<long long>(p) * p;
        complex constant{};
        const int m_max = std::max(std::abs(2 * lo + p), std::abs(2 * hi + p));
        out.reserve(static_cast<std::size_t>(m_max / 2 + 2));
        for (int m = (p % 2 == 0 ? 0 : 1); m <= m_max; m += 2) {
          complex c{};
          const int n1 = (m - p) / 2;
          if (n1 >= lo && n1 <= hi) c += std::conj(f[n1] * g[-n1 - p]);
          if (m != 0) {
            const int n2 = (-m - p) / 2;
            if (n2 >= lo && n2 <= hi) c += std::conj(f[n2] * g[-n2 - p]);
          }
          if (c == complex{}) continue;
          const long long omega = (static_cast<long long>(m) * m + 3 * p2) / 2;
          if (omega == 0) {
            out.push_back({0.0, 1, complex(0.0, -k) * c});
          } else {
            const double w = static_cast<double>(omega);
            out.push_back({w, 0, -k * c / w});
            constant += k * c / w;
          }
        }
        if (constant != complex{}) out.push_back({0.0, 0, constant});
        canonicalize(out);
        return out;
      },
      f.period());
}

ExponentialSumField first_iterate_field(const FourierState& f, Kappa kappa) {
  return bilinear_iterate_field(f, f, kappa);
}

ExponentialSumField conjugate_product_field(const ExponentialSumField& a, const ExponentialSumField& b,
                                           std::optional<int> radius) {
  if (a.period() != b.period()) throw std::invalid_argument("conjugate_product_field: period mismatch");
  const int out_radius = radius.value_or(std::max(a.radius(), b.radius()));
  if (out_radius < 0) throw std::invalid_argument("conjugate_product_field: radius must be >= 0");
  auto ta = std::make_shared<std::vector<std::vector<PhaseTerm>>>();
  auto tb = std::make_shared<std::vector<std::vector<PhaseTerm>>>();
  for (int n = -a.radius(); n <= a.radius(); ++n) ta->push_back(a.terms(n));
  for (int n = -b.radius(); n <= b.radius(); ++n) tb->push_back(b.terms(n));
  const int ra = a.radius();
  const int rb = b.radius();
  return ExponentialSumField(
      out_radius,
      [ta, tb, ra, rb](int p) {
        std::vector<PhaseTerm> out;
        const int lo = std::max(-ra, -rb - p);
        const int hi = std::min(ra, rb - p);
        const double p2 = static_cast<double>(p) * p;
        for (int n = lo; n <= hi; ++n) {
          const auto& xa = (*ta)[static_cast<std::size_t>(n + ra)];
          const auto& xb = (*tb)[static_cast<std::size_t>(-n - p + rb)];
          if (xa.empty() || xb.empty()) continue;
          const double base = static_cast<double>(n) * n + static_cast<double>(n + p) * (n + p) + p2;
          for (const auto& x : xa)
            for (const auto& y : xb)
              out.push_back({base - x.frequency - y.frequency, x.power + y.power,
                             std::conj(x.amplitude * y.amplitude)});
        }
        canonicalize(out);
        return out;
      },
      a.period());
}

ExponentialSumField duhamel_field(const ExponentialSumField& field, Kappa kappa) {
  const double k = kappa.value();
  return ExponentialSumField(
      field.radius(),
      [field, k](int p) {
        std::vector<PhaseTerm> out;
        const complex factor(0.0, -k);
        for (const auto& term : field.terms(p)) {
          const int power = term.power;
          if (term.frequency == 0.0) {
            out.push_back({0.0, power + 1, factor * term.amplitude / static_cast<double>(power + 1)});
            continue;
          }
          // int_0^t s^k e^{as} ds = e^{at} sum_j (-1)^j k!/(k-j)! t^{k-j} / a^{j+1} - (-1)^k k! / a^{k+1}
          const complex a(0.0, term.frequency);
          complex inv = 1.0 / a;
          double falling = 1.0;
          for (int j = 0; j <= power; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            out.push_back({term.frequency, power - j, factor * term.amplitude * sign * falling * inv});
            if (j == power) out.push_back({0.0, 0, -factor * term.amplitude * sign * falling * inv});
            falling *= static_cast<double>(power - j);
            inv /= a;
          }
        }
        canonicalize(out);
        return out;
      },
      field.period());
}

}  // namespace nlslab
