#include "nlslab/xsb.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "nlslab/parallel.hpp"

namespace nlslab {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One plan per transform length; execution through the new-array interface is thread-safe.
class FftPlan {
 public:
  explicit FftPlan(std::size_t size) : size_(size) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(size);
    auto* out = fftw_alloc_complex(size);
    plan_ = fftw_plan_dft_1d(static_cast<int>(size), in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(std::vector<complex>& in, std::vector<complex>& out) const {
    fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  }
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
  fftw_plan plan_;
};

double weight(double x, double exponent) { return exponent == 0.0 ? 1.0 : std::pow(1.0 + x * x, exponent); }

void require_window_fits(const Window& w, const TimeGrid& grid) {
  if (w.support() > grid.t_max() * (1.0 + 1e-12))
    throw std::invalid_argument("xsb: window support " + std::to_string(w.support()) + " exceeds T_max " +
                                std::to_string(grid.t_max()));
}

}  // namespace

TauGrid TauGrid::for_time_grid(const TimeGrid& grid) {
  const std::size_t padded = 2 * (grid.size() - 1);
  TauGrid out;
  out.size = padded;
  out.dtau = kTwoPi / (static_cast<double>(padded) * grid.step());
  out.tau_max = std::numbers::pi / grid.step();
  return out;
}

double SpacetimeTransform::tau(int n, std::size_t k) const {
  const double offset = static_cast<double>(k) - static_cast<double>(grid.size / 2);
  return -static_cast<double>(n) * n + offset * grid.dtau;
}

SpacetimeTransform spacetime_transform(const SpaceTimeField& field, const Window& w) {
  const TimeGrid& tg = field.grid();
  require_window_fits(w, tg);
  SpacetimeTransform out;
  out.radius = field.radius();
  out.grid = TauGrid::for_time_grid(tg);
  const std::size_t P = out.grid.size;
  const std::size_t M = tg.size();
  const double dt = tg.step();
  const double t0 = tg[0];
  const auto psi = sample_window(w, tg.times());
  const FftPlan plan(P);
  out.values.assign(field.width(), std::vector<complex>(P));
  parallel_for(field.width(), [&](std::size_t index) {
    const int n = static_cast<int>(index) - field.radius();
    const double n2 = static_cast<double>(n) * n;
    std::vector<complex> in(P), spectrum(P);
    for (std::size_t j = 0; j < M; ++j) {
      if (psi[j] == 0.0) continue;
      in[j] = psi[j] * field.at(j, n) * std::polar(dt, n2 * tg[j]);
    }
    plan.execute(in, spectrum);
    auto& row = out.values[index];
    for (std::size_t c = 0; c < P; ++c) {
      // column c holds tau' = (c - P/2) dtau; FFT bin index is that offset modulo P
      const long long offset = static_cast<long long>(c) - static_cast<long long>(P / 2);
      const std::size_t bin = static_cast<std::size_t>((offset + static_cast<long long>(P)) % static_cast<long long>(P));
      const double tau_shift = static_cast<double>(offset) * out.grid.dtau;
      row[c] = spectrum[bin] * std::polar(1.0, -tau_shift * t0);
    }
  });
  return out;
}

XsbResult xsb_norm(const SpaceTimeField& field, double s, double b, const Window& w) {
  if (!std::isfinite(s) || !std::isfinite(b)) throw std::invalid_argument("xsb_norm: exponents must be finite");
  const auto transform = spacetime_transform(field, w);
  const TauGrid& grid = transform.grid;
  const std::size_t P = grid.size;
  std::vector<double> tau_weight(P);
  std::vector<char> outer(P);
  for (std::size_t c = 0; c < P; ++c) {
    const double tau = (static_cast<double>(c) - static_cast<double>(P / 2)) * grid.dtau;
    tau_weight[c] = weight(tau, b);
    outer[c] = std::abs(tau) > 0.9 * grid.tau_max;
  }
  std::vector<double> mass(field.width()), tail(field.width());
  parallel_for(field.width(), [&](std::size_t index) {
    const int n = static_cast<int>(index) - field.radius();
    const double space = weight(n, s);
    std::vector<double> inner(P), edge(P);
    for (std::size_t c = 0; c < P; ++c) {
      const double v = tau_weight[c] * std::norm(transform.values[index][c]);
      (outer[c] ? edge : inner)[c] = v;
    }
    const double e = pairwise_sum(edge);
    mass[index] = space * grid.dtau * (pairwise_sum(inner) + e);
    tail[index] = space * grid.dtau * e;
  });
  XsbResult result;
  const double total = pairwise_sum(mass);
  result.value = std::sqrt(total);
  result.tail_fraction = total > 0.0 ? pairwise_sum(tail) / total : 0.0;
  result.unreliable = result.tail_fraction > kTailThreshold;
  result.tau_max = grid.tau_max;
  result.dtau = grid.dtau;
  return result;
}

namespace {

constexpr int kExpansionOrder = 18;

// Window moments on the lattice sigma = j / q, |j| <= J, plus the scaled
// sigma-moments used for isolated bumps far from the origin.
struct ModalTables {
  int q = 0;
  long long J = 0;
  double h = 0.0;
  double reach = 0.0;
  int max_power = 0;
  std::vector<std::vector<complex>> m;  // m[k][j + J]
  double tail_fraction = 0.0;
};

using TableKey = std::tuple<int, double, double, double, int>;

std::shared_ptr<const ModalTables> modal_tables(const Window& w, const ModalOptions& options) {
  static std::mutex mutex;
  static std::map<TableKey, std::shared_ptr<const ModalTables>> cache;
  const TableKey key{static_cast<int>(w.shape().profile), w.shape().width, w.scale(), options.reach,
                     options.max_power};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto tables = std::make_shared<ModalTables>();
  tables->q = std::max(4, static_cast<int>(std::ceil(4.0 * w.scale())));
  tables->h = 1.0 / tables->q;
  tables->reach = options.reach / w.scale();
  tables->J = static_cast<long long>(std::ceil(tables->reach * tables->q));
  tables->max_power = options.max_power;
  const std::size_t width = static_cast<std::size_t>(2 * tables->J + 1);
  tables->m.assign(static_cast<std::size_t>(options.max_power + 1), std::vector<complex>(width));
  parallel_for(width, [&](std::size_t i) {
    const double sigma = static_cast<double>(static_cast<long long>(i) - tables->J) * tables->h;
    for (int k = 0; k <= options.max_power; ++k) tables->m[static_cast<std::size_t>(k)][i] = w.moment(k, sigma);
  });
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(tables)).first->second;
}

struct Bump {
  long long j = 0;
  std::vector<complex> amplitude;  // by power
};

struct ModalEvaluator {
  const ModalTables& t;
  double b;
  // scaled moments M[k][k'][r] = sum_j h m_k conj(m_k') (sigma_j / L)^r
  std::vector<std::vector<std::vector<complex>>> moments;
  std::vector<double> binom0, binom2, binom4;
  double tail_fraction = 0.0;

  ModalEvaluator(const ModalTables& tables, double b_exp) : t(tables), b(b_exp) {
    const std::size_t K = static_cast<std::size_t>(t.max_power + 1);
    moments.assign(K, std::vector<std::vector<complex>>(K, std::vector<complex>(kExpansionOrder + 1)));
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t l = 0; l < K; ++l)
        for (long long j = -t.J; j <= t.J; ++j) {
          const std::size_t i = static_cast<std::size_t>(j + t.J);
          const complex base = t.h * t.m[k][i] * std::conj(t.m[l][i]);
          const double x = static_cast<double>(j) * t.h / t.reach;
          double xr = 1.0;
          for (int r = 0; r <= kExpansionOrder; ++r, xr *= x) moments[k][l][static_cast<std::size_t>(r)] += base * xr;
        }
    const auto binomials = [](double e) {
      std::vector<double> c(kExpansionOrder + 1);
      c[0] = 1.0;
      for (int r = 0; r < kExpansionOrder; ++r) c[static_cast<std::size_t>(r + 1)] = c[static_cast<std::size_t>(r)] * (e - r) / (r + 1);
      return c;
    };
    binom0 = binomials(2.0 * b);
    binom2 = binomials(2.0 * b - 2.0);
    binom4 = binomials(2.0 * b - 4.0);
    double all = 0.0, edge = 0.0;
    for (long long j = -t.J; j <= t.J; ++j) {
      const double sigma = static_cast<double>(j) * t.h;
      const double v = weight(sigma, b) * std::norm(t.m[0][static_cast<std::size_t>(j + t.J)]);
      all += v;
      if (std::abs(sigma) > 0.9 * t.reach) edge += v;
    }
    tail_fraction = all > 0.0 ? edge / all : 0.0;
  }

  // int <omega + sigma>^{2b} |sum_k A_k m_k(sigma)|^2 dsigma for |omega| >= 8 L,
  // expanding <x>^{2b} = |x|^{2b} (1 + x^{-2})^b in powers of sigma / omega.
  double isolated(const Bump& bump) const {
    const double omega = static_cast<double>(bump.j) * t.h;
    const double mag = std::abs(omega);
    const double sgn = omega > 0 ? 1.0 : -1.0;
    const double inv2 = 1.0 / (mag * mag);
    const double ratio = sgn * t.reach / mag;
    std::vector<double> coeff(kExpansionOrder + 1);
    double rr = 1.0;
    for (int r = 0; r <= kExpansionOrder; ++r, rr *= ratio) {
      const auto ri = static_cast<std::size_t>(r);
      coeff[ri] = rr * (binom0[ri] + b * inv2 * binom2[ri] + 0.5 * b * (b - 1.0) * inv2 * inv2 * binom4[ri]);
    }
    complex total{};
    for (std::size_t k = 0; k < bump.amplitude.size(); ++k) {
      if (bump.amplitude[k] == complex{}) continue;
      for (std::size_t l = 0; l < bump.amplitude.size(); ++l) {
        if (bump.amplitude[l] == complex{}) continue;
        complex w{};
        for (std::size_t r = 0; r <= kExpansionOrder; ++r) w += coeff[r] * moments[k][l][r];
        total += bump.amplitude[k] * std::conj(bump.amplitude[l]) * w;
      }
    }
    return std::pow(mag, 2.0 * b) * total.real();
  }

  double cluster(const std::vector<Bump>& bumps, std::size_t first, std::size_t last) const {
    const long long lo = bumps[first].j - t.J;
    const long long hi = bumps[last].j + t.J;
    std::vector<complex> H(static_cast<std::size_t>(hi - lo + 1));
    for (std::size_t i = first; i <= last; ++i) {
      const auto& bump = bumps[i];
      for (std::size_t k = 0; k < bump.amplitude.size(); ++k) {
        const complex a = bump.amplitude[k];
        if (a == complex{}) continue;
        const auto& table = t.m[k];
        complex* dst = H.data() + (bump.j - t.J - lo);
        for (std::size_t i2 = 0; i2 < table.size(); ++i2) dst[i2] += a * table[i2];
      }
    }
    std::vector<double> terms(H.size());
    for (std::size_t i = 0; i < H.size(); ++i) {
      const double tau = static_cast<double>(lo + static_cast<long long>(i)) * t.h;
      terms[i] = weight(tau, b) * std::norm(H[i]);
    }
    return t.h * pairwise_sum(terms);
  }
};

}  // namespace

XsbResult xsb_norm(const ExponentialSumField& field, double s, double b, const Window& w,
                   const ModalOptions& options) {
  if (!std::isfinite(s) || !std::isfinite(b)) throw std::invalid_argument("xsb_norm: exponents must be finite");
  if (options.max_power < 0 || !(options.reach > 0.0)) throw std::invalid_argument("xsb_norm: bad ModalOptions");
  const auto tables = modal_tables(w, options);
  const ModalEvaluator eval(*tables, b);
  const int radius = field.radius();
  const std::size_t modes = static_cast<std::size_t>(2 * radius + 1);
  std::vector<double> mass(modes);
  parallel_for(modes, [&](std::size_t index) {
    const int p = static_cast<int>(index) - radius;
    const auto terms = field.terms(p);
    if (terms.empty()) return;
    std::vector<Bump> bumps;
    bumps.reserve(terms.size());
    std::map<long long, std::size_t> slot;
    for (const auto& term : terms) {
      if (term.power > tables->max_power)
        throw std::invalid_argument("xsb_norm: polynomial power exceeds ModalOptions::max_power");
      const double scaled = term.frequency * tables->q;
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled)))
        throw std::invalid_argument("xsb_norm: frequency is not on the 1/q lattice");
      const long long j = static_cast<long long>(rounded);
      auto [it, inserted] = slot.try_emplace(j, bumps.size());
      if (inserted) bumps.push_back({j, std::vector<complex>(static_cast<std::size_t>(tables->max_power + 1))});
      bumps[it->second].amplitude[static_cast<std::size_t>(term.power)] += term.amplitude;
    }
    std::sort(bumps.begin(), bumps.end(), [](const Bump& x, const Bump& y) { return x.j < y.j; });
    std::vector<double> parts;
    std::size_t first = 0;
    while (first < bumps.size()) {
      std::size_t last = first;
      while (last + 1 < bumps.size() && bumps[last + 1].j - bumps[last].j < 2 * tables->J) ++last;
      if (first == last && std::llabs(bumps[first].j) >= 8 * tables->J) {
        parts.push_back(eval.isolated(bumps[first]));
      } else {
        parts.push_back(eval.cluster(bumps, first, last));
      }
      first = last + 1;
    }
    mass[index] = weight(p, s) * pairwise_sum(parts);
  });
  XsbResult result;
  result.value = std::sqrt(std::max(0.0, pairwise_sum(mass)));
  result.tail_fraction = eval.tail_fraction;
  result.unreliable = result.tail_fraction > kTailThreshold;
  result.tau_max = tables->reach;
  result.dtau = tables->h;
  return result;
}

namespace {

template <class Field, class Eval>
RestrictionResult family_minimum(const Field& field, double T, Eval eval) {
  RestrictionResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& shape : window_family()) {
    const XsbResult r = eval(field, Window(shape, T));
    out.members.emplace_back(shape.name(), r);
    if (r.value < out.value) {
      out.value = r.value;
      out.window = shape.name();
      out.unreliable = r.unreliable;
    }
  }
  return out;
}

}  // namespace

RestrictionResult restriction_norm(const SpaceTimeField& field, double T, double s, double b) {
  if (!(T > 0.0) || T > field.grid().t_max() / 2.0 * (1.0 + 1e-12))
    throw std::invalid_argument("restriction_norm: T <= T_max / 2 violated");
  return family_minimum(field, T, [&](const SpaceTimeField& f, const Window& w) { return xsb_norm(f, s, b, w); });
}

RestrictionResult restriction_norm(const ExponentialSumField& field, double T, double s, double b,
                                   const ModalOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("restriction_norm: T > 0 violated");
  return family_minimum(field, T,
                        [&](const ExponentialSumField& f, const Window& w) { return xsb_norm(f, s, b, w, options); });
}

}  // namespace nlslab
