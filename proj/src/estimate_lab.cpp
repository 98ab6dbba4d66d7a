#include "nlslab/estimate_lab.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

#include "nlslab/parallel.hpp"

namespace nlslab {

// ---- region -------------------------------------------------------------------

RegionSpec admissible_region(double s0, double p) {
  if (!(p > 0.0) || !std::isfinite(p) || !std::isfinite(s0))
    throw std::invalid_argument("admissible_region: p > 0 violated");
  RegionSpec r;
  r.s0 = s0;
  r.p = p;
  r.admissible = 3.0 / p + s0 > 5.0 / 6.0;
  r.lower = -1.0 / 6.0 - s0 - 1.0 / p;
  r.upper = -1.0 + 2.0 / p;
  r.empty = !(r.lower < r.upper);
  return r;
}

InversePWindow admissible_inverse_p_window(double s0) {
  InversePWindow w;
  w.lower = (5.0 / 6.0 - s0) / 3.0;
  w.upper = 0.5;
  w.empty = !(w.lower < w.upper);
  return w;
}

ProofParameters proof_parameters(double s0, double p, double s, double b) {
  ProofParameters q;
  q.beta = 2.0 * (1.0 - b);
  q.beta1 = 2.0 * (1.0 - b);
  q.beta2 = 2.0 * b;
  q.sigma = -s;
  q.sigma0 = -s0;
  q.epsilon = b - 0.5;
  q.theta = (1.0 + 2.0 * q.epsilon) / (3.0 * (1.0 - 2.0 * q.epsilon));
  q.eta = 4.0 / 3.0 * (1.0 - 4.0 * q.epsilon) - 2.0 * q.sigma0 - 2.0 * q.sigma;
  const double inv_q1 = 1.0 - 2.0 / p;
  q.q1 = inv_q1 != 0.0 ? 1.0 / inv_q1 : std::numeric_limits<double>::infinity();
  q.p1 = p / 2.0;
  const double inv_r1 = 2.0 - 4.0 / p;
  q.r1 = inv_r1 != 0.0 ? 1.0 / inv_r1 : std::numeric_limits<double>::infinity();
  return q;
}

bool bounded_verdict(const std::vector<double>& values, double limit) {
  if (values.size() < 3) return false;
  const auto last = std::vector<double>(values.end() - 3, values.end());
  for (double v : last)
    if (!std::isfinite(v) || !(v > 0.0)) return false;
  const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
  return *hi / *lo <= limit;
}

// ---- lattice sums -------------------------------------------------------------

namespace {

void require_gamma(double gamma, const char* where) {
  if (!(gamma > 0.5)) throw std::invalid_argument(std::string(where) + ": gamma > 1/2 violated");
}

template <class Body>
SupSumReport evaluate_grid(std::string name, std::vector<std::string> parameter_names, std::string grid,
                           long long K, std::size_t count, Body body) {
  SupSumReport report;
  report.name = std::move(name);
  report.parameter_names = std::move(parameter_names);
  report.grid = std::move(grid);
  report.truncation = K;
  report.points.resize(count);
  parallel_for(count, [&](std::size_t i) { report.points[i] = body(i); });
  report.finalize();
  return report;
}

}  // namespace

SupSumReport sup_sum_shift(double gamma, const std::vector<double>& y_grid, long long K) {
  require_gamma(gamma, "sup_sum_shift");
  return evaluate_grid("shift", {"y"}, "y reduced modulo 1", K, y_grid.size(), [&](std::size_t i) {
    const double y = y_grid[i];
    const double reduced = y - std::floor(y);
    SumPoint pt = linear_sum(1.0, -reduced, 2.0 * gamma, K);
    pt.parameters = {y};
    return pt;
  });
}

SupSumReport sup_sum_quadratic(double gamma, const std::vector<double>& y_grid, const std::vector<double>& z_grid,
                               bool refine, long long K) {
  require_gamma(gamma, "sup_sum_quadratic");
  std::vector<std::pair<double, double>> pts;
  for (double y : y_grid) {
    for (double z : z_grid) pts.emplace_back(y, z);
    if (refine) pts.emplace_back(y, y * y / 4.0);
  }
  return evaluate_grid("quadratic", {"y", "z"}, refine ? "y x z plus z = y^2/4" : "y x z", K, pts.size(),
                       [&](std::size_t i) {
                         const auto [y, z] = pts[i];
                         SumPoint pt = quadratic_sum(1.0, y / 2.0, z - y * y / 4.0, gamma, K);
                         pt.parameters = {y, z};
                         return pt;
                       });
}

SupSumReport double_root_family(double gamma, int m_max, long long K) {
  require_gamma(gamma, "double_root_family");
  if (m_max < 1) throw std::invalid_argument("double_root_family: m_max >= 1 violated");
  return evaluate_grid("double-root", {"y", "z"}, "y = 2m, z = m^2", K, static_cast<std::size_t>(m_max),
                       [&](std::size_t i) {
                         const double m = static_cast<double>(i + 1);
                         SumPoint pt = quadratic_sum(1.0, m, 0.0, gamma, K);
                         pt.parameters = {2.0 * m, m * m};
                         return pt;
                       });
}

SumPoint corollary_first_sum(int k, double tau, double gamma1, long long K) {
  require_gamma(gamma1, "corollary_first_sum");
  // (n+k)^2 + n^2 - tau = 2 (n + k/2)^2 + k^2/2 - tau
  const double kk = static_cast<double>(k);
  SumPoint pt = quadratic_sum(2.0, -kk / 2.0, kk * kk / 2.0 - tau, gamma1, K);
  pt.parameters = {kk, tau};
  return pt;
}

double corollary_shift(int m, int k, double tau) {
  if (m == k) throw std::invalid_argument("corollary_shift: m != k violated");
  const double mm = static_cast<double>(m), kk = static_cast<double>(k);
  return (tau - kk * kk + 2.0 * mm * mm) / (2.0 * (mm - kk));
}

SumPoint corollary_second_sum(int m, int k, double tau, double gamma2, long long K) {
  require_gamma(gamma2, "corollary_second_sum");
  if (m == k) throw std::invalid_argument("corollary_second_sum: m != k violated");
  // tau - (n+k)^2 + (n+m)^2 + m^2 = 2 (m - k) (n + C)
  SumPoint pt = linear_sum(2.0 * static_cast<double>(m - k), corollary_shift(m, k, tau), 2.0 * gamma2, K);
  pt.parameters = {static_cast<double>(m), static_cast<double>(k), tau};
  return pt;
}

CorollaryReports check_corollary_sums(double gamma1, double gamma2, const std::vector<KTau>& first_grid,
                                      const std::vector<MKTau>& second_grid, long long K) {
  require_gamma(gamma1, "check_corollary_sums");
  require_gamma(gamma2, "check_corollary_sums");
  for (const auto& g : second_grid)
    if (g.m == g.k) throw std::invalid_argument("check_corollary_sums: m != k violated");
  CorollaryReports out;
  out.first = evaluate_grid("corollary-first", {"k", "tau"}, "default (k, tau) grid", K, first_grid.size(),
                            [&](std::size_t i) { return corollary_first_sum(first_grid[i].k, first_grid[i].tau, gamma1, K); });
  out.second = evaluate_grid("corollary-second", {"m", "k", "tau"}, "default (m, k, tau) grid", K, second_grid.size(),
                             [&](std::size_t i) {
                               const auto& g = second_grid[i];
                               return corollary_second_sum(g.m, g.k, g.tau, gamma2, K);
                             });
  return out;
}

std::vector<double> quadratic_y_grid() {
  std::vector<double> ys;
  for (int i = 0; i <= 40; ++i) ys.push_back(i * 0.25);
  return ys;
}

std::vector<double> quadratic_z_grid() {
  std::vector<double> zs;
  for (int i = -40; i <= 40; ++i) zs.push_back(i * 0.5);
  return zs;
}

std::vector<KTau> default_first_grid() {
  std::vector<KTau> out;
  for (int k = -8; k <= 8; ++k) {
    const double base = static_cast<double>(k) * k / 2.0;
    for (int j = -8; j <= 8; ++j) out.push_back({k, base + j / 4.0});
    for (double tau : {static_cast<double>(k) * k, -100.0, 100.0, 1000.0}) out.push_back({k, tau});
  }
  return out;
}

std::vector<MKTau> default_second_grid() {
  std::vector<MKTau> out;
  for (int m = -6; m <= 6; ++m)
    for (int k = -6; k <= 6; ++k) {
      if (m == k) continue;
      const double base = static_cast<double>(k) * k - 2.0 * m * m;
      for (int j = -2; j <= 2; ++j) {
        out.push_back({m, k, base + 2.0 * (m - k) * j});          // C integer
        out.push_back({m, k, base + 2.0 * (m - k) * (j + 0.5)});  // C half-integer
      }
      out.push_back({m, k, 0.0});
    }
  return out;
}

SupSumReport check_decay_lemma(double gamma, const std::vector<double>& y_grid, long long K) {
  require_gamma(gamma, "check_decay_lemma");
  return evaluate_grid("decay", {"y"}, "y on [0, 1e3]", K, y_grid.size(), [&](std::size_t i) {
    const double y = y_grid[i];
    SumPoint pt = quadratic_sum(1.0, 0.0, y * y, gamma, K);
    const double scale = std::pow(bracket(y), 2.0 * gamma - 1.0);
    pt.value *= scale;
    pt.tail_bound *= scale;
    pt.parameters = {y};
    return pt;
  });
}

std::vector<double> decay_grid(int count) {
  if (count < 2) throw std::invalid_argument("decay_grid: count >= 2 violated");
  std::vector<double> out{0.0};
  for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, -2.0 + 5.0 * i / (count - 1)));
  return out;
}

// ---- convolution lemma -------------------------------------------------------

std::string profile_name(ConvolutionProfile profile) {
  switch (profile) {
    case ConvolutionProfile::Gaussian: return "gaussian";
    case ConvolutionProfile::Cauchy3: return "cauchy3";
    case ConvolutionProfile::WindowHat: return "window-hat";
  }
  return "?";
}

namespace {

// psi-hat of the default window on [-R, R] with spacing `step`, from a Riemann
// sum of samples (spectrally accurate for a smooth compactly supported psi).
struct HatTable {
  double step = 0.0;
  long long half = 0;
  std::vector<double> values;

  double at(long long j) const { return values[static_cast<std::size_t>(j + half)]; }
};

HatTable window_hat_table(double R) {
  const Window w;
  const double support = w.support();
  const double dt = std::numbers::pi / (2.0 * R);
  const long long J = static_cast<long long>(std::ceil(support / dt));
  std::size_t P = 1;
  while (static_cast<double>(P) < 64.0 * kTwoPi / dt) P <<= 1;
  std::vector<complex> in(P), out(P);
  for (long long j = -J; j <= J; ++j)
    in[static_cast<std::size_t>((j + static_cast<long long>(P)) % static_cast<long long>(P))] = w(j * dt) * dt;
  {
    static std::mutex m;
    std::lock_guard lock(m);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(P), reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  HatTable table;
  table.step = kTwoPi / (static_cast<double>(P) * dt);
  table.half = static_cast<long long>(std::floor(R / table.step));
  table.values.resize(static_cast<std::size_t>(2 * table.half + 1));
  for (long long j = -table.half; j <= table.half; ++j) {
    const std::size_t bin = static_cast<std::size_t>((j + static_cast<long long>(P)) % static_cast<long long>(P));
    table.values[static_cast<std::size_t>(j + table.half)] = out[bin].real();
  }
  return table;
}

double window_third_derivative_bound() {
  static const double bound = 1.5 * Window().third_derivative_l1();
  return bound;
}

double default_range(ConvolutionProfile profile) {
  switch (profile) {
    case ConvolutionProfile::Gaussian: return 8.0;
    case ConvolutionProfile::Cauchy3: return 200.0;
    case ConvolutionProfile::WindowHat: return 16000.0;
  }
  return 0.0;
}

// sqrt(2) int_{|tau| > R} <tau> |phi|, using <A> <= sqrt(2) <tau + A> <tau>.
double convolution_tail(ConvolutionProfile profile, double R) {
  const double c = 2.0 * std::numbers::sqrt2;
  switch (profile) {
    case ConvolutionProfile::Gaussian:
      return c * (0.5 * std::sqrt(std::numbers::pi) * std::erfc(R) + 0.5 * std::exp(-R * R));
    case ConvolutionProfile::Cauchy3:
      return c * bracket_tail_integral(R, 2.5);
    case ConvolutionProfile::WindowHat:
      // |psi-hat(tau)| <= ||psi'''||_1 / |tau|^3
      return c * window_third_derivative_bound() * (1.0 / R + 0.5 / (R * R));
  }
  return 0.0;
}

double convolution_value(ConvolutionProfile profile, double A, double R, const HatTable* table) {
  const double scale = bracket(A);
  if (profile == ConvolutionProfile::WindowHat) {
    const long long half = static_cast<long long>(std::floor(R / table->step));
    std::vector<double> terms(static_cast<std::size_t>(2 * half + 1));
    for (long long j = -half; j <= half; ++j) {
      const double tau = static_cast<double>(j) * table->step;
      const double w = (j == -half || j == half) ? 0.5 : 1.0;
      terms[static_cast<std::size_t>(j + half)] = w * std::abs(table->at(j)) / bracket(tau + A);
    }
    return scale * table->step * pairwise_sum(terms);
  }
  const auto phi = [&](double tau) {
    return profile == ConvolutionProfile::Gaussian ? std::exp(-tau * tau) : std::pow(1.0 + tau * tau, -3.0);
  };
  const auto integrand = [&](double tau) { return phi(tau) / bracket(tau + A); };
  std::vector<double> cuts{-R, R, 0.0};
  if (-A > -R && -A < R) cuts.push_back(-A);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // subdivide long pieces so the adaptive rule sees the peak
    const double a = cuts[i], b = cuts[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 4.0)));
    for (int j = 0; j < pieces; ++j) {
      const double lo = a + (b - a) * j / pieces;
      const double hi = a + (b - a) * (j + 1) / pieces;
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 10, 1e-13);
    }
  }
  return scale * total;
}

}  // namespace

double profile_mass(ConvolutionProfile profile) {
  switch (profile) {
    case ConvolutionProfile::Gaussian: return std::sqrt(std::numbers::pi);
    case ConvolutionProfile::Cauchy3: return 3.0 * std::numbers::pi / 8.0;
    case ConvolutionProfile::WindowHat: {
      const HatTable table = window_hat_table(default_range(profile));
      std::vector<double> terms;
      for (double v : table.values) terms.push_back(std::abs(v));
      return table.step * pairwise_sum(terms) + convolution_tail(profile, default_range(profile)) / 2.0;
    }
  }
  return 0.0;
}

ConvolutionLemmaReport check_convolution_lemma(ConvolutionProfile profile, const std::vector<double>& A_grid,
                                               std::optional<double> range) {
  const double R = range.value_or(default_range(profile));
  if (!(R > 0.0)) throw std::invalid_argument("check_convolution_lemma: range > 0 violated");
  std::optional<HatTable> table;
  if (profile == ConvolutionProfile::WindowHat) table = window_hat_table(2.0 * R);
  const HatTable* tp = table ? &*table : nullptr;
  ConvolutionLemmaReport out;
  out.range = R;
  const double tail = convolution_tail(profile, R);
  out.report = evaluate_grid("convolution/" + profile_name(profile), {"A"}, "A grid", 0, A_grid.size(),
                             [&](std::size_t i) {
                               SumPoint pt;
                               pt.parameters = {A_grid[i]};
                               pt.value = convolution_value(profile, A_grid[i], R, tp);
                               pt.tail_bound = tail;
                               pt.certified = tail < kCertifiedFraction * pt.value;
                               return pt;
                             });
  std::vector<double> doubled(A_grid.size());
  parallel_for(A_grid.size(), [&](std::size_t i) { doubled[i] = convolution_value(profile, A_grid[i], 2.0 * R, tp); });
  out.doubled_sup = doubled.empty() ? 0.0 : *std::max_element(doubled.begin(), doubled.end());
  out.stable = out.report.sup > 0.0 && std::abs(out.doubled_sup - out.report.sup) < 0.02 * out.report.sup;
  return out;
}

// ---- c_p bound ----------------------------------------------------------------

CpBoundReport check_cp_bound(const FourierState& f, const Window& w, const std::vector<double>& tau_grid,
                             const std::vector<int>& p_set) {
  constexpr int q = 4;
  constexpr double reach = 96.0;
  const long long J = static_cast<long long>(reach * q);
  std::vector<double> hat(static_cast<std::size_t>(2 * J + 1));
  parallel_for(hat.size(), [&](std::size_t i) {
    hat[i] = w.hat(static_cast<double>(static_cast<long long>(i) - J) / q);
  });
  const auto hat_at = [&](long long j) {
    return (j < -J || j > J) ? 0.0 : hat[static_cast<std::size_t>(j + J)];
  };
  std::vector<long long> tau_index(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    const double scaled = tau_grid[i] * q;
    if (std::abs(scaled - std::round(scaled)) > 1e-9)
      throw std::invalid_argument("check_cp_bound: tau values must be multiples of 1/4");
    tau_index[i] = static_cast<long long>(std::round(scaled));
  }
  const int N = f.radius();
  struct Best {
    double ratio = 0.0, window = 0.0, tau = 0.0;
    int p = 0;
    std::size_t points = 0;
  };
  std::vector<Best> best(p_set.size());
  parallel_for(p_set.size(), [&](std::size_t ip) {
    const int p = p_set[ip];
    const int lo = std::max(-N, -N - p), hi = std::min(N, N - p);
    for (std::size_t it = 0; it < tau_grid.size(); ++it) {
      complex c{};
      double majorant = 0.0, window_sum = 0.0;
      for (int n = lo; n <= hi; ++n) {
        const long long lambda = static_cast<long long>(n) * n + static_cast<long long>(n + p) * (n + p);
        const double h = hat_at(tau_index[it] - q * lambda);
        window_sum += std::abs(h);
        const complex x = std::conj(f[n] * f[-n - p]);
        c += x * h;
        majorant += std::norm(x) * std::abs(h);
      }
      auto& b = best[ip];
      b.window = std::max(b.window, window_sum);
      if (majorant <= 1e-300) continue;
      ++b.points;
      const double ratio = std::norm(c) / majorant;
      if (ratio > b.ratio) {
        b.ratio = ratio;
        b.tau = tau_grid[it];
        b.p = p;
      }
    }
  });
  CpBoundReport out;
  for (const auto& b : best) {
    out.points += b.points;
    out.window_constant = std::max(out.window_constant, b.window);
    if (b.ratio > out.sup_ratio) {
      out.sup_ratio = b.ratio;
      out.argsup_p = b.p;
      out.argsup_tau = b.tau;
    }
  }
  return out;
}

// ---- I(k, tau) -------------------------------------------------------------------

SupIReport sup_I(const FourierState& f, double s, double b, const std::vector<KTau>& grid, int n_sum,
                 std::optional<std::pair<double, double>> normalise) {
  const int N = f.radius();
  if (n_sum < 4 * N) throw std::invalid_argument("sup_I: N_sum >= 4N violated");
  SupIReport out;
  out.grid = grid;
  out.n_sum = n_sum;
  out.total.resize(grid.size());
  out.diagonal.resize(grid.size());
  out.off_diagonal.resize(grid.size());
  const int span = n_sum + N;
  std::vector<double> inv_weight(static_cast<std::size_t>(2 * span + 1));  // <j>^{-2s}
  for (int j = -span; j <= span; ++j) inv_weight[static_cast<std::size_t>(j + span)] = std::pow(bracket(j), -2.0 * s);
  std::vector<int> support;
  for (int m = -N; m <= N; ++m)
    if (f[m] != complex{}) support.push_back(m);
  parallel_for(grid.size(), [&](std::size_t g) {
    const double k = grid[g].k;
    const double tau = grid[g].tau;
    std::vector<double> outer(static_cast<std::size_t>(2 * n_sum + 1));
    for (int n = -n_sum; n <= n_sum; ++n) {
      const double R1 = -tau + (n + k) * (n + k) + static_cast<double>(n) * n;
      outer[static_cast<std::size_t>(n + n_sum)] =
          std::pow(bracket(n), 2.0 * s) * std::pow(bracket(R1), -2.0 * (1.0 - b));
    }
    double diag = 0.0;
    std::vector<double> per_m;
    std::vector<double> inner(static_cast<std::size_t>(2 * n_sum + 1));
    for (int m : support) {
      const double a2 = std::norm(f[m]);
      for (int n = -n_sum; n <= n_sum; ++n) {
        const double R2 = tau - (n + k) * (n + k) + static_cast<double>(m) * m + static_cast<double>(n + m) * (n + m);
        inner[static_cast<std::size_t>(n + n_sum)] = outer[static_cast<std::size_t>(n + n_sum)] *
                                                     inv_weight[static_cast<std::size_t>(n + m + span)] *
                                                     std::pow(bracket(R2), -2.0 * b);
      }
      const double value = a2 * pairwise_sum(inner);
      if (m == grid[g].k)
        diag = value;
      else
        per_m.push_back(value);
    }
    out.diagonal[g] = diag;
    out.off_diagonal[g] = pairwise_sum(per_m);
    out.total[g] = diag + out.off_diagonal[g];
  });
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (g == 0 || out.total[g] > out.sup) {
      out.sup = out.total[g];
      out.argsup = grid[g];
    }
    out.sup_diagonal = std::max(out.sup_diagonal, out.diagonal[g]);
    out.sup_off_diagonal = std::max(out.sup_off_diagonal, out.off_diagonal[g]);
  }
  if (normalise) {
    const double norm = hsp_norm(f, normalise->first, normalise->second);
    out.normalized = norm > 0.0 ? out.sup / (norm * norm) : 0.0;
  }
  return out;
}

std::vector<KTau> sup_I_grid(int radius) {
  std::set<int> ks{0, 1, -1, radius / 4, -radius / 4, radius / 2, -radius / 2, radius};
  std::vector<KTau> out;
  const double N = radius;
  for (int k : ks) {
    const double kk = k;
    const double q = std::floor(N / 4.0);
    for (double tau : {0.0, kk * kk, kk * kk / 2.0, (q + kk) * (q + kk) + q * q, 2.0 * N * N, -N * N})
      out.push_back({k, tau});
  }
  return out;
}

// ---- bilinear ratios ---------------------------------------------------------------

double bilinear_ratio(const FourierState& f, const FourierState& g, double s, double b, double s0, double p) {
  const Window w;
  const double data = hsp_norm(f, s0, p);
  const double v = xsb_norm(free_field(g), s, b, w).value;
  if (!(data > 0.0) || !(v > 0.0)) throw std::invalid_argument("bilinear_ratio: zero denominator");
  const double num = xsb_norm(bilinear_iterate_field(f, g, Kappa::plus()), s, b, w).value;
  return num / (data * v);
}

double bilinear_ratio(const FourierState& f, const SpaceTimeField& v, double s, double b, double s0, double p,
                      QuadratureRule rule) {
  const Window w;
  if (v.grid().t_max() < w.support()) throw std::invalid_argument("bilinear_ratio: T_max >= 2 violated");
  const int radius = std::max(f.radius(), v.radius());
  const SpaceTimeField vv = v.padded(radius);
  const SpaceTimeField u0 = sample_free_field(f.padded(radius), v.grid());
  const double data = hsp_norm(f, s0, p);
  const double vn = xsb_norm(vv, s, b, w).value;
  if (!(data > 0.0) || !(vn > 0.0)) throw std::invalid_argument("bilinear_ratio: zero denominator");
  const double num = xsb_norm(duhamel_field(conjugate_product(u0, vv), Kappa::plus(), rule), s, b, w).value;
  return num / (data * vn);
}

double kpv_bilinear_ratio(const ExponentialSumField& v, const ExponentialSumField& w, double s, double b) {
  const Window win;
  const double nv = xsb_norm(v, s, b, win).value;
  const double nw = xsb_norm(w, s, b, win).value;
  if (!(nv > 0.0) || !(nw > 0.0)) throw std::invalid_argument("kpv_bilinear_ratio: zero denominator");
  return xsb_norm(conjugate_product_field(v, w), s, b - 1.0, win).value / (nv * nw);
}

double kpv_bilinear_ratio(const SpaceTimeField& v, const SpaceTimeField& w, double s, double b) {
  const Window win;
  const double nv = xsb_norm(v, s, b, win).value;
  const double nw = xsb_norm(w, s, b, win).value;
  if (!(nv > 0.0) || !(nw > 0.0)) throw std::invalid_argument("kpv_bilinear_ratio: zero denominator");
  return xsb_norm(conjugate_product(v, w), s, b - 1.0, win).value / (nv * nw);
}

namespace {

RatioSample summarise(int radius, std::vector<double> ratios) {
  RatioSample out;
  out.radius = radius;
  out.ratios = ratios;
  if (ratios.empty()) return out;
  out.max = *std::max_element(ratios.begin(), ratios.end());
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  out.median = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  return out;
}

}  // namespace

RatioSample bilinear_probe(double s, double b, double s0, double p, int radius, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("bilinear_probe: trials >= 1 violated");
  std::vector<double> ratios(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    const auto f = random_data(s0, p, radius, seed + 2 * static_cast<std::uint64_t>(i));
    const auto g = random_data(s, 2.0, radius, seed + 2 * static_cast<std::uint64_t>(i) + 1);
    ratios[static_cast<std::size_t>(i)] = bilinear_ratio(f, g, s, b, s0, p);
  }
  return summarise(radius, std::move(ratios));
}

RatioSample kpv_probe(double s, double b, int radius, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("kpv_probe: trials >= 1 violated");
  std::vector<double> ratios(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    const auto v = random_data(s, 2.0, radius, seed + 2 * static_cast<std::uint64_t>(i));
    const auto w = random_data(s, 2.0, radius, seed + 2 * static_cast<std::uint64_t>(i) + 1);
    ratios[static_cast<std::size_t>(i)] = kpv_bilinear_ratio(free_field(v), free_field(w), s, b);
  }
  return summarise(radius, std::move(ratios));
}

std::vector<double> kpv_failure_probe(double s, double b, const std::vector<int>& radii) {
  std::vector<double> out;
  for (int N : radii) {
    if (N < 1) throw std::invalid_argument("kpv_failure_probe: N >= 1 violated");
    const auto v = FourierState::single_mode(N, N, 1.0);
    const auto w = FourierState::single_mode(N, 1 - N, 1.0);
    out.push_back(kpv_bilinear_ratio(free_field(v), free_field(w), s, b));
  }
  return out;
}

// ---- sweeps ------------------------------------------------------------------------

FourierState make_data(DataFamily family, double s0, double p, int radius, std::uint64_t seed) {
  return family == DataFamily::PowerEdge ? power_edge_data(s0, p, radius) : random_data(s0, p, radius, seed);
}

SmoothingReport smoothing_sweep(double s0, double p, double s, double b, const std::vector<int>& radii,
                                DataFamily family, std::uint64_t seed, Kappa kappa) {
  if (!(p >= 1.0)) throw std::invalid_argument("smoothing_sweep: p >= 1 violated");
  const bool endpoint = s == 0.0 && p == 2.0;
  if (!endpoint && !(s < -1.0 + 2.0 / p))
    throw std::invalid_argument("smoothing_sweep: s < -1 + 2/p violated (s = " + std::to_string(s) +
                                ", -1 + 2/p = " + std::to_string(-1.0 + 2.0 / p) + ")");
  if (radii.empty()) throw std::invalid_argument("smoothing_sweep: empty N list");
  SmoothingReport out;
  out.s0 = s0;
  out.p = p;
  out.s = s;
  out.b = b;
  out.radii = radii;
  out.parameters = proof_parameters(s0, p, s, b);
  const Window w;
  for (int N : radii) {
    const FourierState f = make_data(family, s0, p, N, seed);
    const XsbResult r = xsb_norm(first_iterate_field(f, kappa), s, b, w);
    const double data = hsp_norm(f, s0, p);
    const double l2 = hs_norm(f, 0.0);
    out.iterate_norms.push_back(r.value);
    out.data_norms.push_back(data);
    out.ratios.push_back(r.value / (data * data));
    out.contrast_ratios.push_back(r.value / (l2 * l2));
    out.unreliable.push_back(r.unreliable);
  }
  out.bounded = bounded_verdict(out.ratios);
  return out;
}

ScalingFit scaling_check(const FourierState& f, double s0, double p, const std::vector<int>& lambdas) {
  std::set<int> distinct(lambdas.begin(), lambdas.end());
  if (distinct.size() < 4) throw std::invalid_argument("scaling_check: at least 4 distinct lambdas required");
  if (*distinct.begin() < 1) throw std::invalid_argument("scaling_check: lambda >= 1 violated");
  ScalingFit fit;
  fit.lambdas = lambdas;
  fit.target = 1.0 + s0 + 1.0 / p;
  std::vector<double> x, y;
  for (int lambda : lambdas) {
    const double norm = hsp_norm(rescale(f, lambda), s0, p);
    fit.norms.push_back(norm);
    x.push_back(std::log(static_cast<double>(lambda)));
    y.push_back(std::log(norm));
  }
  const auto [lo, hi] = std::minmax_element(fit.norms.begin(), fit.norms.end());
  if (!(*lo > 0.0) || !std::isfinite(*hi) || *hi - *lo <= 1e-14 * *hi) {
    fit.degenerate = true;
    return fit;
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace nlslab
