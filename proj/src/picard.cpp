#include "nlslab/picard.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlslab/parallel.hpp"

namespace nlslab {

ResonanceDatum ResonanceDatum::make(long long n, long long p) {
  ResonanceDatum d;
  d.n = n;
  d.p = p;
  d.omega = resonance_denominator(n, p);
  d.resonant = d.omega == 0;
  return d;
}

complex phase_kernel(double omega, double t) {
  if (omega == 0.0) return {t, 0.0};
  return (std::polar(1.0, omega * t) - 1.0) / complex(0.0, omega);
}

FourierState first_iterate(const FourierState& f, Kappa kappa, double t) {
  const int radius = f.radius();
  std::vector<complex> out(f.size());
  if (t == 0.0) return FourierState(radius, std::move(out), f.period());
  const complex factor(0.0, -kappa.value());
  parallel_for(f.size(), [&](std::size_t index) {
    const int p = static_cast<int>(index) - radius;
    const int lo = std::max(-radius, -radius - p);
    const int hi = std::min(radius, radius - p);
    complex acc{};
    for (int n = lo; n <= hi; ++n) {
      const double omega = static_cast<double>(resonance_denominator(n, p));
      acc += std::conj(f[n] * f[-n - p]) * phase_kernel(omega, t);
    }
    out[index] = factor * std::polar(1.0, -static_cast<double>(p) * p * t) * acc;
  });
  return FourierState(radius, std::move(out), f.period());
}

int nominal_order(QuadratureRule rule) { return rule == QuadratureRule::FilonLinear ? 2 : 4; }

namespace {

constexpr int kMaxDegree = 3;

// Monomial coefficients of the interpolant through integer offsets.
struct Stencil {
  std::array<int, 4> offsets{};
  int points = 0;
  std::array<std::array<double, 4>, 4> inverse{};  // c_k = sum_i inverse[k][i] y_i
};

Stencil make_stencil(std::initializer_list<int> offsets) {
  Stencil st;
  st.points = static_cast<int>(offsets.size());
  std::copy(offsets.begin(), offsets.end(), st.offsets.begin());
  const int n = st.points;
  // Gauss-Jordan on [V | I]
  double a[4][8] = {};
  for (int i = 0; i < n; ++i) {
    double x = 1.0;
    for (int k = 0; k < n; ++k, x *= st.offsets[static_cast<std::size_t>(i)]) a[i][k] = x;
    a[i][n + i] = 1.0;
  }
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    for (int k = 0; k < 2 * n; ++k) std::swap(a[c][k], a[pivot][k]);
    const double d = a[c][c];
    for (int k = 0; k < 2 * n; ++k) a[c][k] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double m = a[r][c];
      for (int k = 0; k < 2 * n; ++k) a[r][k] -= m * a[c][k];
    }
  }
  // rows of V^{-1}: coefficient k from sample i
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) st.inverse[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = a[k][n + i];
  return st;
}

const Stencil& stencil_linear() {
  static const Stencil st = make_stencil({0, 1});
  return st;
}
const Stencil& stencil_centre() {
  static const Stencil st = make_stencil({-1, 0, 1, 2});
  return st;
}
const Stencil& stencil_left() {
  static const Stencil st = make_stencil({0, 1, 2, 3});
  return st;
}
const Stencil& stencil_right() {
  static const Stencil st = make_stencil({-2, -1, 0, 1});
  return st;
}

// J_k(x) = int_0^x s^k e^{i phi s} ds for k = 0..3.
std::array<complex, kMaxDegree + 1> oscillatory_moments(double phi, double x) {
  std::array<complex, kMaxDegree + 1> J{};
  if (x == 0.0) return J;
  if (std::abs(phi * x) <= 2.0) {
    for (int k = 0; k <= kMaxDegree; ++k) {
      complex term = std::pow(x, k + 1);  // (i phi x)^m x^{k+1} / m!
      complex sum{};
      for (int m = 0; m < 40; ++m) {
        const complex add = term / static_cast<double>(k + m + 1);
        sum += add;
        if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
        term *= complex(0.0, phi * x) / static_cast<double>(m + 1);
      }
      J[static_cast<std::size_t>(k)] = sum;
    }
    return J;
  }
  const complex e = std::polar(1.0, phi * x);
  const complex inv = 1.0 / complex(0.0, phi);
  J[0] = (e - 1.0) * inv;
  double xk = 1.0;
  for (int k = 1; k <= kMaxDegree; ++k) {
    xk *= x;
    J[static_cast<std::size_t>(k)] = (xk * e - static_cast<double>(k) * J[static_cast<std::size_t>(k - 1)]) * inv;
  }
  return J;
}

// int over [t_j + s0 dt, t_j + s1 dt] of e^{i theta t'} F(t') dt' with F interpolated.
class ModeIntegrator {
 public:
  ModeIntegrator(const SpaceTimeField& F, int mode, double theta, QuadratureRule rule)
      : F_(F), mode_(mode), theta_(theta), rule_(rule), M_(F.grid().size()), dt_(F.grid().step()) {
    if (rule_ == QuadratureRule::FilonCubic && M_ < 4) rule_ = QuadratureRule::FilonLinear;
  }

  complex cell(std::size_t j, double s0, double s1) const {
    if (s0 == s1) return {};
    const Stencil* st = &stencil_linear();
    if (rule_ == QuadratureRule::FilonCubic) {
      if (j == 0)
        st = &stencil_left();
      else if (j + 2 == M_)
        st = &stencil_right();
      else
        st = &stencil_centre();
    }
    std::array<complex, 4> y{};
    for (int i = 0; i < st->points; ++i) {
      const auto node = static_cast<std::size_t>(static_cast<long long>(j) + st->offsets[static_cast<std::size_t>(i)]);
      y[static_cast<std::size_t>(i)] = F_.at(node, mode_);
    }
    const double phi = theta_ * dt_;
    const auto J1 = oscillatory_moments(phi, s1);
    const auto J0 = oscillatory_moments(phi, s0);
    complex acc{};
    for (int k = 0; k < st->points; ++k) {
      complex c{};
      for (int i = 0; i < st->points; ++i)
        c += st->inverse[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
      acc += c * (J1[static_cast<std::size_t>(k)] - J0[static_cast<std::size_t>(k)]);
    }
    return dt_ * std::polar(1.0, theta_ * F_.grid()[j]) * acc;
  }

 private:
  const SpaceTimeField& F_;
  int mode_;
  double theta_;
  QuadratureRule rule_;
  std::size_t M_;
  double dt_;
};

// Cell containing t (last cell for t = T_max) and the local coordinate.
std::pair<std::size_t, double> locate(const TimeGrid& grid, double t) {
  const double x = (t - grid[0]) / grid.step();
  auto j = static_cast<std::size_t>(std::floor(x));
  if (j + 1 >= grid.size()) j = grid.size() - 2;
  const double s = std::clamp(x - static_cast<double>(j), 0.0, 1.0);
  return {j, s};
}

void require_inside(const TimeGrid& grid, double t, const char* where) {
  if (!(std::abs(t) <= grid.t_max() * (1.0 + 1e-14)))
    throw std::invalid_argument(std::string(where) + ": t outside the grid range");
}

// int_0^t, walking cells from the one containing 0.
complex integrate_from_zero(const ModeIntegrator& integrator, const TimeGrid& grid, double t) {
  const auto [j0, s0] = locate(grid, 0.0);
  const auto [j1, s1] = locate(grid, t);
  if (j0 == j1) return integrator.cell(j0, s0, s1);
  complex acc{};
  if (j1 > j0) {
    acc += integrator.cell(j0, s0, 1.0);
    for (std::size_t j = j0 + 1; j < j1; ++j) acc += integrator.cell(j, 0.0, 1.0);
    acc += integrator.cell(j1, 0.0, s1);
  } else {
    acc -= integrator.cell(j0, 0.0, s0);
    for (std::size_t j = j1 + 1; j < j0; ++j) acc -= integrator.cell(j, 0.0, 1.0);
    acc -= integrator.cell(j1, s1, 1.0);
  }
  return acc;
}

}  // namespace

FourierState duhamel(const SpaceTimeField& F, Kappa kappa, double t, QuadratureRule rule) {
  require_inside(F.grid(), t, "duhamel");
  const int radius = F.radius();
  std::vector<complex> out(F.width());
  const complex factor(0.0, -kappa.value());
  parallel_for(F.width(), [&](std::size_t index) {
    const int p = static_cast<int>(index) - radius;
    const double theta = static_cast<double>(p) * p;
    const ModeIntegrator integrator(F, p, theta, rule);
    out[index] = factor * std::polar(1.0, -theta * t) * integrate_from_zero(integrator, F.grid(), t);
  });
  return FourierState(radius, std::move(out), F.period());
}

SpaceTimeField duhamel_field(const SpaceTimeField& F, Kappa kappa, QuadratureRule rule) {
  const TimeGrid& grid = F.grid();
  const std::size_t M = grid.size();
  SpaceTimeField out(grid, F.radius(), F.period());
  const complex factor(0.0, -kappa.value());
  const auto [j0, s0] = locate(grid, 0.0);
  parallel_for(F.width(), [&](std::size_t index) {
    const int p = static_cast<int>(index) - F.radius();
    const double theta = static_cast<double>(p) * p;
    const ModeIntegrator integrator(F, p, theta, rule);
    std::vector<complex> Q(M);
    // nodes right of 0
    complex acc = integrator.cell(j0, s0, 1.0);
    Q[j0 + 1] = acc;
    for (std::size_t k = j0 + 2; k < M; ++k) Q[k] = (acc += integrator.cell(k - 1, 0.0, 1.0));
    // nodes left of (or at) 0
    acc = -integrator.cell(j0, 0.0, s0);
    Q[j0] = acc;
    for (std::size_t k = j0; k-- > 0;) Q[k] = (acc -= integrator.cell(k, 0.0, 1.0));
    for (std::size_t k = 0; k < M; ++k) out.at(k, p) = factor * std::polar(1.0, -theta * grid[k]) * Q[k];
  });
  return out;
}

PicardContext::PicardContext(const FourierState& f, Kappa kappa, const TimeGrid& grid, QuadratureRule rule)
    : f_(f),
      kappa_(kappa),
      grid_(grid),
      rule_(rule),
      free_(sample_free_field(f, grid)),
      first_(first_iterate_field(f, kappa).sample(grid)) {}

SpaceTimeField PicardContext::apply(const SpaceTimeField& v) const {
  free_.require_compatible(v, "apply_K");
  SpaceTimeField source = conjugate_product(free_, v);
  source *= 2.0;
  source += conjugate_square(v);
  return first_ + duhamel_field(source, kappa_, rule_);
}

SpaceTimeField PicardContext::integral_defect(const SpaceTimeField& v) const {
  free_.require_compatible(v, "integral_defect");
  const SpaceTimeField u = free_ + v;
  return v - duhamel_field(conjugate_square(u), kappa_, rule_);
}

SpaceTimeField apply_K(const SpaceTimeField& v, const FourierState& f, Kappa kappa, QuadratureRule rule) {
  if (f.radius() != v.radius() || f.period() != v.period())
    throw std::invalid_argument("apply_K: data and correction live on different mode sets");
  return PicardContext(f, kappa, v.grid(), rule).apply(v);
}

ContractionReport picard_solve(const FourierState& f, Kappa kappa, double T, const SolveOptions& options) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("picard_solve: T > 0 violated");
  if (!(options.tol > 0.0)) throw std::invalid_argument("picard_solve: tol > 0 violated");
  if (options.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter >= 1 violated");
  if (options.samples < 4) throw std::invalid_argument("picard_solve: at least 4 time samples required");
  const TimeGrid grid(2.0 * T, options.samples);
  const Window window({}, T);
  const PicardContext context(f, kappa, grid, options.rule);
  const auto norm = [&](const SpaceTimeField& F) { return xsb_norm(F, options.s, options.b, window).value; };

  ContractionReport report;
  report.T = T;
  report.options = options;
  SpaceTimeField v(grid, f.radius(), f.period());
  int growth = 0;
  for (int k = 1; k <= options.max_iter; ++k) {
    SpaceTimeField next = context.apply(v);
    const double residual = norm(next - v);
    report.iterations = k;
    report.residual_history.push_back(residual);
    if (report.residual_history.size() >= 2) {
      const double previous = report.residual_history[report.residual_history.size() - 2];
      report.contraction_factors.push_back(previous > 0.0 ? residual / previous : 0.0);
      growth = residual > previous ? growth + 1 : 0;
    }
    if (!std::isfinite(residual) || residual > 1e150 || growth >= 3) {
      report.diverged = true;
      break;
    }
    v = std::move(next);
    if (residual < options.tol) {
      report.converged = true;
      break;
    }
  }
  report.correction = v;
  report.solution = context.free() + v;
  if (!report.diverged) {
    report.fixed_point_change = norm(context.apply(v) - v);
    report.integral_residual = norm(context.integral_defect(v));
  } else {
    report.fixed_point_change = std::numeric_limits<double>::infinity();
    report.integral_residual = std::numeric_limits<double>::infinity();
  }
  return report;
}

RescaleSearch rescaled_solve_search(const FourierState& f, Kappa kappa, double T0, int lambda_max,
                                    const SolveOptions& options) {
  if (lambda_max < 1) throw std::invalid_argument("rescaled_solve_search: lambda_max >= 1 violated");
  RescaleSearch out;
  for (int lambda = 1; lambda <= lambda_max; lambda *= 2) {
    const FourierState g = rescale(f, lambda);
    const double T = T0 / (static_cast<double>(lambda) * lambda);
    const ContractionReport r = picard_solve(g, kappa, T, options);
    out.lambdas.push_back(lambda);
    out.converged.push_back(r.converged);
    if (r.converged) {
      out.found = lambda;
      break;
    }
  }
  return out;
}

}  // namespace nlslab
