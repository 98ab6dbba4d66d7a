#pragma once

// Duhamel integrals, the first Picard iterate and the contraction solver for
// u = e^{it Delta} f + v of i u_t + u_xx = kappa conj(u)^2.

#include <vector>

#include "nlslab/propagator.hpp"
#include "nlslab/window.hpp"
#include "nlslab/xsb.hpp"

namespace nlslab {

/// Pair (n, p) of the quadratic interaction and its phase denominator.
struct ResonanceDatum {
  long long n = 0;
  long long p = 0;
  long long omega = 0;
  bool resonant = false;

  static ResonanceDatum make(long long n, long long p);
};

/// (e^{i omega t} - 1) / (i omega), and t at omega = 0.
complex phase_kernel(double omega, double t);

/// u_1(t) in closed form; mode p is -i kappa e^{-ip^2 t} sum_n conj(a_n) conj(a_{-n-p}) Phi(Omega(n,p), t).
FourierState first_iterate(const FourierState& f, Kappa kappa, double t);

/// Interpolation used against the exact e^{i p^2 t'} factor: piecewise linear
/// (order 2) or piecewise cubic on four neighbouring nodes (order 4).
enum class QuadratureRule { FilonLinear, FilonCubic };
int nominal_order(QuadratureRule rule);

/// -i kappa int_0^t e^{i(t-t')Delta} F(t') dt'. Throws when t leaves the grid.
FourierState duhamel(const SpaceTimeField& F, Kappa kappa, double t, QuadratureRule rule = QuadratureRule::FilonCubic);

/// The same integral at every grid time.
SpaceTimeField duhamel_field(const SpaceTimeField& F, Kappa kappa, QuadratureRule rule = QuadratureRule::FilonCubic);

/// Cached pieces of K for fixed data on a fixed grid.
class PicardContext {
 public:
  PicardContext(const FourierState& f, Kappa kappa, const TimeGrid& grid,
                QuadratureRule rule = QuadratureRule::FilonCubic);

  const TimeGrid& grid() const { return grid_; }
  const FourierState& data() const { return f_; }
  Kappa kappa() const { return kappa_; }
  QuadratureRule rule() const { return rule_; }
  const SpaceTimeField& free() const { return free_; }
  const SpaceTimeField& first_iterate() const { return first_; }

  /// K(v) = u_1 - i kappa D(2 conj(u_0) conj(v) + conj(v)^2), D the Duhamel integral.
  SpaceTimeField apply(const SpaceTimeField& v) const;
  /// u - e^{it Delta} f + i kappa D(conj(u)^2) for u = e^{it Delta} f + v.
  SpaceTimeField integral_defect(const SpaceTimeField& v) const;

 private:
  FourierState f_;
  Kappa kappa_;
  TimeGrid grid_;
  QuadratureRule rule_;
  SpaceTimeField free_;
  SpaceTimeField first_;
};

SpaceTimeField apply_K(const SpaceTimeField& v, const FourierState& f, Kappa kappa,
                       QuadratureRule rule = QuadratureRule::FilonCubic);

struct SolveOptions {
  int max_iter = 50;
  double tol = 1e-10;
  double s = 0.0;
  double b = 0.55;
  /// Samples on [-2T, 2T]; odd so that t = 0 is a node.
  std::size_t samples = 513;
  QuadratureRule rule = QuadratureRule::FilonCubic;
};

struct ContractionReport {
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> contraction_factors;
  bool converged = false;
  bool diverged = false;
  double T = 0.0;
  SolveOptions options;
  /// ||K(v) - v|| at the returned v.
  double fixed_point_change = 0.0;
  /// ||u - e^{it Delta} f + i kappa D(conj(u)^2)|| at the returned v.
  double integral_residual = 0.0;
  SpaceTimeField correction{TimeGrid(1.0, 2), 0};
  SpaceTimeField solution{TimeGrid(1.0, 2), 0};
};

/// Iterates v_{k+1} = K(v_k) from v_0 = 0 on the grid [-2T, 2T]. Residuals are
/// X^{s,b} norms with the default window scaled to T. Stops when the residual
/// drops below tol, after max_iter steps, or when it grows three times in a
/// row or stops being finite; never throws on divergence.
ContractionReport picard_solve(const FourierState& f, Kappa kappa, double T, const SolveOptions& options = {});

struct RescaleSearch {
  std::vector<int> lambdas;
  std::vector<bool> converged;
  int found = 0;  // 0 when no lambda converged
};

/// Doubling search lambda = 1, 2, 4, ... <= lambda_max for a converging solve of
/// rescale(f, lambda) on [-T0 / lambda^2, T0 / lambda^2].
RescaleSearch rescaled_solve_search(const FourierState& f, Kappa kappa, double T0, int lambda_max,
                                    const SolveOptions& options = {});

}  // namespace nlslab
