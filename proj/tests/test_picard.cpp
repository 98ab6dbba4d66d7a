#include <doctest.h>

#include <cmath>

#include "nlslab/picard.hpp"

using namespace nlslab;

namespace {

constexpr complex I{0.0, 1.0};

double max_abs_diff(const FourierState& a, const FourierState& b) {
  const int N = std::max(a.radius(), b.radius());
  double m = 0;
  for (int n = -N; n <= N; ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

double max_norm(const FourierState& a) {
  double m = 0;
  for (auto z : a.coefficients()) m = std::max(m, std::abs(z));
  return m;
}

FourierState band_data(int radius, int band, std::uint64_t seed) {
  const auto r = nlslab::random_data(0.0, 2.0, band, seed);
  return r.padded(radius);
}

double quadrature_error(const FourierState& f, std::size_t M, double t, QuadratureRule rule) {
  const TimeGrid g(1.0, M);
  const auto F = conjugate_square(sample_free_field(f, g));
  const auto exact = first_iterate(f, Kappa::plus(), t);
  return max_abs_diff(duhamel(F, Kappa::plus(), t, rule), exact) / max_norm(exact);
}

}  // namespace

TEST_SUITE("picard") {
  TEST_CASE("resonance data and the phase kernel") {
    const auto d = ResonanceDatum::make(1, -2);
    CHECK(d.omega == 6);
    CHECK_FALSE(d.resonant);
    CHECK(ResonanceDatum::make(0, 0).resonant);
    CHECK(phase_kernel(0.0, 0.7) == complex(0.7));
    const complex k = phase_kernel(6.0, 0.3);
    CHECK(std::abs(k - (std::exp(I * 1.8) - 1.0) / (I * 6.0)) < 1e-15);
    // Phi(omega, t) -> t as omega -> 0
    for (int e = 1; e <= 8; ++e) {
      const double omega = std::pow(10.0, -e);
      CHECK(std::abs(phase_kernel(omega, 0.9) - 0.9) <= omega);
    }
  }

  TEST_CASE("first iterate in closed form") {
    const auto f = nlslab::random_data(-0.2, 2.0, 8, 1);
    CHECK(max_norm(first_iterate(f, Kappa::plus(), 0.0)) == 0.0);
    const auto one = FourierState::single_mode(2, 1, 1.0);
    for (double t : {-1.0, 0.1, 0.5, 1.0, 2.0}) {
      const auto u = first_iterate(one, Kappa::plus(), t);
      CHECK(std::abs(u[-2] - (-(std::exp(2.0 * I * t) - std::exp(-4.0 * I * t)) / 6.0)) < 1e-15);
      for (int p = -1; p <= 2; ++p) CHECK(u[p] == complex{});
      CHECK(first_iterate(FourierState::single_mode(1, 1, 1.0), Kappa::plus(), t)[-2] == complex{});
      const auto m = first_iterate(one, Kappa::minus(), t);
      CHECK(std::abs(m[-2] + u[-2]) < 1e-15);
    }
    const complex a{1.5, 0.5};
    const auto u0 = first_iterate(FourierState::single_mode(0, 0, a), Kappa::plus(), 0.8);
    CHECK(std::abs(u0[0] - (-I * std::conj(a) * std::conj(a) * 0.8)) < 1e-15);
    // agrees with the field representation
    const auto field = first_iterate_field(f, Kappa::minus());
    CHECK(max_abs_diff(field.at(0.37), first_iterate(f, Kappa::minus(), 0.37)) < 1e-13);
  }

  TEST_CASE("duhamel integral") {
    const TimeGrid g(1.0, 257);
    CHECK(max_norm(duhamel(SpaceTimeField(g, 4), Kappa::plus(), 0.5)) == 0.0);
    const auto F1 = conjugate_square(sample_free_field(nlslab::random_data(0.0, 2.0, 4, 1), g));
    const auto F2 = conjugate_square(sample_free_field(nlslab::random_data(0.0, 2.0, 4, 2), g));
    for (auto rule : {QuadratureRule::FilonLinear, QuadratureRule::FilonCubic}) {
      const auto lhs = duhamel(F1 + F2, Kappa::plus(), 0.7, rule);
      const auto rhs = duhamel(F1, Kappa::plus(), 0.7, rule) + duhamel(F2, Kappa::plus(), 0.7, rule);
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
    CHECK_THROWS(duhamel(F1, Kappa::plus(), 1.5));
    const auto field = duhamel_field(F1, Kappa::plus());
    CHECK(max_abs_diff(field.slice(256), duhamel(F1, Kappa::plus(), 1.0)) < 1e-12);
    CHECK(max_norm(field.slice(128)) < 1e-15);
  }

  TEST_CASE("single-mode quadrature against the closed form") {
    const auto f = FourierState::single_mode(64, 1, 1.0);
    for (double t : {0.1, 0.5, 1.0}) CHECK(quadrature_error(f, 1024, t, QuadratureRule::FilonCubic) <= 1e-6);
  }

  TEST_CASE("empirical order of the Filon rules") {
    const auto f = band_data(64, 3, 5);
    for (auto rule : {QuadratureRule::FilonLinear, QuadratureRule::FilonCubic}) {
      const double e1 = quadrature_error(f, 129, 1.0, rule);
      const double e2 = quadrature_error(f, 257, 1.0, rule);
      const double e3 = quadrature_error(f, 513, 1.0, rule);
      const double order = std::log2(e2 / e3);
      CHECK(std::abs(order - nominal_order(rule)) <= 0.3);
      CHECK(e1 > e2);
    }
  }

  TEST_CASE("the map K") {
    const TimeGrid g(1.0, 513);
    const auto f = nlslab::random_data(0.0, 2.0, 3, 4);
    const auto K0 = apply_K(SpaceTimeField(g, 3), f, Kappa::plus());
    const auto u1 = first_iterate_field(f, Kappa::plus());
    for (std::size_t k = 0; k < g.size(); k += 64) CHECK(max_abs_diff(K0.slice(k), u1.at(g[k])) < 1e-9);

    // f = 0: pure quadratic map in v
    const auto v = sample_free_field(nlslab::random_data(0.0, 2.0, 3, 9), g);
    const auto Kv = apply_K(v, FourierState::zero(3), Kappa::minus());
    const auto Dv = duhamel_field(conjugate_square(v), Kappa::minus());
    CHECK(Kv == Dv);

    // bilinear cross term: f = mode 1, v = c e^{-it} at mode 1 gives
    // -kappa 2 conj(c) (e^{2it} - e^{-4it}) / 6 at mode -2
    const complex c{0.4, -0.3};
    const auto one = FourierState::single_mode(2, 1, 1.0);
    const auto vv = sample_free_field(FourierState::single_mode(2, 1, c), g);
    const auto cross = apply_K(vv, one, Kappa::plus()) - apply_K(vv, FourierState::zero(2), Kappa::plus()) -
                       first_iterate_field(one, Kappa::plus()).sample(g);
    for (std::size_t k = 0; k < g.size(); k += 32) {
      const double t = g[k];
      const complex expected = -2.0 * std::conj(c) * (std::exp(2.0 * I * t) - std::exp(-4.0 * I * t)) / 6.0;
      CHECK(std::abs(cross.at(k, -2) - expected) < 1e-9);
    }
  }

  TEST_CASE("solver on zero and small data") {
    const auto zero = picard_solve(FourierState::zero(4), Kappa::plus(), 1.0);
    CHECK(zero.converged);
    CHECK(zero.iterations == 1);
    for (auto z : zero.correction.data()) CHECK(z == complex{});

    SolveOptions opts;
    const auto r = picard_solve(FourierState::single_mode(4, 1, 1e-3), Kappa::plus(), 1.0, opts);
    CHECK(r.converged);
    CHECK_FALSE(r.diverged);
    REQUIRE_FALSE(r.contraction_factors.empty());
    for (double q : r.contraction_factors) CHECK(q < 0.1);
    CHECK(r.fixed_point_change <= 10 * opts.tol);
    CHECK(r.integral_residual <= 1e-8);
    CHECK(r.solution.grid().t_max() == doctest::Approx(2.0));
  }

  TEST_CASE("solver reports divergence instead of throwing") {
    SolveOptions opts;
    opts.samples = 257;
    const auto r = picard_solve(nlslab::random_data(0.0, 2.0, 6, 1).scaled(40.0), Kappa::plus(), 1.0, opts);
    CHECK_FALSE(r.converged);
    CHECK(r.diverged);
  }

  TEST_CASE("rescaled search") {
    SolveOptions opts;
    opts.samples = 257;
    const auto f = FourierState::single_mode(2, 1, 1e-3);
    const auto s = rescaled_solve_search(f, Kappa::plus(), 1.0, 4, opts);
    // stops at the first converging lambda
    CHECK(s.lambdas == std::vector<int>{1});
    CHECK(s.converged == std::vector<bool>{true});
    CHECK(s.found == 1);
    CHECK_THROWS_AS(rescaled_solve_search(f, Kappa::plus(), 1.0, 0, opts), std::invalid_argument);
  }
}
