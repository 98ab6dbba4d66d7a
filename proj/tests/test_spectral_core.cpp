#include <doctest.h>

#include <cmath>
#include <random>

#include "nlslab/spectral_core.hpp"

using namespace nlslab;

namespace {

// Plain Sobolev sum, written without hsp_norm's code path.
double sobolev_oracle(const std::vector<complex>& a, int N, double s) {
  long double acc = 0;
  for (int n = -N; n <= N; ++n) {
    const long double w = std::pow(1.0L + static_cast<long double>(n) * n, static_cast<long double>(s));
    acc += w * std::norm(std::complex<long double>(a[n + N].real(), a[n + N].imag()));
  }
  return static_cast<double>(std::sqrt(acc));
}

FourierState random_state(std::mt19937_64& rng, int N) {
  std::normal_distribution<double> g;
  std::vector<complex> c(2 * N + 1);
  for (auto& z : c) z = {g(rng), g(rng)};
  return FourierState(N, c);
}

}  // namespace

TEST_SUITE("spectral_core") {
  TEST_CASE("bracket values") {
    CHECK(bracket(0.0) == 1.0);
    CHECK(bracket(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(bracket(-3.0) == bracket(3.0));
    CHECK(std::isfinite(bracket(1e200)));
  }

  TEST_CASE("state invariants are enforced") {
    CHECK_THROWS_AS(FourierState(2, std::vector<complex>(4)), std::invalid_argument);
    CHECK_THROWS_AS(FourierState(-1, {}), std::invalid_argument);
    CHECK_THROWS_AS(FourierState(0, {1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FourierState(0, {complex(NAN, 0)}), std::invalid_argument);
    const auto f = FourierState::single_mode(3, 2, {1, 2});
    CHECK(f[2] == complex(1, 2));
    CHECK(f[7] == complex{});
    CHECK(f.padded(5)[2] == complex(1, 2));
  }

  TEST_CASE("hsp norm anchors") {
    const auto one = FourierState::single_mode(4, 0, 1.0);
    for (double s : {-0.7, 0.0, 1.3})
      for (double p : {1.0, 2.0, 3.5}) CHECK(hsp_norm(one, s, p) == doctest::Approx(1.0).epsilon(1e-15));
    const int N = 10;
    CHECK(hsp_norm(power_data(0.0, N), 0.0, 2.0) == doctest::Approx(std::sqrt(2.0 * N + 1)).epsilon(1e-14));
    CHECK_THROWS_AS(hsp_norm(one, 0.0, 0.5), std::invalid_argument);
  }

  TEST_CASE("p = 2 matches the Sobolev sum") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> us(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const int N = 1 + static_cast<int>(rng() % 100);
      const auto f = random_state(rng, N);
      const double s = us(rng);
      const std::vector<complex> a(f.coefficients().begin(), f.coefficients().end());
      const double ref = sobolev_oracle(a, N, s);
      CHECK(std::abs(hsp_norm(f, s, 2.0) - ref) <= 1e-12 * ref);
    }
  }

  TEST_CASE("l2 embeds in lp and phases do not matter") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_state(rng, 20);
      for (double p : {2.0, 2.5, 4.0, 9.0}) CHECK(hsp_norm(f, -0.3, p) <= hsp_norm(f, -0.3, 2.0) * (1 + 1e-14));
      std::vector<complex> c(f.coefficients().begin(), f.coefficients().end());
      for (auto& z : c) z *= std::polar(1.0, u(rng));
      const FourierState g(20, c);
      CHECK(hsp_norm(g, 0.4, 3.0) == doctest::Approx(hsp_norm(f, 0.4, 3.0)).epsilon(1e-13));
    }
  }

  TEST_CASE("power data") {
    const auto f = power_data(0.0, 2);
    for (int n = -2; n <= 2; ++n) CHECK(f[n] == complex(1.0));
    const auto g = power_data(1.0, 1);
    CHECK(g[1].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(g[-1].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(g[0] == complex(1.0));
  }

  TEST_CASE("power data with alpha = 1/18 - 0.01: admissible norm finite, H^-1/2 grows") {
    // (s0, p) = (-0.56, 2.1) satisfies 3/p + s0 > 5/6 and p (s0 + alpha) < -1.
    const double alpha = 1.0 / 18 - 0.01, s0 = -0.56, p = 2.1;
    const double q = p * (s0 + alpha);
    const double bound = std::pow(1.0 + 2.0 * (1.0 + 1.0 / (-1.0 - q)), 1.0 / p);
    double prev_h = 0.0;
    for (int k = 6; k <= 12; ++k) {
      const auto f = power_data(alpha, 1 << k);
      CHECK(hsp_norm(f, s0, p) < bound);
      const double h = hs_norm(f, -0.5);
      CHECK(h > prev_h * 1.01);
      prev_h = h;
    }
  }

  TEST_CASE("random data") {
    const auto a = nlslab::random_data(-0.45, 2.0, 64, 5);
    const auto b = nlslab::random_data(-0.45, 2.0, 64, 5);
    const auto c = nlslab::random_data(-0.45, 2.0, 64, 6);
    CHECK(a == b);
    bool phase_differs = false;
    for (int n = -64; n <= 64; ++n) {
      CHECK(std::abs(a[n]) == doctest::Approx(std::abs(c[n])).epsilon(1e-15));
      phase_differs = phase_differs || std::abs(a[n] - c[n]) > 1e-6;
    }
    CHECK(phase_differs);

    const double n8 = hsp_norm(nlslab::random_data(-0.45, 2.0, 1 << 8, 1), -0.45, 2.0);
    const double n12 = hsp_norm(nlslab::random_data(-0.45, 2.0, 1 << 12, 1), -0.45, 2.0);
    CHECK(n12 / n8 < 1.05);
  }

  TEST_CASE("rescale") {
    const auto f = nlslab::random_data(0.1, 3.0, 8, 2);
    CHECK(rescale(f, 1) == f);
    const auto g = rescale(FourierState::single_mode(1, 1, 1.0), 3);
    CHECK(g[3] == complex(9.0));
    CHECK(g.period() == doctest::Approx(kTwoPi / 3));
    for (int n = -g.radius(); n <= g.radius(); ++n)
      if (n != 3) CHECK(g[n] == complex{});
    CHECK_THROWS_AS(rescale(f, 0), std::invalid_argument);

    const auto h = power_data(-1.0, 64);
    const double ratio = hsp_norm(rescale(h, 2), -0.4, 2.0) / hsp_norm(h, -0.4, 2.0);
    const double expected = std::pow(2.0, 1 - 0.4 + 0.5);
    CHECK(std::abs(ratio / expected - 1) < 0.25);
  }

  TEST_CASE("arithmetic") {
    const auto f = FourierState::single_mode(2, 1, 1.0);
    const auto g = FourierState::single_mode(3, -3, 2.0);
    const auto h = f + g;
    CHECK(h.radius() == 3);
    CHECK(h[1] == complex(1.0));
    CHECK(h[-3] == complex(2.0));
    CHECK((h - g)[-3] == complex{});
    CHECK(f.scaled({0, 2})[1] == complex(0, 2));
  }
}
