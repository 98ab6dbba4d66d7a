#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nlslab/picard.hpp"
#include "nlslab/xsb.hpp"

using namespace nlslab;

namespace {

// 2 pi int ||psi F(t)||^2 dt by the trapezoid rule on the field's own grid.
double windowed_l2_squared(const SpaceTimeField& F, const Window& w) {
  const auto& g = F.grid();
  double acc = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double psi = w(g[k]);
    double slice = 0;
    for (int n = -F.radius(); n <= F.radius(); ++n) slice += std::norm(F.at(k, n));
    const double wt = (k == 0 || k + 1 == g.size()) ? 0.5 : 1.0;
    acc += wt * psi * psi * slice;
  }
  return kTwoPi * g.step() * acc;
}

std::size_t peak_column(const std::vector<complex>& row) {
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end(),
                                                   [](complex a, complex b) { return std::abs(a) < std::abs(b); }) -
                                  row.begin());
}

}  // namespace

TEST_SUITE("xsb") {
  TEST_CASE("window shape") {
    for (const auto& shape : window_family()) {
      const Window w(shape, 1.0);
      CHECK(w(0.0) == 1.0);
      CHECK(w(1.0) == 1.0);
      CHECK(w(-1.0) == 1.0);
      CHECK(w(1.0 + shape.width) == 0.0);
      CHECK(w(-2.5) == 0.0);
      double prev = 1.0;
      for (double t = 1.0; t <= 2.0; t += 1e-3) {
        const double v = w(t);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        CHECK(w(-t) == v);
        prev = v;
      }
    }
    CHECK(window_family().size() == 9);
    const Window scaled({}, 3.0);
    CHECK(scaled(2.9) == 1.0);
    CHECK(scaled.support() == 6.0);
  }

  TEST_CASE("window transform against a trapezoid oracle") {
    const Window w;
    for (double tau : {0.0, 0.7, 3.0, 11.0}) {
      const int n = 400000;
      const double h = 4.0 / n;
      double acc = 0;
      for (int j = 0; j <= n; ++j) {
        const double t = -2.0 + j * h;
        acc += (j == 0 || j == n ? 0.5 : 1.0) * w(t) * std::cos(tau * t);
      }
      CHECK(w.hat(tau) == doctest::Approx(acc * h).epsilon(1e-9));
    }
    CHECK(std::abs(w.moment(1, 0.0)) < 1e-14);
    CHECK(std::isfinite(w.third_derivative_l1()));
    CHECK(w.third_derivative_l1() > 0.0);
  }

  TEST_CASE("zero field") {
    const TimeGrid g(2.0, 129);
    const SpaceTimeField zero(g, 3);
    CHECK(xsb_norm(zero, 0.0, 0.55, Window()).value == 0.0);
    CHECK(restriction_norm(zero, 1.0, 0.0, 0.55).value == 0.0);
  }

  TEST_CASE("Parseval and the windowed L2 norm") {
    const TimeGrid g(2.0, 1025);
    const auto F = sample_free_field(nlslab::random_data(0.0, 2.0, 8, 3), g);
    const Window w;
    const auto tr = spacetime_transform(F, w);
    double lhs = 0;
    for (int n = -8; n <= 8; ++n)
      for (auto z : tr.mode(n)) lhs += std::norm(z) * tr.grid.dtau;
    const double rhs = windowed_l2_squared(F, w);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
    const auto r = xsb_norm(F, 0.0, 0.0, w);
    CHECK(r.value * r.value == doctest::Approx(rhs).epsilon(1e-8));
  }

  TEST_CASE("free mode peaks on the dispersion curve; modulation shifts the peak") {
    const TimeGrid g(2.0, 1025);
    const Window w;
    for (int n : {0, 1, 3, 7}) {
      const auto F = sample_free_field(FourierState::single_mode(8, n, 1.0), g);
      const auto tr = spacetime_transform(F, w);
      const auto c = peak_column(tr.mode(n));
      CHECK(std::abs(tr.tau(n, c) + n * n) <= tr.grid.dtau);
    }
    const double theta = 5.25;
    auto F = sample_free_field(FourierState::single_mode(4, 2, 1.0), g);
    const auto base = peak_column(spacetime_transform(F, w).mode(2));
    for (std::size_t k = 0; k < g.size(); ++k) F.at(k, 2) *= std::polar(1.0, -theta * g[k]);
    const auto tr = spacetime_transform(F, w);
    const double lag = (static_cast<double>(base) - static_cast<double>(peak_column(tr.mode(2))));
    CHECK(std::abs(lag - theta / tr.grid.dtau) <= 1.0);
  }

  TEST_CASE("linearity and monotonicity in b") {
    const TimeGrid g(2.0, 513);
    const auto F = sample_free_field(nlslab::random_data(-0.2, 2.0, 6, 8), g);
    const Window w;
    const double base = xsb_norm(F, -0.3, 0.55, w).value;
    auto G = F;
    G *= complex(-2.0, 1.5);
    CHECK(xsb_norm(G, -0.3, 0.55, w).value == doctest::Approx(2.5 * base).epsilon(1e-12));
    double prev = 0;
    for (double b : {0.0, 0.25, 0.5, 0.75}) {
      const double v = xsb_norm(F, -0.3, b, w).value;
      CHECK(v >= prev);
      prev = v;
    }
  }

  TEST_CASE("free field: per-mode ratio to the H^s norm is constant") {
    const TimeGrid g(2.0, 1025);
    const Window w;
    std::vector<double> ratios;
    for (int n = 0; n <= 6; ++n) {
      const auto f = FourierState::single_mode(6, n, 1.0);
      ratios.push_back(xsb_norm(sample_free_field(f, g), -0.4, 0.55, w).value / hs_norm(f, -0.4));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi / *lo <= 1.05);

    std::vector<double> random_ratios;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = nlslab::random_data(0.0, 2.0, 6, seed);
      random_ratios.push_back(xsb_norm(sample_free_field(f, g), 0.0, 0.55, w).value / hs_norm(f, 0.0));
    }
    const auto [a, b] = std::minmax_element(random_ratios.begin(), random_ratios.end());
    CHECK(*b / *a <= 1.05);
  }

  TEST_CASE("sampled and closed-form routes agree") {
    const auto f = nlslab::random_data(0.0, 2.0, 6, 4);
    const TimeGrid g(2.0, 2049);
    const Window w;
    const auto exact = first_iterate_field(f, Kappa::plus());
    const double sampled = xsb_norm(exact.sample(g), 0.0, 0.55, w).value;
    const double modal = xsb_norm(exact, 0.0, 0.55, w).value;
    CHECK(std::abs(sampled - modal) <= 1e-4 * modal);
    const double free_sampled = xsb_norm(sample_free_field(f, g), -0.2, 0.7, w).value;
    const double free_modal = xsb_norm(free_field(f), -0.2, 0.7, w).value;
    CHECK(std::abs(free_sampled - free_modal) <= 1e-4 * free_modal);
  }

  TEST_CASE("tail flag") {
    // White noise in time puts most of its mass at high |tau|.
    const TimeGrid g(2.0, 257);
    SpaceTimeField F(g, 1);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    for (auto& z : F.data()) z = {n(rng), n(rng)};
    const auto r = xsb_norm(F, 0.0, 0.55, Window());
    CHECK(r.unreliable);
    CHECK(r.tail_fraction > kTailThreshold);
    const auto smooth = xsb_norm(sample_free_field(FourierState::single_mode(1, 1, 1.0), g), 0.0, 0.55, Window());
    CHECK_FALSE(smooth.unreliable);
  }

  TEST_CASE("restriction norm") {
    const TimeGrid g(2.0, 1025);
    const auto F = sample_free_field(nlslab::random_data(0.0, 2.0, 6, 2), g);
    CHECK_THROWS_AS(restriction_norm(F, 1.5, 0.0, 0.55), std::invalid_argument);
    const auto r1 = restriction_norm(F, 0.5, 0.0, 0.55);
    const auto r2 = restriction_norm(F, 1.0, 0.0, 0.55);
    CHECK(r1.members.size() == 9);
    // monotone per family member
    for (std::size_t i = 0; i < r1.members.size(); ++i)
      CHECK(r1.members[i].second.value <= r2.members[i].second.value * (1 + 1e-9));
    CHECK(r1.value <= r2.value * (1 + 1e-9));
    const double def = xsb_norm(F, 0.0, 0.55, Window()).value;
    CHECK(r2.value <= def);
    CHECK(def <= 1.3 * r2.value);

    const auto exact = restriction_norm(free_field(nlslab::random_data(0.0, 2.0, 6, 2)), 1.0, 0.0, 0.55);
    CHECK(exact.value == doctest::Approx(r2.value).epsilon(1e-3));
  }

  TEST_CASE("Duhamel operator is bounded from X^{s,b-1} to X^{s,b}") {
    const TimeGrid g(2.0, 1025);
    const Window w;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> theta(-20.0, 20.0);
    for (double s : {0.0, -0.4}) {
      std::vector<double> ratios;
      for (int trial = 0; trial < 50; ++trial) {
        auto F = sample_free_field(nlslab::random_data(s, 2.0, 12, 100 + trial), g);
        const double th = theta(rng);
        for (std::size_t k = 0; k < g.size(); ++k)
          for (int n = -12; n <= 12; ++n) F.at(k, n) *= std::polar(1.0, -th * g[k]);
        const auto D = duhamel_field(F, Kappa::plus());
        ratios.push_back(xsb_norm(D, s, 0.55, w).value / xsb_norm(F, s, 0.55 - 1.0, w).value);
      }
      std::sort(ratios.begin(), ratios.end());
      const double median = 0.5 * (ratios[24] + ratios[25]);
      CHECK(ratios.back() / median <= 10.0);
    }
  }
}
