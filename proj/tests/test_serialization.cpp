#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "nlslab/serialization.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

FourierState awkward_state(std::uint64_t seed, int N) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<complex> c(2 * N + 1);
  for (auto& z : c) z = {g(rng) * 1e-7 / 3.0, g(rng) * 1e5 / 7.0};
  c[0] = {5e-324, -0.0};
  return FourierState(N, c, 3.7);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nlslab_serialization";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("serialization") {
  TEST_CASE("FourierState round trip is bit-exact") {
    const auto f = awkward_state(1, 9);
    const json j = to_json(f);
    CHECK(j.at("N") == 9);
    CHECK(j.at("coeffs").size() == 19);
    CHECK(j.at("coeffs")[0][0] == -9);
    const auto back = fourier_state_from_json(json::parse(j.dump()));
    CHECK(back.radius() == 9);
    CHECK(bit_equal(back.period(), 3.7));
    for (int n = -9; n <= 9; ++n) {
      CHECK(bit_equal(back[n].real(), f[n].real()));
      CHECK(bit_equal(back[n].imag(), f[n].imag()));
    }
    // omitted modes are zero and the period defaults to 2 pi
    const auto sparse = fourier_state_from_json(json::parse(R"({"N": 3, "coeffs": [[-2, 1.5, 0]]})"));
    CHECK(sparse[-2] == complex(1.5));
    CHECK(sparse[1] == complex{});
    CHECK(sparse.period() == kTwoPi);
  }

  TEST_CASE("FourierState decoding errors") {
    const auto message = [](const char* text) {
      try {
        fourier_state_from_json(json::parse(text));
      } catch (const std::invalid_argument& e) {
        return std::string(e.what());
      }
      return std::string("no error");
    };
    CHECK(message(R"({"N": 2, "coeffs": [[1, 0, 0], [1, 2, 0]]})") == "duplicate coefficient index");
    CHECK(message(R"({"N": 2, "coeffs": [[3, 0, 0]]})") == "coefficient index outside [-N, N]");
    CHECK(message(R"({"coeffs": []})") == "missing key \"N\"");
    CHECK(message(R"({"N": 2})") == "missing key \"coeffs\"");
    CHECK(message(R"({"N": 2.5, "coeffs": []})") == "N must be an integer");
    CHECK(message(R"({"N": 2, "coeffs": [[0, 1]]})") == "coeffs entries must be [n, re, im]");
  }

  TEST_CASE("SpaceTimeField JSON and sidecar round trips") {
    const TimeGrid g(1.5, 7);
    const auto f = awkward_state(2, 3);
    SpaceTimeField F(g, 3, f.period());
    for (std::size_t k = 0; k < g.size(); ++k)
      for (int n = -3; n <= 3; ++n) F.at(k, n) = f[n] * std::polar(1.0 / 3.0, static_cast<double>(k * n));

    const json full = to_json(F);
    CHECK(full.at("format") == "nlslab.field.v1");
    CHECK(full.at("slices").size() == 7);
    const auto back = space_time_field_from_json(json::parse(full.dump()));
    CHECK(back == F);

    const json header = to_json(F, false);
    CHECK_FALSE(header.contains("slices"));
    const auto path = scratch("field.bin");
    write_field_sidecar(F, path);
    CHECK(fs::file_size(path) == 7 * 7 * 3 * 8);
    CHECK(read_field_sidecar(header, path) == F);

    fs::resize_file(path, fs::file_size(path) - 8);
    CHECK_THROWS_WITH(read_field_sidecar(header, path), "sidecar truncated");

    json bad = full;
    bad["slices"].erase(0);
    CHECK_THROWS(space_time_field_from_json(bad));
  }

  TEST_CASE("report encodings") {
    ContractionReport r;
    r.residual_history = {1e-3, 1e-7};
    r.contraction_factors = {1e-4};
    r.converged = true;
    const json j = to_json(r);
    CHECK(j.at("residual_history").is_array());
    CHECK(j.at("residual_history").size() == 2);
    CHECK(j.at("rule") == "filon-cubic");
    CHECK_FALSE(j.contains("final_solution"));

    // p = 2 makes 1/q1 vanish; the infinite exponent is written as null
    const json q = to_json(proof_parameters(-0.45, 2.0, 0.0, 0.55));
    CHECK(q.at("q1").is_null());
    CHECK(q.at("sigma0").get<double>() == doctest::Approx(0.45));
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "null");

    const json region = to_json(admissible_region(0.0, 2.0));
    CHECK(region.at("s_interval").is_array());
  }

  TEST_CASE("xsb CSV") {
    CHECK(xsb_csv_header() == "s,b,N,M,tau_max,dtau,value,tail_flag");
    XsbResult r;
    r.value = 0.1;
    r.tau_max = 64.0;
    r.dtau = 0.25;
    r.unreliable = true;
    CHECK(xsb_csv_row(-0.4, 0.55, 16, 513, r) == "-0.4,0.55,16,513,64.0,0.25,0.1,1");
  }

  TEST_CASE("format_double round trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> e(-300, 300);
    for (int i = 0; i < 2000; ++i) {
      const double x = std::pow(10.0, e(rng)) * (i % 2 ? -1 : 1);
      CHECK(bit_equal(std::strtod(format_double(x).c_str(), nullptr), x));
    }
  }
}
