#include "nlslab/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

namespace nlslab {

std::string format_double(double x) { return json(x).dump(); }

json to_json(const FourierState& f) {
  json coeffs = json::array();
  for (int n = -f.radius(); n <= f.radius(); ++n) coeffs.push_back({n, f[n].real(), f[n].imag()});
  return {{"period", f.period()}, {"N", f.radius()}, {"coeffs", std::move(coeffs)}};
}

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

FourierState fourier_state_from_json(const json& j) {
  const double period = j.contains("period") ? number(j.at("period"), "period") : kTwoPi;
  const json& nj = require(j, "N");
  if (!nj.is_number_integer()) throw std::invalid_argument("N must be an integer");
  const int radius = nj.get<int>();
  if (radius < 0) throw std::invalid_argument("N >= 0 violated");
  std::vector<complex> coeffs(static_cast<std::size_t>(2 * radius + 1));
  std::set<int> seen;
  for (const auto& entry : require(j, "coeffs")) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer())
      throw std::invalid_argument("coeffs entries must be [n, re, im]");
    const int n = entry[0].get<int>();
    if (n < -radius || n > radius) throw std::invalid_argument("coefficient index outside [-N, N]");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate coefficient index");
    coeffs[static_cast<std::size_t>(n + radius)] = {number(entry[1], "re"), number(entry[2], "im")};
  }
  return FourierState(radius, std::move(coeffs), period);
}

json to_json(const SpaceTimeField& field, bool include_slices) {
  json j = {{"format", "nlslab.field.v1"},
            {"N", field.radius()},
            {"M", field.grid().size()},
            {"T_max", field.grid().t_max()},
            {"period", field.period()},
            {"layout", "slice k at t_k = -T_max + 2 T_max k / (M - 1); per slice modes n = -N..N as (n, re, im); "
                       "sidecar: little-endian float64 triplets in the same order"}};
  if (include_slices) {
    json slices = json::array();
    for (std::size_t k = 0; k < field.grid().size(); ++k) {
      json row = json::array();
      for (int n = -field.radius(); n <= field.radius(); ++n) row.push_back({n, field.at(k, n).real(), field.at(k, n).imag()});
      slices.push_back(std::move(row));
    }
    j["slices"] = std::move(slices);
  }
  return j;
}

namespace {

SpaceTimeField empty_field_from_header(const json& j) {
  if (require(j, "format") != "nlslab.field.v1") throw std::invalid_argument("unknown field format");
  const int radius = require(j, "N").get<int>();
  const auto samples = require(j, "M").get<std::size_t>();
  const double t_max = number(require(j, "T_max"), "T_max");
  const double period = number(require(j, "period"), "period");
  return SpaceTimeField(TimeGrid(t_max, samples), radius, period);
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return out;
}

void put(std::ofstream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  bits = to_little(bits);
  os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get(std::ifstream& is) {
  std::uint64_t bits = 0;
  if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw std::runtime_error("sidecar truncated");
  bits = to_little(bits);
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

}  // namespace

SpaceTimeField space_time_field_from_json(const json& j) {
  SpaceTimeField field = empty_field_from_header(j);
  const json& slices = require(j, "slices");
  if (slices.size() != field.grid().size()) throw std::invalid_argument("slice count differs from M");
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (slices[k].size() != field.width()) throw std::invalid_argument("slice width differs from 2N+1");
    for (const auto& entry : slices[k]) {
      const int n = entry.at(0).get<int>();
      if (n < -field.radius() || n > field.radius()) throw std::invalid_argument("mode outside [-N, N]");
      field.at(k, n) = {number(entry.at(1), "re"), number(entry.at(2), "im")};
    }
  }
  return field;
}

void write_field_sidecar(const SpaceTimeField& field, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t k = 0; k < field.grid().size(); ++k)
    for (int n = -field.radius(); n <= field.radius(); ++n) {
      put(os, n);
      put(os, field.at(k, n).real());
      put(os, field.at(k, n).imag());
    }
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

SpaceTimeField read_field_sidecar(const json& header, const std::filesystem::path& path) {
  SpaceTimeField field = empty_field_from_header(header);
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t k = 0; k < field.grid().size(); ++k)
    for (int n = -field.radius(); n <= field.radius(); ++n) {
      const double index = get(is);
      if (index != n) throw std::runtime_error("sidecar mode index mismatch");
      const double re = get(is);
      const double im = get(is);
      field.at(k, n) = {re, im};
    }
  return field;
}

json to_json(const ContractionReport& report, bool include_solution) {
  json j = {{"iterations", report.iterations},
            {"residual_history", report.residual_history},
            {"contraction_factors", report.contraction_factors},
            {"converged", report.converged},
            {"diverged", report.diverged},
            {"T", report.T},
            {"tol", report.options.tol},
            {"max_iter", report.options.max_iter},
            {"s", report.options.s},
            {"b", report.options.b},
            {"samples", report.options.samples},
            {"rule", report.options.rule == QuadratureRule::FilonCubic ? "filon-cubic" : "filon-linear"},
            {"fixed_point_change", report.fixed_point_change},
            {"integral_residual", report.integral_residual}};
  if (include_solution) j["final_solution"] = to_json(report.solution);
  return j;
}

json to_json(const XsbResult& r) {
  return {{"value", r.value}, {"tail_fraction", r.tail_fraction}, {"unreliable", r.unreliable},
          {"tau_max", r.tau_max}, {"dtau", r.dtau}};
}

json to_json(const SupSumReport& r) {
  json points = json::array();
  for (const auto& pt : r.points)
    points.push_back({{"parameters", pt.parameters}, {"value", pt.value}, {"tail_bound", pt.tail_bound},
                      {"certified", pt.certified}});
  return {{"name", r.name}, {"parameter_names", r.parameter_names}, {"grid", r.grid},
          {"truncation", r.truncation}, {"sup", r.sup}, {"argsup", r.argsup},
          {"max_tail", r.max_tail}, {"certified", r.certified}, {"points", std::move(points)}};
}

json to_json(const RegionSpec& r) {
  json j = {{"s0", r.s0}, {"p", r.p}, {"admissible", r.admissible}, {"empty", r.empty}};
  j["s_interval"] = r.empty ? json(nullptr) : json::array({r.lower, r.upper});
  return j;
}

json to_json(const ProofParameters& q) {
  const auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"beta", num(q.beta)},   {"beta1", num(q.beta1)},     {"beta2", num(q.beta2)},
          {"sigma", num(q.sigma)}, {"sigma0", num(q.sigma0)},   {"epsilon", num(q.epsilon)},
          {"theta", num(q.theta)}, {"eta", num(q.eta)},         {"q1", num(q.q1)},
          {"p1", num(q.p1)},       {"r1", num(q.r1)}};
}

std::string xsb_csv_header() { return "s,b,N,M,tau_max,dtau,value,tail_flag"; }

std::string xsb_csv_row(double s, double b, int N, std::size_t M, const XsbResult& r) {
  return format_double(s) + "," + format_double(b) + "," + std::to_string(N) + "," + std::to_string(M) + "," +
         format_double(r.tau_max) + "," + format_double(r.dtau) + "," + format_double(r.value) + "," +
         (r.unreliable ? "1" : "0");
}

}  // namespace nlslab
