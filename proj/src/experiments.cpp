#include "nlslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nlslab {

ConfigParseError::ConfigParseError(const std::string& message, std::size_t l, std::size_t c)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + message),
      line(l),
      column(c) {}

json parse_config(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is 1-based and points at the offending character
    const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigParseError(what, line, column);
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"solve",
       "Contraction solver for u = e^{it Delta} f + v on [-T, T]: iterates v -> K(v) from v = 0 and records "
       "X^{s,b} residuals, contraction factors and the integral-equation defect. Verifies the small-data "
       "contraction argument for the local existence theorem."},
      {"picard-smoothing",
       "Smoothing estimate for the first Picard iterate: ||u_1||_{X^{s,b}([-1,1])} / ||f||^2_{H^{s0,p}} "
       "across truncations N, with the H^0 contrast ratio. Verifies the gain of regularity of u_1 over rough data."},
      {"supsum",
       "Certified lattice sums: the shifted sum, the quadratic-phase sum with its double-root stress family, "
       "the two corollary sums, the decay lemma and the convolution lemma. Verifies the uniform bounds used "
       "in the bilinear estimate."},
      {"bilinear",
       "Bilinear ratios: the Duhamel term of conj(u_0) conj(v) against ||f||_{H^{s0,p}} ||v||_{X^{s,b}}, and the "
       "Kenig-Ponce-Vega product ratio with its high-high to low failure probe below s = -1/2."},
      {"region",
       "Admissible parameter region 3/p + s0 > 5/6 and the interval (-1/6 - s0 - 1/p, -1 + 2/p) of "
       "regularities s reached by the solution."},
      {"scaling",
       "Scaling exponent: log-log slope of ||rescale(f, lambda)||_{H^{s0,p}} against lambda, compared with "
       "1 + s0 + 1/p."},
  };
  return d;
}

// ---- parameter access ---------------------------------------------------------

class Params {
 public:
  Params(const json& config, const char* block) : kind_(config.value("kind", "")) {
    if (config.contains(block)) {
      if (!config.at(block).is_object()) throw std::invalid_argument(std::string(block) + " must be an object");
      j_ = config.at(block);
    } else {
      j_ = json::object();
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  double num(const char* key) const {
    if (!j_.contains(key)) throw std::invalid_argument(kind_ + ": missing parameter \"" + key + "\"");
    if (!j_.at(key).is_number()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must be a number");
    return j_.at(key).get<double>();
  }
  double num(const char* key, double fallback) const { return has(key) ? num(key) : fallback; }

  long long integer(const char* key) const {
    if (!j_.contains(key)) throw std::invalid_argument(kind_ + ": missing parameter \"" + key + "\"");
    if (!j_.at(key).is_number_integer()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must be an integer");
    return j_.at(key).get<long long>();
  }
  long long integer(const char* key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  std::string str(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must be a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> nums(const char* key, std::vector<double> fallback = {}) const {
    if (!has(key)) {
      if (fallback.empty()) throw std::invalid_argument(kind_ + ": missing parameter \"" + key + "\"");
      return fallback;
    }
    std::vector<double> out;
    if (!j_.at(key).is_array()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must be an array");
    for (const auto& x : j_.at(key)) {
      if (!x.is_number()) throw std::invalid_argument(kind_ + ": \"" + key + "\" entries must be numbers");
      out.push_back(x.get<double>());
    }
    if (out.empty()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must not be empty");
    return out;
  }

  std::vector<int> ints(const char* key, std::vector<int> fallback = {}) const {
    if (!has(key)) {
      if (fallback.empty()) throw std::invalid_argument(kind_ + ": missing parameter \"" + key + "\"");
      return fallback;
    }
    std::vector<int> out;
    if (!j_.at(key).is_array()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must be an array");
    for (const auto& x : j_.at(key)) {
      if (!x.is_number_integer()) throw std::invalid_argument(kind_ + ": \"" + key + "\" entries must be integers");
      out.push_back(x.get<int>());
    }
    if (out.empty()) throw std::invalid_argument(kind_ + ": \"" + key + "\" must not be empty");
    return out;
  }

  const json& raw(const char* key) const { return j_.at(key); }

 private:
  std::string kind_;
  json j_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string fmt(double x) { return format_double(x); }

DataFamily parse_family(const std::string& name, const std::string& kind) {
  if (name == "power-edge") return DataFamily::PowerEdge;
  if (name == "random") return DataFamily::Random;
  throw std::invalid_argument(kind + ": family must be \"power-edge\" or \"random\"");
}

// ---- per-kind settings: parsed once for validation and once for the run --------

struct SolveSettings {
  FourierState data = FourierState::zero(0);
  Kappa kappa = Kappa::plus();
  double T = 1.0;
  SolveOptions options;
};

SolveSettings parse_solve(const json& config, std::uint64_t seed) {
  const Params p(config, "params");
  const Params d(config, "discretization");
  SolveSettings s;
  s.T = p.num("T", 1.0);
  require(s.T > 0.0 && std::isfinite(s.T), "solve: T > 0 violated");
  s.kappa = Kappa(static_cast<int>(p.integer("kappa", 1)));
  s.options.max_iter = static_cast<int>(p.integer("max_iter", 50));
  require(s.options.max_iter >= 1, "solve: max_iter >= 1 violated");
  s.options.tol = p.num("tol", 1e-10);
  require(s.options.tol > 0.0, "solve: tol > 0 violated");
  s.options.s = p.num("s", 0.0);
  s.options.b = p.num("b", 0.55);
  const long long M = d.integer("M", 513);
  require(M >= 4, "solve: M >= 4 violated");
  s.options.samples = static_cast<std::size_t>(M);
  if (d.has("T_max")) require(std::abs(d.num("T_max") - 2.0 * s.T) <= 1e-12 * s.T, "solve: T_max = 2T violated");
  const std::string rule = p.str("rule", "filon-cubic");
  require(rule == "filon-cubic" || rule == "filon-linear", "solve: rule must be filon-cubic or filon-linear");
  s.options.rule = rule == "filon-cubic" ? QuadratureRule::FilonCubic : QuadratureRule::FilonLinear;
  const long long N = d.integer("N", 4);
  require(N >= 0 && N <= 4096, "solve: 0 <= N <= 4096 violated");
  require(p.has("data"), "solve: missing parameter \"data\"");
  const json& data = p.raw("data");
  require(data.is_object(), "solve: data must be an object");
  const double scale = data.value("scale", 1.0);
  if (data.contains("modes")) {
    json state = {{"N", N}, {"coeffs", data.at("modes")}};
    s.data = fourier_state_from_json(state).scaled(scale);
  } else {
    const std::string family = data.value("family", "");
    const double s0 = data.value("s0", -0.45);
    const double pp = data.value("p", 2.0);
    require(pp >= 1.0, "solve: p >= 1 violated");
    s.data = make_data(parse_family(family, "solve"), s0, pp, static_cast<int>(N), seed).scaled(scale);
  }
  return s;
}

struct SmoothingSettings {
  double s0, p, s, b;
  std::vector<int> radii;
  DataFamily family;
  Kappa kappa = Kappa::plus();
};

SmoothingSettings parse_smoothing(const json& config) {
  const Params p(config, "params");
  SmoothingSettings s{p.num("s0"), p.num("p"), p.num("s"), p.num("b", 0.55), p.ints("N_list"),
                      parse_family(p.str("family", "power-edge"), "picard-smoothing"),
                      Kappa(static_cast<int>(p.integer("kappa", 1)))};
  require(s.p >= 1.0, "picard-smoothing: p >= 1 violated");
  const bool endpoint = s.s == 0.0 && s.p == 2.0;
  require(endpoint || s.s < -1.0 + 2.0 / s.p, "picard-smoothing: s < -1 + 2/p violated");
  for (int N : s.radii) require(N >= 1 && N <= 8192, "picard-smoothing: 1 <= N <= 8192 violated");
  return s;
}

struct RegionSettings {
  std::vector<std::pair<double, double>> points;
};

RegionSettings parse_region(const json& config) {
  const Params p(config, "params");
  RegionSettings r;
  if (p.has("points")) {
    for (const auto& pt : p.raw("points")) {
      require(pt.is_array() && pt.size() == 2 && pt[0].is_number() && pt[1].is_number(),
              "region: points entries must be [s0, p]");
      r.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
  } else {
    r.points.emplace_back(p.num("s0"), p.num("p"));
  }
  for (const auto& [s0, pp] : r.points) require(pp > 0.0 && std::isfinite(s0), "region: p > 0 violated");
  return r;
}

struct ScalingSettings {
  double s0, p;
  int N;
  std::vector<int> lambdas;
  DataFamily family;
};

ScalingSettings parse_scaling(const json& config) {
  const Params p(config, "params");
  const Params d(config, "discretization");
  ScalingSettings s{p.num("s0"), p.num("p"), static_cast<int>(d.integer("N", p.integer("N", 256))),
                    p.ints("lambdas"), parse_family(p.str("family", "power-edge"), "scaling")};
  require(s.p >= 1.0, "scaling: p >= 1 violated");
  require(s.N >= 0 && s.N <= 65536, "scaling: 0 <= N <= 65536 violated");
  std::set<int> distinct(s.lambdas.begin(), s.lambdas.end());
  require(distinct.size() >= 4, "scaling: at least 4 distinct lambdas required");
  require(*distinct.begin() >= 1 && *distinct.rbegin() <= 64, "scaling: 1 <= lambda <= 64 violated");
  return s;
}

struct BilinearSettings {
  std::string mode;
  double s, b, s0, p;
  std::vector<int> radii;
  int trials;
};

BilinearSettings parse_bilinear(const json& config) {
  const Params p(config, "params");
  BilinearSettings s;
  s.mode = p.str("mode", "product");
  require(s.mode == "product" || s.mode == "kpv" || s.mode == "kpv-failure",
          "bilinear: mode must be product, kpv or kpv-failure");
  s.s = p.num("s");
  s.b = p.num("b", 0.55);
  s.s0 = s.mode == "product" ? p.num("s0") : 0.0;
  s.p = s.mode == "product" ? p.num("p") : 2.0;
  require(s.p >= 1.0, "bilinear: p >= 1 violated");
  s.radii = p.ints("N_list");
  for (int N : s.radii) require(N >= 1 && N <= 1024, "bilinear: 1 <= N <= 1024 violated");
  s.trials = static_cast<int>(p.integer("trials", 20));
  require(s.trials >= 1, "bilinear: trials >= 1 violated");
  return s;
}

struct SupsumSettings {
  std::string lemma;
  std::vector<double> gammas;
  long long truncation;
};

SupsumSettings parse_supsum(const json& config) {
  const Params p(config, "params");
  SupsumSettings s;
  s.lemma = p.str("lemma", "shift");
  static const std::set<std::string> lemmas{"shift", "quadratic", "double-root", "corollary", "decay", "convolution"};
  require(lemmas.count(s.lemma) == 1, "supsum: lemma must be one of shift, quadratic, double-root, corollary, decay, convolution");
  s.truncation = p.integer("truncation", kDefaultTruncation);
  require(s.truncation >= 16, "supsum: truncation >= 16 violated");
  if (s.lemma != "convolution") {
    s.gammas = p.nums("gamma_list", {p.num("gamma", 1.0)});
    for (double g : s.gammas) require(g > 0.5, "supsum: gamma > 1/2 violated");
  }
  if (s.lemma == "convolution") {
    const std::string profile = p.str("profile", "gaussian");
    require(profile == "gaussian" || profile == "cauchy3" || profile == "window-hat",
            "supsum: profile must be gaussian, cauchy3 or window-hat");
  }
  return s;
}

// ---- runners -----------------------------------------------------------------------

CsvTable points_table(const SupSumReport& r, const std::string& name, double gamma) {
  CsvTable t;
  t.name = name;
  t.columns = {"gamma"};
  for (const auto& n : r.parameter_names) t.columns.push_back(n);
  for (const char* c : {"value", "tail_bound", "certified"}) t.columns.push_back(c);
  for (const auto& pt : r.points) {
    std::vector<std::string> row{fmt(gamma)};
    for (double x : pt.parameters) row.push_back(fmt(x));
    row.push_back(fmt(pt.value));
    row.push_back(fmt(pt.tail_bound));
    row.push_back(pt.certified ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
  return t;
}

json summary(const SupSumReport& r) {
  return {{"name", r.name}, {"grid", r.grid}, {"truncation", r.truncation}, {"points", r.points.size()},
          {"sup", r.sup}, {"argsup", r.points.empty() ? json(nullptr) : json(r.points[r.argsup].parameters)},
          {"max_tail", r.max_tail}, {"certified", r.certified}};
}

void run_solve(const json& config, std::uint64_t seed, ExperimentReport& out) {
  const SolveSettings s = parse_solve(config, seed);
  const ContractionReport r = picard_solve(s.data, s.kappa, s.T, s.options);
  out.document["results"] = to_json(r);
  out.document["results"]["data"] = to_json(s.data);
  out.document["verdicts"] = {{"converged", r.converged}, {"diverged", r.diverged}};
  CsvTable t{"residuals", {"iteration", "residual", "contraction_factor"}, {}, "logy", "iteration", "residual", ""};
  for (std::size_t i = 0; i < r.residual_history.size(); ++i)
    t.rows.push_back({std::to_string(i + 1), fmt(r.residual_history[i]),
                      i == 0 ? std::string("") : fmt(r.contraction_factors[i - 1])});
  out.tables.push_back(std::move(t));
}

void run_smoothing(const json& config, std::uint64_t seed, ExperimentReport& out) {
  const SmoothingSettings s = parse_smoothing(config);
  const SmoothingReport r = smoothing_sweep(s.s0, s.p, s.s, s.b, s.radii, s.family, seed, s.kappa);
  out.document["results"] = {{"N", r.radii},
                             {"ratios", r.ratios},
                             {"contrast_ratios", r.contrast_ratios},
                             {"iterate_norms", r.iterate_norms},
                             {"data_norms", r.data_norms},
                             {"unreliable", r.unreliable},
                             {"parameters", to_json(r.parameters)}};
  out.document["verdicts"] = {{"bounded", r.bounded}, {"rule", "max/min of the last three ratios <= 1.5"}};
  CsvTable t{"ratios", {"N", "ratio", "contrast_ratio", "iterate_norm", "data_norm", "unreliable"}, {}, "logx", "N",
             "ratio", ""};
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    t.rows.push_back({std::to_string(r.radii[i]), fmt(r.ratios[i]), fmt(r.contrast_ratios[i]),
                      fmt(r.iterate_norms[i]), fmt(r.data_norms[i]), r.unreliable[i] ? "1" : "0"});
  out.tables.push_back(std::move(t));
}

void run_region(const json& config, ExperimentReport& out) {
  const RegionSettings s = parse_region(config);
  json results = json::array();
  CsvTable t{"region", {"s0", "p", "admissible", "s_lower", "s_upper"}, {}, "", "", "", ""};
  for (const auto& [s0, p] : s.points) {
    const RegionSpec r = admissible_region(s0, p);
    results.push_back(to_json(r));
    t.rows.push_back({fmt(s0), fmt(p), r.admissible ? "1" : "0", r.empty ? "" : fmt(r.lower), r.empty ? "" : fmt(r.upper)});
  }
  out.document["results"] = {{"regions", results}};
  out.document["verdicts"] = json::object();
  out.tables.push_back(std::move(t));
}

void run_scaling(const json& config, std::uint64_t seed, ExperimentReport& out) {
  const ScalingSettings s = parse_scaling(config);
  const FourierState f = make_data(s.family, s.s0, s.p, s.N, seed);
  const ScalingFit fit = scaling_check(f, s.s0, s.p, s.lambdas);
  out.document["results"] = {{"lambdas", fit.lambdas}, {"norms", fit.norms},     {"slope", fit.slope},
                             {"intercept", fit.intercept}, {"target", fit.target}, {"degenerate", fit.degenerate}};
  out.document["verdicts"] = {{"slope_within_0.05", !fit.degenerate && std::abs(fit.slope - fit.target) <= 0.05}};
  CsvTable t{"norms", {"lambda", "norm"}, {}, "logxy", "lambda", "norm", ""};
  for (std::size_t i = 0; i < fit.lambdas.size(); ++i) t.rows.push_back({std::to_string(fit.lambdas[i]), fmt(fit.norms[i])});
  out.tables.push_back(std::move(t));
}

void run_bilinear(const json& config, std::uint64_t seed, ExperimentReport& out) {
  const BilinearSettings s = parse_bilinear(config);
  CsvTable t{"ratios", {"N", "trial", "ratio"}, {}, "points", "N", "ratio", ""};
  json per_n = json::array();
  if (s.mode == "kpv-failure") {
    const auto ratios = kpv_failure_probe(s.s, s.b, s.radii);
    bool monotone = true;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      t.rows.push_back({std::to_string(s.radii[i]), "0", fmt(ratios[i])});
      if (i > 0 && !(ratios[i] > ratios[i - 1])) monotone = false;
    }
    out.document["results"] = {{"N", s.radii}, {"ratios", ratios}};
    out.document["verdicts"] = {{"grows_monotonically", monotone}};
  } else {
    std::vector<double> maxima;
    for (int N : s.radii) {
      const RatioSample r = s.mode == "product" ? bilinear_probe(s.s, s.b, s.s0, s.p, N, s.trials, seed)
                                                : kpv_probe(s.s, s.b, N, s.trials, seed);
      per_n.push_back({{"N", N}, {"max", r.max}, {"median", r.median}, {"max_over_median", r.max / r.median}});
      for (std::size_t i = 0; i < r.ratios.size(); ++i) t.rows.push_back({std::to_string(N), std::to_string(i), fmt(r.ratios[i])});
      maxima.push_back(r.max);
    }
    const auto [lo, hi] = std::minmax_element(maxima.begin(), maxima.end());
    bool spread = true;
    for (const auto& e : per_n) spread = spread && e["max_over_median"].get<double>() <= 10.0;
    out.document["results"] = {{"per_N", per_n}, {"max_drift", (*hi - *lo) / *lo}};
    out.document["verdicts"] = {{"max_over_median_le_10", spread}, {"drift_lt_0.5", (*hi - *lo) / *lo < 0.5}};
  }
  out.tables.push_back(std::move(t));
}

void run_supsum(const json& config, ExperimentReport& out) {
  const SupsumSettings s = parse_supsum(config);
  const Params p(config, "params");
  json reports = json::array();
  bool certified = true;
  if (s.lemma == "convolution") {
    const std::string name = p.str("profile", "gaussian");
    const ConvolutionProfile profile = name == "gaussian"  ? ConvolutionProfile::Gaussian
                                       : name == "cauchy3" ? ConvolutionProfile::Cauchy3
                                                           : ConvolutionProfile::WindowHat;
    const auto A = p.nums("A_grid", {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0, 1000.0, -1000.0, 1e4, -1e4});
    const auto r = check_convolution_lemma(profile, A);
    json j = summary(r.report);
    j["range"] = r.range;
    j["doubled_sup"] = r.doubled_sup;
    j["stable"] = r.stable;
    reports.push_back(j);
    certified = r.report.certified;
    auto t = points_table(r.report, "points", 0.0);
    t.plot = "lines";
    t.x = "A";
    t.y = "value";
    out.tables.push_back(std::move(t));
    out.document["verdicts"] = {{"certified", certified}, {"stable", r.stable}};
    out.document["results"] = {{"reports", reports}};
    return;
  }
  CsvTable all;
  for (double gamma : s.gammas) {
    std::vector<std::pair<std::string, SupSumReport>> rs;
    if (s.lemma == "shift") {
      rs.emplace_back("shift", sup_sum_shift(gamma, p.nums("y_grid", {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875}),
                                             s.truncation));
    } else if (s.lemma == "quadratic") {
      rs.emplace_back("quadratic", sup_sum_quadratic(gamma, p.nums("y_grid", quadratic_y_grid()),
                                                     p.nums("z_grid", quadratic_z_grid()), true, s.truncation));
    } else if (s.lemma == "double-root") {
      rs.emplace_back("double-root", double_root_family(gamma, static_cast<int>(p.integer("m_max", 100)), s.truncation));
    } else if (s.lemma == "corollary") {
      auto c = check_corollary_sums(gamma, gamma, default_first_grid(), default_second_grid(), s.truncation);
      rs.emplace_back("corollary-first", std::move(c.first));
      rs.emplace_back("corollary-second", std::move(c.second));
    } else {
      rs.emplace_back("decay", check_decay_lemma(gamma, p.nums("y_grid", decay_grid()), s.truncation));
    }
    for (auto& [name, r] : rs) {
      json j = summary(r);
      j["gamma"] = gamma;
      reports.push_back(j);
      certified = certified && r.certified;
      CsvTable t = points_table(r, name, gamma);
      if (all.columns.empty()) {
        all = t;
        all.name = "points";
      } else if (all.columns == t.columns) {
        all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
      } else {
        t.name = name + "-points";
        out.tables.push_back(std::move(t));
      }
    }
  }
  if (s.lemma == "quadratic") {
    all.plot = "heatmap";
    all.x = "y";
    all.y = "z";
    all.z = "value";
  } else if (s.lemma == "shift" || s.lemma == "decay") {
    all.plot = "lines";
    all.x = "y";
    all.y = "value";
  }
  out.tables.insert(out.tables.begin(), std::move(all));
  out.document["results"] = {{"reports", reports}};
  out.document["verdicts"] = {{"certified", certified}};
}

std::uint64_t config_seed(const json& config) {
  if (!config.contains("seed")) return 1;
  require(config.at("seed").is_number_unsigned() || config.at("seed").is_number_integer(), "seed must be an integer");
  const long long v = config.at("seed").get<long long>();
  require(v >= 0, "seed >= 0 violated");
  return static_cast<std::uint64_t>(v);
}

void validate_envelope(const json& config) {
  require(config.is_object(), "config must be a JSON object");
  require(config.contains("version"), "missing key \"version\"");
  require(config.at("version").is_number_integer() && config.at("version").get<int>() == kConfigVersion,
          "unsupported config version (expected " + std::to_string(kConfigVersion) + ")");
  require(config.contains("kind") && config.at("kind").is_string(), "missing key \"kind\"");
  const std::string kind = config.at("kind");
  require(descriptions().count(kind) == 1, "unknown experiment kind \"" + kind + "\"");
  config_seed(config);
}

}  // namespace

std::vector<std::string> list_experiments() {
  return {"solve", "picard-smoothing", "supsum", "bilinear", "region", "scaling"};
}

std::string describe(const std::string& kind) {
  const auto& d = descriptions();
  const auto it = d.find(kind);
  if (it == d.end()) throw std::invalid_argument("unknown experiment kind \"" + kind + "\"");
  return it->second;
}

void validate_config(const json& config) {
  validate_envelope(config);
  const std::string kind = config.at("kind");
  if (kind == "solve") parse_solve(config, config_seed(config));
  if (kind == "picard-smoothing") parse_smoothing(config);
  if (kind == "supsum") parse_supsum(config);
  if (kind == "bilinear") parse_bilinear(config);
  if (kind == "region") parse_region(config);
  if (kind == "scaling") parse_scaling(config);
}

ExperimentReport run_experiment(const json& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const std::string kind = config.at("kind");
  const std::uint64_t seed = config_seed(config);
  ExperimentReport out;
  out.document = {{"schema", "nlslab." + kind + ".v1"},
                  {"tool", kToolVersion},
                  {"config", config},
                  {"input_hash", fnv1a_hex(config.dump())}};
  if (kind == "solve") run_solve(config, seed, out);
  if (kind == "picard-smoothing") run_smoothing(config, seed, out);
  if (kind == "supsum") run_supsum(config, out);
  if (kind == "bilinear") run_bilinear(config, seed, out);
  if (kind == "region") run_region(config, out);
  if (kind == "scaling") run_scaling(config, seed, out);
  json tables = json::array();
  for (const auto& t : out.tables)
    tables.push_back({{"name", t.name}, {"file", t.name + ".csv"}, {"columns", t.columns}, {"rows", t.rows.size()},
                      {"plot", t.plot}, {"x", t.x}, {"y", t.y}, {"z", t.z}});
  out.document["tables"] = tables;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.document["timing"] = {{"wall_seconds", wall}};
  return out;
}

json numeric_content(const json& report) {
  json copy = report;
  copy.erase("timing");
  return copy;
}

std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string schema = report.document.at("schema");
  for (const auto& t : report.tables) {
    const auto path = dir / (t.name + ".csv");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "# schema: " << schema << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
  }
  const auto path = dir / "report.json";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << report.document.dump(2) << "\n";
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
  return path;
}

PlotResult emit_plots(const std::filesystem::path& report_path) {
  std::ifstream is(report_path);
  if (!is) throw std::runtime_error("report not found: " + report_path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  const json report = parse_config(buffer.str());
  PlotResult out;
  const auto dir = report_path.parent_path();
  const json tables = report.value("tables", json::array());
  for (const auto& t : tables) {
    const std::string plot = t.value("plot", "");
    if (plot.empty() || t.value("rows", 0) == 0) continue;
    const std::string name = t.at("name");
    const auto columns = t.at("columns").get<std::vector<std::string>>();
    const auto column = [&](const std::string& c) {
      const auto it = std::find(columns.begin(), columns.end(), c);
      if (it == columns.end()) throw std::runtime_error("column " + c + " missing in " + name);
      return std::to_string(it - columns.begin() + 1);
    };
    const std::string csv = t.at("file");
    const std::string x = t.value("x", ""), y = t.value("y", ""), z = t.value("z", "");
    std::ostringstream gp;
    gp << "# gnuplot script for " << csv << " (" << report.value("schema", "") << ")\n"
       << "set datafile separator ','\n"
       << "set key top right\n"
       << "set output '" << name << ".png'\n"
       << "set terminal pngcairo size 900,600\n"
       << "set xlabel '" << x << "'\nset ylabel '" << y << "'\n";
    if (plot == "heatmap") {
      gp << "set view map\nset cblabel '" << z << "'\n"
         << "splot '" << csv << "' skip 2 using " << column(x) << ":" << column(y) << ":" << column(z)
         << " with points pointtype 5 pointsize 1 palette notitle\n";
    } else {
      if (plot == "logy" || plot == "logxy") gp << "set logscale y\n";
      if (plot == "logx" || plot == "logxy") gp << "set logscale x 2\n";
      const std::string style = plot == "points" ? "points" : "linespoints";
      gp << "plot '" << csv << "' skip 2 using " << column(x) << ":" << column(y) << " with " << style
         << " title '" << y << "'";
      if (std::find(columns.begin(), columns.end(), "contrast_ratio") != columns.end())
        gp << ", '' skip 2 using " << column(x) << ":" << column("contrast_ratio")
           << " with linespoints title 'contrast_ratio'";
      gp << "\n";
    }
    const auto path = dir / (name + ".gp");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << gp.str();
    out.scripts.push_back(path);
  }
  if (out.scripts.empty()) out.warnings.push_back("report has no plottable points; no scripts written");
  return out;
}

}  // namespace nlslab
