#pragma once

// Numerical probes of the norm and lattice-sum estimates behind local
// well-posedness of i u_t + u_xx = kappa conj(u)^2 with rough data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/lattice_sums.hpp"
#include "nlslab/picard.hpp"

namespace nlslab {

// ---- parameter region ------------------------------------------------------

struct RegionSpec {
  double s0 = 0.0;
  double p = 2.0;
  bool admissible = false;
  /// open interval (-1/6 - s0 - 1/p, -1 + 2/p); empty when lower >= upper
  double lower = 0.0;
  double upper = 0.0;
  bool empty = true;
};

/// admissible iff 3/p + s0 > 5/6. Throws for p <= 0.
RegionSpec admissible_region(double s0, double p);

/// Range of 1/p admitted for a given s0 together with p > 2:
/// (5/6 - s0) / 3 < 1/p < 1/2.
struct InversePWindow {
  double lower = 0.0;
  double upper = 0.5;
  bool empty = true;
};
InversePWindow admissible_inverse_p_window(double s0);

/// Exponents that appear in the smoothing and bilinear arguments.
struct ProofParameters {
  double beta = 0.0;     // 2(1 - b)
  double beta1 = 0.0;    // 2(1 - b)
  double beta2 = 0.0;    // 2b
  double sigma = 0.0;    // -s
  double sigma0 = 0.0;   // -s0
  double epsilon = 0.0;  // b - 1/2
  double theta = 0.0;    // (1 + 2 eps) / (3 (1 - 2 eps))
  double eta = 0.0;      // 4/3 (1 - 4 eps) - 2 sigma0 - 2 sigma
  double q1 = 0.0;       // 1/q1 = 1 - 2/p
  double p1 = 0.0;       // p / 2
  double r1 = 0.0;       // 1/q1 = 1/p1 + 1/r1 - 1
};
ProofParameters proof_parameters(double s0, double p, double s, double b);

/// max/min of the last three values <= 1.5 (and all finite, positive).
bool bounded_verdict(const std::vector<double>& values, double limit = 1.5);

// ---- lattice sums ------------------------------------------------------------

inline constexpr long long kDefaultTruncation = 4096;

/// sup over y of sum_n <n - y>^{-2 gamma}; y is reduced modulo 1.
SupSumReport sup_sum_shift(double gamma, const std::vector<double>& y_grid, long long K = kDefaultTruncation);

/// sup over (y, z) of sum_n <z + n(n - y)>^{-gamma}. When refine is set the
/// double-root points z = y^2 / 4 are added for every y of the grid.
SupSumReport sup_sum_quadratic(double gamma, const std::vector<double>& y_grid, const std::vector<double>& z_grid,
                               bool refine = true, long long K = kDefaultTruncation);

/// Documented grid: y in [0, 10] step 1/4, z in [-20, 20] step 1/2.
std::vector<double> quadratic_y_grid();
std::vector<double> quadratic_z_grid();

/// y = 2m, z = m^2 for m = 1..m_max: the polynomial has a double integer root.
SupSumReport double_root_family(double gamma, int m_max, long long K = kDefaultTruncation);

struct KTau {
  int k = 0;
  double tau = 0.0;
};
struct MKTau {
  int m = 0;
  int k = 0;
  double tau = 0.0;
};

/// sum_n <-tau + (n+k)^2 + n^2>^{-gamma1}
SumPoint corollary_first_sum(int k, double tau, double gamma1, long long K = kDefaultTruncation);
/// sum_n <tau - (n+k)^2 + (n+m)^2 + m^2>^{-2 gamma2}; rejects m == k.
SumPoint corollary_second_sum(int m, int k, double tau, double gamma2, long long K = kDefaultTruncation);
/// C = (tau - k^2 + 2 m^2) / (2 (m - k)); the second sum is bounded by sum_n <n + C>^{-2 gamma2}.
double corollary_shift(int m, int k, double tau);

struct CorollaryReports {
  SupSumReport first;
  SupSumReport second;
};
CorollaryReports check_corollary_sums(double gamma1, double gamma2, const std::vector<KTau>& first_grid,
                                      const std::vector<MKTau>& second_grid, long long K = kDefaultTruncation);

/// Documented grids: k in {-8..8}, tau on a quarter lattice around k^2/2 and
/// k^2 plus far points; second grid over m != k in {-6..6} with tau near the
/// values making C an integer or half-integer.
std::vector<KTau> default_first_grid();
std::vector<MKTau> default_second_grid();

/// sup over y of <y>^{2 gamma - 1} sum_n <n^2 + y^2>^{-gamma}.
SupSumReport check_decay_lemma(double gamma, const std::vector<double>& y_grid, long long K = kDefaultTruncation);

/// 0 and a log grid of `count` points on [1e-2, 1e3].
std::vector<double> decay_grid(int count = 61);

// ---- convolution lemma ---------------------------------------------------------

enum class ConvolutionProfile { Gaussian, Cauchy3, WindowHat };
std::string profile_name(ConvolutionProfile profile);

struct ConvolutionLemmaReport {
  SupSumReport report;  // value(A) = <A> int <tau + A>^{-1} |phi(tau)| dtau
  double range = 0.0;
  double doubled_sup = 0.0;
  /// sup changes by less than 2% when the integration range doubles
  bool stable = false;
};

/// phi is e^{-tau^2}, (1 + tau^2)^{-3} or |psi-hat| of the default window.
/// The tail outside [-R, R] is bounded by sqrt(2) int_{|tau| > R} <tau> |phi|.
ConvolutionLemmaReport check_convolution_lemma(ConvolutionProfile profile, const std::vector<double>& A_grid,
                                               std::optional<double> range = std::nullopt);

/// int |phi|
double profile_mass(ConvolutionProfile profile);

// ---- c_p bound -----------------------------------------------------------------

struct CpBoundReport {
  double sup_ratio = 0.0;
  int argsup_p = 0;
  double argsup_tau = 0.0;
  /// sup over the tau grid of sum_n |psi-hat|(tau - n^2 - (n+p)^2), which bounds the ratio
  double window_constant = 0.0;
  std::size_t points = 0;
};

/// |c^_p(tau)|^2 / sum_n |a_n|^2 |a_{-n-p}|^2 |psi-hat|(tau - n^2 - (n+p)^2) with
/// c^_p(tau) = sum_n conj(a_n) conj(a_{-n-p}) psi-hat(tau - n^2 - (n+p)^2).
/// tau values must be multiples of 1/4; psi-hat is tabulated for |x| <= 96.
CpBoundReport check_cp_bound(const FourierState& f, const Window& w, const std::vector<double>& tau_grid,
                             const std::vector<int>& p_set);

// ---- I(k, tau) -----------------------------------------------------------------

struct SupIReport {
  std::vector<KTau> grid;
  std::vector<double> total;
  std::vector<double> diagonal;      // m = k part
  std::vector<double> off_diagonal;  // m != k part
  double sup = 0.0;
  double sup_diagonal = 0.0;
  double sup_off_diagonal = 0.0;
  KTau argsup;
  int n_sum = 0;
  /// sup / ||f||^2_{H^{s0,p}} when a normaliser was supplied
  double normalized = 0.0;
};

/// I(k,tau) = sum_{n,m} <n>^{2s} <n+m>^{-2s} |a_m|^2 <R1>^{-2(1-b)} <R2>^{-2b},
/// R1 = -tau + (n+k)^2 + n^2, R2 = tau - (n+k)^2 + m^2 + (n+m)^2, |n| <= N_sum.
SupIReport sup_I(const FourierState& f, double s, double b, const std::vector<KTau>& grid, int n_sum,
                 std::optional<std::pair<double, double>> normalise = std::nullopt);

/// k in {0, +-1, +-N/4, +-N/2, N}, tau on the resonance lines tau = (n+k)^2 + n^2 for a few n.
std::vector<KTau> sup_I_grid(int radius);

// ---- bilinear ratios -----------------------------------------------------------

/// ||int_0^t e^{i(t-t')Delta} conj(u0) conj(v) dt'||_{X^{s,b}} / (||f||_{H^{s0,p}} ||v||_{X^{s,b}})
/// with u0 = e^{itDelta} f, v = e^{itDelta} g, all norms with the default window on [-1,1].
double bilinear_ratio(const FourierState& f, const FourierState& g, double s, double b, double s0, double p);

/// Same ratio for a sampled v; requires T_max >= 2.
double bilinear_ratio(const FourierState& f, const SpaceTimeField& v, double s, double b, double s0, double p,
                      QuadratureRule rule = QuadratureRule::FilonCubic);

/// ||conj(v) conj(w)||_{X^{s,b-1}} / (||v||_{X^{s,b}} ||w||_{X^{s,b}}).
double kpv_bilinear_ratio(const ExponentialSumField& v, const ExponentialSumField& w, double s, double b);
double kpv_bilinear_ratio(const SpaceTimeField& v, const SpaceTimeField& w, double s, double b);

struct RatioSample {
  int radius = 0;
  std::vector<double> ratios;
  double max = 0.0;
  double median = 0.0;
};

/// `trials` draws of f = random_data(s0, p, N) and g = random_data(s, 2, N).
RatioSample bilinear_probe(double s, double b, double s0, double p, int radius, int trials, std::uint64_t seed);

/// Random pairs v, w = free fields of random_data(s, 2, N).
RatioSample kpv_probe(double s, double b, int radius, int trials, std::uint64_t seed);

/// High-high to low interaction: v at mode N, w at mode 1 - N. Returns one ratio per N.
std::vector<double> kpv_failure_probe(double s, double b, const std::vector<int>& radii);

// ---- sweeps --------------------------------------------------------------------

enum class DataFamily { PowerEdge, Random };

struct SmoothingReport {
  double s0 = 0.0, p = 2.0, s = 0.0, b = 0.55;
  std::vector<int> radii;
  std::vector<double> iterate_norms;
  std::vector<double> data_norms;      // ||f||_{H^{s0,p}}
  std::vector<double> ratios;          // ||u1||_{X^{s,b}} / ||f||^2_{H^{s0,p}}
  std::vector<double> contrast_ratios; // ||u1||_{X^{s,b}} / ||f||^2_{H^{0,2}}
  std::vector<bool> unreliable;
  bool bounded = false;
  ProofParameters parameters;
};

/// Requires s < -1 + 2/p, or s = 0 with p = 2; otherwise throws naming the inequality.
SmoothingReport smoothing_sweep(double s0, double p, double s, double b, const std::vector<int>& radii,
                                DataFamily family, std::uint64_t seed = 1, Kappa kappa = Kappa::plus());

FourierState make_data(DataFamily family, double s0, double p, int radius, std::uint64_t seed);

struct ScalingFit {
  std::vector<int> lambdas;
  std::vector<double> norms;
  double slope = 0.0;
  double intercept = 0.0;
  double target = 0.0;  // 1 + s0 + 1/p
  bool degenerate = false;
};

/// Least-squares slope of log ||rescale(f, lambda)||_{H^{s0,p}} against log lambda.
/// Needs at least four distinct integer lambdas >= 1.
ScalingFit scaling_check(const FourierState& f, double s0, double p, const std::vector<int>& lambdas);

}  // namespace nlslab
