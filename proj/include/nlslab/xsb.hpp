#pragma once

// Discretised Bourgain norms
//   ||F||_{X^{s,b}}^2 = sum_n int <tau + n^2>^{2b} <n>^{2s} |F~(tau, n)|^2 dtau
// of windowed fields, F~ the space-time transform of psi(t/T) F.

#include <string>
#include <vector>

#include "nlslab/propagator.hpp"
#include "nlslab/window.hpp"

namespace nlslab {

/// tau samples per mode: tau_k = -n^2 + k * dtau for |k * dtau| <= tau_max.
/// The grid follows the dispersion relation, so every retained mode has the
/// minimum of <tau + n^2> at its centre.
struct TauGrid {
  double tau_max = 0.0;
  double dtau = 0.0;
  std::size_t size = 0;

  /// Zero-padded FFT grid of a time grid: dtau = pi / (2 T_max), tau_max = pi / dt.
  static TauGrid for_time_grid(const TimeGrid& grid);
};

struct XsbResult {
  double value = 0.0;
  /// Fraction of the weighted mass in the outer 10% of the tau range.
  double tail_fraction = 0.0;
  bool unreliable = false;
  double tau_max = 0.0;
  double dtau = 0.0;
};

inline constexpr double kTailThreshold = 0.01;

/// F~(tau, n) on the TauGrid; row n + N, column k <-> tau = -n^2 + (k - size/2) dtau.
struct SpacetimeTransform {
  int radius = 0;
  TauGrid grid;
  std::vector<std::vector<complex>> values;

  double tau(int n, std::size_t k) const;
  const std::vector<complex>& mode(int n) const { return values[static_cast<std::size_t>(n + radius)]; }
};

/// Requires the window support inside [-T_max, T_max].
SpacetimeTransform spacetime_transform(const SpaceTimeField& field, const Window& w);

XsbResult xsb_norm(const SpaceTimeField& field, double s, double b, const Window& w);

/// Controls for the closed-form evaluation of exponential-sum fields.
struct ModalOptions {
  /// Bumps are truncated at |tau' - omega| <= reach / T.
  double reach = 96.0;
  /// Highest polynomial power allowed in the field.
  int max_power = 4;
};

/// Same norm for fields known in closed form. F~ is a sum of shifted window
/// moments, integrated on the lattice tau' = j / q, q = max(4, ceil(4T)), which
/// is exact up to exponentially small aliasing for windows of support 2T.
/// Frequencies must be multiples of 1/q (integers always are).
XsbResult xsb_norm(const ExponentialSumField& field, double s, double b, const Window& w,
                   const ModalOptions& options = {});

struct RestrictionResult {
  double value = 0.0;
  std::string window;
  std::vector<std::pair<std::string, XsbResult>> members;
  bool unreliable = false;
};

/// Minimum of xsb_norm over psi(t/T) with psi from window_family(); an upper
/// bound of the restriction norm. Requires T <= T_max / 2.
RestrictionResult restriction_norm(const SpaceTimeField& field, double T, double s, double b);
RestrictionResult restriction_norm(const ExponentialSumField& field, double T, double s, double b,
                                   const ModalOptions& options = {});

}  // namespace nlslab
