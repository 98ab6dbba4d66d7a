#pragma once

// JSON, CSV and binary encodings of states, fields and reports.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/estimate_lab.hpp"
#include "nlslab/picard.hpp"
#include "nlslab/xsb.hpp"

namespace nlslab {

using json = nlohmann::json;

/// {"period": L, "N": N, "coeffs": [[n, re, im], ...]} sorted by n. Doubles are
/// written in shortest round-trip form, so decoding is bit-exact.
json to_json(const FourierState& f);
/// Throws std::invalid_argument on missing keys, duplicate or out-of-range modes.
FourierState fourier_state_from_json(const json& j);

/// Header {"format", "N", "M", "T_max", "period", "layout"} and, unless a
/// sidecar is used, "slices": [[[n, re, im], ...], ...].
json to_json(const SpaceTimeField& field, bool include_slices = true);
SpaceTimeField space_time_field_from_json(const json& j);

/// Little-endian float64 triplets (n, re, im), slice-major, modes ascending.
void write_field_sidecar(const SpaceTimeField& field, const std::filesystem::path& path);
SpaceTimeField read_field_sidecar(const json& header, const std::filesystem::path& path);

json to_json(const ContractionReport& report, bool include_solution = false);
json to_json(const XsbResult& result);
json to_json(const SupSumReport& report);
json to_json(const RegionSpec& region);
json to_json(const ProofParameters& parameters);

/// "s,b,N,M,tau_max,dtau,value,tail_flag"
std::string xsb_csv_header();
std::string xsb_csv_row(double s, double b, int N, std::size_t M, const XsbResult& result);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace nlslab
