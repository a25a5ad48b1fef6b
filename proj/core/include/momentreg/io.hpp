#pragma once

// File formats shared by the CLI and tests.
//
// Moment file (JSON):
//   { "kind": "power", "support": "half_line" | {"interval": [a, b]},
//     "values": [g0, g1, ...] }
//   { "kind": "trig", "support": "circle",
//     "values": [t0, [re, im], ...] }            (reals or [re, im] pairs)
//   { "kind": "multi", "dimension": d, "order": n,
//     "support": "orthant" | {"box": [[a1, b1], ...]},
//     "values": [[[a_1, ..., a_d], g], ...], "total_mass": m }
// Missing multi indices are zero; total_mass defaults to gamma_0.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "momentreg/conditioning.hpp"
#include "momentreg/raybeam.hpp"
#include "momentreg/series.hpp"

namespace momentreg {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using MomentData = std::variant<PowerMoments, TrigMoments, MultiMoments>;

// Throws ParseError on empty input, malformed JSON or schema violations.
MomentData parse_moments(std::string_view json_text);
std::string moments_to_json(const MomentData& data);

// Accepts [[y1, ..., yd], ...] or {"directions": [[...], ...]}.
std::vector<RayDirection> parse_directions(std::string_view json_text);

// {"dimension": d, "order": n, "coefficients": [[[index], re, im], ...]}
std::string series_to_json(const FormalSeries& s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view bytes);

}  // namespace momentreg
