#pragma once

// End-to-end driver: condition -> maxent -> invert (or the ray sweep),
// writing density/phase CSVs and a JSON report into an output directory.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momentreg/conditioning.hpp"
#include "momentreg/maxent.hpp"

namespace momentreg {

enum class PipelineKind { line, circle, polydisk, raybeam };

struct PipelineConfig {
  PipelineKind pipeline = PipelineKind::line;
  std::size_t grid = 1024;
  double tol = 1e-8;
  std::size_t max_sweeps = 100000;  // coordinate updates
  std::size_t pad = 4;
  double delta = 1.0;
  bool skip_condition = false;
  std::optional<std::string> directions;  // raybeam direction file
  std::string output_dir = ".";
  std::optional<Interval> phase_window;    // overrides the derived window
  bool clamp_phase = false;                // clamp maxent phase into range
  BasisKind basis = BasisKind::legendre;   // line pipeline rows
  std::size_t quad_nodes = 0;              // 0: automatic
  std::size_t threads = 0;                 // raybeam workers, 0: automatic

  // Throws std::invalid_argument for a non-power-of-two grid, tol <= 0,
  // delta <= 0, pad < 1, or an empty window.
  void validate() const;
};

// Exit codes of run_pipeline and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitRange = 4;

std::string to_string(PipelineKind kind);
PipelineKind pipeline_kind_from_string(std::string_view name);
std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);

// Canonical JSON (sorted keys) and its inverse. apply_config_json overlays
// the fields present in `json_text` on `base`; a report file is accepted too
// (its provenance.config block is used).
std::string config_to_json(const PipelineConfig& config);
PipelineConfig apply_config_json(PipelineConfig base, std::string_view json_text);

struct PipelineOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> written;
};

PipelineOutcome run_pipeline(const PipelineConfig& config,
                             const std::filesystem::path& moments_file);

// Beta-jump check of the inversion sign: phi = 1/2 chi_[0,1] must invert to
// (1/pi) ((1-x)/x)^(1/2) on (0, 1).
struct SignOracle {
  int sign = +1;
  double max_rel_error = 0.0;  // over [0.05, 0.95]
  bool passed = false;
};
SignOracle run_sign_oracle(std::size_t grid = 1024);

}  // namespace momentreg
