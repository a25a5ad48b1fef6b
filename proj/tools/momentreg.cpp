#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "momentreg/conditioning.hpp"
#include "momentreg/io.hpp"
#include "momentreg/pipeline.hpp"
#include "momentreg/transform.hpp"

using namespace momentreg;

namespace {

int run_command(const PipelineConfig& flags, const std::string& input,
                const std::optional<std::string>& config_file) {
  PipelineConfig config = flags;
  if (config_file) {
    try {
      config = apply_config_json(config, read_file(*config_file));
    } catch (const std::exception& e) {
      std::cerr << "momentreg: " << e.what() << "\n";
      return kExitParse;
    }
  }
  const PipelineOutcome outcome = run_pipeline(config, input);
  for (const auto& p : outcome.written) std::cout << p.string() << "\n";
  if (outcome.exit_code != kExitOk) std::cerr << "momentreg: " << outcome.message << "\n";
  return outcome.exit_code;
}

// Prints the conditioned (phase) moments of a moment file as JSON.
int condition_command(const std::string& input) {
  const MomentData data = parse_moments(read_file(input));
  if (const auto* pm = std::get_if<PowerMoments>(&data)) {
    std::cout << moments_to_json(condition_line(*pm)) << "\n";
  } else if (const auto* tm = std::get_if<TrigMoments>(&data)) {
    std::cout << moments_to_json(condition_circle(*tm)) << "\n";
  } else {
    std::cout << series_to_json(condition_polydisk(std::get<MultiMoments>(data))) << "\n";
  }
  return kExitOk;
}

int hilbert_command(const std::string& input, std::size_t pad, const std::string& scheme) {
  std::ifstream in(input);
  if (!in) throw ParseError("cannot open " + input);
  const GridFunction f = read_grid_csv(in);
  const GridFunction h =
      f.domain == GridDomain::circle
          ? hilbert_circle(f)
          : hilbert_line(f, {pad, scheme == "spectral" ? HilbertScheme::spectral
                                                       : HilbertScheme::cell});
  write_grid_csv(std::cout, h);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized reconstruction of measures from truncated moments"};
  app.require_subcommand(1);

  PipelineConfig flags;
  std::string input;
  std::optional<std::string> config_file;
  std::string pipeline = "line";
  std::string basis = "legendre";
  std::vector<double> window;

  auto* run = app.add_subcommand("run", "condition -> maxent -> invert, writing CSV and report.json");
  run->add_option("moments", input, "moment file (JSON)")->required();
  run->add_option("--pipeline", pipeline, "line | circle | polydisk | raybeam")
      ->check(CLI::IsMember({"line", "circle", "polydisk", "raybeam"}));
  run->add_option("--grid", flags.grid, "grid size G (power of two)");
  run->add_option("--tol", flags.tol, "maxent residual tolerance");
  run->add_option("--max-sweeps", flags.max_sweeps, "maxent coordinate-update cap");
  run->add_option("--pad", flags.pad, "Hilbert zero-padding factor");
  run->add_option("--delta", flags.delta, "preconditioning margin");
  run->add_flag("--skip-condition", flags.skip_condition,
                "feed the raw moments to maxent (negative control)");
  run->add_option("--directions", flags.directions, "raybeam direction file (JSON)");
  run->add_option("-o,--output", flags.output_dir, "output directory");
  run->add_option("--config", config_file, "JSON config or report.json; overrides flags");
  run->add_option("--phase-window", window, "maxent window for the phase: A B")->expected(2);
  run->add_flag("--clamp-phase", flags.clamp_phase, "clamp the maxent phase into range");
  run->add_option("--basis", basis, "line pipeline rows: legendre | monomial")
      ->check(CLI::IsMember({"legendre", "monomial"}));
  run->add_option("--quad-nodes", flags.quad_nodes, "maxent quadrature nodes (0: auto)");
  run->add_option("--threads", flags.threads, "raybeam workers (0: auto)");

  std::string cond_input;
  auto* cond = app.add_subcommand("condition", "print the phase moments of a moment file");
  cond->add_option("moments", cond_input, "moment file (JSON)")->required();

  std::string grid_input;
  std::size_t pad = 4;
  std::string scheme = "cell";
  auto* hil = app.add_subcommand("hilbert", "Hilbert transform of a grid CSV to stdout");
  hil->add_option("grid", grid_input, "grid CSV")->required();
  hil->add_option("--pad", pad, "zero-padding factor (line grids)");
  hil->add_option("--scheme", scheme, "cell | spectral")
      ->check(CLI::IsMember({"cell", "spectral"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*run) {
      flags.pipeline = pipeline_kind_from_string(pipeline);
      flags.basis = basis_kind_from_string(basis);
      if (!window.empty()) flags.phase_window = Interval{window[0], window[1]};
      return run_command(flags, input, config_file);
    }
    if (*cond) return condition_command(cond_input);
    return hilbert_command(grid_input, pad, scheme);
  } catch (const ParseError& e) {
    std::cerr << "momentreg: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "momentreg: " << e.what() << "\n";
    return kExitRange;
  } catch (const std::exception& e) {
    std::cerr << "momentreg: " << e.what() << "\n";
    return kExitError;
  }
}
