#include "momentreg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "momentreg/io.hpp"
#include "momentreg/raybeam.hpp"
#include "momentreg/transform.hpp"

namespace momentreg {

using nlohmann::json;
using std::numbers::pi;

namespace {

// Carries an exit code out of the pipeline stages.
struct PipelineExit {
  int code;
  std::string message;
};

std::string grid_csv(const GridFunction& f) {
  std::ostringstream out;
  write_grid_csv(out, f);
  return out.str();
}

json dual_json(const DualSolution& d) {
  return {{"converged", d.converged},
          {"iterations", d.iterations},
          {"residual_norm", d.residual_norm},
          {"alpha", d.alpha},
          {"clamped_exponent", d.clamped}};
}

json interval_json(const Interval& iv) { return json::array({iv.a, iv.b}); }

FimeOptions fime_options(const PipelineConfig& c) {
  FimeOptions o;
  o.epsilon = c.tol;
  o.max_updates = c.max_sweeps;
  o.delta = c.delta;
  return o;
}

class Outputs {
 public:
  Outputs(const PipelineConfig& config, PipelineOutcome& outcome)
      : dir_(config.output_dir), outcome_(outcome) {
    std::filesystem::create_directories(dir_);
  }
  void write(const std::string& name, std::string_view contents) {
    const auto path = dir_ / name;
    write_file(path, contents);
    outcome_.written.push_back(path);
  }

 private:
  std::filesystem::path dir_;
  PipelineOutcome& outcome_;
};

// Largest phase value allowed before the range check fails (on the scale
// where the phase bound is 1).
constexpr double kPhaseTol = 1e-6;

// Samples a maxent phase on `grid`, clamping into [0, hi] when asked.
// Returns the unclamped maximum.
double sample_phase(const ExponentialDensity& density, GridFunction& grid, double hi,
                    bool clamp) {
  double vmax = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double v = density(grid.node(j));
    vmax = std::max(vmax, v);
    grid.values[j] = clamp ? std::clamp(v, 0.0, hi) : v;
  }
  return vmax;
}

Interval skip_window(const PipelineConfig& config, const PowerMoments& pm) {
  if (config.phase_window) return *config.phase_window;
  if (const auto* iv = std::get_if<Interval>(&pm.support))
    return iv->b > iv->a ? *iv : Interval{iv->a, iv->a + 1.0};
  const auto& g = pm.values;
  if (g.size() >= 3) {
    const double T = g[1] / g[0] + 6.0 * std::sqrt(std::max(g[2] / g[0], 0.0));
    if (T > 0.0) return {0.0, T};
  }
  return {0.0, 1.0};
}

Interval phase_window(const PipelineConfig& config, const PowerMoments& input,
                      const std::vector<double>& c) {
  if (config.phase_window) return *config.phase_window;
  if (const auto* iv = std::get_if<Interval>(&input.support))
    return {iv->a, iv->b + input.values[0]};
  if (c.size() < 3)
    throw PipelineExit{kExitError,
                       "half_line support needs at least 3 moments for the cutoff; "
                       "give an interval support or --phase-window"};
  return {0.0, c[1] / c[0] + 6.0 * std::sqrt(std::max(c[2] / c[0], 0.0))};
}

void run_line(const PipelineConfig& config, const PowerMoments& pm, json& report,
              Outputs& out) {
  const std::size_t N = pm.order();
  std::vector<double> target = pm.values;
  Interval window;
  if (config.skip_condition) {
    window = skip_window(config, pm);
  } else {
    target = condition_line(pm).values;
    report["conditioned_moments"] = target;
    window = phase_window(config, pm, target);
  }
  report["window"] = interval_json(window);
  if (!(window.b > window.a)) throw PipelineExit{kExitError, "empty maxent window"};

  if (config.basis == BasisKind::trigonometric)
    throw PipelineExit{kExitError, "line pipeline needs a monomial or legendre basis"};
  const Basis basis{config.basis, window.a, window.b, N};
  const std::size_t K = config.quad_nodes ? config.quad_nodes : std::max<std::size_t>(201, 16 * (N + 1));
  const Quadrature quad =
      build_quadrature(window.a, window.b, K, QuadratureRule::gauss_legendre);
  const auto mu = basis_moments_from_power(basis, target);
  MaxentResult fit = solve_maxent(basis, quad, mu, fime_options(config));
  report["maxent"] = dual_json(fit.dual);
  report["converged"] = fit.dual.converged;
  if (!fit.dual.converged)
    throw PipelineExit{kExitNotConverged, "maximum-entropy solver did not converge"};

  GridFunction grid = GridFunction::interval(window.a, window.b, config.grid);
  if (config.skip_condition) {
    sample_phase(fit.density, grid, std::numeric_limits<double>::infinity(), false);
    report["inversion"] = "skipped";
    report["mass"] = grid.integral();
    out.write("density.csv", grid_csv(grid));
    return;
  }

  const double vmax = sample_phase(fit.density, grid, 1.0, config.clamp_phase);
  report["phase_max"] = vmax;
  out.write("phase.csv", grid_csv(grid));
  if (vmax > 1.0 + kPhaseTol && !config.clamp_phase)
    throw PipelineExit{kExitRange, "maxent phase exceeds 1 (max " + std::to_string(vmax) +
                                       "); rerun with --clamp-phase to clamp it"};
  const Inversion inv = invert_line(grid, {config.pad, HilbertScheme::cell});
  report["inversion"] = {{"min_raw", inv.min_raw},
                         {"clipped", inv.clipped},
                         {"negativity_flag", inv.negativity_flag}};
  report["mass"] = inv.density.integral();
  out.write("density.csv", grid_csv(inv.density));
}

void run_circle(const PipelineConfig& config, const TrigMoments& tm, json& report,
                Outputs& out) {
  const std::size_t M = tm.values.size() - 1;
  const double tau0 = tm.values[0].real();
  if (!(tau0 > 0.0) || tm.values[0].imag() != 0.0)
    throw PipelineExit{kExitError, "tau(0) must be real and positive"};

  std::vector<Complex> target = tm.values;
  if (!config.skip_condition) {
    target = condition_circle(tm).values;
    json cj = json::array();
    for (const Complex& v : target) cj.push_back({v.real(), v.imag()});
    report["conditioned_moments"] = cj;
  }
  // Trig rows 1, cos k, sin k against (1/2pi) int e^{-ik theta} f.
  std::vector<double> mu(2 * M + 1);
  mu[0] = 2.0 * pi * target[0].real();
  for (std::size_t k = 1; k <= M; ++k) {
    mu[2 * k - 1] = 2.0 * pi * target[k].real();
    mu[2 * k] = -2.0 * pi * target[k].imag();
  }

  const Basis basis{BasisKind::trigonometric, -pi, pi, M};
  const std::size_t K = config.quad_nodes ? config.quad_nodes : config.grid;
  const Quadrature quad = build_quadrature(-pi, pi, K, QuadratureRule::periodic_trapezoid);
  MaxentResult fit = solve_maxent(basis, quad, mu, fime_options(config));
  report["maxent"] = dual_json(fit.dual);
  report["converged"] = fit.dual.converged;
  if (!fit.dual.converged)
    throw PipelineExit{kExitNotConverged, "maximum-entropy solver did not converge"};

  GridFunction grid = GridFunction::circle(config.grid);
  if (config.skip_condition) {
    sample_phase(fit.density, grid, std::numeric_limits<double>::infinity(), false);
    report["inversion"] = "skipped";
    report["mass"] = grid.integral();
    out.write("density.csv", grid_csv(grid));
    return;
  }

  const double vmax = sample_phase(fit.density, grid, pi, config.clamp_phase);
  report["phase_max"] = vmax;
  out.write("phase.csv", grid_csv(grid));
  if (vmax > pi * (1.0 + kPhaseTol) && !config.clamp_phase)
    throw PipelineExit{kExitRange, "maxent phase exceeds pi (max " + std::to_string(vmax) +
                                       "); rerun with --clamp-phase to clamp it"};
  const Inversion inv = invert_circle(grid, tau0);
  report["inversion"] = {{"min_raw", inv.min_raw},
                         {"negative_points", inv.clipped},
                         {"negativity_flag", inv.negativity_flag}};
  report["mass"] = inv.density.integral();
  report["expected_mass"] = 2.0 * pi * tau0;
  out.write("density.csv", grid_csv(inv.density));
}

void run_polydisk(const MultiMoments& mm, json& report) {
  const FormalSeries phase = condition_polydisk(mm);
  report["phase_series"] = json::parse(series_to_json(phase));
  report["converged"] = true;
}

void run_raybeam(const PipelineConfig& config, const MultiMoments& mm, json& report,
                 Outputs& out) {
  if (!config.directions)
    throw PipelineExit{kExitParse, "raybeam pipeline needs --directions FILE"};
  std::string text;
  try {
    text = read_file(*config.directions);
  } catch (const std::exception& e) {
    throw PipelineExit{kExitParse, e.what()};
  }
  const auto directions = parse_directions(text);
  report["provenance"]["directions_sha256"] = sha256_hex(text);

  RaySweepOptions opt;
  opt.grid = config.grid;
  opt.quad_nodes = config.quad_nodes ? config.quad_nodes
                                     : std::max<std::size_t>(401, 16 * (mm.order + 1));
  opt.fime = fime_options(config);
  opt.clamp_phase = true;  // range is checked below on the raw maximum
  opt.radon.hilbert.pad_factor = config.pad;
  opt.threads = config.threads;
  const auto slices = ray_sweep(mm, directions, opt);

  json rays = json::array();
  bool all_converged = true;
  double worst_phase = 0.0;
  for (std::size_t r = 0; r < slices.size(); ++r) {
    const RaySlice& s = slices[r];
    char stem[32];
    std::snprintf(stem, sizeof stem, "ray_%03zu", r);
    const std::string phase_name = std::string(stem) + "_phase.csv";
    const std::string radon_name = std::string(stem) + "_radon.csv";
    out.write(phase_name, grid_csv(s.phase));
    out.write(radon_name, grid_csv(s.radon));
    const auto y = s.direction.components();
    rays.push_back({{"index", r},
                    {"direction", std::vector<double>(y.begin(), y.end())},
                    {"pushforward_moments", s.pushforward},
                    {"phase_moments", s.phase_moments},
                    {"window", interval_json(s.window)},
                    {"cutoff", s.rigorous_cutoff ? "support_box" : "heuristic"},
                    {"maxent", dual_json(s.dual)},
                    {"phase_max", s.phase_max},
                    {"phase_csv", phase_name},
                    {"radon_csv", radon_name}});
    all_converged = all_converged && s.dual.converged;
    worst_phase = std::max(worst_phase, s.phase_max);
  }
  out.write("rays.json", json{{"schema", 1}, {"rays", rays}}.dump(2) + "\n");
  report["rays"] = slices.size();
  report["converged"] = all_converged;
  report["phase_max"] = worst_phase;
  if (!all_converged)
    throw PipelineExit{kExitNotConverged, "maxent did not converge on every ray"};
  if (worst_phase > 1.0 + kPhaseTol && !config.clamp_phase)
    throw PipelineExit{kExitRange, "a ray phase exceeds 1 (max " + std::to_string(worst_phase) +
                                       "); rerun with --clamp-phase to clamp it"};
}

}  // namespace

void PipelineConfig::validate() const {
  if (!is_power_of_two(grid)) throw std::invalid_argument("grid must be a power of two");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (pad < 1) throw std::invalid_argument("pad must be >= 1");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (phase_window && !(phase_window->b > phase_window->a))
    throw std::invalid_argument("phase_window needs a < b");
  if (quad_nodes == 1) throw std::invalid_argument("quad_nodes must be 0 (auto) or >= 2");
}

std::string to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::line: return "line";
    case PipelineKind::circle: return "circle";
    case PipelineKind::polydisk: return "polydisk";
    case PipelineKind::raybeam: return "raybeam";
  }
  return "line";
}

PipelineKind pipeline_kind_from_string(std::string_view name) {
  if (name == "line") return PipelineKind::line;
  if (name == "circle") return PipelineKind::circle;
  if (name == "polydisk") return PipelineKind::polydisk;
  if (name == "raybeam") return PipelineKind::raybeam;
  throw std::invalid_argument("unknown pipeline '" + std::string(name) + "'");
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::monomial: return "monomial";
    case BasisKind::legendre: return "legendre";
    case BasisKind::trigonometric: return "trigonometric";
  }
  return "legendre";
}

BasisKind basis_kind_from_string(std::string_view name) {
  if (name == "monomial") return BasisKind::monomial;
  if (name == "legendre") return BasisKind::legendre;
  if (name == "trigonometric") return BasisKind::trigonometric;
  throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

namespace {

json config_json(const PipelineConfig& c) {
  json j{{"pipeline", to_string(c.pipeline)},
         {"grid", c.grid},
         {"tol", c.tol},
         {"max_sweeps", c.max_sweeps},
         {"pad", c.pad},
         {"delta", c.delta},
         {"skip_condition", c.skip_condition},
         {"directions", c.directions ? json(*c.directions) : json(nullptr)},
         {"output_dir", c.output_dir},
         {"phase_window", c.phase_window ? interval_json(*c.phase_window) : json(nullptr)},
         {"clamp_phase", c.clamp_phase},
         {"basis", to_string(c.basis)},
         {"quad_nodes", c.quad_nodes},
         {"threads", c.threads}};
  return j;
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) {
  return config_json(config).dump();
}

PipelineConfig apply_config_json(PipelineConfig c, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: malformed JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("provenance") && doc["provenance"].contains("config"))
    doc = doc["provenance"]["config"];
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "pipeline") c.pipeline = pipeline_kind_from_string(v.get<std::string>());
      else if (key == "grid") c.grid = v.get<std::size_t>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "max_sweeps") c.max_sweeps = v.get<std::size_t>();
      else if (key == "pad") c.pad = v.get<std::size_t>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "skip_condition") c.skip_condition = v.get<bool>();
      else if (key == "directions")
        c.directions = v.is_null() ? std::nullopt : std::optional(v.get<std::string>());
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "phase_window") {
        if (v.is_null()) c.phase_window.reset();
        else c.phase_window = Interval{v.at(0).get<double>(), v.at(1).get<double>()};
      } else if (key == "clamp_phase") c.clamp_phase = v.get<bool>();
      else if (key == "basis") c.basis = basis_kind_from_string(v.get<std::string>());
      else if (key == "quad_nodes") c.quad_nodes = v.get<std::size_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else throw ParseError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

SignOracle run_sign_oracle(std::size_t grid) {
  // Jumps at 0 and 1 fall on cell boundaries of [-1, 3].
  GridFunction phi = GridFunction::interval(-1.0, 3.0, grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const double x = phi.node(j);
    phi.values[j] = (x > 0.0 && x < 1.0) ? 0.5 : 0.0;
  }
  const GridFunction H = hilbert_line(phi);
  double err[2] = {0.0, 0.0};
  for (std::size_t j = 0; j < grid; ++j) {
    const double x = phi.node(j);
    if (x < 0.05 || x > 0.95) continue;
    const double exact = std::sqrt((1.0 - x) / x) / pi;
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 0 ? 1.0 : -1.0;
      const double rho = std::exp(sign * pi * H.values[j]) * std::sin(pi * 0.5) / pi;
      err[s] = std::max(err[s], std::abs(rho - exact) / exact);
    }
  }
  SignOracle o;
  o.sign = err[0] <= err[1] ? +1 : -1;
  o.max_rel_error = std::min(err[0], err[1]);
  o.passed = o.sign == +1 && o.max_rel_error < 1e-6;
  return o;
}

PipelineOutcome run_pipeline(const PipelineConfig& config,
                             const std::filesystem::path& moments_file) {
  PipelineOutcome outcome;
  json report{{"schema", 1}, {"pipeline", to_string(config.pipeline)}};
  std::optional<Outputs> out;
  try {
    config.validate();
    std::string text;
    try {
      text = read_file(moments_file);
    } catch (const std::exception& e) {
      throw PipelineExit{kExitParse, e.what()};
    }
    const MomentData data = parse_moments(text);

    const SignOracle oracle = run_sign_oracle();
    const std::string cfg = config_to_json(config);
    report["provenance"] = {{"input_sha256", sha256_hex(text)},
                            {"config", config_json(config)},
                            {"config_sha256", sha256_hex(cfg)},
                            {"sign_oracle",
                             {{"sign", oracle.sign},
                              {"max_rel_error", oracle.max_rel_error},
                              {"passed", oracle.passed}}}};
    report["input"] = json::parse(moments_to_json(data));
    out.emplace(config, outcome);

    switch (config.pipeline) {
      case PipelineKind::line:
        if (!std::holds_alternative<PowerMoments>(data))
          throw PipelineExit{kExitParse, "line pipeline needs \"kind\": \"power\" moments"};
        run_line(config, std::get<PowerMoments>(data), report, *out);
        break;
      case PipelineKind::circle:
        if (!std::holds_alternative<TrigMoments>(data))
          throw PipelineExit{kExitParse, "circle pipeline needs \"kind\": \"trig\" moments"};
        run_circle(config, std::get<TrigMoments>(data), report, *out);
        break;
      case PipelineKind::polydisk:
        if (!std::holds_alternative<MultiMoments>(data))
          throw PipelineExit{kExitParse, "polydisk pipeline needs \"kind\": \"multi\" moments"};
        run_polydisk(std::get<MultiMoments>(data), report);
        break;
      case PipelineKind::raybeam:
        if (!std::holds_alternative<MultiMoments>(data))
          throw PipelineExit{kExitParse, "raybeam pipeline needs \"kind\": \"multi\" moments"};
        run_raybeam(config, std::get<MultiMoments>(data), report, *out);
        break;
    }
    outcome.exit_code = kExitOk;
    outcome.message = "ok";
  } catch (const PipelineExit& e) {
    outcome.exit_code = e.code;
    outcome.message = e.message;
  } catch (const ParseError& e) {
    outcome.exit_code = kExitParse;
    outcome.message = e.what();
  } catch (const std::domain_error& e) {
    outcome.exit_code = kExitRange;
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitError;
    outcome.message = e.what();
  }

  report["exit_code"] = outcome.exit_code;
  report["message"] = outcome.message;
  if (out) {
    try {
      out->write("report.json", report.dump(2) + "\n");
    } catch (const std::exception& e) {
      outcome.exit_code = kExitError;
      outcome.message = e.what();
    }
  }
  return outcome;
}

}  // namespace momentreg
