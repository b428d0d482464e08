#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "fracdrift/evolution_solver.hpp"
#include "fracdrift/field_io.hpp"
#include "fracdrift/function_spaces.hpp"
#include "fracdrift/operators.hpp"
#include "fracdrift/regularity_lab.hpp"
#include "fracdrift/spectral.hpp"
#include "fracdrift/stationary_solver.hpp"
#include "fracdrift/toy_model.hpp"
#include "run_config.hpp"

#ifndef FRACDRIFT_VERSION
#define FRACDRIFT_VERSION "0.0.0"
#endif
#ifndef FRACDRIFT_REVISION
#define FRACDRIFT_REVISION "unknown"
#endif

namespace fracdrift::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::string output;
  std::string check_stationary;
  bool synthetic_only = false;
};

// I/O -------------------------------------------------------------------------

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

fs::path prepare_output(const RunConfig& cfg, const Options& opt) {
  fs::path dir = opt.output.empty() ? fs::path(cfg.output_dir) : fs::path(opt.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    os_ << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cells, first = false), ...);
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// JSON --------------------------------------------------------------------------

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json config_echo(const RunConfig& c) {
  json j;
  j["n"] = c.n;
  j["N"] = c.N;
  j["L"] = c.L;
  j["alpha"] = c.alpha;
  j["beta"] = optional_number(c.beta);
  j["p"] = c.p;
  j["gamma"] = optional_number(c.gamma);
  j["amplitude"] = c.amplitude;
  j["seed"] = c.seed;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["tol"] = c.tol;
  j["max_iters"] = c.max_iters;
  j["drift"] = c.drift;
  j["dealiased"] = c.dealiased;
  j["enforce_gate"] = c.enforce_gate;
  return j;
}

json run_metadata(const std::string& command) {
  json j;
  j["program"] = "fracdrift";
  j["command"] = command;
  j["version"] = FRACDRIFT_VERSION;
  j["revision"] = FRACDRIFT_REVISION;
  j["timestamp"] = utc_timestamp();
  return j;
}

json to_json(const GateRecord& g) {
  json j;
  j["R"] = g.R;
  j["u0_lorentz"] = g.u0_lorentz;
  j["u0_lebesgue"] = g.u0_lebesgue;
  j["C_K"] = g.C_K;
  j["C_A"] = g.C_A;
  j["C_young"] = g.C_young;
  j["C1_lorentz"] = g.C1_lorentz;
  j["C1_of_p"] = g.C1_of_p;
  j["M_alpha"] = g.M_alpha;
  j["C_alpha_n"] = g.C_alpha_n;
  j["eta1"] = g.eta1;
  j["eta2"] = g.eta2;
  j["pass"] = g.pass;
  j["warnings"] = g.warnings;
  return j;
}

json to_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["ball_radius"] = optional_number(r.ball_radius);
  j["gate"] = r.gate ? to_json(*r.gate) : json(nullptr);
  j["lorentz_norms"] = r.lorentz_norms;
  j["lp_norms"] = r.lp_norms;
  j["updates"] = r.updates;
  j["contraction_ratios"] = r.contraction_ratios;
  j["residuals"] = r.residuals;
  j["warnings"] = r.warnings;
  return j;
}

json to_json(const LadderRecord& l) {
  json j;
  j["s"] = l.s;
  j["r"] = l.r;
  j["alpha"] = l.alpha;
  j["k"] = l.decomposition.k;
  j["eps"] = l.decomposition.eps;
  j["step"] = l.decomposition.step;
  json rungs = json::array();
  for (const auto& g : l.rungs)
    rungs.push_back({{"j", g.j}, {"order", g.order}, {"identity_residual", g.identity_residual},
                     {"sobolev_norm", g.sobolev_norm}});
  j["rungs"] = rungs;
  return j;
}

json to_json(const RegularityReport& r) {
  json j;
  j["s_star_f"] = r.s_star_f;
  j["s_star_u"] = r.s_star_u;
  j["gain"] = r.gain;
  j["expected_gain"] = r.expected_gain;
  j["optimality_margin"] = r.optimality_margin;
  j["ladder"] = r.ladder ? to_json(*r.ladder) : json(nullptr);
  json h = json::array();
  for (const auto& s : r.holder) h.push_back({{"sigma", s.sigma}, {"quotient", s.quotient}});
  j["holder"] = h;
  j["shells_f"] = r.shells_f.shells;
  j["shells_u"] = r.shells_u.shells;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["warnings"] = r.warnings;
  return j;
}

std::string iterations_csv(const SolveReport& r) {
  Csv csv({"iter", "lorentz_norm", "lp_norm", "update", "ratio", "residual"});
  for (std::size_t m = 0; m < r.lp_norms.size(); ++m) {
    const double lor = m < r.lorentz_norms.size() ? r.lorentz_norms[m] : NAN;
    const double upd = m >= 1 && m - 1 < r.updates.size() ? r.updates[m - 1] : NAN;
    const double ratio = m >= 2 && m - 2 < r.contraction_ratios.size() ? r.contraction_ratios[m - 2] : NAN;
    csv.row(m, lor, r.lp_norms[m], upd, ratio, r.residuals[m]);
  }
  return csv.str();
}

std::string shells_csv(const ShellSpectrum& f, const ShellSpectrum* u) {
  Csv csv(u ? std::vector<std::string>{"j", "energy_f", "energy_u"} : std::vector<std::string>{"j", "energy_f"});
  for (std::size_t j = 0; j < f.shells.size(); ++j) {
    if (u)
      csv.row(j, f.shells[j], u->shells[j]);
    else
      csv.row(j, f.shells[j]);
  }
  return csv.str();
}

// Fields ------------------------------------------------------------------------

RealField first_mode(const Grid& grid) {
  const double k0 = grid.base_wavenumber();
  return RealField::from_function(grid, [k0](std::span<const double> x) { return std::cos(k0 * x[0]); });
}

/// Power-law source when gamma is set, otherwise amplitude (-Delta)^{alpha/2} cos(x1).
RealField stationary_source(const RunConfig& c, const Grid& grid) {
  if (c.amplitude == 0.0) return RealField(grid);
  if (c.gamma) return synthesize_source(*c.gamma, c.amplitude, c.seed, grid);
  return c.amplitude * frac_laplacian(first_mode(grid), c.alpha);
}

/// Power-law field when gamma is set, otherwise amplitude cos(x1).
RealField initial_state(const RunConfig& c, const Grid& grid) {
  if (c.amplitude == 0.0) return RealField(grid);
  if (c.gamma) return synthesize_source(*c.gamma, c.amplitude, c.seed, grid);
  return c.amplitude * first_mode(grid);
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.alpha = c.alpha;
  s.p = c.p;
  s.max_iters = c.max_iters;
  s.tol = c.tol;
  s.dealiased = c.dealiased;
  s.enforce_gate = c.enforce_gate;
  return s;
}

DriftOperator make_drift(const RunConfig& c, const Grid& grid) {
  try {
    return DriftOperator::from_config(grid, c.drift);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("config key 'drift': ") + e.what());
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return kExitNonConvergence;
    case ErrorCode::Divergence: return kExitDivergence;
    case ErrorCode::BlowUp: return kExitBlowUp;
    default: return kExitConfig;
  }
}

std::string status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::Divergence: return "divergence";
    default: return to_string(code);
  }
}

// Commands ----------------------------------------------------------------------

int cmd_solve_stationary(const RunConfig& c, const Options& opt, std::ostream& out, std::ostream& err) {
  const Grid grid(c.n, c.N, c.L);
  const DriftOperator A = make_drift(c, grid);
  const SolverConfig sc = solver_config(c);
  sc.validate();
  const fs::path dir = prepare_output(c, opt);
  const RealField f = stationary_source(c, grid);

  json doc;
  doc["run"] = run_metadata("solve-stationary");
  doc["config"] = config_echo(c);
  std::optional<SolveReport> rep;
  int code = kExitOk;
  try {
    rep = picard_solve(f, A, sc);
    doc["status"] = "converged";
  } catch (const GateError& e) {
    doc["status"] = "gate-rejected";
    doc["gate"] = to_json(e.gate());
    write_json(dir / "report.json", doc);
    out << to_json(e.gate()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolveError& e) {
    rep = e.report();
    code = exit_code_for(e.code());
    doc["status"] = status_for(e.code());
    err << "error: " << e.what() << "\n";
  }

  doc["solve"] = to_json(*rep);
  if (c.gamma && c.amplitude > 0.0 && code == kExitOk) {
    try {
      const RegularityReport reg = compare_regularity(f, rep->u, c.alpha);
      doc["regularity"] = to_json(reg);
      write_text(dir / "shells.csv", shells_csv(reg.shells_f, &reg.shells_u));
    } catch (const Error& e) {
      doc["regularity"] = nullptr;
      doc["solve"]["warnings"].push_back(std::string("regularity fit skipped: ") + e.what());
    }
  }
  write_frqs(dir / "u.frqs", rep->u);
  write_text(dir / "iterations.csv", iterations_csv(*rep));
  write_json(dir / "report.json", doc);
  out << "status: " << doc["status"].get<std::string>() << "\n"
      << "iterations: " << rep->iterations << "\n"
      << "residual: " << rep->residual << "\n";
  if (doc.contains("regularity") && !doc["regularity"].is_null())
    out << "gain: " << doc["regularity"]["gain"].get<double>() << "\n";
  for (const auto& w : rep->warnings) err << "warning: " << w << "\n";
  return code;
}

int cmd_evolve(const RunConfig& c, const Options& opt, std::ostream& out, std::ostream& err) {
  const Grid grid(c.n, c.N, c.L);
  const DriftOperator A = make_drift(c, grid);
  const fs::path dir = prepare_output(c, opt);

  if (!opt.check_stationary.empty()) {
    const RealField u = read_frqs(opt.check_stationary);
    if (!(u.grid() == grid)) throw Error(ErrorCode::Config, "stationary dump grid differs from the config grid");
    const RealField f = stationary_source(c, grid);
    const double drift = stationarity_check(u, f, A, c.alpha, c.T, c.dt, c.dealiased);
    const bool ok = drift <= kStationarityThreshold;
    json doc;
    doc["run"] = run_metadata("evolve --check-stationary");
    doc["config"] = config_echo(c);
    doc["drift"] = drift;
    doc["threshold"] = kStationarityThreshold;
    doc["stationary"] = ok;
    write_json(dir / "stationarity.json", doc);
    out << "stationarity drift: " << drift << (ok ? " (ok)" : " (above threshold)") << "\n";
    return ok ? kExitOk : kExitNotStationary;
  }

  const RealField v0 = initial_state(c, grid);
  const RealField g(grid);
  const long nsteps = c.T == 0.0 ? 0 : static_cast<long>(std::ceil(c.T / c.dt - 1e-9));
  EvolveOptions eo;
  eo.p = c.p;
  eo.dealiased = c.dealiased;
  eo.save_every = static_cast<int>(std::max<long>(1, (nsteps + 99) / 100));

  json doc;
  doc["run"] = run_metadata("evolve");
  doc["config"] = config_echo(c);
  Trajectory traj;
  int code = kExitOk;
  try {
    EvolveResult res = evolve(v0, g, A, c.alpha, c.T, c.dt, eo);
    traj = std::move(res.trajectory);
    doc["status"] = "completed";
    doc["diagnostics"] = {{"sup_lp", res.diagnostics.sup_lp},
                          {"weighted_sup_linf", res.diagnostics.weighted_sup_linf},
                          {"et_norm", res.diagnostics.et_norm}};
  } catch (const BlowUpError& e) {
    traj = e.partial();
    code = kExitBlowUp;
    doc["status"] = "blow-up";
    doc["diagnostics"] = nullptr;
    err << "error: " << e.what() << "\n";
  }
  doc["steps"] = nsteps;
  doc["dt_effective"] = traj.dt;
  doc["saved_states"] = traj.states.size();

  const fs::path tdir = dir / "trajectory";
  std::error_code ec;
  fs::create_directories(tdir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + tdir.string());
  Csv index({"index", "time", "file", "l2", "linf", "weighted_sup"});
  const double wexp = c.n / (c.alpha * c.p);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    std::ostringstream name;
    name << "state_" << std::setw(6) << std::setfill('0') << i << ".frqs";
    write_frqs(tdir / name.str(), traj.states[i]);
    const double linf = traj.states[i].max_abs();
    index.row(i, traj.times[i], "trajectory/" + name.str(), lebesgue_norm(traj.states[i], 2.0), linf,
              std::pow(traj.times[i], wexp) * linf);
  }
  write_text(dir / "trajectory.csv", index.str());
  if (!traj.states.empty()) {
    write_frqs(dir / "final.frqs", traj.states.back());
    doc["final_time"] = traj.times.back();
  }
  write_json(dir / "report.json", doc);
  out << "status: " << doc["status"].get<std::string>() << "\n"
      << "steps: " << nsteps << "\n";
  return code;
}

int cmd_analyze(const RunConfig& c, const Options& opt, std::ostream& out, std::ostream& err) {
  if (!c.gamma) throw Error(ErrorCode::Config, "config key 'gamma' is required for analyze-regularity");
  if (!(c.amplitude > 0.0)) throw Error(ErrorCode::Config, "config key 'amplitude' must be positive here");
  const Grid grid(c.n, c.N, c.L);
  const DriftOperator A = make_drift(c, grid);
  const SolverConfig sc = solver_config(c);
  sc.validate();
  const fs::path dir = prepare_output(c, opt);
  const RealField f = synthesize_source(*c.gamma, c.amplitude, c.seed, grid);

  json doc;
  doc["run"] = run_metadata(opt.synthetic_only ? "analyze-regularity --synthetic-only" : "analyze-regularity");
  doc["config"] = config_echo(c);
  if (opt.synthetic_only) {
    const ShellSpectrum S = shell_energies(forward_transform(f));
    const double s = decay_exponent(S);
    doc["status"] = "synthetic";
    doc["s_star_f"] = s;
    doc["predicted_s_star_f"] = *c.gamma - c.n / 2.0;
    doc["shells_f"] = S.shells;
    write_text(dir / "shells.csv", shells_csv(S, nullptr));
    write_json(dir / "report.json", doc);
    out << "s_star_f: " << s << "\n";
    return kExitOk;
  }
  try {
    const RegularityReport r = measure_gain(f, A, sc);
    doc["status"] = "converged";
    doc["regularity"] = to_json(r);
    write_text(dir / "shells.csv", shells_csv(r.shells_f, &r.shells_u));
    write_json(dir / "report.json", doc);
    out << "s_star_f: " << r.s_star_f << "\n"
        << "s_star_u: " << r.s_star_u << "\n"
        << "gain: " << r.gain << " (expected " << r.expected_gain << ")\n";
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    return kExitOk;
  } catch (const SolveError& e) {
    doc["status"] = status_for(e.code());
    doc["solve"] = to_json(e.report());
    write_json(dir / "report.json", doc);
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

int cmd_toy(const RunConfig& c, const Options& opt, std::ostream& out, std::ostream& err) {
  if (!c.beta) throw Error(ErrorCode::Config, "config key 'beta' is required for toy-model");
  if (!c.gamma) throw Error(ErrorCode::Config, "config key 'gamma' is required for toy-model");
  if (!(c.amplitude > 0.0)) throw Error(ErrorCode::Config, "config key 'amplitude' must be positive here");
  const Grid grid(c.n, c.N, c.L);
  ToyConfig tc;
  tc.alpha = c.alpha;
  tc.beta = *c.beta;
  tc.p = c.p;
  tc.max_iters = c.max_iters;
  tc.tol = c.tol;
  tc.dealiased = c.dealiased;
  tc.validate();
  const fs::path dir = prepare_output(c, opt);

  json doc;
  doc["run"] = run_metadata("toy-model");
  doc["config"] = config_echo(c);
  try {
    const RegularityReport r = toy_gain_experiment(*c.gamma, grid, c.amplitude, tc, c.seed);
    doc["status"] = "converged";
    doc["regularity"] = to_json(r);
    write_text(dir / "shells.csv", shells_csv(r.shells_f, &r.shells_u));
    write_json(dir / "report.json", doc);
    out << "gain: " << r.gain << " (expected " << r.expected_gain << ")\n";
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    return kExitOk;
  } catch (const SolveError& e) {
    doc["status"] = status_for(e.code());
    doc["solve"] = to_json(e.report());
    write_json(dir / "report.json", doc);
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

int cmd_check_constants(const RunConfig& c, const Options& opt, std::ostream& out, std::ostream&) {
  const Grid grid(c.n, c.N, c.L);
  const DriftOperator A = make_drift(c, grid);
  const SolverConfig sc = solver_config(c);
  sc.validate();
  const fs::path dir = prepare_output(c, opt);
  const GateRecord gate = smallness_gate(stationary_source(c, grid), A, sc);
  json doc;
  doc["run"] = run_metadata("check-constants");
  doc["config"] = config_echo(c);
  doc["gate"] = to_json(gate);
  write_json(dir / "gate.json", doc);
  out << to_json(gate).dump(2) << "\n";
  return c.enforce_gate && !gate.pass ? kExitConfig : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional elliptic and parabolic drift-diffusion solver on the periodic torus", "fracdrift"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Run configuration (key = value)")->required();
    sub->add_option("--output", opt.output, "Output directory (overrides output_dir)");
  };
  auto* solve = app.add_subcommand("solve-stationary", "Picard solve of the stationary equation");
  auto* evolve_cmd = app.add_subcommand("evolve", "Exponential-Euler run of the evolution equation");
  auto* analyze = app.add_subcommand("analyze-regularity", "Regularity-gain experiment on a power-law source");
  auto* toy = app.add_subcommand("toy-model", "Gain experiment for the toy model with a fractional square");
  auto* constants = app.add_subcommand("check-constants", "Print the smallness-gate record");
  for (auto* s : {solve, evolve_cmd, analyze, toy, constants}) add_common(s);
  evolve_cmd->add_option("--check-stationary", opt.check_stationary,
                         "FRQS dump of a stationary solution; report its drift under the evolution");
  analyze->add_flag("--synthetic-only", opt.synthetic_only, "Fit the synthesized source only, no solve");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = load_run_config(opt.config);
    validate_run_config(cfg);
    if (solve->parsed()) return cmd_solve_stationary(cfg, opt, out, err);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg, opt, out, err);
    if (analyze->parsed()) return cmd_analyze(cfg, opt, out, err);
    if (toy->parsed()) return cmd_toy(cfg, opt, out, err);
    return cmd_check_constants(cfg, opt, out, err);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace fracdrift::cli
