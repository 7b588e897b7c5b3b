#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "acceptance_suite.hpp"
#include "ptw/errors.hpp"
#include "ptw/indices.hpp"
#include "ptw/model.hpp"
#include "ptw/pencil.hpp"
#include "ptw/spectral.hpp"
#include "ptw/waves.hpp"

namespace ptw::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed flags shared by every subcommand; a subcommand only registers the
// flags it understands, so anything else is rejected by the parser.
struct Flags {
  std::optional<std::string> model;
  std::optional<double> kappa, w, c, period, tol;
  std::optional<int> grid_n, id;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void add_real(CLI::App* app, const std::string& name, std::optional<double>& slot,
              const std::string& help) {
  app->add_option_function<double>(name, [&slot](const double& v) { slot = v; }, help);
}

void add_model(CLI::App* app, Flags& f) {
  app->add_option_function<std::string>("--model", [&f](const std::string& v) { f.model = v; },
                                        "boussinesq2 | boussinesq3 | kgz")
      ->check(CLI::IsMember({"boussinesq2", "boussinesq3", "kgz"}));
}

void add_pair(CLI::App* app, Flags& f) {
  add_real(app, "--kappa", f.kappa, "elliptic modulus (with --w)");
  add_real(app, "--w", f.w, "w = 1 - c^2 (with --kappa)");
  add_real(app, "--c", f.c, "wave speed (with --period)");
  add_real(app, "--period", f.period, "fundamental period (with --c)");
}

void add_grid(CLI::App* app, Flags& f, const std::string& help) {
  app->add_option_function<int>("--grid-n", [&f](const int& v) { f.grid_n = v; }, help);
}

void add_out(CLI::App* app, Flags& f) {
  app->add_option_function<std::string>("--out", [&f](const std::string& v) { f.out = v; },
                                        "write to PATH instead of stdout");
}

void add_io(CLI::App* app, Flags& f, const std::string& default_format) {
  app->add_option_function<std::string>("--format", [&f](const std::string& v) { f.format = v; },
                                        "csv | json (default " + default_format + ")")
      ->check(CLI::IsMember({"csv", "json"}));
  add_out(app, f);
}

Model require_model(const Flags& f) {
  if (!f.model) throw UsageError("--model is required");
  return parse_model(*f.model);
}

bool has_kw(const Flags& f) { return f.kappa || f.w; }
bool has_tc(const Flags& f) { return f.c || f.period; }

/// Exactly one of (kappa, w) and (T, c), complete.
WaveParams resolve_wave(Model model, const Flags& f) {
  if (has_kw(f) && has_tc(f)) {
    throw UsageError("give either --kappa/--w or --period/--c, not a mix");
  }
  if (f.kappa && f.w) return build_wave(model, *f.kappa, *f.w);
  if (f.period && f.c) return build_wave_from_period(model, *f.period, *f.c);
  throw UsageError("a complete parameter pair is required: --kappa K --w W or --period T --c C");
}

int grid_or(const Flags& f, int fallback, int minimum) {
  const int n = f.grid_n.value_or(fallback);
  if (n < minimum || n % 2 != 0) {
    throw UsageError(fmt::format("--grid-n must be even and >= {}, got {}", minimum, n));
  }
  return n;
}

bool want_json(const Flags& f, bool json_default) {
  return f.format ? *f.format == "json" : json_default;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// -- subcommands --------------------------------------------------------------

struct Emitted {
  std::string body;
  int code = kExitOk;
};

Emitted cmd_wave(const Flags& f) {
  const Model model = require_model(f);
  const WaveParams p = resolve_wave(model, f);
  const int n = grid_or(f, 256, 16);
  const WaveProfile prof = sample_profile(p, n);
  if (want_json(f, false)) {
    return {dump({{"model", model_name(model)},
                  {"kappa", p.kappa},
                  {"w", p.w},
                  {"c", opt_json(p.c)},
                  {"T", p.T},
                  {"alpha", p.alpha},
                  {"phi0", p.phi0},
                  {"phi1", p.phi1},
                  {"b", p.b},
                  {"a", p.a},
                  {"n", n},
                  {"ode_residual", ode_residual(prof)}})};
  }
  const bool kgz = model == Model::KGZ;
  std::string s = kgz ? "x,phi,psi\n" : "x,phi\n";
  for (int i = 0; i < n; ++i) {
    s += num(prof.xs[i]) + "," + num(prof.phi[i]);
    if (kgz) s += "," + num(prof.psi[i]);
    s += "\n";
  }
  return {s};
}

json report_json(const IndexReport& r) {
  return {{"model", model_name(r.model)}, {"kappa", r.kappa},
          {"w", r.w},                     {"index_closed", r.index_closed},
          {"mu_star", opt_json(r.mu_star)}, {"c_star", opt_json(r.c_star)},
          {"stable_iff", r.stable_iff}};
}

Emitted cmd_index(const Flags& f) {
  const Model model = require_model(f);
  if (!has_kw(f) && !has_tc(f)) {
    // Table over kappa at w = 1.
    std::string s = "kappa,index_closed,c_star\n";
    for (int i = 0; i < 50; ++i) {
      const double k = 0.05 + (0.995 - 0.05) * i / 49.0;
      const IndexReport r = index_report(model, k, 1.0);
      s += num(k) + "," + num(r.index_closed) + "," + (r.c_star ? num(*r.c_star) : "") + "\n";
    }
    return {s};
  }
  const WaveParams p = resolve_wave(model, f);
  const IndexReport r = index_report(model, p.kappa, p.w);
  if (!want_json(f, true)) {
    return {"kappa,w,index_closed,mu_star,c_star\n" + num(r.kappa) + "," + num(r.w) + "," +
            num(r.index_closed) + "," + (r.mu_star ? num(*r.mu_star) : "") + "," +
            (r.c_star ? num(*r.c_star) : "") + "\n"};
  }
  return {dump(report_json(r))};
}

Emitted cmd_threshold(const Flags& f) {
  const Model model = require_model(f);
  if (f.period.has_value() == f.kappa.has_value()) {
    throw UsageError("threshold takes exactly one of --period or --kappa");
  }
  if (f.period) {
    const ThresholdSolution s = kappa_star_for_period(model, *f.period);
    return {dump({{"model", model_name(model)},
                  {"T", *f.period},
                  {"kappa_T", s.kappa_T},
                  {"c_T", s.c_T}})};
  }
  const double c = threshold_speed(model, *f.kappa);
  return {dump({{"model", model_name(model)},
                {"kappa", *f.kappa},
                {"c_star", c},
                {"T", threshold_period_map(model, *f.kappa)}})};
}

Emitted cmd_spectrum(const Flags& f) {
  const Model model = require_model(f);
  const WaveParams p = resolve_wave(model, f);
  const int n = grid_or(f, default_grid(p.kappa), 32);
  const SpectralReport r = verify_kernel(model, p, n);
  return {dump({{"model", model_name(model)},
                {"kappa", p.kappa},
                {"w", p.w},
                {"n", n},
                {"n_negative", r.n_negative},
                {"kernel_dimension", r.kernel_dimension},
                {"lowest_eig", r.lowest_eigenvalue},
                {"kernel_eig", r.kernel_eigenvalue},
                {"kernel_residual", r.kernel_residual},
                {"operator_norm", r.operator_norm},
                {"gap", r.spectral_gap_sigma},
                {"verified", r.verified}}),
          r.verified ? kExitOk : kExitClaim};
}

Emitted cmd_pencil(const Flags& f) {
  const Model model = require_model(f);
  if (has_kw(f)) throw UsageError("pencil takes --period (and optionally --c), not --kappa/--w");
  if (!f.period) throw UsageError("--period is required");
  const double T = *f.period;
  const int n = grid_or(f, 256, 32);
  const double tol = f.tol.value_or(1e-6);

  if (f.c) {
    const StabilityVerdict v = classify_stability(model, T, *f.c, n, tol);
    return {dump({{"model", model_name(model)},
                  {"T", T},
                  {"c", *f.c},
                  {"kappa", v.kappa},
                  {"n", n},
                  {"max_growth", v.max_growth},
                  {"tolerance", v.tolerance},
                  {"stable", v.stable},
                  {"c_T", opt_json(v.threshold_prediction)},
                  {"predicted_stable", v.predicted_stable},
                  {"agreement", v.agreement}}),
            v.agreement ? kExitOk : kExitClaim};
  }

  // 21 speeds across the admissible range, sorted by |c|.
  const SpeedRange range = speed_range_for_period(model, T);
  std::vector<double> grid;
  for (int j = 0; j < 21; ++j) {
    grid.push_back(model == Model::KGZ ? range.lo + (range.hi - range.lo) * (j + 1) / 22.0
                                       : range.hi * j / 21.0);
  }
  const ScanResult r = stability_scan(model, T, grid, n, tol);
  const bool ok = r.monotone && r.abs_diff <= r.grid_step;
  if (want_json(f, false)) {
    json rows = json::array();
    for (const ScanRow& row : r.rows) {
      rows.push_back({{"c", row.c}, {"max_growth", row.max_growth}, {"stable", row.stable}});
    }
    return {dump({{"model", model_name(model)},
                  {"T", T},
                  {"n", n},
                  {"c_T_closed", r.c_T_closed},
                  {"c_T_empirical", r.c_T_empirical},
                  {"abs_diff", r.abs_diff},
                  {"grid_step", r.grid_step},
                  {"monotone", r.monotone},
                  {"rows", rows}}),
            ok ? kExitOk : kExitClaim};
  }
  std::string s = "c,max_growth,stable\n";
  for (const ScanRow& row : r.rows) {
    s += num(row.c) + "," + num(row.max_growth) + "," + (row.stable ? "1" : "0") + "\n";
  }
  return {s, ok ? kExitOk : kExitClaim};
}

Emitted cmd_figures(const Flags& f) {
  if (!f.id) throw UsageError("--id N (1..10) is required");
  if (*f.id < 1 || *f.id > 10) throw UsageError("--id must be in 1..10");
  const FigureScan s = figure_scan(*f.id, default_figure_grid(*f.id));
  const int code = s.holds ? kExitOk : kExitClaim;
  if (want_json(f, false)) {
    return {dump({{"figure", s.figure},
                  {"claim", s.claim},
                  {"holds", s.holds},
                  {"points", s.table.size()},
                  {"worst_kappa", s.worst_kappa},
                  {"worst_value", s.worst_value}}),
            code};
  }
  std::string out = "kappa,value\n";
  for (const auto& [k, v] : s.table) out += num(k) + "," + num(v) + "\n";
  return {out, code};
}

Emitted cmd_validate(const Flags& f) {
  if (f.model || has_kw(f) || has_tc(f)) {
    // Spectral oracle for one wave.
    const Model model = require_model(f);
    const WaveParams p = resolve_wave(model, f);
    const int n = grid_or(f, default_grid(p.kappa), 32);
    const double tol = f.tol.value_or(1e-4);
    const SpectralOperatorBundle b = build_bundle(model, p, n);
    const SpectralReport r = verify_kernel(b);
    const double numeric = index_numeric(b);
    const double closed = index_closed(model, p.kappa, p.w);
    const double rel = std::abs(closed - numeric) / std::abs(numeric);
    return {dump({{"model", model_name(model)},
                  {"kappa", p.kappa},
                  {"w", p.w},
                  {"n", n},
                  {"n_negative", r.n_negative},
                  {"lowest_eig", r.lowest_eigenvalue},
                  {"kernel_residual", r.kernel_residual},
                  {"gap", r.spectral_gap_sigma},
                  {"index_numeric", numeric},
                  {"index_closed", closed},
                  {"rel_err", rel}}),
            (r.verified && rel <= tol) ? kExitOk : kExitClaim};
  }

  bool all = true;
  std::string text;
  json arr = json::array();
  for (int id = 1; id <= acceptance::kCriteria; ++id) {
    const acceptance::CriterionResult r = acceptance::run_criterion(id);
    all = all && r.pass;
    text += acceptance::format_line(r) + "\n";
    arr.push_back({{"criterion", r.id},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"seconds", r.seconds},
                   {"detail", r.detail}});
  }
  return {want_json(f, false) ? dump(arr) : text, all ? kExitOk : kExitClaim};
}

void emit(const Flags& f, const std::string& body, std::ostream& out) {
  if (!f.out) {
    out << body;
    return;
  }
  std::ofstream file(*f.out, std::ios::binary);
  if (!file) throw UsageError("cannot open --out path " + *f.out);
  file << body;
  if (!file) throw UsageError("failed writing " + *f.out);
}

}  // namespace

std::string admissible_ranges(const std::string& model) {
  std::string s = "admissible parameters:\n";
  for (Model m : {Model::Boussinesq2, Model::Boussinesq3, Model::KGZ}) {
    if (!model.empty() && model != model_name(m)) continue;
    const double inf1 = period_infimum(m, 1.0);
    const bool kgz = m == Model::KGZ;
    s += fmt::format(
        "  {}: 0 < kappa < 1 and w > 0 (indices: kappa in [{:g}, 1 - 1e-9]);\n"
        "    (T, c): |c| < 1 and T > {:.6f} {} sqrt(1 - c^2)\n",
        model_name(m), kIndexKappaMin, inf1, kgz ? "*" : "/");
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orbital stability of periodic traveling waves: waves, indices, spectra"};
  app.name("ptwstab");
  app.require_subcommand(1);
  Flags f;

  CLI::App* wave = app.add_subcommand("wave", "sample a wave profile (CSV x,phi[,psi]) or its parameters (JSON)");
  add_model(wave, f);
  add_pair(wave, f);
  add_grid(wave, f, "samples per period (even, default 256)");
  add_io(wave, f, "csv");

  CLI::App* index = app.add_subcommand("index", "closed-form stability index; a kappa table without parameters");
  add_model(index, f);
  add_pair(index, f);
  add_io(index, f, "json");

  CLI::App* threshold = app.add_subcommand("threshold", "threshold speed for a period or a modulus");
  add_model(threshold, f);
  add_real(threshold, "--period", f.period, "fundamental period");
  add_real(threshold, "--kappa", f.kappa, "elliptic modulus");
  add_out(threshold, f);

  CLI::App* spectrum = app.add_subcommand("spectrum", "negative count and kernel of the discretized operator");
  add_model(spectrum, f);
  add_pair(spectrum, f);
  add_grid(spectrum, f, "grid size (even, >= 32; default 256, 512 for kappa > 0.9999)");
  add_out(spectrum, f);

  CLI::App* pencil = app.add_subcommand("pencil", "quadratic pencil: one speed, or a 21-point scan");
  add_model(pencil, f);
  add_pair(pencil, f);
  add_grid(pencil, f, "grid size (even, >= 32, default 256)");
  add_real(pencil, "--tol", f.tol, "growth tolerance relative to sqrt(||H||) (default 1e-6)");
  add_io(pencil, f, "csv");

  CLI::App* figures = app.add_subcommand("figures", "figure data (CSV kappa,value) or claim verdict (JSON)");
  figures->add_option_function<int>("--id", [&f](const int& v) { f.id = v; }, "figure 1..10");
  add_io(figures, f, "csv");

  CLI::App* validate = app.add_subcommand(
      "validate", "spectral oracle for one wave, or every acceptance criterion without --model");
  add_model(validate, f);
  add_pair(validate, f);
  add_grid(validate, f, "grid size (even, >= 32; default 256, 512 for kappa > 0.9999)");
  add_real(validate, "--tol", f.tol, "relative index tolerance (default 1e-4)");
  add_io(validate, f, "csv");

  std::vector<const char*> argv{"ptwstab"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << admissible_ranges(f.model.value_or("")) << app.help();
    return kExitUsage;
  }

  const std::map<CLI::App*, std::function<Emitted(const Flags&)>> commands{
      {wave, cmd_wave},         {index, cmd_index},       {threshold, cmd_threshold},
      {spectrum, cmd_spectrum}, {pencil, cmd_pencil},     {figures, cmd_figures},
      {validate, cmd_validate}};

  try {
    CLI::App* sub = app.get_subcommands().front();
    const Emitted e = commands.at(sub)(f);
    emit(f, e.body, out);
    if (e.code == kExitClaim) err << "claim check failed\n";
    return e.code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << admissible_ranges(f.model.value_or(""));
    return kExitUsage;
  } catch (const std::exception& e) {
    // DomainError, OutOfRangeError, NoThresholdError, SolverError, ...
    err << "error: " << e.what() << "\n" << admissible_ranges(f.model.value_or(""));
    return kExitUsage;
  }
}

}  // namespace ptw::cli
