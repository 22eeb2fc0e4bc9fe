#ifndef CKDV_CLI_HPP
#define CKDV_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ckdv/charges.hpp"
#include "ckdv/config.hpp"
#include "ckdv/dynamics.hpp"
#include "ckdv/io.hpp"
#include "ckdv/scenarios.hpp"
#include "ckdv/solitons.hpp"
#include "ckdv/verify.hpp"

namespace ckdv::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kBlowUp = 3,
  kIoError = 4,
};

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                       std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline bool open_output(const std::string& path, std::ofstream& file,
                        std::ostream& err) {
  file.open(path, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << path << " for writing\n";
    return false;
  }
  return true;
}

}  // namespace detail

inline int cmd_simulate(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  if (g.config_path.empty()) {
    err << "error: simulate needs --config PATH\n";
    return kConfigError;
  }
  std::ifstream in(g.config_path);
  if (!in) {
    err << "error: cannot read config " << g.config_path << '\n';
    return kConfigError;
  }
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    err << "config parse error at line " << line << ", column " << col << ": "
        << e.what() << '\n';
    return kConfigError;
  }

  RunConfig rc;
  std::optional<FieldState> initial;
  try {
    rc = parse_run_config(j);
    if (g.seed) rc.seed = *g.seed;
    initial = build_initial_state(rc);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  std::ofstream charges_file;
  if (!rc.charges_path.empty()) {
    if (!detail::open_output(rc.charges_path, charges_file, err)) return kIoError;
    write_charge_header(charges_file, rc.components, rc.solver.lambda, rc.seed);
  }
  const Observer observer = [&](const FieldState&, const ChargeReport& r) {
    if (charges_file.is_open()) write_charge_row(charges_file, r);
  };

  std::optional<EvolveResult> result;
  try {
    result = evolve(*initial, rc.solver, observer);
  } catch (const BlowUp& e) {
    if (charges_file.is_open()) charges_file.flush();
    err << "blow-up: " << e.what() << '\n';
    return kBlowUp;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  if (charges_file.is_open()) {
    charges_file.flush();
    if (!charges_file) {
      err << "error: failed writing " << rc.charges_path << '\n';
      return kIoError;
    }
  }
  if (!rc.state_path.empty()) {
    std::ofstream state_file;
    if (!detail::open_output(rc.state_path, state_file, err)) return kIoError;
    write_state(state_file, result->final_state, rc.solver.lambda, rc.seed);
    state_file.flush();
    if (!state_file) {
      err << "error: failed writing " << rc.state_path << '\n';
      return kIoError;
    }
  }

  if (!g.quiet) {
    const verify::Drift d = verify::charge_drift(result->reports, initial->grid().length());
    out << "final_time " << format_double(result->final_state.time()) << '\n';
    out << "samples " << result->reports.size() << '\n';
    out << "h1_relative_drift " << format_double(d.h1) << '\n';
    out << "h3_relative_drift " << format_double(d.h3) << '\n';
    out << "h5_relative_drift " << format_double(d.h5) << '\n';
    out << "h_half_absolute_drift " << format_double(d.h_half_abs) << '\n';
    if (rc.initial.kind == InitialCondition::Kind::soliton) {
      const FieldState exact = one_soliton(rc.initial.soliton, initial->grid(),
                                           result->final_state.time(), rc.components);
      out << "linf_error_vs_exact_translate "
          << format_double(verify::max_field_difference(result->final_state, exact))
          << '\n';
    }
  }
  return kOk;
}

inline int cmd_verify(const GlobalOptions& g, const std::string& suite,
                      const std::string& json_path, std::ostream& out,
                      std::ostream& err) {
  const auto& names = verify::suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    err << "error: unknown suite '" << suite
        << "' (expected charges, hamiltonian, bound, lambda2, nonlocal or all)\n";
    return kConfigError;
  }
  const std::uint64_t seed = g.seed.value_or(scenarios::kDefaultSeed);
  const verify::SuiteReport rep = verify::run_suite(suite, seed);
  if (!g.quiet) {
    out << "# seed " << seed << '\n';
    verify::print_table(out, rep);
  }

  nlohmann::ordered_json report;
  report["suite"] = suite;
  report["seed"] = seed;
  report["passed"] = rep.passed();
  report["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    report["checks"].push_back({{"suite", c.suite},
                                {"name", c.name},
                                {"value", c.value},
                                {"threshold", c.threshold},
                                {"relation", c.expect_above ? ">=" : "<"},
                                {"passed", c.passed}});
  }
  for (const auto& [k, v] : rep.detail.items()) report[k] = v;

  if (!json_path.empty()) {
    std::ofstream f;
    if (!detail::open_output(json_path, f, err)) return kIoError;
    f << report.dump(2) << '\n';
  } else if (suite == "hamiltonian") {
    out << report.dump(2) << '\n';
  }
  return rep.passed() ? kOk : kFailure;
}

inline int cmd_charges(const GlobalOptions& g, const std::string& path,
                       std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot read state file " << path << '\n';
    return kConfigError;
  }
  try {
    const StateFile sf = read_state(in);
    write_charge_header(out, sf.state.components(), sf.lambda, g.seed.value_or(sf.seed));
    write_charge_row(out, charge_report(sf.state, sf.lambda));
  } catch (const Error& e) {
    err << "error: " << path << ": " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

struct SolitonOptions {
  double c = 1.0;
  double a = 0.0;
  double t = 0.0;
  std::string velocity = "oracle";
  double length = scenarios::kBoxLength;
  std::size_t n = scenarios::kBoxPoints;
  std::size_t components = 0;
  double lambda = 1.0;
  std::string out_path;
};

inline int cmd_soliton(const GlobalOptions& g, const SolitonOptions& o,
                       std::ostream& out, std::ostream& err) {
  try {
    SolitonSpec spec;
    spec.C = o.c;
    spec.a = o.a;
    spec.velocity_mode = parse_velocity(nlohmann::json(o.velocity), spec.explicit_velocity);
    const Grid grid(o.length, o.n);
    const FieldState s = one_soliton(spec, grid, o.t, o.components);

    auto residual_for = [&](VelocityMode mode, double v) {
      SolitonSpec alt = spec;
      alt.velocity_mode = mode;
      alt.explicit_velocity = v;
      return residual_check(alt, grid, o.t, o.lambda);
    };
    nlohmann::ordered_json report;
    report["C"] = spec.C;
    report["a"] = spec.a;
    report["t"] = o.t;
    report["lambda"] = o.lambda;
    report["velocity"] = soliton_velocity(spec);
    report["residual"] = residual_check(spec, grid, o.t, o.lambda);
    report["residuals"] = {
        {"oracle", {{"velocity", spec.C}, {"residual", residual_for(VelocityMode::oracle, 0.0)}}},
        {"paper",
         {{"velocity", 1.0 + spec.C}, {"residual", residual_for(VelocityMode::paper, 0.0)}}},
        {"zero", {{"velocity", 0.0}, {"residual", residual_for(VelocityMode::explicit_, 0.0)}}}};

    const std::uint64_t seed = g.seed.value_or(0);
    if (!o.out_path.empty()) {
      std::ofstream f;
      if (!detail::open_output(o.out_path, f, err)) return kIoError;
      write_state(f, s, o.lambda, seed);
      if (!g.quiet) out << report.dump(2) << '\n';
    } else {
      write_state(out, s, o.lambda, seed);
      if (!g.quiet) err << report.dump(2) << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

/// Entry point of the `ckdv` tool; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Coupled KdV laboratory: simulate, verify and inspect states"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed recorded in outputs");
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_flag("--quiet", g.quiet, "Suppress summaries on standard output");

  auto* simulate = app.add_subcommand("simulate", "Run a configured simulation");
  simulate->fallthrough();

  auto* verify_cmd = app.add_subcommand("verify", "Run a fixed-seed property suite");
  verify_cmd->fallthrough();
  std::string suite;
  std::string json_path;
  verify_cmd->add_option("suite", suite, "charges|hamiltonian|bound|lambda2|nonlocal|all")
      ->required();
  verify_cmd->add_option("--json", json_path, "Write the JSON report here");

  auto* charges = app.add_subcommand("charges", "Print the charges of a state file");
  charges->fallthrough();
  std::string state_path;
  charges->add_option("state", state_path, "State file")->required();

  auto* soliton = app.add_subcommand("soliton", "Sample a one-soliton state");
  soliton->fallthrough();
  SolitonOptions so;
  soliton->add_option("--c", so.c, "Amplitude parameter C > 0")->required();
  soliton->add_option("--a", so.a, "Phase offset");
  soliton->add_option("--t", so.t, "Time");
  soliton->add_option("--velocity", so.velocity, "paper | oracle | <number>");
  soliton->add_option("--L", so.length, "Box length");
  soliton->add_option("--n", so.n, "Grid points");
  soliton->add_option("--K", so.components, "Number of (zero) components");
  soliton->add_option("--lambda", so.lambda, "Coupling used for the residual");
  soliton->add_option("--out", so.out_path, "Write the state here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  if (simulate->parsed()) return cmd_simulate(g, out, err);
  if (verify_cmd->parsed()) return cmd_verify(g, suite, json_path, out, err);
  if (charges->parsed()) return cmd_charges(g, state_path, out, err);
  if (soliton->parsed()) return cmd_soliton(g, so, out, err);
  return kConfigError;
}

}  // namespace ckdv::cli

#endif
