#ifndef CKDV_CONFIG_HPP
#define CKDV_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

#include "ckdv/dynamics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/io.hpp"
#include "ckdv/solitons.hpp"

namespace ckdv {

struct ModeTerm {
  std::size_t field = 0;  // 0 = u, i = phi_i
  std::size_t wavenumber_index = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct InitialCondition {
  enum class Kind { soliton, two_soliton, modes, file };
  Kind kind = Kind::soliton;
  SolitonSpec soliton;
  double c1 = 0.0;
  double c2 = 0.0;
  double profile_time = 0.0;  // two-soliton profile is taken at this time
  std::vector<ModeTerm> modes;
  std::string path;
};

/// Contents of a `simulate` JSON config.
///
///   {"grid": {"L": 80, "n": 512}, "K": 1, "lambda": 1, "dt": 1e-4,
///    "t_end": 1, "integrator": "ifrk4", "dealias": true, "sample_every": 100,
///    "seed": 0,
///    "initial_condition": {"type": "soliton", "C": 1, "a": 0,
///                          "velocity": "oracle"},
///    "output": {"state_path": "...", "charges_path": "..."}}
///
/// initial_condition types: soliton {C, a, velocity: paper|oracle|<number>},
/// two_soliton {C1, C2, t0}, modes {modes: [{field: "u"|"phi_<i>", m,
/// amplitude, phase}]}, file {path}.
struct RunConfig {
  double length = 80.0;
  std::size_t n_points = 512;
  std::size_t components = 0;
  SolverConfig solver;
  InitialCondition initial;
  std::string state_path;
  std::string charges_path;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename T>
T config_value(const nlohmann::json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <typename T>
T config_required(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("config is missing '") + key + "'");
  }
  return config_value<T>(j, key, T{});
}

inline std::size_t parse_field_name(const std::string& name) {
  if (name == "u") return 0;
  if (name.rfind("phi_", 0) == 0) {
    try {
      const auto i = std::stoul(name.substr(4));
      if (i >= 1) return i;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown field name '" + name + "'");
}

}  // namespace detail

inline VelocityMode parse_velocity(const nlohmann::json& v, double& explicit_v) {
  if (v.is_number()) {
    explicit_v = v.get<double>();
    return VelocityMode::explicit_;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "paper") return VelocityMode::paper;
    if (s == "oracle") return VelocityMode::oracle;
    try {
      std::size_t used = 0;
      explicit_v = std::stod(s, &used);
      if (used == s.size()) return VelocityMode::explicit_;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("velocity must be 'paper', 'oracle' or a number");
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig rc;
  const auto grid = detail::config_required<nlohmann::json>(j, "grid");
  rc.length = detail::config_required<double>(grid, "L");
  rc.n_points = detail::config_required<std::size_t>(grid, "n");
  rc.components = detail::config_value<std::size_t>(j, "K", 0);
  rc.solver.lambda = detail::config_value<double>(j, "lambda", 1.0);
  rc.solver.dt = detail::config_required<double>(j, "dt");
  rc.solver.t_end = detail::config_required<double>(j, "t_end");
  const auto integrator = detail::config_value<std::string>(j, "integrator", "ifrk4");
  if (integrator == "rk4") {
    rc.solver.integrator = Integrator::rk4;
  } else if (integrator == "ifrk4") {
    rc.solver.integrator = Integrator::ifrk4;
  } else {
    throw ConfigError("integrator must be 'rk4' or 'ifrk4'");
  }
  rc.solver.dealias = detail::config_value<bool>(j, "dealias", true);
  rc.solver.sample_every = detail::config_value<std::size_t>(j, "sample_every", 1);
  rc.seed = detail::config_value<std::uint64_t>(j, "seed", 0);

  const auto ic = detail::config_required<nlohmann::json>(j, "initial_condition");
  const auto type = detail::config_required<std::string>(ic, "type");
  if (type == "soliton") {
    rc.initial.kind = InitialCondition::Kind::soliton;
    rc.initial.soliton.C = detail::config_required<double>(ic, "C");
    rc.initial.soliton.a = detail::config_value<double>(ic, "a", 0.0);
    if (ic.contains("velocity")) {
      rc.initial.soliton.velocity_mode =
          parse_velocity(ic.at("velocity"), rc.initial.soliton.explicit_velocity);
    }
  } else if (type == "two_soliton") {
    rc.initial.kind = InitialCondition::Kind::two_soliton;
    rc.initial.c1 = detail::config_required<double>(ic, "C1");
    rc.initial.c2 = detail::config_required<double>(ic, "C2");
    rc.initial.profile_time = detail::config_value<double>(ic, "t0", 0.0);
  } else if (type == "modes") {
    rc.initial.kind = InitialCondition::Kind::modes;
    const auto modes = detail::config_required<nlohmann::json>(ic, "modes");
    if (!modes.is_array()) throw ConfigError("'modes' must be an array");
    for (const auto& m : modes) {
      ModeTerm term;
      term.field = detail::parse_field_name(detail::config_required<std::string>(m, "field"));
      term.wavenumber_index = detail::config_required<std::size_t>(m, "m");
      term.amplitude = detail::config_required<double>(m, "amplitude");
      term.phase = detail::config_value<double>(m, "phase", 0.0);
      if (term.field > rc.components) {
        throw ConfigError("mode refers to phi_" + std::to_string(term.field) +
                          " but K=" + std::to_string(rc.components));
      }
      rc.initial.modes.push_back(term);
    }
  } else if (type == "file") {
    rc.initial.kind = InitialCondition::Kind::file;
    rc.initial.path = detail::config_required<std::string>(ic, "path");
  } else {
    throw ConfigError("unknown initial_condition type '" + type + "'");
  }

  if (j.contains("output")) {
    const auto& out = j.at("output");
    rc.state_path = detail::config_value<std::string>(out, "state_path", "");
    rc.charges_path = detail::config_value<std::string>(out, "charges_path", "");
  }

  try {
    validate(rc.solver, Grid(rc.length, rc.n_points));
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

/// Builds the t = 0 state described by the config.
inline FieldState build_initial_state(const RunConfig& rc) {
  const Grid grid(rc.length, rc.n_points);
  switch (rc.initial.kind) {
    case InitialCondition::Kind::soliton:
      return one_soliton(rc.initial.soliton, grid, 0.0, rc.components);
    case InitialCondition::Kind::two_soliton:
      return kdv_two_soliton(rc.initial.c1, rc.initial.c2, grid,
                             rc.initial.profile_time, rc.components)
          .with_time(0.0);
    case InitialCondition::Kind::modes: {
      std::vector<Samples> fields(rc.components + 1, Samples(grid.size(), 0.0));
      for (const auto& m : rc.initial.modes) {
        const double k = 2.0 * std::numbers::pi *
                         static_cast<double>(m.wavenumber_index) / grid.length();
        for (std::size_t j = 0; j < grid.size(); ++j) {
          fields[m.field][j] += m.amplitude * std::cos(k * grid.x(j) + m.phase);
        }
      }
      Samples u = std::move(fields[0]);
      std::vector<Samples> phi(std::make_move_iterator(fields.begin() + 1),
                               std::make_move_iterator(fields.end()));
      return FieldState(grid, std::move(u), std::move(phi));
    }
    case InitialCondition::Kind::file: {
      std::ifstream in(rc.initial.path);
      if (!in) throw ConfigError("cannot open initial state file " + rc.initial.path);
      StateFile sf = read_state(in);
      if (!(sf.state.grid() == grid) || sf.state.components() != rc.components) {
        throw ConfigError("initial state file does not match grid/K of the config");
      }
      return sf.state;
    }
  }
  throw ConfigError("unhandled initial condition");
}

}  // namespace ckdv

#endif
