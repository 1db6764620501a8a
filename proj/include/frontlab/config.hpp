// SPDX-License-Identifier: Apache-2.0
// Run configuration: flat "key = value" lines, "# comments", "[section]" headers.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/sim2d.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

enum class Command { construct, criterion, spectrum, simulate, bifurcate, sweep };
const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& s);

struct ModeEntry {
  int n = 1;
  double amplitude = kNaN;  // NaN: 1e-3 of the fast width
  double phase = 0;
};

struct SimSettings {
  double Lx = 40, Ly = 20;
  int Nx = 512, Ny = 256;
  double dt = 0.01, t_end = 10;
  double snapshot_every = 0, log_every = 1;
  bool comoving = true;
  int recenter_every = 50;
  double x0 = kNaN;
  int front_index = 0;
  bool refine_initial = true;
  InitialKind initial = InitialKind::SkeletonFront;
  std::string initial_file;
  double u_mid = kNaN;
  std::vector<ModeEntry> modes;
  int noise_modes = 0;  // modes 1..noise_modes with random phases
  double noise_amplitude = kNaN;
  std::uint64_t seed = 1;
  double growth_from = kNaN, growth_to = kNaN;  // optional growth-rate fit window
};

struct RunConfig {
  std::optional<Command> command;
  std::string model = "fhn";
  std::map<std::string, double> params;
  std::optional<TauRegime> regime;
  double eps = 0.01;

  GridSpec grid;
  std::vector<double> ells;

  SimSettings sim;

  std::vector<double> tau_tildes;  // bifurcate: branch table grid

  std::string sweep_param;
  std::vector<double> sweep_values;
};

// Collects every problem with its line number; throws ParseError for malformed lines,
// ValidationError for unknown keys and out-of-range values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

ModelPtr make_model(const RunConfig& c);
ModelPtr make_model(const RunConfig& c, const std::string& param, double value);
SimConfig sim_config(const RunConfig& c);

}  // namespace frontlab
