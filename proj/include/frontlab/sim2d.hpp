// SPDX-License-Identifier: Apache-2.0
// 2D simulation of tau U_t = Lap U + F, V_t = eps^-2 Lap V + G on [0, Lx] x [0, Ly).
// x: cell-centred Neumann.  y: periodic.  Fields are stored row-major, row j = y_j.
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"

namespace frontlab {

struct ModeSeed {
  struct Mode {
    double ell = 0, amplitude = 0, phase = 0;
  };
  std::vector<Mode> modes;
  // ell = 2 pi n / Ly
  void add(int n, double ly, double amplitude, double phase = 0.0);
};

enum class InitialKind { SkeletonFront, Custom };

struct SimConfig {
  ModelPtr model;
  double eps = 0.01;
  double Lx = 40, Ly = 20;
  int Nx = 512, Ny = 256;
  double dt = 0.01;
  double t_end = 10;
  InitialKind initial = InitialKind::SkeletonFront;
  ModeSeed seed;
  std::string initial_file;  // FLB1 snapshot for InitialKind::Custom
  double x0 = kNaN;          // initial front position, NaN: Lx / 2
  int front_index = 0;       // which of build_front's solutions
  bool refine_initial = true;
  bool comoving = true;
  int recenter_every = 50;
  double snapshot_every = 0;  // 0: none
  double log_every = 1.0;
  double u_mid = kNaN;  // interface level, NaN: from the skeleton

  double dx() const { return Lx / Nx; }
  double dy() const { return Ly / Ny; }
};

// Throws ValidationError.
void validate(const SimConfig& c);

struct ModeSample {
  double t = 0;
  std::vector<std::complex<double>> amplitude;  // one per logged ell
};

struct SimState {
  double t = 0;
  int Nx = 0, Ny = 0;
  double dx = 0, dy = 0;
  double shift = 0;  // accumulated recentering, lab x = grid x + shift
  std::vector<double> U, V;
  std::vector<double> interface;  // lab-frame front x per row, NaN where missing
  std::vector<double> ells;       // logged modes, ell = 0 first
  std::vector<ModeSample> mode_log;
  double u_mid = kNaN;
  double fast_width = kNaN;
  double tau = 1, eps = 0.01;

  double& u(int i, int j) { return U[static_cast<std::size_t>(j) * Nx + i]; }
  double& v(int i, int j) { return V[static_cast<std::size_t>(j) * Nx + i]; }
  double x(int i) const { return (i + 0.5) * dx; }
  double y(int j) const { return j * dy; }
};

SimState init_front_state(const SimConfig& c);

// One Strang step R(dt/2) D(dt) R(dt/2).  Throws BlowUp.
class Stepper {
 public:
  Stepper(const SimConfig& c, double tau);
  void step(SimState& s) const;
  void react(SimState& s, double h) const;
  void diffuse(SimState& s) const;

 private:
  struct Line {
    // constant-coefficient tridiagonal (1 + 2r) x_i - r (x_{i-1} + x_{i+1})
    int n = 0;
    bool periodic = false;
    double r = 0;
    std::vector<double> cp, den, z;  // Thomas sweep and Sherman-Morrison column
    double zfac = 0;
    void build(int n, double r, bool periodic);
    void solve(std::vector<double>& f, int inner) const;
  };
  const Model* model_;
  double tau_, dt_;
  int nx_, ny_;
  Line ux_h_, ux_f_, vx_h_, vx_f_, uy_h_, uy_f_, vy_h_, vy_f_;
  mutable std::vector<double> work_a_, work_b_;
  void diffuse_field(std::vector<double>& f, const Line& xh, const Line& xf, const Line& yh,
                     const Line& yf) const;
};

void step(SimState& s, const SimConfig& c);

// First crossing of u_mid scanning in +x, linear interpolation; NaN rows had no crossing.
std::vector<double> interface_position(const SimState& s, double u_mid);
// A_0 = mean, A_n = (2/Ny) sum x_j exp(-i ell y_j).  Throws NoCrossing on missing rows.
std::vector<std::complex<double>> mode_amplitudes(const std::vector<double>& interface, double dy,
                                                  const std::vector<double>& ells);

struct GrowthRate {
  double ell = 0, sigma = 0;
};
// Least-squares slope of log|A| over [t0, t1].  Throws WindowTooShort, Nonlinear.
std::vector<GrowthRate> growth_rates(const std::vector<double>& ells,
                                     const std::vector<ModeSample>& log, double t0, double t1,
                                     double linear_bound);

struct RunResult {
  SimState final_state;
  std::vector<double> snapshot_times;
  std::vector<ModeSample> mode_log;
  std::vector<std::pair<double, std::vector<double>>> interface_log;
};
using SnapshotSink = std::function<void(const SimState&)>;
using ProgressSink = std::function<void(const SimState&)>;
RunResult run(const SimConfig& c, const SnapshotSink& snap = {}, const ProgressSink& progress = {});

// FLB1: "FLB1 Nx Ny dx dy t\n", then Nx*Ny little-endian doubles for U and for V.
void write_snapshot(const std::string& path, const SimState& s);
std::string snapshot_bytes(const SimState& s);
SimState read_snapshot(const std::string& path);
SimState parse_snapshot(const std::string& bytes);

std::string mode_log_csv(const std::vector<double>& ells, const std::vector<ModeSample>& log);
std::string interface_log_csv(const RunResult& r, double dy);

}  // namespace frontlab
