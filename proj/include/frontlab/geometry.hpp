// SPDX-License-Identifier: Apache-2.0
// Singular front skeleton: slow orbits on M-/M+, the jump point and the fast heteroclinic.
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "frontlab/model.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SlowOrbit {
  Side side = Side::minus;
  double c_tilde = 0.0;
  HermiteCurve curve;  // X, v, q, q_X, q_XX; X ascending
  double v_bar = 0.0;  // saddle approached in the tail
  double rate = 0.0;   // v - v_bar ~ exp(rate X) in the tail
  bool tail_left = true;

  double v(double X) const;
  double q(double X) const;
  double x_front() const { return curve.t_front(); }
  double x_back() const { return curve.t_back(); }
  std::vector<std::array<double, 3>> samples() const;
};

struct JumpPoint {
  double v_star = 0, q_star = 0;
  double u_star_minus = 0, u_star_plus = 0;
  // Position of the jump along each manifold, measured from the launch point
  // (NaN when found from Hamiltonian level sets), and launch directions.
  double x_unstable = kNaN, x_stable = kNaN;
  int dir_unstable = 0, dir_stable = 0;
};

struct CubicClosedForm {
  double K, alpha, beta_minus, beta_c, beta_plus;
};

struct FastJump {
  double c_times_tau = 0.0;
  double v0 = 0.0;
  double u_minus = 0, u_plus = 0;
  HermiteCurve curve;  // xi, u, p, p_xi, p_xixi; xi = 0 at u = (u_minus + u_plus)/2
  double rate_left = 0, rate_right = 0;
  std::optional<CubicClosedForm> closed_form;

  double u(double xi) const;
  double p(double xi) const;
  double u_mid() const { return 0.5 * (u_minus + u_plus); }
  std::vector<std::array<double, 3>> samples() const;
};

struct FrontSkeleton {
  ModelPtr model;
  TauRegime regime;
  JumpPoint jump;
  FastJump fast;
  SlowOrbit slow_minus, slow_plus;
  double speed = 0.0;  // c* (order-one tau) or c-tilde* (small tau)
  double eps = 0.0;
  HomogeneousState state_minus, state_plus;

  double tau() const { return regime.tau(eps); }
  // PDE travelling speed c in the original x variable.
  double pde_speed() const { return regime.small() ? speed / eps : speed; }
};

struct TWBifurcation {
  double tau_tilde_star = 0.0;
  double v_star_stationary = 0.0;
  double v1_per_c_fast = 0.0;  // -tau_tilde I_f / F at tau_tilde_star
  double v1_per_c_slow = 0.0;  // I_s / G
  double m_star_at_bifurcation = 0.0;
};

struct ManifoldOptions {
  double offset = 1e-7;
  int direction = 0;  // +1/-1 along the eigenvector; 0 = towards the other saddle
  std::optional<double> stop_at_v;
  double x_limit = kNaN;  // integration length; NaN = default cap
  double max_dx = 0.05;
  double tol = 1e-12;
};

enum class ManifoldKind { unstable_of_minus, stable_of_plus };

double slow_hamiltonian(const Model& m, Side side, double v, double q);
// Potential part of the slow Hamiltonian, integral of G(f(s), s) from the saddle to v.
double slow_potential(const Model& m, Side side, double v);
double slow_potential(const Model& m, Side side, double v, double v_bar);

SlowOrbit saddle_manifold_orbit(const Model& m, Side side, ManifoldKind which, double c_tilde,
                                const ManifoldOptions& opt = {});

struct JumpSearchOptions {
  bool use_hamiltonian = true;  // at c_tilde = 0
  int grid = 400;
  double tol = 1e-12;
};
std::vector<JumpPoint> find_jump_point(const Model& m, double c_tilde,
                                       const JumpSearchOptions& opt = {});

FastJump cubic_heteroclinic(double alpha, double beta_minus, double beta_c, double beta_plus);
FastJump fast_speed_shoot(const Model& m, double v0, double tol = 1e-12);
// Closed form when the model is cubic at v0, shooting otherwise.
FastJump fast_jump(const Model& m, double v0);
// Width 2/max|rate| of the jump (1/w for u = tanh(w xi)).
double fast_width(const FastJump& fj);

struct BuildOptions {
  int scan_nodes = 65;
  double c_tilde_max = kNaN;  // NaN = derived from the saddle eigenvalues
};
std::vector<FrontSkeleton> build_front(const ModelPtr& m, double eps, const BuildOptions& opt = {});
// Skeleton at a prescribed jump point and slow speed (c_tilde = 0 for order-one tau).
FrontSkeleton assemble_skeleton(const ModelPtr& m, double eps, const JumpPoint& jp,
                                double c_tilde);
double default_c_tilde_max(const Model& m);

struct StationaryResiduals {
  double fast, slow;
};
StationaryResiduals stationary_residuals(const Model& m);

TWBifurcation tw_bifurcation(const ModelPtr& m);

}  // namespace frontlab
