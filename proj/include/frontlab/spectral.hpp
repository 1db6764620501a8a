// SPDX-License-Identifier: Apache-2.0
// Linearisation about a planar front: banded pencil, critical eigenvalue and its curve in ell.
#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/banded.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

using cplx = std::complex<double>;

enum class Boundary { Dirichlet, Neumann };
const char* to_string(Boundary b);

// Ghost-point rule for the profile equations: mirror about the end node, or about the cell face.
enum class Mirror { node, cell };

struct FrontProfile {
  double x0 = 0, h = 0;  // node i sits at x0 + i h
  std::vector<double> u, v;
  double c = 0;  // PDE speed in the comoving frame
  double eps = 0, tau = 0;
  bool refined = false;
  int newton_iterations = 0;
  double residual = 0;

  std::size_t size() const { return u.size(); }
  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
};

// Fast jump plus slow orbits, glued with a smoothstep over |xi| < eps^(-1/2).
std::pair<double, double> composed_point(const FrontSkeleton& s, double xi);
FrontProfile composed_profile(const FrontSkeleton& s, double x0, double h, std::size_t n);

struct NewtonOptions {
  Mirror mirror = Mirror::node;
  int max_iter = 40;
  double tol = 1e-11;
};
// Solves U'' + c tau U' + F = 0, V'' + eps^2 c V' + eps^2 G = 0 with reflecting ends and
// U(x_pin) = u_pin, the speed c as extra unknown.  Throws NoConvergence.
FrontProfile refine_front(const Model& m, FrontProfile init, double u_pin, double x_pin,
                          const NewtonOptions& opt = {});

struct GridSpec {
  double h = 0.02;
  double half_length = kNaN;  // NaN: 8/(eps kappa_s)
  Boundary boundary = Boundary::Dirichlet;
  bool refine = true;
  std::size_t max_points = 200000;
};

// Profile on the spectral grid, Newton-refined when requested.
FrontProfile front_profile(const FrontSkeleton& s, const GridSpec& g);
double default_half_length(const FrontSkeleton& s);

struct OperatorAssembly {
  FrontProfile profile;
  double ell = 0;
  Boundary boundary = Boundary::Dirichlet;
  BandedMatrix<double> K{1, 2, 2};  // unknowns interleaved (u_0, v_0, u_1, ...)
  std::vector<double> mass;         // tau on u rows, eps^2 on v rows
  std::vector<double> translation;  // discrete (u_xi, v_xi)
  int n() const { return K.size(); }
};

OperatorAssembly assemble(const Model& m, const FrontProfile& p, double ell, Boundary b);
OperatorAssembly assemble(const FrontSkeleton& s, double ell, const GridSpec& g);
// Same assembly at another ell (the pencil depends on ell^2 only through the diagonal).
OperatorAssembly with_ell(const OperatorAssembly& a, double ell);

struct EigenResult {
  cplx lambda;
  std::vector<cplx> right, left;  // K r = lambda B r,  l^H K = lambda l^H B
  int iterations = 0;
  double residual = 0;
};
EigenResult critical_eigenvalue(const OperatorAssembly& a, cplx shift, int max_iter = 200,
                                double tol = 1e-10);

// d lambda / d ell^2 at the computed eigenpair, -(l^H r)/(l^H B r).
cplx solvability_slope(const OperatorAssembly& a, const EigenResult& e);

struct AdjointCheck {
  double alpha_star = 0;  // fast amplitude of u^A against u_xi exp(c tau xi)
  double alpha_bar = 0;   // slow amplitude of v^A against v_xi
  double ratio = 0;       // alpha_bar / alpha_star
  double predicted = 0;   // F* / (tau G*)
};
AdjointCheck adjoint_ratio_check(const FrontSkeleton& s, const OperatorAssembly& a,
                                 const EigenResult& e);

struct SpectralCurve {
  std::vector<std::pair<double, cplx>> points;
  double fitted_lambda2 = 0;
  double fitted_lambda4 = 0;
  double fit_lo = 0, fit_hi = 0;  // ell range used by the fit
  bool branch_jump = false;
  double half_length = 0, h = 0;
  Boundary boundary = Boundary::Dirichlet;
  double eps = 0, tau = 0, speed = 0;
};

SpectralCurve eigenvalue_curve(const FrontSkeleton& s, const std::vector<double>& ell_values,
                               const GridSpec& g);
// Fit of Re lambda against ell^2 with a quartic term over an adaptive window.
void fit_curve(SpectralCurve& c);

std::string curve_csv(const SpectralCurve& c);
std::string curve_metadata(const SpectralCurve& c);

}  // namespace frontlab
