// SPDX-License-Identifier: Apache-2.0
// Transversal long-wave stability coefficients of a front skeleton.
#pragma once

#include <optional>
#include <string>

#include "frontlab/geometry.hpp"

namespace frontlab {

enum class Verdict { TransversallyUnstable, LongWaveStable, Degenerate };
const char* to_string(Verdict v);

struct CriterionReport {
  bool small_tau = false;
  double eps = 0, tau = 0;  // tau_tilde when small_tau
  double speed = 0, v_star = 0;
  double f_star = 0, g_star = 0, i_fast = 0, i_slow = 0;
  double lambda2c = 0;       // full leading-order value
  double lambda2c_scaled = 0;  // eps*tau*lambda2c, or eps^2*lambda2c when small_tau
  std::optional<double> m_star, tau_tilde_star;
  Verdict verdict = Verdict::Degenerate;
};

double f_star(const FrontSkeleton& s);
double g_star(const FrontSkeleton& s);
double i_fast(const FrontSkeleton& s);
double i_slow(const FrontSkeleton& s);

// -(1/(eps tau)) (F/G) (I_s/I_f).  Throws DegenerateGStar.
double lambda2c(const FrontSkeleton& s, double eps);
double m_star(const FrontSkeleton& s, double tau_tilde);
// -(1/eps^2) F I_s / M.  Throws DegenerateMStar.
double lambda2c_small_tau(const FrontSkeleton& s, double tau_tilde, double eps);

CriterionReport criterion_report(const FrontSkeleton& s);

// Integral of s^i / cosh(s)^j over the real line.
double k_integral(int i, int j);

struct BifurcatingWaveReport {
  double tau_tilde = 0, tau_tilde_star = 0;
  double c_hat = 0, v_hat1 = 0;
  CriterionReport expansion;  // closed-form delta expansions
  CriterionReport numerical;  // quadratures on the travelling skeleton
};
BifurcatingWaveReport fhn_bifurcating_wave_report(double mu1, double mu2, double mu3,
                                                  double tau_hat, double delta, double eps);

std::string to_key_value(const CriterionReport& r);
std::string criterion_csv_header();
std::string to_csv_row(const CriterionReport& r);

}  // namespace frontlab
