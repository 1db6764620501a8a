// SPDX-License-Identifier: Apache-2.0
#include "frontlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::TransversallyUnstable: return "TransversallyUnstable";
    case Verdict::LongWaveStable: return "LongWaveStable";
    case Verdict::Degenerate: return "Degenerate";
  }
  return "?";
}

namespace {

// Integral of w(u, p) exp(k xi) over the fast jump; w behaves like p^power at both ends.
double fast_weighted(const FastJump& fj, int power, const std::function<double(double, double)>& w) {
  const double k = fj.c_times_tau;
  const double rl = power * fj.rate_left + k, rr = power * fj.rate_right + k;
  if (!(rl > 0) || !(rr < 0))
    fail(ErrorKind::QuadratureNotConverged, "weighted fast integrand does not decay at both ends");
  auto f = [&](double xi) { return w(fj.u(xi), fj.p(xi)) * std::exp(k * xi); };
  const double a = fj.curve.t_front(), b = fj.curve.t_back();
  double core;
  if (fj.closed_form)
    core = integrate(f, a, 0.0, 1e-14) + integrate(f, 0.0, b, 1e-14);
  else
    core = fj.curve.quad([&](double xi, double u, double p) { return w(u, p) * std::exp(k * xi); });
  return core + f(a) / rl - f(b) / rr;
}

double slow_weighted(const SlowOrbit& o) {
  const double c = o.c_tilde;
  const double r = 2 * o.rate + c;
  auto f = [&](double X) {
    const double q = o.q(X);
    return q * q * std::exp(c * X);
  };
  double core = o.curve.quad([c](double X, double, double q) { return q * q * std::exp(c * X); });
  if (o.tail_left) {
    if (!(r > 0)) fail(ErrorKind::QuadratureNotConverged, "slow tail does not decay");
    return core + f(o.x_front()) / r;
  }
  if (!(r < 0)) fail(ErrorKind::QuadratureNotConverged, "slow tail does not decay");
  return core - f(o.x_back()) / r;
}

double g_scale(const FrontSkeleton& s) {
  const Model& m = *s.model;
  const double v = s.jump.v_star;
  return std::max({1.0, std::fabs(m.reaction(s.fast.u_plus, v).G),
                   std::fabs(m.reaction(s.fast.u_minus, v).G)});
}

}  // namespace

double f_star(const FrontSkeleton& s) {
  const Model& m = *s.model;
  const double v = s.jump.v_star;
  return fast_weighted(s.fast, 1, [&](double u, double p) { return m.jacobian(u, v).Fv * p; });
}

double g_star(const FrontSkeleton& s) {
  const Model& m = *s.model;
  const double v = s.jump.v_star;
  return m.reaction(s.fast.u_plus, v).G - m.reaction(s.fast.u_minus, v).G;
}

double i_fast(const FrontSkeleton& s) {
  return fast_weighted(s.fast, 2, [](double, double p) { return p * p; });
}

double i_slow(const FrontSkeleton& s) { return slow_weighted(s.slow_minus) + slow_weighted(s.slow_plus); }

double lambda2c(const FrontSkeleton& s, double eps) {
  const double g = g_star(s);
  if (std::fabs(g) < 1e-8 * g_scale(s))
    fail(ErrorKind::DegenerateGStar, "G(u+, v*) and G(u-, v*) coincide");
  const double tau = s.regime.value;
  return -(1.0 / (eps * tau)) * (f_star(s) / g) * (i_slow(s) / i_fast(s));
}

double m_star(const FrontSkeleton& s, double tau_tilde) {
  return f_star(s) * i_slow(s) + tau_tilde * g_star(s) * i_fast(s);
}

double lambda2c_small_tau(const FrontSkeleton& s, double tau_tilde, double eps) {
  const double a = f_star(s) * i_slow(s), b = tau_tilde * g_star(s) * i_fast(s);
  const double m = a + b;
  if (std::fabs(m) < 1e-8 * (std::fabs(a) + std::fabs(b)) || m == 0.0)
    fail(ErrorKind::DegenerateMStar, "Melnikov denominator vanishes");
  return -(1.0 / (eps * eps)) * a / m;
}

CriterionReport criterion_report(const FrontSkeleton& s) {
  CriterionReport r;
  r.small_tau = s.regime.small();
  r.eps = s.eps;
  r.tau = s.regime.value;
  r.speed = s.speed;
  r.v_star = s.jump.v_star;
  r.f_star = f_star(s);
  r.g_star = g_star(s);
  r.i_fast = i_fast(s);
  r.i_slow = i_slow(s);
  const double eps = s.eps;
  if (!r.small_tau) {
    if (std::fabs(r.g_star) < 1e-8 * g_scale(s)) {
      r.lambda2c = r.lambda2c_scaled = kNaN;
      r.verdict = Verdict::Degenerate;
      return r;
    }
    r.lambda2c_scaled = -(r.f_star / r.g_star) * (r.i_slow / r.i_fast);
    r.lambda2c = r.lambda2c_scaled / (eps * r.tau);
  } else {
    const double a = r.f_star * r.i_slow, b = r.tau * r.g_star * r.i_fast;
    r.m_star = a + b;
    if (r.g_star * r.i_fast != 0.0) r.tau_tilde_star = -a / (r.g_star * r.i_fast);
    if (std::fabs(a + b) < 1e-8 * (std::fabs(a) + std::fabs(b)) || a + b == 0.0) {
      r.lambda2c = r.lambda2c_scaled = kNaN;
      r.verdict = Verdict::Degenerate;
      return r;
    }
    r.lambda2c_scaled = -a / (a + b);
    r.lambda2c = r.lambda2c_scaled / (eps * eps);
  }
  r.verdict = r.lambda2c > 0 ? Verdict::TransversallyUnstable : Verdict::LongWaveStable;
  return r;
}

double k_integral(int i, int j) {
  if (i < 0 || j < 1) fail(ErrorKind::InvalidArgument, "k_integral needs i >= 0 and j >= 1");
  auto f = [i, j](double s) { return std::pow(s, i) * std::pow(1.0 / std::cosh(s), j); };
  return integrate(f, -40.0, 0.0, 1e-15) + integrate(f, 0.0, 40.0, 1e-15);
}

BifurcatingWaveReport fhn_bifurcating_wave_report(double mu1, double mu2, double mu3,
                                                  double tau_hat, double delta, double eps) {
  if (!(mu1 > mu2) || !(mu3 > mu2) || !(tau_hat > 0) || !(delta > 0))
    fail(ErrorKind::InvalidArgument, "bifurcating wave report needs mu1 > mu2, mu3 > mu2, "
                                     "tau_hat > 0, delta > 0");
  const double d = mu1 - mu2, s = mu3 - mu2;
  BifurcatingWaveReport out;
  out.tau_tilde_star = s / (d * std::sqrt(2 * d));
  out.tau_tilde = out.tau_tilde_star - delta * delta * tau_hat;
  const double root = std::sqrt(s * std::sqrt(2 * d));
  out.c_hat = 4 * std::pow(d, 1.5) * std::sqrt(tau_hat) / root;
  out.v_hat1 = 2 * std::sqrt(tau_hat) / root;

  const double k24 = k_integral(2, 4), d2 = delta * delta;
  CriterionReport& e = out.expansion;
  e.small_tau = true;
  e.eps = eps;
  e.tau = out.tau_tilde;
  e.speed = delta * out.c_hat;
  e.v_star = delta * out.v_hat1;
  e.i_fast = 2.0 / 3.0 * std::sqrt(2.0) + 4 * s * k24 * tau_hat * d2 / std::sqrt(d);
  e.f_star = -4.0 / 3.0 * s - 4 * std::sqrt(2.0) * s * s * k24 * tau_hat * d2 / std::sqrt(d);
  e.g_star = 2.0;
  e.i_slow = std::pow(d, -1.5) - 3 * std::sqrt(2.0) * tau_hat * d2 / s;
  e.m_star = 8.0 / 3.0 * std::sqrt(2.0) * tau_hat * d2;
  e.tau_tilde_star = out.tau_tilde_star;
  e.lambda2c = s / (2 * eps * eps * d2 * tau_hat * d * std::sqrt(2 * d));
  e.lambda2c_scaled = e.lambda2c * eps * eps;
  e.verdict = e.lambda2c > 0 ? Verdict::TransversallyUnstable : Verdict::LongWaveStable;

  auto model = make_model("fhn", {{"mu1", mu1}, {"mu2", mu2}, {"mu3", mu3}, {"a", 1.0}, {"c0", 0.0}},
                          TauRegime{TauKind::OrderEps, out.tau_tilde});
  BuildOptions bo;
  bo.c_tilde_max = std::max(4 * delta * out.c_hat, 1e-3);
  const auto fronts = build_front(model, eps, bo);
  const FrontSkeleton* best = nullptr;
  for (const auto& f : fronts)
    if (f.speed > 0 && (!best || f.speed > best->speed)) best = &f;
  if (!best) fail(ErrorKind::NoSolution, "no travelling branch found near the bifurcation");
  out.numerical = criterion_report(*best);
  return out;
}

std::string to_key_value(const CriterionReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "regime = " << (r.small_tau ? "order_eps" : "order_one") << "\n";
  os << "eps = " << r.eps << "\n";
  os << (r.small_tau ? "tau_tilde = " : "tau = ") << r.tau << "\n";
  os << "speed = " << r.speed << "\n";
  os << "v_star = " << r.v_star << "\n";
  os << "f_star = " << r.f_star << "\n";
  os << "g_star = " << r.g_star << "\n";
  os << "i_fast = " << r.i_fast << "\n";
  os << "i_slow = " << r.i_slow << "\n";
  if (r.m_star) os << "m_star = " << *r.m_star << "\n";
  if (r.tau_tilde_star) os << "tau_tilde_star = " << *r.tau_tilde_star << "\n";
  os << "lambda2c = " << r.lambda2c << "\n";
  os << "lambda2c_scaled = " << r.lambda2c_scaled << "\n";
  os << "verdict = " << to_string(r.verdict) << "\n";
  return os.str();
}

std::string criterion_csv_header() {
  return "regime,eps,tau,speed,v_star,f_star,g_star,i_fast,i_slow,m_star,tau_tilde_star,"
         "lambda2c,lambda2c_scaled,verdict";
}

std::string to_csv_row(const CriterionReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (r.small_tau ? "order_eps" : "order_one") << ',' << r.eps << ',' << r.tau << ','
     << r.speed << ',' << r.v_star << ',' << r.f_star << ',' << r.g_star << ',' << r.i_fast << ','
     << r.i_slow << ',';
  if (r.m_star) os << *r.m_star;
  os << ',';
  if (r.tau_tilde_star) os << *r.tau_tilde_star;
  os << ',' << r.lambda2c << ',' << r.lambda2c_scaled << ',' << to_string(r.verdict);
  return os.str();
}

}  // namespace frontlab
