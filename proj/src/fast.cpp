// SPDX-License-Identifier: Apache-2.0
// Fast heteroclinic u'' + k u' + F(u, v0) = 0 between the outer branches.
#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

double FastJump::u(double xi) const {
  if (closed_form) {
    const auto& c = *closed_form;
    const double d = c.beta_plus - c.beta_minus;
    const double w = 0.25 * std::sqrt(2 * c.alpha) * std::fabs(d);
    return 0.5 * (c.beta_plus + c.beta_minus) + 0.5 * d * std::tanh(w * xi);
  }
  if (xi < curve.t_front())
    return u_minus + (curve.y(0) - u_minus) * std::exp(rate_left * (xi - curve.t_front()));
  if (xi > curve.t_back()) {
    const std::size_t n = curve.size() - 1;
    return u_plus + (curve.y(n) - u_plus) * std::exp(rate_right * (xi - curve.t_back()));
  }
  return curve.value(xi);
}

double FastJump::p(double xi) const {
  if (closed_form) {
    const auto& c = *closed_form;
    const double d = c.beta_plus - c.beta_minus;
    const double w = 0.25 * std::sqrt(2 * c.alpha) * std::fabs(d);
    const double sh = 1.0 / std::cosh(w * xi);
    return 0.5 * d * w * sh * sh;
  }
  if (xi < curve.t_front())
    return rate_left * (curve.y(0) - u_minus) * std::exp(rate_left * (xi - curve.t_front()));
  if (xi > curve.t_back()) {
    const std::size_t n = curve.size() - 1;
    return rate_right * (curve.y(n) - u_plus) * std::exp(rate_right * (xi - curve.t_back()));
  }
  return curve.deriv(xi);
}

std::vector<std::array<double, 3>> FastJump::samples() const {
  std::vector<std::array<double, 3>> out;
  out.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) out.push_back({curve.t(i), curve.y(i), curve.yd(i)});
  return out;
}

namespace {

// Closed form with either orientation of the outer roots.
FastJump cubic_jump(double alpha, double bm, double bc, double bp) {
  FastJump fj;
  const double d = bp - bm;
  const double s = d > 0 ? 1.0 : -1.0;
  const double w = 0.25 * std::sqrt(2 * alpha) * std::fabs(d);
  fj.c_times_tau = s * std::sqrt(2 * alpha) * (bc - 0.5 * (bp + bm));
  fj.u_minus = bm;
  fj.u_plus = bp;
  fj.rate_left = 2 * w;
  fj.rate_right = -2 * w;
  fj.closed_form = CubicClosedForm{0.5 * std::sqrt(2 * alpha), alpha, bm, bc, bp};
  const double half = 18.0 / w;
  const double h = 0.02 / w;
  const int n = static_cast<int>(std::ceil(2 * half / h));
  for (int i = 0; i <= n; ++i) {
    const double xi = -half + 2 * half * i / n;
    const double th = std::tanh(w * xi), sh2 = 1.0 - th * th;
    const double u = 0.5 * (bp + bm) + 0.5 * d * th;
    const double p = 0.5 * d * w * sh2;
    const double px = -d * w * w * sh2 * th;
    const double pxx = 0.5 * d * w * w * w * (4 * sh2 * th * th - 2 * sh2 * sh2);
    fj.curve.push(xi, u, p, px, pxx);
  }
  return fj;
}

struct Shot {
  bool reached = false;
  double p = 0.0;  // oriented momentum at the section
  ode::Result run;
};

}  // namespace

FastJump cubic_heteroclinic(double alpha, double beta_minus, double beta_c, double beta_plus) {
  if (!(alpha > 0)) fail(ErrorKind::InvalidArgument, "cubic heteroclinic needs alpha > 0");
  if (!(beta_minus < beta_c && beta_c < beta_plus))
    fail(ErrorKind::OrderViolated, "cubic roots must satisfy beta_minus < beta_c < beta_plus");
  return cubic_jump(alpha, beta_minus, beta_c, beta_plus);
}

FastJump fast_speed_shoot(const Model& m, double v0, double tol) {
  const double um = branch_solve(m, Side::minus, v0);
  const double up = branch_solve(m, Side::plus, v0);
  const double fum = m.jacobian(um, v0).Fu, fup = m.jacobian(up, v0).Fu;
  if (!(fum < 0) || !(fup < 0)) {
    std::ostringstream os;
    os << "fast equilibria are not saddles at v=" << v0 << " (F_u = " << fum << ", " << fup << ")";
    fail(ErrorKind::NotSaddle, os.str());
  }
  if (um == up) fail(ErrorKind::NotSaddle, "outer branches coincide");
  const double d = up > um ? 1.0 : -1.0;
  const double umid = 0.5 * (um + up);
  const double delta = 1e-7 * std::fabs(up - um);

  double fu_max = 0.0;
  for (int i = 0; i <= 200; ++i)
    fu_max = std::max(fu_max, std::fabs(m.jacobian(um + (up - um) * i / 200.0, v0).Fu));
  const double scale = std::sqrt(2 * fu_max);

  auto shoot = [&](double k, bool from_minus, double max_dt) {
    auto rhs = [&m, v0, k](const State2& y) -> State2 {
      return {y[1], -m.reaction(y[0], v0).F - k * y[1]};
    };
    State2 y0;
    if (from_minus) {
      const double mu = 0.5 * (-k + std::sqrt(k * k - 4 * fum));
      y0 = {um + d * delta, d * delta * mu};
    } else {
      const double mu = 0.5 * (-k - std::sqrt(k * k - 4 * fup));
      y0 = {up - d * delta, -d * delta * mu};
    }
    std::vector<ode::Event> ev{[&](const State2& y) { return d * (y[0] - umid); },
                               [&](const State2& y) { return d * y[1]; }};
    ode::Options o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-12;
    o.max_dt = max_dt;
    o.dt0 = 1e-3 / std::max(1.0, scale);
    o.t_max = 1e4;
    Shot s;
    s.run = ode::integrate(rhs, y0, from_minus ? 1.0 : -1.0, o, ev);
    if (s.run.stop == ode::Stop::Event && s.run.event == 0) {
      s.reached = true;
      s.p = d * s.run.samples.back().y[1];
    }
    return s;
  };
  auto gap = [&](double k) { return shoot(k, true, 0.0).p - shoot(k, false, 0.0).p; };

  double lo = -scale, hi = scale;
  double glo = gap(lo), ghi = gap(hi);
  for (int it = 0; it < 60 && !(glo > 0 && ghi < 0); ++it) {
    if (!(glo > 0)) {
      lo *= 2;
      glo = gap(lo);
    }
    if (!(ghi < 0)) {
      hi *= 2;
      ghi = gap(hi);
    }
  }
  if (!(glo > 0 && ghi < 0)) {
    std::ostringstream os;
    os << "no sign change of the shooting gap on [" << lo << ", " << hi << "] at v=" << v0;
    fail(ErrorKind::BisectionBracketFailed, os.str());
  }
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (g == 0.0) {
      lo = hi = mid;
      break;
    }
    (g > 0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);

  FastJump fj;
  fj.c_times_tau = k;
  fj.v0 = v0;
  fj.u_minus = um;
  fj.u_plus = up;
  fj.rate_left = 0.5 * (-k + std::sqrt(k * k - 4 * fum));
  fj.rate_right = 0.5 * (-k - std::sqrt(k * k - 4 * fup));

  const double hmax = 0.02 / std::max(1.0, scale);
  Shot a = shoot(k, true, hmax);
  Shot b = shoot(k, false, hmax);
  if (!a.reached || !b.reached)
    fail(ErrorKind::NoConvergence, "converged friction does not connect the fast saddles");
  auto push = [&](HermiteCurve& c, const ode::Sample& s) {
    const double u = s.y[0], p = s.y[1];
    const Jacobian jac = m.jacobian(u, v0);
    const double px = -m.reaction(u, v0).F - k * p;
    c.push(s.t, u, p, px, -jac.Fu * p - k * px);
  };
  HermiteCurve left, right;
  for (const auto& s : a.run.samples) push(left, s);
  left.shift(-left.t_back());
  for (const auto& s : b.run.samples) push(right, s);
  right.reverse();
  right.shift(-right.t_front());
  fj.curve = left;
  fj.curve.append(right, true);
  return fj;
}

double fast_width(const FastJump& fj) {
  return 2.0 / std::max(std::fabs(fj.rate_left), std::fabs(fj.rate_right));
}

FastJump fast_jump(const Model& m, double v0) {
  if (auto c = m.cubic(v0)) {
    const double um = branch_solve(m, Side::minus, v0);
    const double up = branch_solve(m, Side::plus, v0);
    const double sc = std::max(1.0, std::fabs(up - um));
    const bool between = (c->beta_c - c->beta_minus) * (c->beta_plus - c->beta_c) > 0;
    if (between && std::fabs(c->beta_minus - um) < 1e-12 * sc &&
        std::fabs(c->beta_plus - up) < 1e-12 * sc && c->alpha > 0) {
      FastJump fj = cubic_jump(c->alpha, c->beta_minus, c->beta_c, c->beta_plus);
      fj.v0 = v0;
      return fj;
    }
  }
  return fast_speed_shoot(m, v0);
}

}  // namespace frontlab
