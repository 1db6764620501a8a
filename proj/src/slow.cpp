// SPDX-License-Identifier: Apache-2.0
// Slow reduced flows v_XX + c v_X + G(f(v), v) = 0 on the two slow manifolds.
#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

namespace {

double clamp_to(const Interval& d, double v) { return std::min(std::max(v, d.lo), d.hi); }

Side other(Side s) { return s == Side::minus ? Side::plus : Side::minus; }

}  // namespace

double SlowOrbit::v(double X) const {
  if (X < x_front()) {
    const double v0 = curve.y(0);
    return tail_left ? v_bar + (v0 - v_bar) * std::exp(rate * (X - x_front())) : v0;
  }
  if (X > x_back()) {
    const double v1 = curve.y(curve.size() - 1);
    return tail_left ? v1 : v_bar + (v1 - v_bar) * std::exp(rate * (X - x_back()));
  }
  return curve.value(X);
}

double SlowOrbit::q(double X) const {
  if (X < x_front()) {
    return tail_left ? rate * (curve.y(0) - v_bar) * std::exp(rate * (X - x_front()))
                     : curve.yd(0);
  }
  if (X > x_back()) {
    const std::size_t n = curve.size() - 1;
    return tail_left ? curve.yd(n) : rate * (curve.y(n) - v_bar) * std::exp(rate * (X - x_back()));
  }
  return curve.deriv(X);
}

std::vector<std::array<double, 3>> SlowOrbit::samples() const {
  std::vector<std::array<double, 3>> out;
  out.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) out.push_back({curve.t(i), curve.y(i), curve.yd(i)});
  return out;
}

double slow_potential(const Model& m, Side side, double v, double v_bar) {
  const Interval d = m.domain(side);
  if (!d.closed_contains(v)) {
    std::ostringstream os;
    os << "slow potential: v=" << v << " outside the " << to_string(side) << " branch domain";
    fail(ErrorKind::OutOfWindow, os.str());
  }
  return integrate([&](double x) { return slow_rhs(m, side, x); }, v_bar, v, 1e-13);
}

double slow_potential(const Model& m, Side side, double v) {
  return slow_potential(m, side, v, background_state(m, side).v_bar);
}

double slow_hamiltonian(const Model& m, Side side, double v, double q) {
  if (!m.window(side).closed_contains(v)) {
    std::ostringstream os;
    os << "slow Hamiltonian: v=" << v << " outside the " << to_string(side) << " window";
    fail(ErrorKind::OutOfWindow, os.str());
  }
  return 0.5 * q * q + slow_potential(m, side, v);
}

SlowOrbit saddle_manifold_orbit(const Model& m, Side side, ManifoldKind which, double c_tilde,
                                const ManifoldOptions& opt) {
  if (side == Side::center) fail(ErrorKind::InvalidArgument, "no slow flow on the middle branch");
  const HomogeneousState s = background_state(m, side);
  const double gp = slow_rhs_slope(m, side, s.v_bar);
  if (!(gp < 0)) fail(ErrorKind::SaddleMissing, "background state is not a saddle of the slow flow");
  const double disc = std::sqrt(c_tilde * c_tilde - 4 * gp);
  const bool unstable = which == ManifoldKind::unstable_of_minus;
  const double nu = unstable ? 0.5 * (-c_tilde + disc) : 0.5 * (-c_tilde - disc);

  const HomogeneousState o = background_state(m, other(side));
  const double span = std::max(std::fabs(o.v_bar - s.v_bar), 1e-3);
  int dir = opt.direction;
  if (dir == 0) dir = o.v_bar > s.v_bar ? 1 : -1;

  const double norm = std::sqrt(1 + nu * nu);
  const State2 y0{s.v_bar + dir * opt.offset / norm, dir * opt.offset * nu / norm};

  const Interval dom = m.domain(side);
  auto rhs = [&](const State2& y) -> State2 {
    const double v = clamp_to(dom, y[0]);
    return {y[1], -slow_rhs(m, side, v) - c_tilde * y[1]};
  };

  const double lo = std::min(s.v_bar, o.v_bar) - 3 * span;
  const double hi = std::max(s.v_bar, o.v_bar) + 3 * span;
  const double qcap = 1e3 * std::max(1.0, span * std::sqrt(-gp));
  std::vector<ode::Event> events;
  if (std::isfinite(dom.lo)) events.push_back([&](const State2& y) { return y[0] - dom.lo; });
  if (std::isfinite(dom.hi)) events.push_back([&](const State2& y) { return dom.hi - y[0]; });
  const bool capped = std::isfinite(opt.x_limit);
  if (!capped) {
    events.push_back([&](const State2& y) { return y[0] - lo; });
    events.push_back([&](const State2& y) { return hi - y[0]; });
    events.push_back([&](const State2& y) { return qcap - std::fabs(y[1]); });
  }
  const std::size_t target_event = events.size();
  if (opt.stop_at_v) {
    const double vs = *opt.stop_at_v;
    events.push_back([vs](const State2& y) { return y[0] - vs; });
  }

  ode::Options o_opt;
  o_opt.abs_tol = opt.tol;
  o_opt.rel_tol = opt.tol;
  o_opt.max_dt = opt.max_dx;
  o_opt.dt0 = 1e-3;
  o_opt.t_max = capped ? std::fabs(opt.x_limit) : 60.0 * std::log(1e8) / std::fabs(nu) + 200.0;
  const ode::Result r = ode::integrate(rhs, y0, unstable ? 1.0 : -1.0, o_opt, events);
  if (opt.stop_at_v && !(r.stop == ode::Stop::Event && r.event == static_cast<int>(target_event))) {
    std::ostringstream os;
    os << to_string(side) << " saddle manifold left the search region before reaching v="
       << *opt.stop_at_v;
    fail(ErrorKind::EscapeWithoutEvent, os.str());
  }

  SlowOrbit orbit;
  orbit.side = side;
  orbit.c_tilde = c_tilde;
  orbit.v_bar = s.v_bar;
  orbit.rate = nu;
  orbit.tail_left = unstable;
  for (const auto& smp : r.samples) {
    const double v = clamp_to(dom, smp.y[0]);
    const double q = smp.y[1];
    const double qx = -slow_rhs(m, side, v) - c_tilde * q;
    const double qxx = -slow_rhs_slope(m, side, v) * q - c_tilde * qx;
    orbit.curve.push(smp.t, smp.y[0], q, qx, qxx);
  }
  if (!unstable) orbit.curve.reverse();
  return orbit;
}

}  // namespace frontlab
