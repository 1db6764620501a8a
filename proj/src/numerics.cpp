// SPDX-License-Identifier: Apache-2.0
#include "frontlab/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace ode {

namespace odeint = boost::numeric::odeint;

Result integrate(const Rhs& rhs, const State2& y0, double direction, const Options& opt,
                 const std::vector<Event>& events) {
  using Stepper = odeint::runge_kutta_dopri5<State2>;
  const double dir = direction >= 0 ? 1.0 : -1.0;
  auto sys = [&](const State2& x, State2& dx, double) {
    dx = rhs(x);
    dx[0] *= dir;
    dx[1] *= dir;
  };
  auto dense = opt.max_dt > 0
                   ? odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dt, Stepper())
                   : odeint::make_dense_output(opt.abs_tol, opt.rel_tol, Stepper());
  Result res;
  dense.initialize(y0, 0.0, opt.dt0);
  res.samples.push_back({0.0, y0});

  std::vector<double> ev_prev(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) ev_prev[k] = events[k](y0);

  double next_out = opt.output_dt;
  State2 x;
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    std::pair<double, double> iv;
    try {
      iv = dense.do_step(sys);
    } catch (const std::exception&) {
      res.stop = Stop::StepLimit;
      return res;
    }
    const double s0 = iv.first;
    double s1 = iv.second;
    bool done = false;
    Stop reason = Stop::TimeLimit;
    int which = -1;
    if (s1 >= opt.t_max) {
      s1 = opt.t_max;
      done = true;
    }
    // earliest event inside [s0, s1]
    const State2& xe = dense.current_state();
    State2 x_end = xe;
    if (done) dense.calc_state(s1, x_end);
    const double s_end = s1;
    for (std::size_t k = 0; k < events.size(); ++k) {
      const double cur = events[k](x_end);
      if (ev_prev[k] == 0.0 || !(ev_prev[k] * cur <= 0.0)) continue;
      auto g = [&](double s) {
        State2 z;
        dense.calc_state(s, z);
        return events[k](z);
      };
      double se = find_root(g, s0, s_end, ev_prev[k], cur);
      if (se <= s1) {
        s1 = se;
        done = true;
        reason = Stop::Event;
        which = static_cast<int>(k);
      }
    }
    if (opt.output_dt > 0) {
      while (next_out < s1) {
        dense.calc_state(next_out, x);
        res.samples.push_back({dir * next_out, x});
        next_out += opt.output_dt;
      }
    }
    if (done) {
      dense.calc_state(s1, x);
      res.samples.push_back({dir * s1, x});
      res.stop = reason;
      res.event = which;
      return res;
    }
    if (opt.output_dt <= 0) res.samples.push_back({dir * s1, xe});
    for (std::size_t k = 0; k < events.size(); ++k) ev_prev[k] = events[k](xe);
  }
  res.stop = Stop::StepLimit;
  return res;
}

}  // namespace ode

namespace {

using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;

// Bisection with a round-off floor: a panel whose error estimate is at the level of
// eps * L1 is accepted, otherwise integrands vanishing at an end refine without end.
double gk_adapt(const std::function<double(double)>& f, double a, double b, double abs_tol,
                unsigned depth, double& err, double& l1) {
  double e = 0, l = 0;
  const double v = GK31::integrate(f, a, b, 0, 0.0, &e, &l);
  if (depth == 0 || e <= abs_tol || e <= 50 * std::numeric_limits<double>::epsilon() * l) {
    err += e;
    l1 += l;
    return v;
  }
  const double m = 0.5 * (a + b);
  return gk_adapt(f, a, m, 0.5 * abs_tol, depth - 1, err, l1) +
         gk_adapt(f, m, b, 0.5 * abs_tol, depth - 1, err, l1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 unsigned max_depth) {
  if (a == b) return 0.0;
  double err = 0.0, l1 = 0.0;
  double v = GK31::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (std::isfinite(v) && err <= tol * std::max(1.0, l1)) return v;
  const double abs_tol = tol * std::max(1.0, l1);
  err = l1 = 0.0;
  v = gk_adapt(f, a, b, abs_tol, max_depth, err, l1);
  if (!std::isfinite(v) ||
      (err > 1e3 * tol * std::max(1.0, l1) && err > 1e3 * std::numeric_limits<double>::epsilon() * l1)) {
    std::ostringstream os;
    os << "integral on [" << a << ", " << b << "] error estimate " << err;
    fail(ErrorKind::QuadratureNotConverged, os.str());
  }
  return v;
}

double find_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) fail(ErrorKind::RootFindingFailed, "root not bracketed");
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  std::uintmax_t iters = 200;
  auto tol = [xtol](double x, double y) {
    return std::fabs(x - y) <= std::max(xtol, 4 * std::numeric_limits<double>::epsilon() *
                                                    std::max(std::fabs(x), std::fabs(y)));
  };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

double find_root(const std::function<double(double)>& f, double a, double b, double xtol) {
  return find_root(f, a, b, f(a), f(b), xtol);
}

double hermite5(double s, double h, double y0, double d0, double dd0, double y1, double d1,
                double dd1) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h00 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h10 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h20 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double h01 = 10 * s3 - 15 * s4 + 6 * s5;
  const double h11 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h21 = 0.5 * (s3 - 2 * s4 + s5);
  return y0 * h00 + h * d0 * h10 + h * h * dd0 * h20 + y1 * h01 + h * d1 * h11 +
         h * h * dd1 * h21;
}

void HermiteCurve::push(double t, double y, double yd, double ydd, double yddd) {
  t_.push_back(t);
  y_.push_back(y);
  yd_.push_back(yd);
  ydd_.push_back(ydd);
  yddd_.push_back(yddd);
}

void HermiteCurve::reverse() {
  std::reverse(t_.begin(), t_.end());
  std::reverse(y_.begin(), y_.end());
  std::reverse(yd_.begin(), yd_.end());
  std::reverse(ydd_.begin(), ydd_.end());
  std::reverse(yddd_.begin(), yddd_.end());
}

void HermiteCurve::shift(double dt) {
  for (auto& t : t_) t += dt;
}

void HermiteCurve::append(const HermiteCurve& o, bool skip_first) {
  for (std::size_t i = skip_first ? 1 : 0; i < o.size(); ++i)
    push(o.t_[i], o.y_[i], o.yd_[i], o.ydd_[i], o.yddd_[i]);
}

std::size_t HermiteCurve::locate(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

double HermiteCurve::value(double t) const {
  if (t_.size() == 1) return y_[0];
  std::size_t i = locate(t);
  const double h = t_[i + 1] - t_[i];
  return hermite5((t - t_[i]) / h, h, y_[i], yd_[i], ydd_[i], y_[i + 1], yd_[i + 1], ydd_[i + 1]);
}

double HermiteCurve::deriv(double t) const {
  if (t_.size() == 1) return yd_[0];
  std::size_t i = locate(t);
  const double h = t_[i + 1] - t_[i];
  return hermite5((t - t_[i]) / h, h, yd_[i], ydd_[i], yddd_[i], yd_[i + 1], ydd_[i + 1],
                  yddd_[i + 1]);
}

double HermiteCurve::quad(const std::function<double(double, double, double)>& w) const {
  using GL = boost::math::quadrature::gauss<double, 8>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    const double a = t_[i], b = t_[i + 1], h = b - a;
    if (h == 0.0) continue;
    auto g = [&](double t) {
      const double s = (t - a) / h;
      const double y =
          hermite5(s, h, y_[i], yd_[i], ydd_[i], y_[i + 1], yd_[i + 1], ydd_[i + 1]);
      const double yd =
          hermite5(s, h, yd_[i], ydd_[i], yddd_[i], yd_[i + 1], ydd_[i + 1], yddd_[i + 1]);
      return w(t, y, yd);
    };
    total += GL::integrate(g, a, b);
  }
  return total;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& rhs) {
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  // Householder QR on a copy, column-major free form
  std::vector<std::vector<double>> a = rows;
  std::vector<double> b = rhs;
  const std::size_t m = a.size();
  if (m < n) fail(ErrorKind::InvalidArgument, "least squares: fewer rows than unknowns");
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += a[i][k] * a[i][k];
    norm = std::sqrt(norm);
    if (norm == 0.0) fail(ErrorKind::InvalidArgument, "least squares: rank deficient");
    const double alpha = a[k][k] > 0 ? -norm : norm;
    std::vector<double> v(m, 0.0);
    for (std::size_t i = k; i < m; ++i) v[i] = a[i][k];
    v[k] -= alpha;
    double vv = 0.0;
    for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * a[i][j];
      s = 2 * s / vv;
      for (std::size_t i = k; i < m; ++i) a[i][j] -= s * v[i];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i] * b[i];
    s = 2 * s / vv;
    for (std::size_t i = k; i < m; ++i) b[i] -= s * v[i];
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

}  // namespace frontlab
