// SPDX-License-Identifier: Apache-2.0
// Front profiles on uniform grids: composed skeleton and Newton-refined travelling wave.
#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/banded.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

std::pair<double, double> composed_point(const FrontSkeleton& s, double xi) {
  const Model& m = *s.model;
  const bool left = xi < 0;
  const SlowOrbit& o = left ? s.slow_minus : s.slow_plus;
  const Side side = left ? Side::minus : Side::plus;
  const double v = o.v(s.eps * xi);
  const Interval d = m.domain(side);
  const double f = m.branch(side, std::min(std::max(v, d.lo), d.hi));
  const double t = std::min(1.0, std::fabs(xi) * std::sqrt(s.eps));
  const double w = t * t * (3 - 2 * t);
  const double u = s.fast.u(xi) + w * (f - (left ? s.fast.u_minus : s.fast.u_plus));
  return {u, v};
}

FrontProfile composed_profile(const FrontSkeleton& s, double x0, double h, std::size_t n) {
  FrontProfile p;
  p.x0 = x0;
  p.h = h;
  p.eps = s.eps;
  p.tau = s.tau();
  p.c = s.pde_speed();
  p.u.resize(n);
  p.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto uv = composed_point(s, p.x(i));
    p.u[i] = uv.first;
    p.v[i] = uv.second;
  }
  return p;
}

namespace {

struct NewtonSystem {
  const Model& m;
  const FrontProfile& p;
  Mirror mirror;

  int n() const { return static_cast<int>(p.size()); }
  // neighbour index with the ghost rule applied
  int left(int i) const { return i > 0 ? i - 1 : (mirror == Mirror::node ? 1 : 0); }
  int right(int i) const {
    const int last = n() - 1;
    return i < last ? i + 1 : (mirror == Mirror::node ? last - 1 : last);
  }

  void residual(std::vector<double>& r) const {
    const double h2 = 1.0 / (p.h * p.h), h1 = 0.5 / p.h, e2 = p.eps * p.eps;
    r.assign(2 * p.size(), 0.0);
    for (int i = 0; i < n(); ++i) {
      const int a = left(i), b = right(i);
      const Reaction fg = m.reaction(p.u[i], p.v[i]);
      r[2 * i] = (p.u[b] - 2 * p.u[i] + p.u[a]) * h2 + p.c * p.tau * (p.u[b] - p.u[a]) * h1 + fg.F;
      r[2 * i + 1] =
          (p.v[b] - 2 * p.v[i] + p.v[a]) * h2 + e2 * p.c * (p.v[b] - p.v[a]) * h1 + e2 * fg.G;
    }
  }

  void jacobian(BandedMatrix<double>& J, std::vector<double>& dc) const {
    const double h2 = 1.0 / (p.h * p.h), h1 = 0.5 / p.h, e2 = p.eps * p.eps;
    J.set_zero();
    dc.assign(2 * p.size(), 0.0);
    const double ku = p.c * p.tau * h1, kv = e2 * p.c * h1;
    for (int i = 0; i < n(); ++i) {
      const int a = left(i), b = right(i);
      const Jacobian jac = m.jacobian(p.u[i], p.v[i]);
      J.at(2 * i, 2 * a) += h2 - ku;
      J.at(2 * i, 2 * b) += h2 + ku;
      J.at(2 * i, 2 * i) += -2 * h2 + jac.Fu;
      J.at(2 * i, 2 * i + 1) += jac.Fv;
      J.at(2 * i + 1, 2 * a + 1) += h2 - kv;
      J.at(2 * i + 1, 2 * b + 1) += h2 + kv;
      J.at(2 * i + 1, 2 * i + 1) += -2 * h2 + e2 * jac.Gv;
      J.at(2 * i + 1, 2 * i) += e2 * jac.Gu;
      dc[2 * i] = p.tau * (p.u[b] - p.u[a]) * h1;
      dc[2 * i + 1] = e2 * (p.v[b] - p.v[a]) * h1;
    }
  }
};

double max_abs(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::fabs(v));
  return s;
}

}  // namespace

FrontProfile refine_front(const Model& m, FrontProfile p, double u_pin, double x_pin,
                          const NewtonOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (n < 8) fail(ErrorKind::InvalidArgument, "profile grid too small");
  // pin the linear interpolant between nodes ic and ic + 1
  const double xp = std::clamp((x_pin - p.x0) / p.h, 0.0, n - 1.0);
  const int ic = std::min(static_cast<int>(std::floor(xp)), n - 2);
  const double th = xp - ic;
  auto pinned = [&](const std::vector<double>& x, int stride, int off) {
    return (1 - th) * x[stride * ic + off] + th * x[stride * (ic + 1) + off];
  };
  NewtonSystem sys{m, p, opt.mirror};
  BandedMatrix<double> J(2 * n, 2, 2);
  std::vector<double> r, b, z, w;
  sys.residual(r);
  double rn = std::max(max_abs(r), std::fabs(pinned(p.u, 1, 0) - u_pin));
  int it = 0;
  for (; it < opt.max_iter && rn > opt.tol; ++it) {
    sys.jacobian(J, b);
    J.factor();
    z = r;
    for (double& x : z) x = -x;
    J.solve(z);
    w = b;
    J.solve(w);
    const double rp = pinned(p.u, 1, 0) - u_pin;
    const double dc = (pinned(z, 2, 0) + rp) / pinned(w, 2, 0);
    // damped update, halving until the residual decreases
    const FrontProfile base = p;
    double step = 1.0, rn_new = rn;
    for (int k = 0; k < 30; ++k) {
      for (int i = 0; i < n; ++i) {
        p.u[i] = base.u[i] + step * (z[2 * i] - dc * w[2 * i]);
        p.v[i] = base.v[i] + step * (z[2 * i + 1] - dc * w[2 * i + 1]);
      }
      p.c = base.c + step * dc;
      sys.residual(r);
      rn_new = std::max(max_abs(r), std::fabs(pinned(p.u, 1, 0) - u_pin));
      if (std::isfinite(rn_new) && rn_new < rn) break;
      step *= 0.5;
    }
    if (!(rn_new < rn)) {
      p = base;
      break;
    }
    rn = rn_new;
  }
  if (!(rn <= opt.tol)) {
    std::ostringstream os;
    os << "front Newton iteration stalled at residual " << rn << " after " << it << " steps";
    fail(ErrorKind::NoConvergence, os.str());
  }
  p.refined = true;
  p.newton_iterations = it;
  p.residual = rn;
  return p;
}

double default_half_length(const FrontSkeleton& s) {
  const double k = std::min(std::fabs(s.slow_minus.rate), std::fabs(s.slow_plus.rate));
  return 8.0 / (s.eps * k);
}

FrontProfile front_profile(const FrontSkeleton& s, const GridSpec& g) {
  const double width = fast_width(s.fast);
  if (g.h > std::min(0.2, width / 20)) {
    std::ostringstream os;
    os << "grid spacing " << g.h << " does not resolve the fast jump (width " << width << ")";
    fail(ErrorKind::GridTooCoarse, os.str());
  }
  double L = std::isfinite(g.half_length) ? g.half_length : default_half_length(s);
  std::size_t n = 2 * static_cast<std::size_t>(std::llround(L / g.h)) + 1;
  if (n > g.max_points) n = g.max_points | 1;
  L = 0.5 * g.h * static_cast<double>(n - 1);
  FrontProfile p = composed_profile(s, -L, g.h, n);
  if (!g.refine) return p;
  NewtonOptions no;
  no.mirror = Mirror::node;
  return refine_front(*s.model, p, s.fast.u_mid(), 0.0, no);
}

}  // namespace frontlab
