// SPDX-License-Identifier: Apache-2.0
// Jump points, skeleton assembly and the small-tau speed selection.
#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

namespace {

// Piece of a manifold on which v is strictly monotone; q(v) by inverting v(X).
struct Segment {
  const SlowOrbit* orbit;
  std::size_t i0, i1;  // sample range, inclusive
  double v_lo, v_hi;

  double x_at(double v) const {
    const HermiteCurve& c = orbit->curve;
    const bool inc = c.y(i1) > c.y(i0);
    std::size_t a = i0, b = i1;
    while (b - a > 1) {
      const std::size_t mid = (a + b) / 2;
      if ((c.y(mid) < v) == inc) a = mid; else b = mid;
    }
    const double fa = c.y(a) - v, fb = c.y(b) - v;
    if (fa == 0.0) return c.t(a);
    if (fb == 0.0) return c.t(b);
    return find_root([&](double x) { return c.value(x) - v; }, c.t(a), c.t(b), fa, fb, 1e-15);
  }
  double q_at(double v) const { return orbit->curve.deriv(x_at(v)); }
};

std::vector<Segment> monotone_segments(const SlowOrbit& o) {
  std::vector<Segment> out;
  const HermiteCurve& c = o.curve;
  if (c.size() < 2) return out;
  std::size_t start = 0;
  auto close = [&](std::size_t end) {
    if (end <= start) return;
    const double a = c.y(start), b = c.y(end);
    if (a != b) out.push_back({&o, start, end, std::min(a, b), std::max(a, b)});
  };
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const double d0 = c.y(i) - c.y(i - 1), d1 = c.y(i + 1) - c.y(i);
    if (d0 * d1 < 0) {
      close(i);
      start = i;
    }
  }
  close(c.size() - 1);
  return out;
}

void dedupe(std::vector<JumpPoint>& v) {
  std::sort(v.begin(), v.end(),
            [](const JumpPoint& a, const JumpPoint& b) { return a.v_star < b.v_star; });
  std::vector<JumpPoint> out;
  for (const auto& j : v)
    if (out.empty() || std::fabs(j.v_star - out.back().v_star) > 1e-9 ||
        std::fabs(j.q_star - out.back().q_star) > 1e-9)
      out.push_back(j);
  v.swap(out);
}

std::vector<JumpPoint> validated(const Model& m, std::vector<JumpPoint> found) {
  dedupe(found);
  if (found.empty())
    fail(ErrorKind::NoIntersection, "slow saddle manifolds do not intersect transversally");
  const Interval w = intersect(m.window(Side::minus), m.window(Side::plus));
  std::vector<JumpPoint> ok;
  for (auto j : found) {
    if (!w.open_contains(j.v_star)) continue;
    j.u_star_minus = branch_solve(m, Side::minus, j.v_star);
    j.u_star_plus = branch_solve(m, Side::plus, j.v_star);
    ok.push_back(j);
  }
  if (ok.empty()) {
    std::ostringstream os;
    os << "jump point v=" << found.front().v_star << " lies outside the window overlap ("
       << w.lo << ", " << w.hi << ")";
    fail(ErrorKind::HiddenConditionViolated, os.str());
  }
  return ok;
}

std::vector<JumpPoint> jump_by_hamiltonian(const Model& m, const JumpSearchOptions& opt) {
  const HomogeneousState sm = background_state(m, Side::minus);
  const HomogeneousState sp = background_state(m, Side::plus);
  const double d = sp.v_bar > sm.v_bar ? 1.0 : -1.0;
  const Interval dm = m.domain(Side::minus), dp = m.domain(Side::plus);
  const int n = std::max(opt.grid, 8);
  std::vector<double> vs(n + 1), phm(n + 1, kNaN), php(n + 1, kNaN);
  for (int k = 0; k <= n; ++k) vs[k] = sm.v_bar + (sp.v_bar - sm.v_bar) * k / n;
  // minus leg from V-, plus leg backwards from V+, each valid while the potential stays negative
  for (int k = 1; k < n; ++k) {
    if (!dm.closed_contains(vs[k])) break;
    const double f = slow_potential(m, Side::minus, vs[k], sm.v_bar);
    if (!(f < 0)) break;
    phm[k] = f;
  }
  for (int k = n - 1; k > 0; --k) {
    if (!dp.closed_contains(vs[k])) break;
    const double f = slow_potential(m, Side::plus, vs[k], sp.v_bar);
    if (!(f < 0)) break;
    php[k] = f;
  }
  auto resid = [&](double v) {
    return slow_potential(m, Side::minus, v, sm.v_bar) - slow_potential(m, Side::plus, v, sp.v_bar);
  };
  std::vector<JumpPoint> found;
  auto add = [&](double v) {
    JumpPoint j;
    j.v_star = v;
    j.q_star = d * std::sqrt(std::max(0.0, -2 * slow_potential(m, Side::minus, v, sm.v_bar)));
    j.dir_unstable = static_cast<int>(d);
    j.dir_stable = static_cast<int>(-d);
    found.push_back(j);
  };
  for (int k = 1; k < n; ++k) {
    if (std::isnan(phm[k]) || std::isnan(php[k])) continue;
    const double r0 = phm[k] - php[k];
    if (r0 == 0.0) {
      add(vs[k]);
      continue;
    }
    if (k + 1 < n && !std::isnan(phm[k + 1]) && !std::isnan(php[k + 1])) {
      const double r1 = phm[k + 1] - php[k + 1];
      if (r0 * r1 < 0) add(find_root(resid, vs[k], vs[k + 1], r0, r1, opt.tol));
    }
  }
  return found;
}

std::vector<JumpPoint> jump_by_manifolds(const Model& m, double c_tilde,
                                         const JumpSearchOptions& opt) {
  const HomogeneousState sm = background_state(m, Side::minus);
  const HomogeneousState sp = background_state(m, Side::plus);
  const int d = sp.v_bar > sm.v_bar ? 1 : -1;
  ManifoldOptions mu, ms;
  mu.direction = d;
  ms.direction = -d;
  const SlowOrbit wu = saddle_manifold_orbit(m, Side::minus, ManifoldKind::unstable_of_minus,
                                             c_tilde, mu);
  const SlowOrbit ws = saddle_manifold_orbit(m, Side::plus, ManifoldKind::stable_of_plus,
                                             c_tilde, ms);
  std::vector<JumpPoint> found;
  const auto su = monotone_segments(wu), ss = monotone_segments(ws);
  const int n = std::max(opt.grid, 8);
  for (const auto& a : su) {
    for (const auto& b : ss) {
      const double lo = std::max(a.v_lo, b.v_lo), hi = std::min(a.v_hi, b.v_hi);
      if (!(lo < hi)) continue;
      auto gap = [&](double v) { return a.q_at(v) - b.q_at(v); };
      // stay clear of the segment ends, where the launch offset is still visible
      const double pad = 1e-9 * (hi - lo);
      double v0 = lo + pad, g0 = gap(v0);
      for (int k = 1; k <= n; ++k) {
        const double v1 = k == n ? hi - pad : lo + (hi - lo) * k / n;
        const double g1 = gap(v1);
        if (g0 == 0.0 || g0 * g1 < 0) {
          const double v = g0 == 0.0 ? v0 : find_root(gap, v0, v1, g0, g1, opt.tol);
          JumpPoint j;
          j.v_star = v;
          j.x_unstable = a.x_at(v);
          j.x_stable = b.x_at(v);
          j.q_star = 0.5 * (wu.curve.deriv(j.x_unstable) + ws.curve.deriv(j.x_stable));
          j.dir_unstable = d;
          j.dir_stable = -d;
          found.push_back(j);
        }
        v0 = v1;
        g0 = g1;
      }
    }
  }
  return found;
}

}  // namespace

std::vector<JumpPoint> find_jump_point(const Model& m, double c_tilde,
                                       const JumpSearchOptions& opt) {
  if (c_tilde == 0.0 && opt.use_hamiltonian) return validated(m, jump_by_hamiltonian(m, opt));
  return validated(m, jump_by_manifolds(m, c_tilde, opt));
}

FrontSkeleton assemble_skeleton(const ModelPtr& mp, double eps, const JumpPoint& jp,
                                double c_tilde) {
  const Model& m = *mp;
  FrontSkeleton sk;
  sk.model = mp;
  sk.regime = m.tau_regime();
  sk.eps = eps;
  sk.jump = jp;
  sk.state_minus = background_state(m, Side::minus);
  sk.state_plus = background_state(m, Side::plus);

  ManifoldOptions mu, ms;
  mu.direction = jp.dir_unstable;
  ms.direction = jp.dir_stable;
  if (std::isfinite(jp.x_unstable)) mu.x_limit = jp.x_unstable; else mu.stop_at_v = jp.v_star;
  if (std::isfinite(jp.x_stable)) ms.x_limit = jp.x_stable; else ms.stop_at_v = jp.v_star;
  sk.slow_minus =
      saddle_manifold_orbit(m, Side::minus, ManifoldKind::unstable_of_minus, c_tilde, mu);
  sk.slow_minus.curve.shift(-sk.slow_minus.x_back());
  sk.slow_plus = saddle_manifold_orbit(m, Side::plus, ManifoldKind::stable_of_plus, c_tilde, ms);
  sk.slow_plus.curve.shift(-sk.slow_plus.x_front());

  sk.fast = fast_jump(m, jp.v_star);
  if (sk.regime.small())
    sk.speed = c_tilde;
  else
    sk.speed = sk.fast.c_times_tau / sk.regime.value;
  return sk;
}

double default_c_tilde_max(const Model& m) {
  double g = 0.0;
  for (Side s : {Side::minus, Side::plus}) {
    const HomogeneousState st = background_state(m, s);
    g = std::max(g, std::fabs(slow_rhs_slope(m, s, st.v_bar)));
  }
  return 8.0 * std::sqrt(g);
}

namespace {

struct Node {
  double c;
  std::vector<JumpPoint> jumps;
  std::vector<double> resid;  // c tau_tilde - C(v*)
};

Node evaluate_node(const Model& m, double c, double tau_t) {
  Node n{c, {}, {}};
  try {
    n.jumps = find_jump_point(m, c);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoIntersection && e.kind() != ErrorKind::HiddenConditionViolated &&
        e.kind() != ErrorKind::EscapeWithoutEvent)
      throw;
    return n;
  }
  for (const auto& j : n.jumps) {
    double r = kNaN;
    try {
      r = c * tau_t - fast_jump(m, j.v_star).c_times_tau;
    } catch (const Error&) {
    }
    n.resid.push_back(r);
  }
  return n;
}

}  // namespace

std::vector<FrontSkeleton> build_front(const ModelPtr& mp, double eps, const BuildOptions& opt) {
  const Model& m = *mp;
  std::vector<FrontSkeleton> out;
  if (!m.tau_regime().small()) {
    for (const auto& j : find_jump_point(m, 0.0)) out.push_back(assemble_skeleton(mp, eps, j, 0.0));
    return out;
  }
  const double tau_t = m.tau_regime().value;
  const double cmax = std::isfinite(opt.c_tilde_max) ? opt.c_tilde_max : default_c_tilde_max(m);
  const int nn = std::max(opt.scan_nodes | 1, 3);
  std::vector<Node> nodes;
  for (int k = 0; k < nn; ++k) {
    const double c = k == nn / 2 ? 0.0 : -cmax + 2 * cmax * k / (nn - 1);
    nodes.push_back(evaluate_node(m, c, tau_t));
  }
  struct Root {
    double c, v;
  };
  std::vector<Root> roots;
  for (const auto& n : nodes)
    for (std::size_t j = 0; j < n.resid.size(); ++j)
      if (n.resid[j] == 0.0 || std::fabs(n.resid[j]) < 1e-13) roots.push_back({n.c, n.jumps[j].v_star});
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const Node &a = nodes[k], &b = nodes[k + 1];
    if (a.jumps.empty() || a.jumps.size() != b.jumps.size()) continue;
    for (std::size_t j = 0; j < a.jumps.size(); ++j) {
      const double ra = a.resid[j], rb = b.resid[j];
      if (!(ra * rb < 0)) continue;
      const double va = a.jumps[j].v_star, vb = b.jumps[j].v_star;
      double v_last = kNaN;
      auto resid = [&](double c) {
        const auto js = find_jump_point(m, c);
        const double guess = va + (vb - va) * (c - a.c) / (b.c - a.c);
        const JumpPoint* best = &js.front();
        for (const auto& x : js)
          if (std::fabs(x.v_star - guess) < std::fabs(best->v_star - guess)) best = &x;
        v_last = best->v_star;
        return c * tau_t - fast_jump(m, best->v_star).c_times_tau;
      };
      try {
        const double c = find_root(resid, a.c, b.c, ra, rb, 1e-14);
        resid(c);
        roots.push_back({c, v_last});
      } catch (const Error&) {
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.c < y.c; });
  std::vector<Root> uniq;
  for (const auto& r : roots)
    if (uniq.empty() || std::fabs(r.c - uniq.back().c) > 1e-8 || std::fabs(r.v - uniq.back().v) > 1e-8)
      uniq.push_back(r);
  for (const auto& r : uniq) {
    const auto js = find_jump_point(m, r.c);
    const JumpPoint* best = &js.front();
    for (const auto& x : js)
      if (std::fabs(x.v_star - r.v) < std::fabs(best->v_star - r.v)) best = &x;
    out.push_back(assemble_skeleton(mp, eps, *best, r.c));
  }
  if (out.empty()) fail(ErrorKind::NoSolution, "no speed on the scan grid satisfies the coupled relations");
  return out;
}

StationaryResiduals stationary_residuals(const Model& m) {
  const JumpPoint j = find_jump_point(m, 0.0).front();
  StationaryResiduals r;
  const double v = j.v_star;
  r.fast = integrate([&](double s) { return m.reaction(s, v).F; }, j.u_star_minus, j.u_star_plus,
                     1e-14);
  r.slow = slow_potential(m, Side::minus, v) - slow_potential(m, Side::plus, v);
  return r;
}

}  // namespace frontlab
