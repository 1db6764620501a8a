// SPDX-License-Identifier: Apache-2.0
#include "frontlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "frontlab/criteria.hpp"
#include "frontlab/errors.hpp"

namespace frontlab {

const char* to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

OperatorAssembly assemble(const Model& m, const FrontProfile& p, double ell, Boundary bc) {
  const int n = static_cast<int>(p.size());
  if (n < 3) fail(ErrorKind::InvalidArgument, "operator grid too small");
  OperatorAssembly a;
  a.profile = p;
  a.ell = ell;
  a.boundary = bc;
  a.K = BandedMatrix<double>(2 * n, 2, 2);
  a.mass.assign(2 * n, 0.0);
  a.translation.assign(2 * n, 0.0);
  const double h2 = 1.0 / (p.h * p.h), h1 = 0.5 / p.h, e2 = p.eps * p.eps, l2 = ell * ell;
  const double ku = p.c * p.tau * h1, kv = e2 * p.c * h1;
  auto add = [&](int row, int col_node, int comp, double val) {
    if (col_node < 0 || col_node >= n) {
      if (bc == Boundary::Dirichlet) return;
      col_node = col_node < 0 ? 1 : n - 2;
    }
    a.K.at(row, 2 * col_node + comp) += val;
  };
  for (int i = 0; i < n; ++i) {
    const Jacobian j = m.jacobian(p.u[i], p.v[i]);
    const int ru = 2 * i, rv = 2 * i + 1;
    add(ru, i - 1, 0, h2 - ku);
    add(ru, i + 1, 0, h2 + ku);
    add(ru, i, 0, -2 * h2 + j.Fu - l2);
    add(ru, i, 1, j.Fv);
    add(rv, i - 1, 1, h2 - kv);
    add(rv, i + 1, 1, h2 + kv);
    add(rv, i, 1, -2 * h2 + e2 * j.Gv - l2);
    add(rv, i, 0, e2 * j.Gu);
    a.mass[ru] = p.tau;
    a.mass[rv] = e2;
    const int il = std::max(i - 1, 0), ir = std::min(i + 1, n - 1);
    const double dx = (ir - il) * p.h;
    a.translation[ru] = (p.u[ir] - p.u[il]) / dx;
    a.translation[rv] = (p.v[ir] - p.v[il]) / dx;
  }
  return a;
}

OperatorAssembly assemble(const FrontSkeleton& s, double ell, const GridSpec& g) {
  return assemble(*s.model, front_profile(s, g), ell, g.boundary);
}

OperatorAssembly with_ell(const OperatorAssembly& a, double ell) {
  OperatorAssembly b = a;
  const double d = a.ell * a.ell - ell * ell;
  for (int i = 0; i < b.n(); ++i) b.K.at(i, i) += d;
  b.ell = ell;
  return b;
}

namespace {

double norm2(const std::vector<cplx>& x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {  // a^H b
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void scale(std::vector<cplx>& x, cplx f) {
  for (auto& z : x) z *= f;
}

BandedMatrix<cplx> shifted(const OperatorAssembly& a, cplx sigma) {
  const int n = a.n();
  BandedMatrix<cplx> M(n, 2, 2);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) M.at(i, j) = a.K.get(i, j);
  for (int i = 0; i < n; ++i) M.at(i, i) -= sigma * a.mass[i];
  return M;
}

std::vector<cplx> apply_K(const OperatorAssembly& a, const std::vector<cplx>& x) {
  const int n = a.n();
  std::vector<cplx> y(n);
  for (int i = 0; i < n; ++i) {
    cplx s = 0.0;
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) s += a.K.get(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<cplx> apply_KH(const OperatorAssembly& a, const std::vector<cplx>& x) {
  const int n = a.n();
  std::vector<cplx> y(n);
  for (int j = 0; j < n; ++j) {
    cplx s = 0.0;
    for (int i = std::max(0, j - 2); i <= std::min(n - 1, j + 2); ++i) s += a.K.get(i, j) * x[i];
    y[j] = s;
  }
  return y;
}

double residual_of(const OperatorAssembly& a, const std::vector<cplx>& x, cplx lam, bool adjoint) {
  std::vector<cplx> r = adjoint ? apply_KH(a, x) : apply_K(a, x);
  const cplx l = adjoint ? std::conj(lam) : lam;
  for (int i = 0; i < a.n(); ++i) r[i] -= l * a.mass[i] * x[i];
  return norm2(r) / norm2(x);
}

}  // namespace

EigenResult critical_eigenvalue(const OperatorAssembly& a, cplx shift, int max_iter, double tol) {
  const int n = a.n();
  BandedMatrix<cplx> M = shifted(a, shift);
  try {
    M.factor();
  } catch (const Error&) {
    // shift on an eigenvalue: nudge it
    shift += cplx(1e-9 * std::max(1.0, std::abs(shift)), 0.0);
    M = shifted(a, shift);
    M.factor();
  }
  double kscale = 0.0;
  for (int i = 0; i < n; ++i) kscale = std::max(kscale, std::fabs(a.K.get(i, i)) + 4.0 / (a.profile.h * a.profile.h));
  kscale = std::max(kscale, 1.0);

  auto run = [&](bool adjoint, std::vector<cplx> x, int& iters) {
    scale(x, 1.0 / norm2(x));
    cplx lam = shift, prev = shift;
    for (iters = 1; iters <= max_iter; ++iters) {
      std::vector<cplx> y(n);
      for (int i = 0; i < n; ++i) y[i] = a.mass[i] * x[i];
      M.solve(y, adjoint ? 'C' : 'N');
      const cplx theta = dot(x, y);
      prev = lam;
      // (K - s B)^-1 B x = x / (lam - s): theta holds 1/(lam - s), conjugated for the adjoint
      lam = shift + 1.0 / (adjoint ? std::conj(theta) : theta);
      scale(y, 1.0 / norm2(y));
      x.swap(y);
      if (iters > 2 && std::abs(lam - prev) <= tol * std::max(1.0, std::abs(lam)) &&
          residual_of(a, x, lam, adjoint) <= tol * kscale)
        break;
    }
    return std::make_pair(lam, x);
  };

  std::vector<cplx> start(n);
  double tn = 0.0;
  for (double t : a.translation) tn += t * t;
  for (int i = 0; i < n; ++i)
    start[i] = tn > 0 ? cplx(a.translation[i], 0.0) : cplx(1.0 + 0.1 * std::sin(1.7 * i), 0.0);
  int it_r = 0, it_l = 0;
  auto rr = run(false, start, it_r);
  auto ll = run(true, start, it_l);
  EigenResult e;
  e.right = rr.second;
  e.left = ll.second;
  e.iterations = std::max(it_r, it_l);
  // two-sided Rayleigh quotient
  const std::vector<cplx> kr = apply_K(a, e.right);
  std::vector<cplx> br(n);
  for (int i = 0; i < n; ++i) br[i] = a.mass[i] * e.right[i];
  const cplx den = dot(e.left, br);
  e.lambda = std::abs(den) > 1e-300 ? dot(e.left, kr) / den : rr.first;
  e.residual = residual_of(a, e.right, e.lambda, false);
  if (e.iterations > max_iter || !(e.residual <= 1e3 * tol * kscale)) {
    std::ostringstream os;
    os << "shift-invert iteration did not converge (residual " << e.residual << ")";
    fail(ErrorKind::NoConvergence, os.str());
  }
  // fix phases: right vector real-positive where translation-like, left normalised against B r
  cplx ph = 0.0;
  for (int i = 0; i < n; ++i) ph += e.right[i] * (tn > 0 ? a.translation[i] : 1.0);
  if (std::abs(ph) > 0) scale(e.right, std::abs(ph) / ph);
  for (int i = 0; i < n; ++i) br[i] = a.mass[i] * e.right[i];
  const cplx pair = dot(e.left, br);
  if (std::abs(pair) > 0) scale(e.left, 1.0 / std::conj(pair));
  return e;
}

cplx solvability_slope(const OperatorAssembly& a, const EigenResult& e) {
  std::vector<cplx> br(a.n());
  for (int i = 0; i < a.n(); ++i) br[i] = a.mass[i] * e.right[i];
  return -dot(e.left, e.right) / dot(e.left, br);
}

AdjointCheck adjoint_ratio_check(const FrontSkeleton& s, const OperatorAssembly& a,
                                 const EigenResult& e) {
  const FrontProfile& p = a.profile;
  const int n = static_cast<int>(p.size());
  const double kappa = s.fast.c_times_tau;
  const double rw = 1.0 / std::sqrt(s.eps);
  // adjoint eigenfunction of the unscaled operator is B l
  double num_f = 0, den_f = 0, num_s = 0, den_s = 0;
  for (int i = 0; i < n; ++i) {
    const double xi = p.x(i);
    const double ua = (a.mass[2 * i] * e.left[2 * i]).real();
    const double va = (a.mass[2 * i + 1] * e.left[2 * i + 1]).real();
    if (std::fabs(xi) < 0.5 * rw) {
      const double g = s.fast.p(xi) * std::exp(kappa * xi);
      num_f += ua * g;
      den_f += g * g;
    } else if (std::fabs(xi) > 2 * rw) {
      const double g = a.translation[2 * i + 1];
      num_s += va * g;
      den_s += g * g;
    }
  }
  AdjointCheck c;
  c.alpha_star = num_f / den_f;
  c.alpha_bar = num_s / den_s;
  c.ratio = c.alpha_bar / c.alpha_star;
  c.predicted = f_star(s) / (s.regime.value * g_star(s));
  return c;
}

void fit_curve(SpectralCurve& c) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& pt : c.points) pts.push_back({pt.first * pt.first, pt.second.real()});
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 3) fail(ErrorKind::InvalidArgument, "need at least three ell values to fit");
  std::size_t use = pts.size();
  double a2 = 0, a4 = 0;
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < use; ++i) {
      rows.push_back({1.0, pts[i].first, pts[i].first * pts[i].first});
      rhs.push_back(pts[i].second);
    }
    const auto x = least_squares(rows, rhs);
    a2 = x[1];
    a4 = x[2];
    const double win = a4 != 0.0 ? 0.05 * std::fabs(a2 / a4) : pts.back().first;
    std::size_t k = 0;
    while (k < pts.size() && pts[k].first <= win * (1 + 1e-12)) ++k;
    k = std::max<std::size_t>(k, 3);
    if (k == use) break;
    use = k;
  }
  c.fitted_lambda2 = a2;
  c.fitted_lambda4 = a4;
  c.fit_lo = std::sqrt(pts.front().first);
  c.fit_hi = std::sqrt(pts[use - 1].first);
}

SpectralCurve eigenvalue_curve(const FrontSkeleton& s, const std::vector<double>& ells,
                               const GridSpec& g) {
  if (ells.empty()) fail(ErrorKind::InvalidArgument, "empty ell list");
  for (std::size_t i = 1; i < ells.size(); ++i)
    if (!(std::fabs(ells[i]) >= std::fabs(ells[i - 1])))
      fail(ErrorKind::InvalidArgument, "ell values must be sorted ascending");
  SpectralCurve c;
  const FrontProfile p = front_profile(s, g);
  c.h = p.h;
  c.half_length = -p.x0;
  c.boundary = g.boundary;
  c.eps = s.eps;
  c.tau = p.tau;
  c.speed = p.c;
  const OperatorAssembly a0 = assemble(*s.model, p, 0.0, g.boundary);
  std::vector<double> l2;
  std::vector<cplx> lam;
  for (double ell : ells) {
    const OperatorAssembly a = with_ell(a0, ell);
    cplx guess = 0.0;
    const double e2 = ell * ell;
    if (lam.size() >= 2) {
      const std::size_t k = lam.size();
      const double d = l2[k - 1] - l2[k - 2];
      guess = d != 0.0 ? lam[k - 1] + (lam[k - 1] - lam[k - 2]) * (e2 - l2[k - 1]) / d : lam[k - 1];
    } else if (lam.size() == 1) {
      guess = lam[0];
    }
    const EigenResult e = critical_eigenvalue(a, guess);
    if (lam.size() >= 2) {
      const std::size_t k = lam.size();
      const double d_prev = l2[k - 1] - l2[k - 2];
      const double trend = d_prev > 0 ? std::abs(lam[k - 1] - lam[k - 2]) / d_prev * (e2 - l2[k - 1])
                                      : std::abs(lam[k - 1] - lam[k - 2]);
      if (std::abs(e.lambda - lam[k - 1]) > 10 * trend + 1e-9) c.branch_jump = true;
    }
    l2.push_back(e2);
    lam.push_back(e.lambda);
    c.points.push_back({ell, e.lambda});
  }
  if (c.points.size() >= 3) fit_curve(c);
  return c;
}

std::string curve_csv(const SpectralCurve& c) {
  std::ostringstream os;
  os << std::setprecision(17) << "ell,re_lambda,im_lambda\n";
  for (const auto& p : c.points) os << p.first << ',' << p.second.real() << ',' << p.second.imag() << '\n';
  return os.str();
}

std::string curve_metadata(const SpectralCurve& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "points = " << c.points.size() << "\n";
  os << "half_length = " << c.half_length << "\n";
  os << "h = " << c.h << "\n";
  os << "grid_nodes = " << static_cast<long>(std::llround(2 * c.half_length / c.h)) + 1 << "\n";
  os << "boundary = " << to_string(c.boundary) << "\n";
  os << "eps = " << c.eps << "\n";
  os << "tau = " << c.tau << "\n";
  os << "speed = " << c.speed << "\n";
  os << "fit_lo = " << c.fit_lo << "\n";
  os << "fit_hi = " << c.fit_hi << "\n";
  os << "fitted_lambda2 = " << c.fitted_lambda2 << "\n";
  os << "fitted_lambda4 = " << c.fitted_lambda4 << "\n";
  os << "branch_jump = " << (c.branch_jump ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace frontlab
