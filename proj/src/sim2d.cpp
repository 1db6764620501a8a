// SPDX-License-Identifier: Apache-2.0
#include "frontlab/sim2d.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void ModeSeed::add(int n, double ly, double amplitude, double phase) {
  modes.push_back({kTwoPi * n / ly, amplitude, phase});
}

void validate(const SimConfig& c) {
  auto bad = [](const std::string& m) { fail(ErrorKind::ValidationError, m); };
  if (!c.model) bad("simulation needs a model");
  if (!(c.eps > 0)) bad("eps must be positive");
  if (!(c.Lx > 0) || !(c.Ly > 0)) bad("domain lengths must be positive");
  if (c.Nx < 4 || c.Ny < 1) bad("grid needs Nx >= 4 and Ny >= 1");
  if (!(c.dt > 0) || !(c.t_end >= 0)) bad("dt must be positive and t_end non-negative");
  if (c.recenter_every < 1) bad("recenter_every must be at least 1");
  if (!(c.log_every > 0)) bad("log_every must be positive");
  if (c.snapshot_every < 0) bad("snapshot_every must be non-negative");
  if (c.initial == InitialKind::Custom && c.initial_file.empty()) bad("custom initial state needs a file");
  if (std::isfinite(c.x0) && !(c.x0 > 0 && c.x0 < c.Lx)) bad("front position x0 outside the domain");
  for (const auto& m : c.seed.modes) {
    const double n = m.ell * c.Ly / kTwoPi;
    if (std::fabs(n - std::round(n)) > 1e-9 * std::max(1.0, std::fabs(n)))
      bad("seeded wavenumber is not a multiple of 2 pi / Ly");
    if (std::fabs(std::round(n)) > c.Ny / 2) bad("seeded mode is not resolved by Ny");
  }
}

namespace {

// Catmull-Rom on a uniform grid, clamped at the ends.
double sample(const std::vector<double>& f, double s) {
  const int n = static_cast<int>(f.size());
  if (s <= 0) return f.front();
  if (s >= n - 1) return f.back();
  const int i = static_cast<int>(std::floor(s));
  const double t = s - i;
  auto at = [&](int k) { return f[std::clamp(k, 0, n - 1)]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
}

std::vector<double> logged_ells(const ModeSeed& seed) {
  std::vector<double> e{0.0};
  for (const auto& m : seed.modes) {
    if (m.ell == 0.0) continue;
    const double a = std::fabs(m.ell);
    if (std::none_of(e.begin(), e.end(), [a](double x) { return std::fabs(x - a) <= 1e-12 * a; }))
      e.push_back(a);
  }
  return e;
}

}  // namespace

SimState init_front_state(const SimConfig& c) {
  validate(c);
  SimState s;
  s.Nx = c.Nx;
  s.Ny = c.Ny;
  s.dx = c.dx();
  s.dy = c.dy();
  s.eps = c.eps;
  s.tau = c.model->tau_regime().tau(c.eps);
  s.ells = logged_ells(c.seed);
  const std::size_t cells = static_cast<std::size_t>(c.Nx) * c.Ny;
  if (c.initial == InitialKind::Custom) {
    SimState f = read_snapshot(c.initial_file);
    if (f.Nx != c.Nx || f.Ny != c.Ny)
      fail(ErrorKind::ValidationError, "initial snapshot grid does not match Nx, Ny");
    s.U = std::move(f.U);
    s.V = std::move(f.V);
    s.t = f.t;
    const auto fr = build_front(c.model, c.eps);
    const FrontSkeleton& sk = fr.at(std::min<std::size_t>(c.front_index, fr.size() - 1));
    s.u_mid = std::isfinite(c.u_mid) ? c.u_mid : sk.fast.u_mid();
    s.fast_width = fast_width(sk.fast);
  } else {
    const auto fronts = build_front(c.model, c.eps);
    if (c.front_index < 0 || c.front_index >= static_cast<int>(fronts.size()))
      fail(ErrorKind::ValidationError, "front_index out of range");
    const FrontSkeleton& sk = fronts[c.front_index];
    s.fast_width = fast_width(sk.fast);
    if (s.dx > s.fast_width / 10) {
      std::ostringstream os;
      os << "dx = " << s.dx << " gives fewer than 10 points across the fast width " << s.fast_width;
      fail(ErrorKind::ValidationError, os.str());
    }
    s.u_mid = std::isfinite(c.u_mid) ? c.u_mid : sk.fast.u_mid();
    const double x0 = std::isfinite(c.x0) ? c.x0 : 0.5 * c.Lx;
    FrontProfile p = composed_profile(sk, 0.5 * s.dx - x0, s.dx, c.Nx);
    if (c.refine_initial) {
      NewtonOptions no;
      no.mirror = Mirror::cell;
      p = refine_front(*c.model, p, s.u_mid, 0.0, no);
    }
    s.U.resize(cells);
    s.V.resize(cells);
    for (int j = 0; j < c.Ny; ++j) {
      double d = 0.0;
      for (const auto& m : c.seed.modes) {
        const double a = std::isfinite(m.amplitude) ? m.amplitude : 1e-3 * s.fast_width;
        d += a * std::cos(m.ell * s.y(j) + m.phase);
      }
      for (int i = 0; i < c.Nx; ++i) {
        // profile node k sits at x_k; evaluate at x + d
        const double k = i + d / s.dx;
        s.u(i, j) = sample(p.u, k);
        s.v(i, j) = sample(p.v, k);
      }
    }
  }
  s.interface = interface_position(s, s.u_mid);
  return s;
}

void Stepper::Line::build(int n_, double r_, bool periodic_) {
  n = n_;
  r = r_;
  periodic = periodic_;
  cp.assign(n, 0.0);
  den.assign(n, 0.0);
  z.clear();
  if (n == 1) return;
  if (periodic && n == 2) return;
  std::vector<double> b(n, 1 + 2 * r);
  double gamma = 0;
  if (!periodic) {
    b[0] = b[n - 1] = 1 + r;
  } else {
    gamma = -b[0];
    b[0] -= gamma;
    b[n - 1] -= r * r / gamma;
  }
  den[0] = b[0];
  cp[0] = -r / den[0];
  for (int i = 1; i < n; ++i) {
    den[i] = b[i] + r * cp[i - 1];
    cp[i] = -r / den[i];
  }
  if (periodic) {
    // T z = (gamma, 0, ..., 0, -r)
    z.assign(n, 0.0);
    z[0] = gamma;
    z[n - 1] = -r;
    z[0] /= den[0];
    for (int i = 1; i < n; ++i) z[i] = (z[i] + r * z[i - 1]) / den[i];
    for (int i = n - 2; i >= 0; --i) z[i] -= cp[i] * z[i + 1];
    zfac = 1.0 + z[0] + (-r / gamma) * z[n - 1];
    cp.push_back(-r / gamma);  // v_{n-1}
  }
}

// Solves along the outer index for each of the nx inner positions.
void Stepper::Line::solve(std::vector<double>& f, int nx) const {
  if (n == 1) return;
  if (periodic && n == 2) {
    // (1 + 2r) a - 2r b
    const double d = 1 + 4 * r;
    for (int i = 0; i < nx; ++i) {
      const double a = f[i], b = f[nx + i];
      f[i] = ((1 + 2 * r) * a + 2 * r * b) / d;
      f[nx + i] = ((1 + 2 * r) * b + 2 * r * a) / d;
    }
    return;
  }
  double* base = f.data();
  const double inv0 = 1.0 / den[0];
  for (int i = 0; i < nx; ++i) base[i] *= inv0;
  for (int j = 1; j < n; ++j) {
    double* cur = base + static_cast<std::size_t>(j) * nx;
    const double* prev = cur - nx;
    const double inv = 1.0 / den[j];
    for (int i = 0; i < nx; ++i) cur[i] = (cur[i] + r * prev[i]) * inv;
  }
  for (int j = n - 2; j >= 0; --j) {
    double* cur = base + static_cast<std::size_t>(j) * nx;
    const double* next = cur + nx;
    const double c = cp[j];
    for (int i = 0; i < nx; ++i) cur[i] -= c * next[i];
  }
  if (periodic) {
    const double vl = cp[n];
    double* last = base + static_cast<std::size_t>(n - 1) * nx;
    std::vector<double> coef(nx);
    for (int i = 0; i < nx; ++i) coef[i] = (base[i] + vl * last[i]) / zfac;
    for (int j = 0; j < n; ++j) {
      double* cur = base + static_cast<std::size_t>(j) * nx;
      const double zj = z[j];
      for (int i = 0; i < nx; ++i) cur[i] -= coef[i] * zj;
    }
  }
}

Stepper::Stepper(const SimConfig& c, double tau)
    : model_(c.model.get()), tau_(tau), dt_(c.dt), nx_(c.Nx), ny_(c.Ny) {
  const double du = 1.0 / tau, dv = 1.0 / (c.eps * c.eps);
  const double hx = 1.0 / (c.dx() * c.dx()), hy = 1.0 / (c.dy() * c.dy());
  ux_h_.build(nx_, 0.5 * dt_ * du * hx, false);
  ux_f_.build(nx_, dt_ * du * hx, false);
  vx_h_.build(nx_, 0.5 * dt_ * dv * hx, false);
  vx_f_.build(nx_, dt_ * dv * hx, false);
  uy_h_.build(ny_, 0.5 * dt_ * du * hy, true);
  uy_f_.build(ny_, dt_ * du * hy, true);
  vy_h_.build(ny_, 0.5 * dt_ * dv * hy, true);
  vy_f_.build(ny_, dt_ * dv * hy, true);
}

void Stepper::react(SimState& s, double h) const {
  const std::size_t n = s.U.size();
  const double it = 1.0 / tau_;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = s.U[k], v = s.V[k];
    const Reaction a = model_->reaction(u, v);
    const double u1 = u + h * a.F * it, v1 = v + h * a.G;
    const Reaction b = model_->reaction(u1, v1);
    s.U[k] = u + 0.5 * h * (a.F + b.F) * it;
    s.V[k] = v + 0.5 * h * (a.G + b.G);
  }
}

// Extrapolated backward Euler in each direction: 2 (I - dt/2 A)^-2 - (I - dt A)^-1.
void Stepper::diffuse_field(std::vector<double>& f, const Line& xh, const Line& xf, const Line& yh,
                            const Line& yf) const {
  // x sweeps on the transposed field so that each sweep runs over contiguous rows
  std::vector<double>& a = work_a_;
  std::vector<double>& b = work_b_;
  a.resize(f.size());
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) a[static_cast<std::size_t>(i) * ny_ + j] = f[static_cast<std::size_t>(j) * nx_ + i];
  b = a;
  xh.solve(a, ny_);
  xh.solve(a, ny_);
  xf.solve(b, ny_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      const std::size_t k = static_cast<std::size_t>(i) * ny_ + j;
      f[static_cast<std::size_t>(j) * nx_ + i] = 2 * a[k] - b[k];
    }
  if (ny_ == 1) return;
  b = f;
  yh.solve(f, nx_);
  yh.solve(f, nx_);
  yf.solve(b, nx_);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 2 * f[k] - b[k];
}

namespace {

void check_bounded(const SimState& s) {
  for (std::size_t k = 0; k < s.U.size(); ++k) {
    if (!(std::fabs(s.U[k]) <= 1e6) || !(std::fabs(s.V[k]) <= 1e6)) {
      const int i = static_cast<int>(k % s.Nx), j = static_cast<int>(k / s.Nx);
      std::ostringstream os;
      os << "field blow-up at t = " << s.t << ", (x, y) = (" << s.x(i) + s.shift << ", " << s.y(j)
         << ")";
      fail(ErrorKind::BlowUp, os.str());
    }
  }
}

}  // namespace

void Stepper::diffuse(SimState& s) const {
  diffuse_field(s.U, ux_h_, ux_f_, uy_h_, uy_f_);
  diffuse_field(s.V, vx_h_, vx_f_, vy_h_, vy_f_);
}

void Stepper::step(SimState& s) const {
  react(s, 0.5 * dt_);
  diffuse(s);
  react(s, 0.5 * dt_);
  s.t += dt_;
  check_bounded(s);
}

void step(SimState& s, const SimConfig& c) {
  Stepper st(c, c.model->tau_regime().tau(c.eps));
  st.step(s);
}

std::vector<double> interface_position(const SimState& s, double u_mid) {
  std::vector<double> out(s.Ny, kNaN);
  for (int j = 0; j < s.Ny; ++j) {
    const double* row = s.U.data() + static_cast<std::size_t>(j) * s.Nx;
    for (int i = 0; i + 1 < s.Nx; ++i) {
      const double a = row[i] - u_mid, b = row[i + 1] - u_mid;
      if (a == 0.0) {
        out[j] = s.x(i) + s.shift;
        break;
      }
      if ((a < 0) != (b < 0) && b != 0.0) {
        out[j] = s.x(i) + s.dx * a / (a - b) + s.shift;
        break;
      }
      if (b == 0.0) {
        out[j] = s.x(i + 1) + s.shift;
        break;
      }
    }
  }
  return out;
}

std::vector<std::complex<double>> mode_amplitudes(const std::vector<double>& x, double dy,
                                                  const std::vector<double>& ells) {
  const int ny = static_cast<int>(x.size());
  for (int j = 0; j < ny; ++j)
    if (!std::isfinite(x[j])) {
      std::ostringstream os;
      os << "row " << j << " has no interface crossing";
      fail(ErrorKind::NoCrossing, os.str());
    }
  std::vector<std::complex<double>> a;
  for (double ell : ells) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < ny; ++j) s += x[j] * std::polar(1.0, -ell * j * dy);
    a.push_back(s * (ell == 0.0 ? 1.0 / ny : 2.0 / ny));
  }
  return a;
}

std::vector<GrowthRate> growth_rates(const std::vector<double>& ells,
                                     const std::vector<ModeSample>& log, double t0, double t1,
                                     double linear_bound) {
  std::vector<const ModeSample*> in;
  for (const auto& m : log)
    if (m.t >= t0 && m.t <= t1) in.push_back(&m);
  if (!(t1 > t0) || in.size() < 3) fail(ErrorKind::WindowTooShort, "fewer than three samples in the fit window");
  std::vector<GrowthRate> out;
  for (std::size_t k = 0; k < ells.size(); ++k) {
    double st = 0, sl = 0, stt = 0, stl = 0;
    const double n = static_cast<double>(in.size());
    for (const ModeSample* m : in) {
      const double a = std::abs(m->amplitude.at(k));
      if (ells[k] != 0.0 && a > linear_bound) {
        std::ostringstream os;
        os << "mode ell = " << ells[k] << " reached amplitude " << a << " at t = " << m->t;
        fail(ErrorKind::Nonlinear, os.str());
      }
      if (!(a > 0)) fail(ErrorKind::NoCrossing, "zero or undefined mode amplitude");
      const double l = std::log(a);
      st += m->t;
      sl += l;
      stt += m->t * m->t;
      stl += m->t * l;
    }
    out.push_back({ells[k], (n * stl - st * sl) / (n * stt - st * st)});
  }
  return out;
}

namespace {

double reaction_rate_bound(const Model& m, const SimState& s) {
  double r = 0.0;
  for (std::size_t k = 0; k < s.U.size(); ++k) {
    const Jacobian j = m.jacobian(s.U[k], s.V[k]);
    // spectral radius of the pointwise reaction Jacobian
    const double a = j.Fu / s.tau, b = j.Fv / s.tau;
    const double h = 0.5 * (a + j.Gv), det = a * j.Gv - b * j.Gu;
    const std::complex<double> d = std::sqrt(std::complex<double>(h * h - det, 0.0));
    r = std::max({r, std::abs(h + d), std::abs(h - d)});
  }
  return r;
}

void recenter(SimState& s, double target) {
  double sum = 0;
  int cnt = 0;
  for (double x : s.interface)
    if (std::isfinite(x)) {
      sum += x - s.shift;
      ++cnt;
    }
  if (cnt == 0) return;
  const int k = static_cast<int>(std::lround((sum / cnt - target) / s.dx));
  if (k == 0) return;
  for (int j = 0; j < s.Ny; ++j) {
    for (auto* f : {&s.U, &s.V}) {
      double* row = f->data() + static_cast<std::size_t>(j) * s.Nx;
      std::vector<double> old(row, row + s.Nx);
      for (int i = 0; i < s.Nx; ++i) row[i] = old[std::clamp(i + k, 0, s.Nx - 1)];
    }
  }
  s.shift += k * s.dx;
}

}  // namespace

RunResult run(const SimConfig& c, const SnapshotSink& snap, const ProgressSink& progress) {
  SimState s = init_front_state(c);
  check_bounded(s);
  const double bound = reaction_rate_bound(*c.model, s);
  if (c.dt > 0.25 / std::max(bound, 1e-300)) {
    std::ostringstream os;
    os << "dt = " << c.dt << " exceeds the explicit reaction bound " << 0.25 / bound;
    fail(ErrorKind::ValidationError, os.str());
  }
  const long nsteps = std::max(0L, static_cast<long>(std::ceil(c.t_end / c.dt - 1e-9)));
  SimConfig cc = c;
  if (nsteps > 0) cc.dt = c.t_end / nsteps;  // land on t_end exactly
  const Stepper st(cc, s.tau);
  const long log_stride = std::max(1L, std::lround(c.log_every / cc.dt));
  const long snap_stride = c.snapshot_every > 0 ? std::max(1L, std::lround(c.snapshot_every / cc.dt)) : 0;
  const double target = (std::isfinite(c.x0) ? c.x0 : 0.5 * c.Lx);
  const double t_start = s.t;

  RunResult r;
  auto log_now = [&]() {
    s.interface = interface_position(s, s.u_mid);
    r.interface_log.push_back({s.t, s.interface});
    ModeSample m;
    m.t = s.t;
    bool ok = std::all_of(s.interface.begin(), s.interface.end(), [](double x) { return std::isfinite(x); });
    if (ok)
      m.amplitude = mode_amplitudes(s.interface, s.dy, s.ells);
    else
      m.amplitude.assign(s.ells.size(), std::complex<double>(kNaN, kNaN));
    r.mode_log.push_back(m);
  };
  auto snap_now = [&]() {
    r.snapshot_times.push_back(s.t);
    if (snap) snap(s);
  };
  log_now();
  if (snap_stride) snap_now();
  for (long n = 1; n <= nsteps; ++n) {
    st.step(s);
    s.t = t_start + n * cc.dt;
    if (c.comoving && n % c.recenter_every == 0) {
      s.interface = interface_position(s, s.u_mid);
      recenter(s, target);
    }
    if (n % log_stride == 0 || n == nsteps) {
      log_now();
      if (progress) progress(s);
    }
    if (snap_stride && (n % snap_stride == 0)) snap_now();
  }
  s.interface = interface_position(s, s.u_mid);
  s.mode_log = r.mode_log;
  r.final_state = std::move(s);
  return r;
}

namespace {

void put_doubles(std::string& out, const std::vector<double>& f) {
  const std::size_t off = out.size();
  out.resize(off + 8 * f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::uint64_t b = std::bit_cast<std::uint64_t>(f[k]);
    if constexpr (std::endian::native == std::endian::big) b = __builtin_bswap64(b);
    std::memcpy(&out[off + 8 * k], &b, 8);
  }
}

void get_doubles(const std::string& in, std::size_t off, std::vector<double>& f) {
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::uint64_t b;
    std::memcpy(&b, &in[off + 8 * k], 8);
    if constexpr (std::endian::native == std::endian::big) b = __builtin_bswap64(b);
    f[k] = std::bit_cast<double>(b);
  }
}

}  // namespace

std::string snapshot_bytes(const SimState& s) {
  char head[256];
  std::snprintf(head, sizeof head, "FLB1 %d %d %.17g %.17g %.17g\n", s.Nx, s.Ny, s.dx, s.dy, s.t);
  std::string out(head);
  put_doubles(out, s.U);
  put_doubles(out, s.V);
  return out;
}

void write_snapshot(const std::string& path, const SimState& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
  const std::string b = snapshot_bytes(s);
  f.write(b.data(), static_cast<std::streamsize>(b.size()));
  if (!f) fail(ErrorKind::IoError, "write failed for " + path);
}

SimState parse_snapshot(const std::string& bytes) {
  const std::size_t nl = bytes.find('\n');
  if (nl == std::string::npos || bytes.compare(0, 5, "FLB1 ") != 0)
    fail(ErrorKind::ParseError, "not an FLB1 snapshot");
  std::istringstream hs(bytes.substr(5, nl - 5));
  SimState s;
  if (!(hs >> s.Nx >> s.Ny >> s.dx >> s.dy >> s.t) || s.Nx < 1 || s.Ny < 1)
    fail(ErrorKind::ParseError, "malformed FLB1 header");
  const std::size_t cells = static_cast<std::size_t>(s.Nx) * s.Ny;
  if (bytes.size() != nl + 1 + 16 * cells) fail(ErrorKind::ParseError, "FLB1 payload size mismatch");
  s.U.resize(cells);
  s.V.resize(cells);
  get_doubles(bytes, nl + 1, s.U);
  get_doubles(bytes, nl + 1 + 8 * cells, s.V);
  return s;
}

SimState read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_snapshot(ss.str());
}

std::string mode_log_csv(const std::vector<double>& ells, const std::vector<ModeSample>& log) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,ell,re_amplitude,im_amplitude,abs_amplitude\n";
  for (const auto& m : log)
    for (std::size_t k = 0; k < ells.size(); ++k)
      os << m.t << ',' << ells[k] << ',' << m.amplitude[k].real() << ',' << m.amplitude[k].imag() << ','
         << std::abs(m.amplitude[k]) << '\n';
  return os.str();
}

std::string interface_log_csv(const RunResult& r, double dy) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,y,x\n";
  for (const auto& [t, xs] : r.interface_log)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      os << t << ',' << j * dy << ',';
      if (std::isfinite(xs[j])) os << xs[j];
      os << '\n';
    }
  return os.str();
}

}  // namespace frontlab
