// SPDX-License-Identifier: Apache-2.0
#include "frontlab/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

const char* to_string(Side s) {
  switch (s) {
    case Side::minus: return "minus";
    case Side::plus: return "plus";
    case Side::center: return "center";
  }
  return "?";
}

const char* to_string(StateLabel s) {
  switch (s) {
    case StateLabel::minus: return "minus";
    case StateLabel::plus: return "plus";
    case StateLabel::other: return "other";
  }
  return "?";
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Model::Model(std::string name, ParamList params, TauRegime regime)
    : name_(std::move(name)), params_(std::move(params)), regime_(regime) {}

double Model::param(const std::string& key) const {
  for (const auto& [k, v] : params_)
    if (k == key) return v;
  fail(ErrorKind::InvalidArgument, "model " + name_ + " has no parameter " + key);
}

Interval Model::search_range(Side s) const { return intersect(window(s), {-100.0, 100.0}); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- BCDE
class Bcde final : public Model {
 public:
  using Model::Model;
  double m1() const { return pv(0); }
  double m2() const { return pv(1); }
  double m3() const { return pv(2); }

  Reaction reaction(double u, double v) const override {
    return {-m1() * u + u * u * (1 - m2() * u) * v, m3() - v - u * u * v};
  }
  Jacobian jacobian(double u, double v) const override {
    return {-m1() + 2 * u * v - 3 * m2() * u * u * v, u * u * (1 - m2() * u), -2 * u * v,
            -1 - u * u};
  }
  double fold() const { return 4 * m1() * m2(); }
  Interval domain(Side s) const override {
    if (s == Side::minus) return {};
    return {fold(), kInf};
  }
  Interval window(Side s) const override {
    if (s == Side::center) return {};  // F_u > 0 on the middle root
    return domain(s);
  }
  Interval search_range(Side s) const override {
    const double top = std::fabs(m3()) + 10.0;
    if (s == Side::minus) return {-top, top};
    return {fold(), top};
  }
  double branch(Side s, double v) const override {
    if (s == Side::minus) return 0.0;
    const double r = std::sqrt(std::max(0.0, 1 - fold() / v));
    return s == Side::plus ? (1 + r) / (2 * m2()) : (1 - r) / (2 * m2());
  }
  std::optional<CubicFactors> cubic(double v) const override {
    if (!(v > 0)) return std::nullopt;
    return CubicFactors{m2() * v, 0.0, branch(Side::center, v), branch(Side::plus, v)};
  }
};

// ---------------------------------------------------------------- FOTM
class Fotm final : public Model {
 public:
  using Model::Model;
  double m(int i) const { return pv(static_cast<std::size_t>(i - 1)); }
  double h(double u) const {
    const double a = 1 + m(1) * u;
    return a * a * (1 - u);
  }
  double u_fold() const { return (2 * m(1) - 1) / (3 * m(1)); }
  double v_fold() const { return 27 * m(1) / (4 * std::pow(1 + m(1), 3)); }

  Reaction reaction(double u, double v) const override {
    const double a = 1 + m(1) * u;
    return {-u + u * a * a * (1 - u) * v,
            m(2) - m(3) * v / (1 + m(4) * u) - m(5) * u * a * a * v};
  }
  Jacobian jacobian(double u, double v) const override {
    const double a = 1 + m(1) * u;
    const double hp = 2 * m(1) * a * (1 - u) - a * a;
    const double b = 1 + m(4) * u;
    return {-1 + h(u) * v + u * hp * v, u * h(u),
            m(3) * m(4) * v / (b * b) - m(5) * v * (a * a + 2 * m(1) * u * a),
            -m(3) / b - m(5) * u * a * a};
  }
  Interval domain(Side s) const override {
    if (s == Side::minus) return {};
    return {v_fold(), kInf};
  }
  Interval window(Side s) const override {
    if (s == Side::minus) return {-kInf, 1.0};
    if (s == Side::plus) return {v_fold(), kInf};
    return {};
  }
  Interval search_range(Side s) const override {
    const double top = v_fold() + 10.0 + 10.0 * std::fabs(m(2));
    if (s == Side::minus) return {-10.0, 1.0};
    return {v_fold(), top};
  }
  double branch(Side s, double v) const override {
    if (s == Side::minus) return 0.0;
    const double um = u_fold();
    if (v <= v_fold()) return um;
    auto phi = [&](double u) { return h(u) * v - 1.0; };
    double u = s == Side::plus ? find_root(phi, um, 1.0, 1e-15) : find_root(phi, -1.0 / m(1), um, 1e-15);
    // Newton polish, so that the branch is smooth to round-off under quadrature
    for (int k = 0; k < 2; ++k) {
      const double a = 1 + m(1) * u;
      const double hp = 2 * m(1) * a * (1 - u) - a * a;
      if (hp != 0.0) u -= phi(u) / (hp * v);
    }
    return u;
  }
};

// ---------------------------------------------------------------- FHN
// f+ = a + mu2 v, fc = c0 + mu3 v, f- = -a + mu2 v.
class Fhn final : public Model {
 public:
  using Model::Model;
  double m1() const { return pv(0); }
  double m2() const { return pv(1); }
  double m3() const { return pv(2); }
  double a() const { return pv(3); }
  double c0() const { return pv(4); }
  double fp(double v) const { return a() + m2() * v; }
  double fc(double v) const { return c0() + m3() * v; }
  double fm(double v) const { return -a() + m2() * (v); }

  Reaction reaction(double u, double v) const override {
    return {-(u - fm(v)) * (u - fc(v)) * (u - fp(v)), u - m1() * v};
  }
  Jacobian jacobian(double u, double v) const override {
    const double A = u - fm(v), C = u - fc(v), P = u - fp(v);
    return {-(C * P + A * P + A * C), m2() * C * P + m3() * A * P + m2() * A * C, 1.0, -m1()};
  }
  Interval domain(Side) const override { return {}; }
  // {v : s (mu2 - mu3) v > rhs}
  static Interval half_line(double slope, double rhs) {
    if (slope > 0) return {rhs / slope, kInf};
    if (slope < 0) return {-kInf, rhs / slope};
    return rhs < 0 ? Interval{} : Interval{0.0, 0.0};
  }
  Interval window(Side s) const override {
    const double d = m2() - m3();
    if (s == Side::plus) return half_line(d, c0() - a());   // f+ > fc
    if (s == Side::minus) return half_line(-d, -c0() - a());  // f- < fc
    return intersect(half_line(d, c0() - a()), half_line(-d, -c0() - a()));
  }
  Interval search_range(Side s) const override { return intersect(window(s), {-50.0, 50.0}); }
  double branch(Side s, double v) const override {
    if (s == Side::plus) return fp(v);
    if (s == Side::minus) return -fp(-v);
    return fc(v);
  }
  std::optional<CubicFactors> cubic(double v) const override {
    return CubicFactors{1.0, fm(v), fc(v), fp(v)};
  }
};

// ---------------------------------------------------------------- cylindrical
class Cylindrical final : public Model {
 public:
  using Model::Model;
  double m1() const { return pv(0); }
  double m2() const { return pv(1); }
  double m3() const { return pv(2); }

  Reaction reaction(double u, double v) const override {
    return {u * u * (1 - u) - u * v, m1() * u * v + m2() * v - m3() * v * v};
  }
  Jacobian jacobian(double u, double v) const override {
    return {2 * u - 3 * u * u - v, -u, m1() * v, m1() * u + m2() - 2 * m3() * v};
  }
  Interval domain(Side s) const override {
    if (s == Side::minus) return {};
    return {-kInf, 0.25};
  }
  Interval window(Side s) const override {
    if (s == Side::minus) return {0.0, kInf};
    if (s == Side::plus) return {-kInf, 0.25};
    return {0.0, 0.25};
  }
  Interval search_range(Side s) const override {
    if (s == Side::minus) return {0.0, 2.0 * std::fabs(m2() / m3()) + 1.0};
    if (s == Side::plus) return {-1.0, 0.25};
    return {0.0, 0.25};
  }
  double branch(Side s, double v) const override {
    if (s == Side::minus) return 0.0;
    const double r = std::sqrt(std::max(0.0, 1 - 4 * v));
    return s == Side::plus ? 0.5 + 0.5 * r : 0.5 - 0.5 * r;
  }
  std::optional<CubicFactors> cubic(double v) const override {
    std::array<double, 3> r = {0.0, branch(Side::center, v), branch(Side::plus, v)};
    std::sort(r.begin(), r.end());
    return CubicFactors{1.0, r[0], r[1], r[2]};
  }
};

// ---------------------------------------------------------------- user cubic
// F = -alpha (u - b1(v))(u - b2(v))(u - b3(v)) with b_k linear in v, branches ordered;
// G = sum_{i,j<=2} g_ij u^i v^j.
class UserCubic final : public Model {
 public:
  using Model::Model;
  std::array<double, 3> roots(double v) const {
    std::array<double, 3> r = {pv(1) + pv(2) * v, pv(3) + pv(4) * v,
                               pv(5) + pv(6) * v};
    std::sort(r.begin(), r.end());
    return r;
  }
  // derivative of each sorted root with respect to v
  std::array<double, 3> root_slopes(double v) const {
    std::array<std::pair<double, double>, 3> r = {
        std::pair{pv(1) + pv(2) * v, pv(2)},
        std::pair{pv(3) + pv(4) * v, pv(4)},
        std::pair{pv(5) + pv(6) * v, pv(6)}};
    std::sort(r.begin(), r.end());
    return {r[0].second, r[1].second, r[2].second};
  }
  double g(int i, int j) const { return pv(static_cast<std::size_t>(7 + 3 * i + j)); }

  Reaction reaction(double u, double v) const override {
    auto r = roots(v);
    double G = 0;
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 2; ++j) G += g(i, j) * std::pow(u, i) * std::pow(v, j);
    return {-pv(0) * (u - r[0]) * (u - r[1]) * (u - r[2]), G};
  }
  Jacobian jacobian(double u, double v) const override {
    auto r = roots(v);
    auto d = root_slopes(v);
    const double al = pv(0);
    const double A = u - r[0], B = u - r[1], C = u - r[2];
    double Gu = 0, Gv = 0;
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 2; ++j) {
        if (i > 0) Gu += i * g(i, j) * std::pow(u, i - 1) * std::pow(v, j);
        if (j > 0) Gv += j * g(i, j) * std::pow(u, i) * std::pow(v, j - 1);
      }
    return {-al * (B * C + A * C + A * B), al * (d[0] * B * C + d[1] * A * C + d[2] * A * B), Gu,
            Gv};
  }
  Interval domain(Side) const override { return {}; }
  Interval window(Side s) const override {
    if (s == Side::minus) return {pv(16), pv(17)};
    if (s == Side::plus) return {pv(18), pv(19)};
    return intersect(window(Side::minus), window(Side::plus));
  }
  double branch(Side s, double v) const override {
    auto r = roots(v);
    return s == Side::minus ? r[0] : s == Side::plus ? r[2] : r[1];
  }
  std::optional<CubicFactors> cubic(double v) const override {
    auto r = roots(v);
    return CubicFactors{pv(0), r[0], r[1], r[2]};
  }
};

// ---------------------------------------------------------------- orientation swap
class Swapped final : public Model {
 public:
  Swapped(ModelPtr base)
      : Model(base->name() + "-swapped", base->params(), base->tau_regime()), base_(std::move(base)) {}
  static Side flip(Side s) {
    return s == Side::minus ? Side::plus : s == Side::plus ? Side::minus : s;
  }
  Reaction reaction(double u, double v) const override { return base_->reaction(u, v); }
  Jacobian jacobian(double u, double v) const override { return base_->jacobian(u, v); }
  bool has_branch(Side s) const override { return base_->has_branch(flip(s)); }
  Interval domain(Side s) const override { return base_->domain(flip(s)); }
  Interval window(Side s) const override { return base_->window(flip(s)); }
  Interval search_range(Side s) const override { return base_->search_range(flip(s)); }
  double branch(Side s, double v) const override { return base_->branch(flip(s), v); }
  std::optional<CubicFactors> cubic(double v) const override {
    auto c = base_->cubic(v);
    if (!c) return c;
    // roots reflected so that "minus" is again the first factor
    return CubicFactors{c->alpha, c->beta_plus, c->beta_c, c->beta_minus};
  }

 private:
  ModelPtr base_;
};

ParamList defaults_for(const std::string& name) {
  if (name == "bcde") return {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}};
  if (name == "fotm") return {{"mu1", 3.5}, {"mu2", 1.1}, {"mu3", 3.2}, {"mu4", 1.0}, {"mu5", 0.4}};
  if (name == "fhn") return {{"mu1", 4.0}, {"mu2", 1.0}, {"mu3", 0.0}, {"a", 1.0}, {"c0", 0.0}};
  if (name == "cylindrical") return {{"mu1", 1.0}, {"mu2", 3.0}, {"mu3", 0.0}};
  if (name == "user-cubic")
    return {{"alpha", 1.0}, {"bm0", -1.0}, {"bm1", 1.0}, {"bc0", 0.0}, {"bc1", 0.0},
            {"bp0", 1.0},   {"bp1", 1.0},  {"g00", 0.0}, {"g01", -4.0}, {"g02", 0.0},
            {"g10", 1.0},   {"g11", 0.0},  {"g12", 0.0}, {"g20", 0.0}, {"g21", 0.0},
            {"g22", 0.0},   {"wm_lo", -1.0}, {"wm_hi", 1.0}, {"wp_lo", -1.0}, {"wp_hi", 1.0}};
  fail(ErrorKind::ValidationError, "unknown model '" + name + "'");
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"bcde", "fotm", "fhn", "cylindrical", "user-cubic"};
}

ParamList catalog_defaults(const std::string& name) { return defaults_for(name); }

ModelPtr make_model(const std::string& name, const std::map<std::string, double>& params,
                    std::optional<TauRegime> regime) {
  ParamList p = defaults_for(name);
  for (const auto& [k, v] : params) {
    auto it = std::find_if(p.begin(), p.end(), [&](const auto& e) { return e.first == k; });
    if (it == p.end()) fail(ErrorKind::ValidationError, "model " + name + ": unknown parameter " + k);
    it->second = v;
  }
  TauRegime r = regime ? *regime
                       : (name == "cylindrical" ? TauRegime{TauKind::OrderEps, 1.0} : TauRegime{});
  if (!(r.value > 0)) fail(ErrorKind::ValidationError, "tau must be positive");
  if (name == "bcde") return std::make_shared<Bcde>(name, p, r);
  if (name == "fotm") return std::make_shared<Fotm>(name, p, r);
  if (name == "fhn") return std::make_shared<Fhn>(name, p, r);
  if (name == "cylindrical") {
    auto mu3 = std::find_if(p.begin(), p.end(), [](const auto& e) { return e.first == "mu3"; });
    if (!params.count("mu3") || mu3->second == 0.0)
      mu3->second = cylindrical_maxwell_mu3(p[0].second, p[1].second);
    return std::make_shared<Cylindrical>(name, p, r);
  }
  return std::make_shared<UserCubic>(name, p, r);
}

ModelPtr swap_sides(const ModelPtr& m) { return std::make_shared<Swapped>(m); }

double cylindrical_maxwell_mu3(double mu1, double mu2) {
  if (!(mu2 > 0) || !(mu1 + mu2 > 0))
    fail(ErrorKind::ValidationError, "cylindrical model needs mu2 > 0 and mu1 + mu2 > 0");
  const double vs = 2.0 / 9.0;
  auto up = [](double v) { return 0.5 + 0.5 * std::sqrt(std::max(0.0, 1 - 4 * v)); };
  auto resid = [&](double mu3) {
    const double vm = mu2 / mu3;
    auto f = [&](double v) { return mu1 * up(v) + mu2 - mu3 * v; };
    if (f(0.25) > 0) return std::numeric_limits<double>::quiet_NaN();
    const double vp = find_root(f, 0.0, 0.25, 1e-16);
    try {
      const double a = integrate([&](double s) { return mu2 * s - mu3 * s * s; }, vm, vs, 1e-13);
      const double b = integrate(
          [&](double s) { return mu1 * s * up(s) + mu2 * s - mu3 * s * s; }, vp, vs, 1e-13);
      return a - b;
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const double lo = 2 * (mu1 + 2 * mu2) * (1 + 1e-9) + 1e-12;
  const double hi = 20 * lo + 50;
  const int n = 2000;
  double xa = lo, ra = resid(lo);
  for (int i = 1; i <= n; ++i) {
    const double xb = lo + (hi - lo) * i / n;
    const double rb = resid(xb);
    if (std::isfinite(ra) && std::isfinite(rb) && ra * rb <= 0)
      return find_root(resid, xa, xb, ra, rb, 1e-15);
    xa = xb;
    ra = rb;
  }
  std::ostringstream os;
  os << "no mu3 places the stationary jump at 2/9 for mu1=" << mu1 << ", mu2=" << mu2;
  fail(ErrorKind::NoSolution, os.str());
}

Reaction eval_reaction(const Model& m, double u, double v) { return m.reaction(u, v); }

double branch_solve(const Model& m, Side s, double v) {
  const Interval w = s == Side::center ? m.domain(s) : m.window(s);
  if (!m.has_branch(s) || !w.closed_contains(v) || !m.domain(s).closed_contains(v)) {
    std::ostringstream os;
    os << m.name() << " " << to_string(s) << " branch undefined at v=" << v;
    fail(ErrorKind::OutOfWindow, os.str());
  }
  return m.branch(s, v);
}

double branch_slope(const Model& m, Side s, double v) {
  const double u = m.branch(s, v);
  const Jacobian j = m.jacobian(u, v);
  return -j.Fv / j.Fu;
}

double slow_rhs(const Model& m, Side s, double v) { return m.reaction(m.branch(s, v), v).G; }

double slow_rhs_slope(const Model& m, Side s, double v) {
  const double u = m.branch(s, v);
  const Jacobian j = m.jacobian(u, v);
  return j.Gu * (-j.Fv / j.Fu) + j.Gv;
}

bool stability_conditions(const Model& m, double u, double v) {
  const Jacobian j = m.jacobian(u, v);
  const double det = j.Fu * j.Gv - j.Fv * j.Gu;
  bool ok = det > 0 && j.Fu < 0;
  if (!m.tau_regime().small()) ok = ok && (j.Fu + m.tau_regime().value * j.Gv < 0);
  return ok;
}

std::vector<HomogeneousState> homogeneous_states(const Model& m) {
  std::vector<HomogeneousState> out;
  const int n = 256;
  for (Side s : {Side::minus, Side::plus, Side::center}) {
    if (!m.has_branch(s)) continue;
    const Interval w = m.window(s);
    if (w.empty()) continue;
    const Interval r = intersect(m.search_range(s), m.domain(s));
    if (r.empty()) continue;
    auto g = [&](double v) { return slow_rhs(m, s, v); };
    std::vector<double> roots;
    double a = r.lo, ga = g(a);
    if (ga == 0.0) roots.push_back(a);
    for (int i = 1; i <= n; ++i) {
      const double b = r.lo + (r.hi - r.lo) * i / n;
      const double gb = g(b);
      if (gb == 0.0) {
        roots.push_back(b);
      } else if (ga * gb < 0.0) {
        try {
          roots.push_back(find_root(g, a, b, ga, gb, 1e-15));
        } catch (const Error&) {
          fail(ErrorKind::RootFindingFailed, std::string("bracket refinement failed on ") +
                                                 to_string(s) + " branch");
        }
      }
      a = b;
      ga = gb;
    }
    for (double v : roots) {
      if (!w.open_contains(v)) continue;
      const double u = m.branch(s, v);
      bool dup = false;
      for (const auto& e : out) dup = dup || (std::fabs(e.u_bar - u) < 1e-9 && std::fabs(e.v_bar - v) < 1e-9);
      if (dup) continue;
      HomogeneousState st;
      st.u_bar = u;
      st.v_bar = v;
      st.branch_label = s == Side::minus ? StateLabel::minus
                        : s == Side::plus ? StateLabel::plus
                                          : StateLabel::other;
      st.stable = stability_conditions(m, u, v);
      out.push_back(st);
    }
  }
  // two vegetated FOTM states: the smaller-u one is the unstable one
  if (m.name() == "fotm") {
    std::vector<HomogeneousState*> plus;
    for (auto& e : out)
      if (e.branch_label == StateLabel::plus) plus.push_back(&e);
    if (plus.size() == 2) {
      auto* low = plus[0]->u_bar < plus[1]->u_bar ? plus[0] : plus[1];
      low->stable = false;
    }
  }
  return out;
}

std::pair<std::complex<double>, std::complex<double>> homogeneous_stability(
    const HomogeneousState& s, const Model& m, double eps, double k, double l) {
  const Jacobian j = m.jacobian(s.u_bar, s.v_bar);
  const double tau = m.tau_regime().tau(eps);
  const double K = k * k + l * l;
  const double e2 = eps * eps;
  const double b = -((j.Fu + tau * j.Gv) - (tau + e2) * K / e2);
  const double c = (j.Fu * j.Gv - j.Fv * j.Gu) - (j.Fu + e2 * j.Gv) * K / e2 + K * K / e2;
  const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4 * tau * c));
  // stable evaluation of the two roots
  const std::complex<double> q = -0.5 * (b + (b >= 0 ? disc : -disc));
  std::complex<double> l1 = q / tau;
  std::complex<double> l2 = q != 0.0 ? c / q : std::complex<double>(-b / tau);
  if (l1.real() < l2.real()) std::swap(l1, l2);
  return {l1, l2};
}

HomogeneousState background_state(const Model& m, Side s) {
  const StateLabel want = s == Side::minus ? StateLabel::minus : StateLabel::plus;
  const HomogeneousState* best = nullptr;
  std::vector<HomogeneousState> all = homogeneous_states(m);
  for (const auto& e : all) {
    if (e.branch_label != want) continue;
    if (!(slow_rhs_slope(m, s, e.v_bar) < 0)) continue;
    if (!best || (e.stable && !best->stable)) best = &e;
  }
  if (!best) {
    std::ostringstream os;
    os << m.name() << ": no saddle of the slow flow on the " << to_string(s) << " manifold";
    fail(ErrorKind::SaddleMissing, os.str());
  }
  return *best;
}

}  // namespace frontlab
