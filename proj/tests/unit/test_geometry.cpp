// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "frontlab/errors.hpp"
#include "frontlab/geometry.hpp"

using namespace frontlab;

namespace {

ModelPtr fhn(double mu2, double mu3 = 0.0, double c0 = 0.0,
             TauRegime r = TauRegime{TauKind::OrderOne, 1.0}) {
  return make_model("fhn", {{"mu1", 4.0}, {"mu2", mu2}, {"mu3", mu3}, {"a", 1.0}, {"c0", c0}}, r);
}

double max_h_drift(const Model& m, const SlowOrbit& o) {
  double lo = 1e300, hi = -1e300;
  for (const auto& s : o.samples()) {
    const double h = slow_hamiltonian(m, o.side, s[1], s[2]);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return hi - lo;
}

}  // namespace

TEST_CASE("slow hamiltonian") {
  const auto f = fhn(1.0);
  CHECK(slow_hamiltonian(*f, Side::plus, 1.0 / 3.0, 0.0) == doctest::Approx(0.0));
  for (double v : {-0.2, 0.0, 0.15, 0.5}) {
    const double q = 0.3;
    const double exact = 0.5 * q * q + (v - 1.0 / 3.0) - 1.5 * (v * v - 1.0 / 9.0);
    CHECK(slow_hamiltonian(*f, Side::plus, v, q) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(slow_hamiltonian(*f, Side::minus, -v, q) ==
          doctest::Approx(slow_hamiltonian(*f, Side::plus, v, q)).epsilon(1e-12));
  }
}

TEST_CASE("bcde bare-soil orbit is linear") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  const SlowOrbit o = saddle_manifold_orbit(*b, Side::minus, ManifoldKind::unstable_of_minus, 0.0);
  REQUIRE(o.curve.size() > 10);
  double worst = 0;
  for (const auto& s : o.samples()) worst = std::max(worst, std::fabs(s[2] - (s[1] - 6.2)));
  CHECK(worst < 1e-8);
  CHECK(max_h_drift(*b, o) < 1e-8);
}

TEST_CASE("fhn travelling slow orbit") {
  const auto f = fhn(1.0);
  for (double c : {0.7, -0.4}) {
    const SlowOrbit o = saddle_manifold_orbit(*f, Side::plus, ManifoldKind::stable_of_plus, c);
    const double r = 0.5 * (-c - std::sqrt(c * c + 12.0));
    double worst = 0;
    for (const auto& s : o.samples()) worst = std::max(worst, std::fabs(s[2] - r * (s[1] - 1.0 / 3.0)));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("jump point") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  const auto jps = find_jump_point(*b, 0.0);
  REQUIRE(jps.size() == 1);
  const double vplus = background_state(*b, Side::plus).v_bar;
  CHECK(4.8 < vplus);
  CHECK(vplus < jps[0].v_star);
  CHECK(jps[0].v_star < 6.2);
  CHECK(jps[0].q_star < 0);
  CHECK(jps[0].q_star == doctest::Approx(jps[0].v_star - 6.2).epsilon(1e-9));

  const auto f = fhn(1.0);
  const auto j0 = find_jump_point(*f, 0.0);
  REQUIRE(!j0.empty());
  CHECK(std::fabs(j0[0].v_star) < 1e-12);
  for (double c : {0.5, -1.2}) {
    const auto jc = find_jump_point(*f, c);
    REQUIRE(jc.size() == 1);
    CHECK(jc[0].v_star == doctest::Approx(c / (3.0 * std::sqrt(c * c + 12.0))).epsilon(1e-9));
  }

  const auto cyl = make_model("cylindrical");
  const auto jcyl = find_jump_point(*cyl, 0.0);
  REQUIRE(!jcyl.empty());
  CHECK(jcyl[0].v_star == doctest::Approx(2.0 / 9.0).epsilon(1e-10));
}

TEST_CASE("cubic heteroclinic") {
  const FastJump s = cubic_heteroclinic(1.0, -1.0, 0.0, 1.0);
  CHECK(s.c_times_tau == 0.0);
  REQUIRE(s.closed_form);
  CHECK(s.closed_form->K == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  double worst = 0;
  for (double xi = -10; xi <= 10; xi += 0.37) worst = std::max(worst, std::fabs(s.u(xi) - std::tanh(xi / std::sqrt(2.0))));
  CHECK(worst < 1e-10);

  // the cylindrical fast cubic at v = 2/9
  const FastJump c = cubic_heteroclinic(1.0, 0.0, 1.0 / 3.0, 2.0 / 3.0);
  const double ct = c.c_times_tau;
  const double If = c.curve.quad([&](double t, double, double p) { return p * p * std::exp(ct * t); });
  CHECK(If == doctest::Approx(2.0 * std::sqrt(2.0) / 81.0).epsilon(1e-8));
}

TEST_CASE("fast speeds") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  for (double v : {5.0, 5.4, 5.9}) {
    const double closed = (std::sqrt(v) - 3 * std::sqrt(v - 4.8)) / (2 * std::sqrt(2.0));
    const FastJump fj = fast_jump(*b, v);
    CHECK(std::fabs(fj.c_times_tau - closed) < 1e-10);
    const FastJump sh = fast_speed_shoot(*b, v);
    CHECK(std::fabs(sh.c_times_tau - closed) < 1e-8);
  }
  CHECK(std::fabs(fast_jump(*b, 5.4).c_times_tau) < 1e-12);
  CHECK(fast_jump(*b, 5.0).c_times_tau > 0);
  CHECK(fast_jump(*b, 5.9).c_times_tau < 0);

  for (double c0 : {0.0, 0.3, -0.2}) {
    const auto f = fhn(1.0, 0.0, c0);
    const FastJump fj = fast_jump(*f, 0.0);
    CHECK(std::fabs(fj.c_times_tau - std::sqrt(2.0) * c0) < 1e-12);
    if (c0 == 0.0) {
      double worst = 0;
      for (double xi = -8; xi <= 8; xi += 0.5)
        worst = std::max(worst, std::fabs(fj.u(xi) - std::tanh(0.5 * std::sqrt(2.0) * xi)));
      CHECK(worst < 1e-6);
    }
    const FastJump sh = fast_speed_shoot(*f, 0.0);
    CHECK(std::fabs(sh.c_times_tau - fj.c_times_tau) < 1e-8);
  }
}

TEST_CASE("closed form against shooting on every catalog cubic") {
  for (const auto& name : catalog_names()) {
    const auto m = make_model(name);
    const auto jps = find_jump_point(*m, 0.0);
    if (jps.empty()) continue;
    const double v = jps[0].v_star;
    if (!m->cubic(v)) continue;
    const FastJump cf = fast_jump(*m, v);
    const FastJump sh = fast_speed_shoot(*m, v);
    INFO(name);
    CHECK(std::fabs(cf.c_times_tau - sh.c_times_tau) < 1e-8);
    double worst = 0;
    for (const auto& s : sh.samples()) worst = std::max(worst, std::fabs(s[1] - cf.u(s[0])));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("skeleton invariants") {
  std::vector<ModelPtr> models = {make_model("bcde"), fhn(1.0), fhn(-1.0), make_model("cylindrical"),
                                  make_model("fotm")};
  for (const auto& m : models) {
    const auto fronts = build_front(m, 0.02);
    REQUIRE(!fronts.empty());
    for (const auto& f : fronts) {
      INFO(m->name());
      const auto& sm = f.slow_minus;
      const auto& sp = f.slow_plus;
      CHECK(std::fabs(sm.v(sm.x_back()) - f.jump.v_star) < 1e-6);
      CHECK(std::fabs(sm.q(sm.x_back()) - f.jump.q_star) < 1e-6);
      CHECK(std::fabs(sp.v(sp.x_front()) - f.jump.v_star) < 1e-6);
      CHECK(std::fabs(sp.q(sp.x_front()) - f.jump.q_star) < 1e-6);

      const auto fs = f.fast.samples();
      bool mono = true, one_sign = true;
      const double dir = fs.back()[1] > fs.front()[1] ? 1.0 : -1.0;
      for (std::size_t i = 1; i < fs.size(); ++i) {
        if (dir * (fs[i][1] - fs[i - 1][1]) < 0) mono = false;
        if (dir * fs[i][2] < 0) one_sign = false;
      }
      CHECK(mono);
      CHECK(one_sign);

      if (f.speed == 0.0) {
        CHECK(max_h_drift(*m, sm) < 1e-8);
        CHECK(max_h_drift(*m, sp) < 1e-8);
      }
    }
  }
}

TEST_CASE("bcde front speed follows the jump level") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  const auto fr = build_front(b, 0.02);
  REQUIRE(fr.size() == 1);
  const double v = fr[0].jump.v_star;
  CHECK(v != doctest::Approx(5.4));
  CHECK((fr[0].speed > 0) == (v < 5.4));
}

TEST_CASE("stationary residuals") {
  const auto r = stationary_residuals(*fhn(1.0));
  CHECK(std::fabs(r.fast) < 1e-12);
  CHECK(std::fabs(r.slow) < 1e-12);
  const auto rc = stationary_residuals(*make_model("cylindrical"));
  CHECK(std::fabs(rc.fast) < 1e-10);
  const auto rb = stationary_residuals(*make_model("bcde"));
  CHECK(std::fabs(rb.fast) > 1e-4);
}

TEST_CASE("small-tau branches of the linear fhn model") {
  const double mu3 = 2.0;
  const double tt_star = (mu3 - 1.0) / (3.0 * std::sqrt(6.0));
  const TWBifurcation b = tw_bifurcation(fhn(1.0, mu3, 0.0, TauRegime{TauKind::OrderEps, 0.1}));
  CHECK(b.tau_tilde_star == doctest::Approx(tt_star).epsilon(1e-8));
  CHECK(std::fabs(b.m_star_at_bifurcation) < 1e-8);

  for (double tt : {0.05, 0.1, 0.13}) {
    const auto m = fhn(1.0, mu3, 0.0, TauRegime{TauKind::OrderEps, tt});
    const auto fronts = build_front(m, 0.01);
    const double c2 = 2.0 * std::pow(mu3 - 1.0, 2) / (9.0 * tt * tt) - 12.0;
    int zero = 0, moving = 0;
    for (const auto& f : fronts) {
      if (std::fabs(f.speed) < 1e-9) {
        ++zero;
        continue;
      }
      ++moving;
      CHECK(f.speed * f.speed == doctest::Approx(c2).epsilon(1e-6));
      CHECK(std::fabs(f.speed * tt - f.fast.c_times_tau) < 1e-8);
      const auto jp = find_jump_point(*m, f.speed);
      REQUIRE(!jp.empty());
      CHECK(std::fabs(jp[0].v_star - f.jump.v_star) < 1e-8);
    }
    CHECK(zero == 1);
    CHECK(moving == 2);
  }
  // above the bifurcation only the standing front remains
  const auto above = build_front(fhn(1.0, mu3, 0.0, TauRegime{TauKind::OrderEps, 0.2}), 0.01);
  REQUIRE(above.size() == 1);
  CHECK(std::fabs(above[0].speed) < 1e-9);
}

TEST_CASE("model without a jump point") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 5.5}});
  CHECK_THROWS_AS(build_front(b, 0.02), Error);
}
