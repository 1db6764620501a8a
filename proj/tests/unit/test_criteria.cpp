// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "frontlab/criteria.hpp"
#include "frontlab/csv.hpp"
#include "frontlab/errors.hpp"

using namespace frontlab;

namespace {

ModelPtr fhn(double mu2, double mu3 = 0.0, TauRegime r = TauRegime{TauKind::OrderOne, 1.0}) {
  return make_model("fhn", {{"mu1", 4.0}, {"mu2", mu2}, {"mu3", mu3}, {"a", 1.0}, {"c0", 0.0}}, r);
}

double simpson(const std::function<double(double)>& f, double a, double b, double h) {
  const int n = 2 * static_cast<int>(std::lround((b - a) / (2 * h)));
  const double d = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * d);
  return s * d / 3.0;
}

}  // namespace

TEST_CASE("fhn stationary coefficients") {
  const auto fr = build_front(fhn(1.0), 0.001);
  REQUIRE(fr.size() == 1);
  const FrontSkeleton& s = fr[0];
  CHECK(f_star(s) == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(g_star(s) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(i_fast(s) == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-9));
  CHECK(i_slow(s) == doctest::Approx(1.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-9));
  const double eps = 0.001;
  CHECK(lambda2c(s, eps) == doctest::Approx(-1.0 / (3.0 * eps * std::sqrt(6.0))).epsilon(1e-6));
  const auto r = criterion_report(s);
  CHECK(r.verdict == Verdict::LongWaveStable);
  CHECK(!r.m_star);

  const auto fm = build_front(fhn(-1.0), eps);
  REQUIRE(fm.size() == 1);
  CHECK(lambda2c(fm[0], eps) == doctest::Approx(1.0 / (5.0 * eps * std::sqrt(10.0))).epsilon(1e-6));
  CHECK(criterion_report(fm[0]).verdict == Verdict::TransversallyUnstable);
}

TEST_CASE("travelling slow integral") {
  // standing jump of the small-tau branch vs the linear-flow formula
  for (double tt : {0.05, 0.1}) {
    const auto fronts = build_front(fhn(1.0, 2.0, TauRegime{TauKind::OrderEps, tt}), 0.01);
    for (const auto& f : fronts) {
      const double c = f.speed;
      INFO("c=", c);
      CHECK(i_slow(f) == doctest::Approx(8.0 / std::pow(c * c + 12.0, 1.5)).epsilon(1e-8));
    }
  }
}

TEST_CASE("zero F_v gives zero F*") {
  // user cubic with v-independent roots
  const auto m = make_model("user-cubic", {{"bm1", 0.0}, {"bp1", 0.0}, {"g00", 0.5}, {"g01", -1.0},
                                           {"g10", 0.5}, {"wm_lo", -5.0}, {"wm_hi", 5.0},
                                           {"wp_lo", -5.0}, {"wp_hi", 5.0}});
  const auto fr = build_front(m, 0.02);
  REQUIRE(!fr.empty());
  CHECK(f_star(fr[0]) == 0.0);
}

TEST_CASE("cylindrical coefficients") {
  const auto fr = build_front(make_model("cylindrical"), 0.01);
  REQUIRE(!fr.empty());
  const FrontSkeleton* s = nullptr;
  for (const auto& f : fr)
    if (std::fabs(f.speed) < 1e-12) s = &f;
  REQUIRE(s);
  CHECK(s->jump.v_star == doctest::Approx(2.0 / 9.0).epsilon(1e-10));
  CHECK(s->jump.u_star_plus == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(f_star(*s) == doctest::Approx(-2.0 / 9.0).epsilon(1e-8));
  CHECK(g_star(*s) == doctest::Approx(4.0 / 27.0).epsilon(1e-8));
  CHECK(i_fast(*s) == doctest::Approx(2.0 * std::sqrt(2.0) / 81.0).epsilon(1e-8));
}

TEST_CASE("bcde is transversally unstable") {
  for (double mu3 : {6.2, 7.0, 9.0}) {
    const auto fr = build_front(make_model("bcde", {{"mu3", mu3}}), 0.02);
    REQUIRE(fr.size() == 1);
    CHECK(f_star(fr[0]) > 0);
    CHECK(g_star(fr[0]) < 0);
    const double umid = fr[0].jump.u_star_plus, v = fr[0].jump.v_star;
    CHECK(g_star(fr[0]) == doctest::Approx(-umid * umid * v).epsilon(1e-12));
    CHECK(criterion_report(fr[0]).verdict == Verdict::TransversallyUnstable);
  }
}

TEST_CASE("small-tau criterion of the linear fhn model") {
  const double mu3 = 2.0, eps = 0.01;
  const double tt_star = 1.0 / (3.0 * std::sqrt(6.0));
  for (double tt : {0.5 * tt_star, 0.9 * tt_star, 1.2 * tt_star, 2.0 * tt_star}) {
    const auto fronts = build_front(fhn(1.0, mu3, TauRegime{TauKind::OrderEps, tt}), eps);
    const FrontSkeleton* s = nullptr;
    for (const auto& f : fronts)
      if (std::fabs(f.speed) < 1e-12) s = &f;
    REQUIRE(s);
    const double expect = (1.0 / (eps * eps)) * (mu3 - 1.0) / (3.0 * tt * std::sqrt(6.0) - (mu3 - 1.0));
    CHECK(lambda2c_small_tau(*s, tt, eps) == doctest::Approx(expect).epsilon(1e-8));
    const auto r = criterion_report(*s);
    REQUIRE(r.m_star);
    CHECK((*r.m_star > 0) == (tt > tt_star));
    REQUIRE(r.tau_tilde_star);
    CHECK(*r.tau_tilde_star == doctest::Approx(tt_star).epsilon(1e-8));
  }
  // the pole of the leading-order expression
  const auto fronts = build_front(fhn(1.0, mu3, TauRegime{TauKind::OrderEps, tt_star}), eps);
  for (const auto& f : fronts)
    if (std::fabs(f.speed) < 1e-12) {
      CHECK_THROWS_AS(lambda2c_small_tau(f, tt_star, eps), Error);
      CHECK(criterion_report(f).verdict == Verdict::Degenerate);
    }
}

TEST_CASE("same-sign small-tau fronts stay stable") {
  for (double tt : {0.02, 0.2, 1.0, 5.0}) {
    const auto fronts = build_front(fhn(1.0, 0.0, TauRegime{TauKind::OrderEps, tt}), 0.01);
    REQUIRE(!fronts.empty());
    for (const auto& f : fronts) {
      const auto r = criterion_report(f);
      CHECK(r.f_star * r.g_star > 0);
      CHECK(r.verdict == Verdict::LongWaveStable);
    }
  }
}

TEST_CASE("M* vanishes at the bifurcation point") {
  const auto m = fhn(1.0, 2.0, TauRegime{TauKind::OrderEps, 0.1});
  const TWBifurcation b = tw_bifurcation(m);
  const auto fronts = build_front(m, 0.01);
  for (const auto& f : fronts)
    if (std::fabs(f.speed) < 1e-12) {
      CHECK(std::fabs(m_star(f, b.tau_tilde_star)) < 1e-8);
      // by hand: F I_s + tau G I_f
      const double direct = f_star(f) * i_slow(f) + b.tau_tilde_star * g_star(f) * i_fast(f);
      CHECK(std::fabs(direct) < 1e-8);
    }
}

TEST_CASE("K integrals") {
  CHECK(k_integral(0, 2) == doctest::Approx(2.0).epsilon(1e-12));
  for (int j = 1; j <= 6; ++j) CHECK(k_integral(1, j) == 0.0);
  CHECK(k_integral(3, 4) == 0.0);
  const double ref = simpson([](double s) { return s * s / std::pow(std::cosh(s), 4); }, -40, 40, 1e-4);
  CHECK(std::fabs(k_integral(2, 4) - ref) < 1e-10);
  for (int i : {0, 2, 4})
    for (int j : {1, 2, 3, 4}) CHECK(k_integral(i, j) > 0);
}

TEST_CASE("bifurcating wave expansion") {
  for (double tau_hat : {0.5, 1.0, 2.0}) {
    const double delta = 0.05;
    const auto r = fhn_bifurcating_wave_report(4.0, 1.0, 2.0, tau_hat, delta, 0.01);
    REQUIRE(r.expansion.m_star);
    const double lead = (8.0 / 3.0) * std::sqrt(2.0) * tau_hat;
    CHECK(*r.expansion.m_star / (delta * delta) == doctest::Approx(lead).epsilon(0.1));
    CHECK(r.expansion.g_star == 2.0);
    CHECK(r.expansion.lambda2c > 0);
  }
  const auto a = fhn_bifurcating_wave_report(4.0, 1.0, 2.0, 1.0, 0.05, 0.01);
  const auto b = fhn_bifurcating_wave_report(5.0, 1.0, 3.0, 1.0, 0.05, 0.01);
  CHECK(*a.expansion.m_star == doctest::Approx(*b.expansion.m_star).epsilon(0.1));
}

TEST_CASE("report serialisation") {
  const auto fr = build_front(fhn(1.0), 0.01);
  const auto r = criterion_report(fr[0]);
  const auto kv = parse_key_values(to_key_value(r));
  CHECK(kv.at("verdict") == "LongWaveStable");
  CHECK(std::stod(kv.at("lambda2c")) == doctest::Approx(r.lambda2c).epsilon(1e-15));
  const auto t = parse_csv(criterion_csv_header() + "\n" + to_csv_row(r) + "\n");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.number(0, "f_star") == r.f_star);
}
