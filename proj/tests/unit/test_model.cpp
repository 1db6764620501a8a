// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "frontlab/errors.hpp"
#include "frontlab/model.hpp"

using namespace frontlab;

namespace {

ModelPtr fhn(double mu2, double mu3 = 0.0) {
  return make_model("fhn", {{"mu1", 4.0}, {"mu2", mu2}, {"mu3", mu3}, {"a", 1.0}, {"c0", 0.0}});
}

// finite interval of v: window clipped to the search range
Interval sample_range(const Model& m, Side s) {
  Interval w = intersect(m.window(s), m.search_range(s));
  if (std::isinf(w.lo)) w.lo = w.hi - 5.0;
  if (std::isinf(w.hi)) w.hi = w.lo + 5.0;
  return w;
}

}  // namespace

TEST_CASE("catalog reaction values") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  const Reaction rb = b->reaction(0.0, 6.2);
  CHECK(rb.F == 0.0);
  CHECK(rb.G == 0.0);

  const auto f = make_model("fhn", {{"mu1", 4.0}, {"mu2", 1.0}, {"mu3", 2.0}});
  CHECK(f->reaction(1.0, 0.0).F == 0.0);

  const auto fo = make_model("fotm");
  const Reaction r = fo->reaction(0.0, 1.1 / 3.2);
  CHECK(std::fabs(r.F) < 1e-15);
  CHECK(std::fabs(r.G) < 1e-15);
}

TEST_CASE("catalog lookup") {
  const auto names = catalog_names();
  CHECK(names.size() == 5);
  CHECK_THROWS_AS(make_model("brusselator"), Error);
  try {
    make_model("fhn", {{"nope", 1.0}});
    FAIL("unknown parameter accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
  }
  const auto m = make_model("fhn", {{"mu1", 5.0}});
  CHECK(m->param("mu1") == 5.0);
  CHECK(m->param("mu2") == 1.0);
}

TEST_CASE("branch formulas") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  CHECK(b->branch(Side::plus, 4.8) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b->branch(Side::center, 4.8) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(branch_solve(*b, Side::minus, 3.0) == 0.0);
  CHECK_THROWS_AS(branch_solve(*b, Side::plus, 4.0), Error);

  const auto f = fhn(1.0);
  CHECK(branch_solve(*f, Side::minus, 0.0) == -1.0);
  CHECK(branch_solve(*f, Side::plus, 0.0) == 1.0);

  const auto fo = make_model("fotm");
  const double mu1 = 3.5;
  const double vm = 27 * mu1 / (4 * std::pow(1 + mu1, 3));
  CHECK(vm == doctest::Approx(94.5 / 364.5).epsilon(1e-14));
  CHECK(fo->window(Side::plus).lo == doctest::Approx(vm).epsilon(1e-14));
  CHECK(fo->branch(Side::plus, vm) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("branch consistency on every catalog model") {
  std::mt19937_64 rng(7);
  for (const auto& name : catalog_names()) {
    const auto m = make_model(name);
    for (Side s : {Side::minus, Side::plus}) {
      if (!m->has_branch(s)) continue;
      const Interval w = sample_range(*m, s);
      REQUIRE(!w.empty());
      std::uniform_real_distribution<double> U(w.lo, w.hi);
      int bad = 0;
      for (int k = 0; k < 1000; ++k) {
        const double v = U(rng);
        if (!w.open_contains(v)) continue;
        const double u = branch_solve(*m, s, v);
        if (!(std::fabs(m->reaction(u, v).F) < 1e-10)) ++bad;
        if (!(m->jacobian(u, v).Fu < 0)) ++bad;
      }
      INFO(name, " ", to_string(s));
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("jacobian against central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> Uu(-1.5, 1.5), Uv(0.05, 3.0);
  const double h = 1e-6;
  for (const auto& name : catalog_names()) {
    const auto m = make_model(name);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const double u = Uu(rng), v = Uv(rng);
      const Jacobian J = m->jacobian(u, v);
      const Reaction up = m->reaction(u + h, v), um = m->reaction(u - h, v);
      const Reaction vp = m->reaction(u, v + h), vm = m->reaction(u, v - h);
      const double fd[4] = {(up.F - um.F) / (2 * h), (vp.F - vm.F) / (2 * h), (up.G - um.G) / (2 * h),
                            (vp.G - vm.G) / (2 * h)};
      const double an[4] = {J.Fu, J.Fv, J.Gu, J.Gv};
      for (int i = 0; i < 4; ++i) worst = std::max(worst, std::fabs(fd[i] - an[i]) / std::max(1.0, std::fabs(an[i])));
    }
    INFO(name);
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("fhn branch symmetry") {
  const auto f = fhn(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.4, 0.4);
  for (int k = 0; k < 200; ++k) {
    const double v = U(rng);
    CHECK(branch_solve(*f, Side::minus, -v) == -branch_solve(*f, Side::plus, v));
  }
}

TEST_CASE("homogeneous states") {
  const auto b = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 6.2}});
  const auto st = homogeneous_states(*b);
  bool bare = false, veg = false;
  for (const auto& s : st) {
    if (s.u_bar == 0.0 && std::fabs(s.v_bar - 6.2) < 1e-12) {
      bare = true;
      CHECK(s.stable);
    }
    if (s.branch_label == StateLabel::plus) {
      veg = true;
      CHECK(s.v_bar < 6.2);
    }
  }
  CHECK(bare);
  CHECK(veg);

  const auto bd = make_model("bcde", {{"mu1", 1.2}, {"mu2", 1.0}, {"mu3", 5.5}});
  const auto sd = homogeneous_states(*bd);
  REQUIRE(sd.size() == 1);
  CHECK(sd[0].u_bar == 0.0);

  const auto f = fhn(1.0);
  const HomogeneousState p = background_state(*f, Side::plus);
  CHECK(p.v_bar == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(p.u_bar == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("dispersion relation at zero wavenumber") {
  const auto b = make_model("bcde");
  HomogeneousState s{0.0, 6.2, StateLabel::minus, true};
  const auto [l1, l2] = homogeneous_stability(s, *b, 0.05, 0.0, 0.0);
  const Jacobian J = b->jacobian(0.0, 6.2);
  const double tau = b->tau_regime().tau(0.05);
  // roots of tau x^2 - (Fu + tau Gv) x + det
  const double det = J.Fu * J.Gv - J.Fv * J.Gu;
  for (auto x : {l1, l2}) {
    const auto r = tau * x * x - (J.Fu + tau * J.Gv) * x + det;
    CHECK(std::abs(r) < 1e-10);
  }
  CHECK(J.Fu == doctest::Approx(-1.2));
  CHECK(J.Gv == doctest::Approx(-1.0));
  CHECK(J.Fv == 0.0);
  CHECK(stability_conditions(*b, 0.0, 6.2));
  // F_u > 0 is never stable
  CHECK_FALSE(stability_conditions(*b, b->branch(Side::center, 5.0), 5.0));
}

TEST_CASE("stable flag survives a wavenumber sweep") {
  for (const auto& name : catalog_names()) {
    const auto m = make_model(name);
    for (const auto& s : homogeneous_states(*m)) {
      if (!s.stable) continue;
      for (double eps : {0.1, 0.01}) {
        double worst = -1e300;
        for (int a = 0; a <= 40; ++a)
          for (int c = 0; c <= 40; ++c) {
            const double k = 0.25 * a, l = 0.25 * c;
            const auto [x1, x2] = homogeneous_stability(s, *m, eps, k, l);
            worst = std::max({worst, x1.real(), x2.real()});
          }
        INFO(name, " eps=", eps, " state=(", s.u_bar, ",", s.v_bar, ")");
        CHECK(worst < 0);
      }
    }
  }
}

TEST_CASE("swapped orientation") {
  const auto b = make_model("bcde");
  const auto s = swap_sides(b);
  CHECK(s->branch(Side::minus, 5.0) == b->branch(Side::plus, 5.0));
  CHECK(s->window(Side::plus).lo == b->window(Side::minus).lo);
}
