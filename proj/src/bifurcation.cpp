// SPDX-License-Identifier: Apache-2.0
// Stationary fronts at small tau and their bifurcation into travelling waves.
#include <cmath>
#include <sstream>

#include "frontlab/criteria.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

TWBifurcation tw_bifurcation(const ModelPtr& mp) {
  const Model& m = *mp;
  const StationaryResiduals res = stationary_residuals(m);
  if (std::fabs(res.fast) > 1e-8 || std::fabs(res.slow) > 1e-8) {
    std::ostringstream os;
    os << "no stationary front: residuals fast=" << res.fast << " slow=" << res.slow;
    fail(ErrorKind::NoSolution, os.str());
  }
  const JumpPoint jp = find_jump_point(m, 0.0).front();
  const FrontSkeleton sk = assemble_skeleton(mp, 1.0, jp, 0.0);
  const double F = f_star(sk), G = g_star(sk), If = i_fast(sk), Is = i_slow(sk);
  if (std::fabs(G * If) < 1e-14) fail(ErrorKind::DegenerateDenominator, "G* I_f vanishes");
  TWBifurcation b;
  b.v_star_stationary = jp.v_star;
  b.tau_tilde_star = -F * Is / (G * If);
  b.v1_per_c_fast = -b.tau_tilde_star * If / F;
  b.v1_per_c_slow = Is / G;
  b.m_star_at_bifurcation = F * Is + b.tau_tilde_star * G * If;
  return b;
}

}  // namespace frontlab
