// SPDX-License-Identifier: Apache-2.0
// Reaction models: F, G, partials, and the branches of {F = 0}.
#pragma once

#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace frontlab {

enum class Side { minus, plus, center };
const char* to_string(Side s);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool open_contains(double v) const { return v > lo && v < hi; }
  bool closed_contains(double v) const { return v >= lo && v <= hi; }
  bool empty() const { return !(lo < hi); }
};
Interval intersect(const Interval& a, const Interval& b);

enum class TauKind { OrderOne, OrderEps };

struct TauRegime {
  TauKind kind = TauKind::OrderOne;
  double value = 1.0;  // tau, or tau_tilde when kind == OrderEps
  double tau(double eps) const { return kind == TauKind::OrderOne ? value : eps * value; }
  bool small() const { return kind == TauKind::OrderEps; }
};

struct Reaction {
  double F, G;
};

struct Jacobian {
  double Fu, Fv, Gu, Gv;
};

// F(u, v) = -alpha (u - beta_minus)(u - beta_c)(u - beta_plus) at a fixed v.
struct CubicFactors {
  double alpha, beta_minus, beta_c, beta_plus;
};

using ParamList = std::vector<std::pair<std::string, double>>;

class Model {
 public:
  Model(std::string name, ParamList params, TauRegime regime);
  virtual ~Model() = default;

  const std::string& name() const { return name_; }
  const ParamList& params() const { return params_; }
  double param(const std::string& key) const;
  const TauRegime& tau_regime() const { return regime_; }

  virtual Reaction reaction(double u, double v) const = 0;
  virtual Jacobian jacobian(double u, double v) const = 0;

  virtual bool has_branch(Side) const { return true; }
  // Closed interval on which the branch formula is defined.
  virtual Interval domain(Side s) const = 0;
  // Open interval on which F_u < 0 holds along the branch.
  virtual Interval window(Side s) const = 0;
  // Finite range scanned for homogeneous states.
  virtual Interval search_range(Side s) const;
  // Branch value without window checks.
  virtual double branch(Side s, double v) const = 0;
  virtual std::optional<CubicFactors> cubic(double) const { return std::nullopt; }

 protected:
  // by catalog position, for the hot paths
  double pv(std::size_t i) const { return params_[i].second; }

 private:
  std::string name_;
  ParamList params_;
  TauRegime regime_;
};

using ModelPtr = std::shared_ptr<const Model>;

// Catalog names: "bcde", "fotm", "fhn", "cylindrical", "user-cubic".  Missing parameters
// take catalog defaults; unknown names throw ValidationError.
ModelPtr make_model(const std::string& name, const std::map<std::string, double>& params = {},
                    std::optional<TauRegime> regime = std::nullopt);
std::vector<std::string> catalog_names();
// Parameter names and defaults of a catalog entry, in order.
ParamList catalog_defaults(const std::string& name);

// Same reaction with minus and plus branches exchanged (front orientation reversed).
ModelPtr swap_sides(const ModelPtr& m);

// mu3 placing the stationary cylindrical-model jump at v = 2/9.
double cylindrical_maxwell_mu3(double mu1, double mu2);

Reaction eval_reaction(const Model& m, double u, double v);
// Throws OutOfWindow when v is outside the branch domain.
double branch_solve(const Model& m, Side s, double v);
// df/dv along a branch, -F_v / F_u.
double branch_slope(const Model& m, Side s, double v);
// G along a branch and its total v-derivative.
double slow_rhs(const Model& m, Side s, double v);
double slow_rhs_slope(const Model& m, Side s, double v);

enum class StateLabel { minus, plus, other };
const char* to_string(StateLabel s);

struct HomogeneousState {
  double u_bar = 0, v_bar = 0;
  StateLabel branch_label = StateLabel::other;
  bool stable = false;
};

std::vector<HomogeneousState> homogeneous_states(const Model& m);
// All of F_u + tau G_v < 0 (order-one tau only), det > 0, F_u < 0.
bool stability_conditions(const Model& m, double u, double v);
std::pair<std::complex<double>, std::complex<double>> homogeneous_stability(
    const HomogeneousState& s, const Model& m, double eps, double k, double l);
// Background state on one slow manifold: a saddle of the slow flow, preferring stable states.
HomogeneousState background_state(const Model& m, Side s);

}  // namespace frontlab
