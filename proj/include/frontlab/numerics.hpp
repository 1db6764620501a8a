// SPDX-License-Identifier: Apache-2.0
// Small numerical toolbox shared by the geometry, criteria and spectral code.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace frontlab {

using State2 = std::array<double, 2>;

namespace ode {

// y' = rhs(y), autonomous planar systems only.
using Rhs = std::function<State2(const State2&)>;
// Integration stops when an event function changes sign.
using Event = std::function<double(const State2&)>;

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double dt0 = 1e-4;
  double max_dt = 0.0;  // 0 means unbounded
  double t_max = 1e4;   // integration length in |t|
  std::size_t max_steps = 2000000;
  double output_dt = 0.0;  // 0 records every accepted step
};

enum class Stop { Event, TimeLimit, StepLimit };

struct Sample {
  double t;
  State2 y;
};

struct Result {
  std::vector<Sample> samples;  // t increasing when direction > 0, decreasing otherwise
  Stop stop = Stop::TimeLimit;
  int event = -1;
};

// Dormand-Prince 5(4) with dense output.  direction = +1 or -1.
Result integrate(const Rhs& rhs, const State2& y0, double direction, const Options& opt,
                 const std::vector<Event>& events = {});

}  // namespace ode

// Adaptive Gauss-Kronrod on a finite interval.  Throws QuadratureNotConverged
// when the error estimate stays above tol*max(1,|I|).
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                 unsigned max_depth = 18);

// Bracketed root (TOMS 748).  Requires f(a)*f(b) <= 0.
double find_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol = 0.0);
double find_root(const std::function<double(double)>& f, double a, double b, double xtol = 0.0);

// Curve sampled with y, y', y'' and y''' at each node.  y is reconstructed by quintic
// Hermite interpolation from (y, y', y'') and y' from (y', y'', y''').
class HermiteCurve {
 public:
  void push(double t, double y, double yd, double ydd, double yddd);
  void reverse();
  void shift(double dt);
  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }
  double t(std::size_t i) const { return t_[i]; }
  double y(std::size_t i) const { return y_[i]; }
  double yd(std::size_t i) const { return yd_[i]; }
  double ydd(std::size_t i) const { return ydd_[i]; }
  double yddd(std::size_t i) const { return yddd_[i]; }
  double t_front() const { return t_.front(); }
  double t_back() const { return t_.back(); }
  // Valid for t inside [t_front, t_back].
  double value(double t) const;
  double deriv(double t) const;
  // Gauss-Legendre (8 nodes per sample interval) of w(t, y, y').
  double quad(const std::function<double(double, double, double)>& w) const;
  void append(const HermiteCurve& other, bool skip_first);

 private:
  std::size_t locate(double t) const;
  std::vector<double> t_, y_, yd_, ydd_, yddd_;
};

// Quintic Hermite interpolant on [0,1] scaled by h.
double hermite5(double s, double h, double y0, double d0, double dd0, double y1, double d1,
                double dd1);

// Linear least squares via normal equations, small dense systems.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& rhs);

}  // namespace frontlab
