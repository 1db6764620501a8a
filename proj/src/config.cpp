// SPDX-License-Identifier: Apache-2.0
#include "frontlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "frontlab/csv.hpp"
#include "frontlab/errors.hpp"

namespace frontlab {

const char* to_string(Command c) {
  switch (c) {
    case Command::construct: return "construct";
    case Command::criterion: return "criterion";
    case Command::spectrum: return "spectrum";
    case Command::simulate: return "simulate";
    case Command::bifurcate: return "bifurcate";
    case Command::sweep: return "sweep";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& s) {
  for (Command c : {Command::construct, Command::criterion, Command::spectrum, Command::simulate,
                    Command::bifurcate, Command::sweep})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Line {
  int no;
  std::string section, key, value;
};

struct Problems {
  std::vector<std::string> parse, validation;
  void add(bool is_parse, int line, const std::string& m) {
    (is_parse ? parse : validation).push_back("line " + std::to_string(line) + ": " + m);
  }
};

bool to_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool to_int(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtol(s.c_str(), &end, 10);
  return end == s.c_str() + s.size();
}

bool to_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "yes" || s == "1") return out = true, true;
  if (s == "false" || s == "no" || s == "0") return out = false, true;
  return false;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> linspace(double a, double b, long n) {
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  Problems pr;
  std::vector<Line> lines;
  {
    std::istringstream is(text);
    std::string raw, section;
    int no = 0;
    while (std::getline(is, raw)) {
      ++no;
      const auto hash = raw.find('#');
      std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']' || s.size() < 3) {
          pr.add(true, no, "malformed section header '" + s + "'");
          continue;
        }
        section = trim(s.substr(1, s.size() - 2));
        static const std::set<std::string> known{"model", "numerics", "spectrum", "simulate", "bifurcate", "sweep"};
        if (!known.count(section)) pr.add(false, no, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        pr.add(true, no, "expected 'key = value', got '" + s + "'");
        continue;
      }
      Line l{no, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
      if (l.key.empty()) {
        pr.add(true, no, "missing key");
        continue;
      }
      lines.push_back(l);
    }
  }

  // model name first, so that parameter keys can be checked against the catalog
  for (const auto& l : lines)
    if (l.section == "model" && l.key == "name") c.model = l.value;
  ParamList defaults;
  try {
    defaults = catalog_defaults(c.model);
  } catch (const Error&) {
    int no = 0;
    for (const auto& l : lines)
      if (l.section == "model" && l.key == "name") no = l.no;
    pr.add(false, no, "unknown model '" + c.model + "'");
  }

  double ell_max = 0.016;
  long ell_count = 17;
  bool explicit_ells = false;
  double tt_min = kNaN, tt_max = kNaN;
  long tt_count = 9;
  double sw_from = kNaN, sw_to = kNaN;
  long sw_count = 11;
  std::optional<double> tau, tau_tilde;
  std::set<std::string> seen;

  for (const auto& l : lines) {
    const std::string id = l.section + "." + l.key;
    if (l.key != "mode" && !seen.insert(id).second) pr.add(false, l.no, "duplicate key '" + l.key + "'");
    auto num = [&](double& out, const std::function<bool(double)>& ok, const char* what) {
      double v;
      if (!to_double(l.value, v)) return pr.add(false, l.no, "key '" + l.key + "' needs a number");
      if (!ok(v)) return pr.add(false, l.no, "key '" + l.key + "' must be " + what);
      out = v;
    };
    auto integer = [&](auto& out, long lo, const char* what) {
      long v;
      if (!to_int(l.value, v)) return pr.add(false, l.no, "key '" + l.key + "' needs an integer");
      if (v < lo) return pr.add(false, l.no, "key '" + l.key + "' must be " + what);
      out = static_cast<std::remove_reference_t<decltype(out)>>(v);
    };
    auto boolean = [&](bool& out) {
      if (!to_bool(l.value, out)) pr.add(false, l.no, "key '" + l.key + "' needs true or false");
    };
    auto pos = [](double v) { return v > 0; };
    auto nonneg = [](double v) { return v >= 0; };
    auto any = [](double v) { return std::isfinite(v); };
    auto unknown = [&]() { pr.add(false, l.no, "unknown key '" + l.key + "' in [" + l.section + "]"); };

    if (l.section.empty()) {
      if (l.key == "command") {
        c.command = parse_command(l.value);
        if (!c.command) pr.add(false, l.no, "unknown command '" + l.value + "'");
      } else {
        unknown();
      }
    } else if (l.section == "model") {
      if (l.key == "name") continue;
      if (l.key == "tau") {
        double v = 0;
        num(v, pos, "positive");
        tau = v;
      } else if (l.key == "tau_tilde") {
        double v = 0;
        num(v, pos, "positive");
        tau_tilde = v;
      } else if (std::any_of(defaults.begin(), defaults.end(), [&](const auto& d) { return d.first == l.key; })) {
        double v = 0;
        num(v, any, "finite");
        c.params[l.key] = v;
      } else {
        pr.add(false, l.no, "unknown key '" + l.key + "' for model " + c.model);
      }
      if (tau && tau_tilde) pr.add(false, l.no, "give either tau or tau_tilde, not both");
    } else if (l.section == "numerics") {
      if (l.key == "eps") num(c.eps, [](double v) { return v > 0 && v < 1; }, "in (0, 1)");
      else unknown();
    } else if (l.section == "spectrum") {
      if (l.key == "h") num(c.grid.h, pos, "positive");
      else if (l.key == "half_length") num(c.grid.half_length, pos, "positive");
      else if (l.key == "boundary") {
        if (l.value == "dirichlet") c.grid.boundary = Boundary::Dirichlet;
        else if (l.value == "neumann") c.grid.boundary = Boundary::Neumann;
        else pr.add(false, l.no, "boundary must be dirichlet or neumann");
      } else if (l.key == "refine") boolean(c.grid.refine);
      else if (l.key == "max_points") integer(c.grid.max_points, 16, "at least 16");
      else if (l.key == "ell_max") num(ell_max, pos, "positive");
      else if (l.key == "ell_count") integer(ell_count, 3, "at least 3");
      else if (l.key == "ells") {
        explicit_ells = true;
        c.ells.clear();
        for (const auto& t : split_list(l.value, ',')) {
          double v;
          if (!to_double(t, v) || v < 0) {
            pr.add(false, l.no, "ells must be non-negative numbers");
            break;
          }
          c.ells.push_back(v);
        }
        if (!std::is_sorted(c.ells.begin(), c.ells.end()))
          pr.add(false, l.no, "ells must be sorted ascending");
      } else unknown();
    } else if (l.section == "simulate") {
      SimSettings& s = c.sim;
      if (l.key == "Lx") num(s.Lx, pos, "positive");
      else if (l.key == "Ly") num(s.Ly, pos, "positive");
      else if (l.key == "Nx") integer(s.Nx, 4, "at least 4");
      else if (l.key == "Ny") integer(s.Ny, 1, "at least 1");
      else if (l.key == "dt") num(s.dt, pos, "positive");
      else if (l.key == "t_end") num(s.t_end, nonneg, "non-negative");
      else if (l.key == "snapshot_every") num(s.snapshot_every, nonneg, "non-negative");
      else if (l.key == "log_every") num(s.log_every, pos, "positive");
      else if (l.key == "comoving") boolean(s.comoving);
      else if (l.key == "recenter_every") integer(s.recenter_every, 1, "at least 1");
      else if (l.key == "x0") num(s.x0, pos, "positive");
      else if (l.key == "front_index") integer(s.front_index, 0, "non-negative");
      else if (l.key == "refine_initial") boolean(s.refine_initial);
      else if (l.key == "u_mid") num(s.u_mid, any, "finite");
      else if (l.key == "initial") {
        if (l.value == "skeleton") s.initial = InitialKind::SkeletonFront;
        else if (l.value == "custom") s.initial = InitialKind::Custom;
        else pr.add(false, l.no, "initial must be skeleton or custom");
      } else if (l.key == "initial_file") {
        s.initial_file = l.value;
        if (!std::filesystem::exists(l.value)) pr.add(false, l.no, "file '" + l.value + "' does not exist");
      } else if (l.key == "mode") {
        // mode = n [amplitude [phase]]
        const auto parts = split_list(l.value, ' ');
        ModeEntry m;
        long n = 0;
        bool ok = !parts.empty() && parts.size() <= 3 && to_int(parts[0], n) && n >= 1;
        if (ok && parts.size() >= 2) ok = to_double(parts[1], m.amplitude) && m.amplitude >= 0;
        if (ok && parts.size() == 3) ok = to_double(parts[2], m.phase);
        if (!ok) pr.add(false, l.no, "mode needs 'n [amplitude [phase]]' with n >= 1");
        m.n = static_cast<int>(n);
        s.modes.push_back(m);
      } else if (l.key == "noise_modes") integer(s.noise_modes, 0, "non-negative");
      else if (l.key == "noise_amplitude") num(s.noise_amplitude, nonneg, "non-negative");
      else if (l.key == "seed") integer(s.seed, 0, "non-negative");
      else if (l.key == "growth_from") num(s.growth_from, nonneg, "non-negative");
      else if (l.key == "growth_to") num(s.growth_to, pos, "positive");
      else unknown();
    } else if (l.section == "bifurcate") {
      if (l.key == "tau_tilde_min") num(tt_min, pos, "positive");
      else if (l.key == "tau_tilde_max") num(tt_max, pos, "positive");
      else if (l.key == "count") integer(tt_count, 1, "at least 1");
      else unknown();
    } else if (l.section == "sweep") {
      if (l.key == "param") {
        c.sweep_param = l.value;
        if (std::none_of(defaults.begin(), defaults.end(), [&](const auto& d) { return d.first == l.value; }) &&
            l.value != "eps" && l.value != "tau" && l.value != "tau_tilde")
          pr.add(false, l.no, "sweep parameter '" + l.value + "' is not a parameter of " + c.model);
      } else if (l.key == "from") num(sw_from, any, "finite");
      else if (l.key == "to") num(sw_to, any, "finite");
      else if (l.key == "count") integer(sw_count, 1, "at least 1");
      else unknown();
    }
  }

  if (tau) c.regime = TauRegime{TauKind::OrderOne, *tau};
  if (tau_tilde) c.regime = TauRegime{TauKind::OrderEps, *tau_tilde};
  if (!explicit_ells) c.ells = linspace(0.0, ell_max, ell_count);
  if (std::isfinite(tt_min) || std::isfinite(tt_max)) {
    if (!(std::isfinite(tt_min) && std::isfinite(tt_max) && tt_min <= tt_max))
      pr.add(false, 0, "bifurcate needs tau_tilde_min <= tau_tilde_max");
    else
      c.tau_tildes = linspace(tt_min, tt_max, tt_count);
  }
  if (!c.sweep_param.empty()) {
    if (!(std::isfinite(sw_from) && std::isfinite(sw_to)))
      pr.add(false, 0, "sweep needs from and to");
    else
      c.sweep_values = linspace(sw_from, sw_to, sw_count);
  }
  if (c.sim.initial == InitialKind::Custom && c.sim.initial_file.empty())
    pr.add(false, 0, "initial = custom needs initial_file");
  if (std::isfinite(c.sim.growth_from) != std::isfinite(c.sim.growth_to))
    pr.add(false, 0, "growth window needs both growth_from and growth_to");

  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "\n") + x;
    return s;
  };
  if (!pr.parse.empty()) {
    auto all = pr.parse;
    all.insert(all.end(), pr.validation.begin(), pr.validation.end());
    fail(ErrorKind::ParseError, join(all));
  }
  if (!pr.validation.empty()) fail(ErrorKind::ValidationError, join(pr.validation));
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

ModelPtr make_model(const RunConfig& c) { return make_model(c.model, c.params, c.regime); }

ModelPtr make_model(const RunConfig& c, const std::string& param, double value) {
  auto p = c.params;
  auto r = c.regime;
  if (param == "tau") r = TauRegime{TauKind::OrderOne, value};
  else if (param == "tau_tilde") r = TauRegime{TauKind::OrderEps, value};
  else if (param != "eps") p[param] = value;
  return make_model(c.model, p, r);
}

SimConfig sim_config(const RunConfig& c) {
  const SimSettings& s = c.sim;
  SimConfig o;
  o.model = make_model(c);
  o.eps = c.eps;
  o.Lx = s.Lx;
  o.Ly = s.Ly;
  o.Nx = s.Nx;
  o.Ny = s.Ny;
  o.dt = s.dt;
  o.t_end = s.t_end;
  o.snapshot_every = s.snapshot_every;
  o.log_every = s.log_every;
  o.comoving = s.comoving;
  o.recenter_every = s.recenter_every;
  o.x0 = s.x0;
  o.front_index = s.front_index;
  o.refine_initial = s.refine_initial;
  o.initial = s.initial;
  o.initial_file = s.initial_file;
  o.u_mid = s.u_mid;
  for (const auto& m : s.modes) o.seed.add(m.n, s.Ly, m.amplitude, m.phase);
  if (s.noise_modes > 0) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> phase(0.0, 2 * 3.14159265358979323846);
    for (int n = 1; n <= s.noise_modes; ++n) o.seed.add(n, s.Ly, s.noise_amplitude, phase(rng));
  }
  return o;
}

}  // namespace frontlab
