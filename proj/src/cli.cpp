// SPDX-License-Identifier: Apache-2.0
#include "frontlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "frontlab/criteria.hpp"
#include "frontlab/csv.hpp"
#include "frontlab/errors.hpp"

namespace frontlab {

namespace fs = std::filesystem;

namespace {

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void note(std::ostream* p, const std::string& m) {
  if (p) *p << "[frontlab] " << m << std::endl;
}

std::string triples_csv(const char* header, const std::vector<std::array<double, 3>>& rows) {
  std::string s = std::string(header) + "\n";
  for (const auto& r : rows) s += fmt_double(r[0]) + "," + fmt_double(r[1]) + "," + fmt_double(r[2]) + "\n";
  return s;
}

void do_construct(const RunConfig& c, const std::string& out, std::ostream* p) {
  const auto fronts = build_front(make_model(c), c.eps);
  note(p, std::to_string(fronts.size()) + " front(s)");
  std::string table = "index,speed,pde_speed,v_star,q_star,u_star_minus,u_star_plus,c_times_tau\n";
  for (std::size_t k = 0; k < fronts.size(); ++k) {
    const FrontSkeleton& f = fronts[k];
    table += std::to_string(k) + "," + fmt_double(f.speed) + "," + fmt_double(f.pde_speed()) + "," +
             fmt_double(f.jump.v_star) + "," + fmt_double(f.jump.q_star) + "," +
             fmt_double(f.jump.u_star_minus) + "," + fmt_double(f.jump.u_star_plus) + "," +
             fmt_double(f.fast.c_times_tau) + "\n";
    const std::string tag = "front" + std::to_string(k) + "_";
    write_text(path_in(out, tag + "fast.csv"), triples_csv("xi,u,p", f.fast.samples()));
    write_text(path_in(out, tag + "slow_minus.csv"), triples_csv("X,v,q", f.slow_minus.samples()));
    write_text(path_in(out, tag + "slow_plus.csv"), triples_csv("X,v,q", f.slow_plus.samples()));
  }
  write_text(path_in(out, "fronts.csv"), table);
}

void do_criterion(const RunConfig& c, const std::string& out, std::ostream* p) {
  const auto fronts = build_front(make_model(c), c.eps);
  std::string text, csv = "index," + criterion_csv_header() + "\n";
  for (std::size_t k = 0; k < fronts.size(); ++k) {
    const CriterionReport r = criterion_report(fronts[k]);
    note(p, "front " + std::to_string(k) + ": " + to_string(r.verdict));
    text += "[front " + std::to_string(k) + "]\n" + to_key_value(r);
    csv += std::to_string(k) + "," + to_csv_row(r) + "\n";
  }
  write_text(path_in(out, "report.txt"), text);
  write_text(path_in(out, "criterion.csv"), csv);
  std::fputs(text.c_str(), stdout);
}

void do_spectrum(const RunConfig& c, const std::string& out, std::ostream* p) {
  const auto fronts = build_front(make_model(c), c.eps);
  const FrontSkeleton& s = fronts.at(std::min<std::size_t>(c.sim.front_index, fronts.size() - 1));
  note(p, "eigenvalue curve over " + std::to_string(c.ells.size()) + " ell values");
  const SpectralCurve curve = eigenvalue_curve(s, c.ells, c.grid);
  write_text(path_in(out, "curve.csv"), curve_csv(curve));
  std::string meta = curve_metadata(curve);
  try {
    meta += "lambda2c_asymptotic = " + fmt_double(criterion_report(s).lambda2c) + "\n";
  } catch (const Error&) {
  }
  write_text(path_in(out, "curve_meta.txt"), meta);
  if (curve.branch_jump) note(p, "warning: branch jump flagged along the curve");
}

void do_simulate(const RunConfig& c, const std::string& out, std::ostream* p) {
  const SimConfig sc = sim_config(c);
  int idx = 0;
  auto snap = [&](const SimState& s) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%04d.flb", idx++);
    write_snapshot(path_in(out, name), s);
  };
  auto prog = [&](const SimState& s) {
    if (!p) return;
    std::ostringstream os;
    os << "t = " << s.t << " / " << sc.t_end;
    note(p, os.str());
  };
  const RunResult r = run(sc, snap, prog);
  write_text(path_in(out, "modes.csv"), mode_log_csv(r.final_state.ells, r.mode_log));
  write_text(path_in(out, "interface.csv"), interface_log_csv(r, r.final_state.dy));
  write_snapshot(path_in(out, "final.flb"), r.final_state);
  if (std::isfinite(c.sim.growth_from)) {
    const auto g = growth_rates(r.final_state.ells, r.mode_log, c.sim.growth_from, c.sim.growth_to,
                                0.05 * r.final_state.fast_width);
    std::string csv = "ell,sigma\n";
    for (const auto& x : g) csv += fmt_double(x.ell) + "," + fmt_double(x.sigma) + "\n";
    write_text(path_in(out, "growth.csv"), csv);
  }
}

void do_bifurcate(const RunConfig& c, const std::string& out, std::ostream* p) {
  const ModelPtr m = make_model(c);
  const TWBifurcation b = tw_bifurcation(m);
  std::ostringstream os;
  os << "tau_tilde_star = " << fmt_double(b.tau_tilde_star) << "\n"
     << "v_star_stationary = " << fmt_double(b.v_star_stationary) << "\n"
     << "v1_per_c_fast = " << fmt_double(b.v1_per_c_fast) << "\n"
     << "v1_per_c_slow = " << fmt_double(b.v1_per_c_slow) << "\n"
     << "m_star_at_bifurcation = " << fmt_double(b.m_star_at_bifurcation) << "\n";
  write_text(path_in(out, "bifurcation.txt"), os.str());
  std::fputs(os.str().c_str(), stdout);
  std::vector<double> grid = c.tau_tildes;
  if (grid.empty())
    for (int i = 0; i <= 8; ++i) grid.push_back(b.tau_tilde_star * (0.5 + 0.125 * i));
  std::string csv = "tau_tilde,c_tilde,v_star,m_star,lambda2c,verdict\n";
  for (double tt : grid) {
    note(p, "branches at tau_tilde = " + fmt_double(tt));
    try {
      const auto fronts = build_front(make_model(c, "tau_tilde", tt), c.eps);
      for (const auto& f : fronts) {
        const CriterionReport r = criterion_report(f);
        csv += fmt_double(tt) + "," + fmt_double(f.speed) + "," + fmt_double(f.jump.v_star) + "," +
               (r.m_star ? fmt_double(*r.m_star) : "") + "," + fmt_double(r.lambda2c) + "," +
               to_string(r.verdict) + "\n";
      }
    } catch (const Error& e) {
      csv += fmt_double(tt) + ",,,,," + to_string(e.kind()) + "\n";
    }
  }
  write_text(path_in(out, "branches.csv"), csv);
}

std::string sweep_row(const RunConfig& c, double value) {
  const std::string head = fmt_double(value) + ",";
  try {
    const double eps = c.sweep_param == "eps" ? value : c.eps;
    const auto fronts = build_front(make_model(c, c.sweep_param, value), eps);
    return head + to_csv_row(criterion_report(fronts.front()));
  } catch (const Error& e) {
    return head + std::string(13, ',') + to_string(e.kind());
  }
}

void do_sweep(const RunConfig& c, const std::string& out, std::ostream* p) {
  if (c.sweep_param.empty()) fail(ErrorKind::ValidationError, "sweep needs [sweep] param, from, to");
  const std::size_t n = c.sweep_values.size();
  std::vector<std::string> rows(n);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < n; start += workers) {
    std::vector<std::future<std::string>> jobs;
    for (std::size_t k = start; k < std::min(n, start + workers); ++k)
      jobs.push_back(std::async(std::launch::async, sweep_row, std::cref(c), c.sweep_values[k]));
    for (std::size_t k = 0; k < jobs.size(); ++k) rows[start + k] = jobs[k].get();
    note(p, std::to_string(std::min(n, start + workers)) + " / " + std::to_string(n) + " points");
  }
  std::string csv = c.sweep_param + "," + criterion_csv_header() + "\n";
  for (const auto& r : rows) csv += r + "\n";
  write_text(path_in(out, "sweep.csv"), csv);
}

}  // namespace

void execute(Command cmd, const RunConfig& c, const std::string& out_dir, std::ostream* progress) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create output directory " + out_dir);
  switch (cmd) {
    case Command::construct: return do_construct(c, out_dir, progress);
    case Command::criterion: return do_criterion(c, out_dir, progress);
    case Command::spectrum: return do_spectrum(c, out_dir, progress);
    case Command::simulate: return do_simulate(c, out_dir, progress);
    case Command::bifurcate: return do_bifurcate(c, out_dir, progress);
    case Command::sweep: return do_sweep(c, out_dir, progress);
  }
}

int dispatch(Command cmd, const RunConfig& c, const std::string& out_dir, std::ostream& err, bool verbose) {
  try {
    if (c.command && *c.command != cmd)
      fail(ErrorKind::ValidationError, std::string("config is for command '") + to_string(*c.command) +
                                           "', not '" + to_string(cmd) + "'");
    execute(cmd, c, out_dir, verbose ? &err : nullptr);
    return 0;
  } catch (const Error& e) {
    err << "frontlab: " << e.what() << std::endl;
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "frontlab: " << e.what() << std::endl;
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Planar front construction, long-wave criteria, spectra and 2D simulation"};
  app.require_subcommand(1);
  std::string config, out = ".";
  bool verbose = false;
  for (const char* name : {"construct", "criterion", "spectrum", "simulate", "bifurcate", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "run configuration")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--verbose", verbose, "progress on standard error");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const Command cmd = *parse_command(app.get_subcommands().front()->get_name());
  RunConfig c;
  try {
    c = load_config(config);
  } catch (const Error& e) {
    std::cerr << "frontlab: " << e.what() << std::endl;
    return exit_code(e.kind());
  }
  return dispatch(cmd, c, out, std::cerr, verbose);
}

}  // namespace frontlab
