// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "frontlab/cli.hpp"
#include "frontlab/csv.hpp"
#include "frontlab/errors.hpp"

using namespace frontlab;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("frontlab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config accepted");
  return ErrorKind::InvalidArgument;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "frontlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

const char* kFig6 = R"(# long-wave spectrum of the standing fhn front
command = spectrum
[model]
name = fhn
tau = 1
mu1 = 4
mu2 = 1
mu3 = 0
[numerics]
eps = 0.01
[spectrum]
h = 0.02
ells = 0, 0.001, 0.002, 0.003, 0.004
)";

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const RunConfig c = parse_config("command = construct\n[model]\nname = bcde\n[numerics]\neps = 0.02\n");
  REQUIRE(c.command);
  CHECK(*c.command == Command::construct);
  CHECK(c.model == "bcde");
  CHECK(c.eps == 0.02);
  CHECK(c.params.empty());
  const ModelPtr m = make_model(c);
  CHECK(m->param("mu3") == 6.2);
  CHECK(c.grid.boundary == Boundary::Dirichlet);
  CHECK(c.sim.Nx == 512);
  CHECK(c.sim.Ny == 256);
}

TEST_CASE("spectrum config") {
  const RunConfig c = parse_config(kFig6);
  CHECK(*c.command == Command::spectrum);
  CHECK(c.model == "fhn");
  CHECK(c.params.at("mu2") == 1.0);
  REQUIRE(c.regime);
  CHECK(c.regime->kind == TauKind::OrderOne);
  CHECK(c.regime->value == 1.0);
  CHECK(c.eps == 0.01);
  CHECK(c.grid.h == 0.02);
  CHECK(c.ells == std::vector<double>{0, 0.001, 0.002, 0.003, 0.004});
}

TEST_CASE("config errors carry line numbers") {
  try {
    parse_config("[model]\nname = fhn\nmu9 = 3\n");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    const std::string w = e.what();
    CHECK(w.find("line 3") != std::string::npos);
    CHECK(w.find("mu9") != std::string::npos);
  }
  CHECK(parse_error_kind("[model]\nname fhn\n") == ErrorKind::ParseError);
  CHECK(parse_error_kind("[nowhere]\nx = 1\n") == ErrorKind::ValidationError);
  CHECK(parse_error_kind("[numerics]\neps = 2\n") == ErrorKind::ValidationError);
  CHECK(parse_error_kind("[numerics]\neps = abc\n") == ErrorKind::ValidationError);
  CHECK(parse_error_kind("[numerics]\neps = 0.1\neps = 0.2\n") == ErrorKind::ValidationError);
  CHECK(parse_error_kind("[model]\ntau = 1\ntau_tilde = 0.1\n") == ErrorKind::ValidationError);
  CHECK(parse_error_kind("command = draw\n") == ErrorKind::ValidationError);
  CHECK(parse_error_kind("[simulate]\nmode = 1 2 3 4\n") != ErrorKind::InvalidArgument);
}

TEST_CASE("simulation settings") {
  const RunConfig c = parse_config(
      "[model]\nname = fhn\nmu2 = -1\n[simulate]\nLx = 20\nNx = 160\nLy = 10\nNy = 8\n"
      "mode = 1 0.001\nmode = 2\nnoise_modes = 3\nnoise_amplitude = 1e-4\nseed = 9\n");
  CHECK(c.sim.modes.size() == 2);
  CHECK(c.sim.modes[0].amplitude == 0.001);
  CHECK(std::isnan(c.sim.modes[1].amplitude));
  const SimConfig s = sim_config(c);
  CHECK(s.seed.modes.size() == 5);
  CHECK(s.seed.modes[0].ell == doctest::Approx(2 * M_PI / 10));
  const SimConfig again = sim_config(c);
  for (std::size_t k = 0; k < s.seed.modes.size(); ++k) CHECK(s.seed.modes[k].phase == again.seed.modes[k].phase);
}

TEST_CASE("criterion on bcde") {
  const std::string out = scratch_dir("criterion");
  std::ostringstream err;
  const RunConfig c = parse_config("[model]\nname = bcde\nmu1 = 1.2\nmu2 = 1.0\nmu3 = 6.2\n[numerics]\neps = 0.02\n");
  CHECK(dispatch(Command::criterion, c, out, err) == 0);
  const auto kv = parse_key_values(read_text(out + "/report.txt"));
  CHECK(kv.at("verdict") == "TransversallyUnstable");
  const auto t = read_csv(out + "/criterion.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.number(0, "f_star") > 0);
  CHECK(t.number(0, "g_star") < 0);
}

TEST_CASE("construct writes the skeleton") {
  const std::string out = scratch_dir("construct");
  std::ostringstream err;
  CHECK(dispatch(Command::construct, parse_config("[model]\nname = fhn\n"), out, err) == 0);
  const auto f = read_csv(out + "/fronts.csv");
  REQUIRE(f.rows.size() == 1);
  CHECK(f.number(0, "speed") == 0.0);
  const auto fast = read_csv(out + "/front0_fast.csv");
  CHECK(fast.header == std::vector<std::string>{"xi", "u", "p"});
  CHECK(fast.rows.size() > 20);
  CHECK(fs::exists(out + "/front0_slow_minus.csv"));
  CHECK(fs::exists(out + "/front0_slow_plus.csv"));
}

TEST_CASE("bifurcate on linear fhn") {
  const std::string out = scratch_dir("bifurcate");
  std::ostringstream err;
  const RunConfig c =
      parse_config("[model]\nname = fhn\nmu1 = 4\nmu2 = 1\nmu3 = 2\ntau_tilde = 0.1\n[bifurcate]\ncount = 3\n"
                   "tau_tilde_min = 0.05\ntau_tilde_max = 0.2\n");
  CHECK(dispatch(Command::bifurcate, c, out, err) == 0);
  const auto kv = parse_key_values(read_text(out + "/bifurcation.txt"));
  CHECK(std::stod(kv.at("tau_tilde_star")) == doctest::Approx(1 / (3 * std::sqrt(6.0))).epsilon(1e-8));
  const auto b = read_csv(out + "/branches.csv");
  CHECK(b.rows.size() == 3 + 3 + 1);  // two grid points below the bifurcation
}

TEST_CASE("sweep records the sign change") {
  const std::string out = scratch_dir("sweep");
  std::ostringstream err;
  const RunConfig c = parse_config("[model]\nname = fhn\n[sweep]\nparam = mu2\nfrom = -1\nto = 1\ncount = 4\n");
  CHECK(dispatch(Command::sweep, c, out, err) == 0);
  const auto t = read_csv(out + "/sweep.csv");
  REQUIRE(t.rows.size() == 4);
  const auto mu2 = t.numbers("mu2");
  const auto l2 = t.numbers("lambda2c");
  for (std::size_t k = 0; k < 4; ++k) CHECK((l2[k] > 0) == (mu2[k] < 0));
}

TEST_CASE("spectrum artifacts") {
  const std::string out = scratch_dir("spectrum");
  std::ostringstream err;
  RunConfig c = parse_config(
      "[model]\nname = fhn\n[numerics]\neps = 0.05\n[spectrum]\nh = 0.05\nells = 0, 0.01, 0.02, 0.03\n");
  CHECK(dispatch(Command::spectrum, c, out, err) == 0);
  const auto t = read_csv(out + "/curve.csv");
  CHECK(t.rows.size() == 4);
  const auto kv = parse_key_values(read_text(out + "/curve_meta.txt"));
  CHECK(kv.count("fitted_lambda2") == 1);
  CHECK(kv.count("lambda2c_asymptotic") == 1);
  CHECK(std::stod(kv.at("fitted_lambda2")) < 0);
}

TEST_CASE("simulate is deterministic and round-trips") {
  const std::string cfg =
      "command = simulate\n[model]\nname = fhn\nmu2 = -1\n[numerics]\neps = 0.05\n"
      "[simulate]\nLx = 12.8\nNx = 128\nLy = 8\nNy = 8\ndt = 0.05\nt_end = 1\nlog_every = 0.25\n"
      "snapshot_every = 0.5\nnoise_modes = 2\nseed = 4\ngrowth_from = 0\ngrowth_to = 1\n";
  const std::string a = scratch_dir("sim_a"), b = scratch_dir("sim_b");
  std::ostringstream err;
  CHECK(dispatch(Command::simulate, parse_config(cfg), a, err) == 0);
  CHECK(dispatch(Command::simulate, parse_config(cfg), b, err) == 0);
  for (const char* f : {"modes.csv", "interface.csv", "final.flb", "snapshot_0000.flb", "snapshot_0002.flb",
                        "growth.csv"})
    CHECK(read_text(a + "/" + f) == read_text(b + "/" + f));
  const auto m = read_csv(a + "/modes.csv");
  const std::string again = mode_log_csv({}, {});
  CHECK(again.rfind("t,ell,", 0) == 0);
  // every number re-parses to the value printed
  for (const auto& row : m.rows)
    for (const auto& cell : row) CHECK(fmt_double(std::stod(cell)) == cell);
  const SimState s = read_snapshot(a + "/final.flb");
  CHECK(s.t == 1.0);
  CHECK(snapshot_bytes(s) == read_text(a + "/final.flb"));
}

TEST_CASE("exit codes") {
  std::ostringstream err;
  const RunConfig spec_cfg = parse_config(kFig6);
  CHECK(dispatch(Command::criterion, spec_cfg, scratch_dir("mismatch"), err) == 3);
  CHECK(err.str().find("ValidationError") != std::string::npos);

  const RunConfig nojump = parse_config("[model]\nname = bcde\nmu3 = 5.5\n");
  const int code = dispatch(Command::construct, nojump, scratch_dir("nojump"), err);
  CHECK(code != 0);
  CHECK(code != 2);

  CHECK(cli({"construct"}) == 2);
  CHECK(cli({"frobnicate", "--config", "x"}) == 2);
  CHECK(cli({"construct", "--config", "/nonexistent/frontlab.cfg"}) == exit_code(ErrorKind::IoError));

  const std::string dir = scratch_dir("argv");
  write_text(dir + "/bad.cfg", "[model]\nname fhn\n");
  CHECK(cli({"construct", "--config", dir + "/bad.cfg", "--out", dir}) == 2);
  write_text(dir + "/ok.cfg", "[model]\nname = fhn\n");
  CHECK(cli({"criterion", "--config", dir + "/ok.cfg", "--out", dir + "/o"}) == 0);
  CHECK(fs::exists(dir + "/o/report.txt"));

  CHECK(exit_code(ErrorKind::ParseError) != exit_code(ErrorKind::BlowUp));
  CHECK(exit_code(ErrorKind::NoIntersection) != exit_code(ErrorKind::ValidationError));
}

TEST_CASE("exit codes are distinct per error kind") {
  std::set<int> seen;
  for (int k = 0; k <= static_cast<int>(ErrorKind::IoError); ++k) {
    const int c = exit_code(static_cast<ErrorKind>(k));
    CHECK(c > 1);
    CHECK(seen.insert(c).second);
  }
}
