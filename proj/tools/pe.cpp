// pe: command-line driver for the hydrostatic solver and its checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hydropde/config.hpp"
#include "hydropde/ledger_io.hpp"
#include "hydropde/run.hpp"
#include "hydropde/stokes.hpp"

using namespace hydropde;

namespace {

RunConfig build_config(const std::string& path, const std::vector<std::string>& sets) {
  std::string text;
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  for (const auto& s : sets) text += "\n" + s;
  return parse_config(text);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out) {
  StokesOperator A(cfg.grid);
  const SpectrumReport rep = A.spectrum();
  std::cout << "beta " << fmt(rep.beta) << "\nmax_eigenvalue " << fmt(rep.max_eigenvalue) << "\nblocks "
            << rep.blocks.size() << '\n';
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open output: " + out);
    os << "kx,ky,eigenvalue\n";
    for (const auto& b : rep.blocks)
      for (double e : b.eigenvalues) os << b.kx << ',' << b.ky << ',' << fmt(e) << '\n';
    if (!os) throw std::runtime_error("write failed: " + out);
  }
  return exit_ok;
}

int cmd_resolvent(const RunConfig& cfg, double eps, const std::string& out) {
  StokesOperator A(cfg.grid);
  const SectorReport rep = A.sector_sweep(eps, StokesOperator::default_sector_samples(eps));
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output: " + out);
  os << "re_lambda,im_lambda,M_lambda\n";
  for (const auto& s : rep.samples) os << fmt(s.lambda.real()) << ',' << fmt(s.lambda.imag()) << ',' << fmt(s.m) << '\n';
  if (!os) throw std::runtime_error("write failed: " + out);
  std::cout << "sup_M " << fmt(rep.sup_m) << "\nbound " << fmt(rep.bound) << "\ninverse_norm " << fmt(rep.inverse_norm)
            << '\n';
  return exit_ok;
}

int cmd_diagnose(const std::string& ledger, const std::string& out, double c3) {
  const TrajectoryLedger led = load_ledger(ledger);
  const json rep = diagnose(led, c3);
  if (out.empty())
    std::cout << rep.dump(2) << '\n';
  else
    write_json(out, rep);
  return exit_ok;
}

int cmd_mms(const RunConfig& cfg, double T, double dt0, int levels, const std::string& out) {
  const MmsStudy s = mms_study(cfg.grid, cfg.order, T, dt0, levels, cfg.mms_amplitude);
  json j;
  j["T"] = s.T;
  j["dt"] = s.dts;
  j["errors"] = s.errors;
  j["orders"] = s.orders;
  j["richardson_error"] = s.richardson_error;
  j["order"] = cfg.order;
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json(out, j);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the hydrostatic primitive equations"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  auto add_config = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--config", config, "key = value configuration file");
    if (required) o->required();
    sub->add_option("--set", sets, "extra 'key = value' line (repeatable)");
  };

  auto* run = app.add_subcommand("run", "IMEX time integration with ledger and report");
  add_config(run, true);
  auto* picard = app.add_subcommand("picard", "Picard iteration of the mild formulation");
  add_config(picard, true);

  std::string out;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the Stokes operator");
  add_config(spectrum, false);
  spectrum->add_option("--out", out, "CSV of (kx, ky, eigenvalue)");

  double eps = pi / 8;
  auto* sweep = app.add_subcommand("resolvent-sweep", "sectorial resolvent bound over a sample of lambda");
  add_config(sweep, false);
  sweep->add_option("--eps", eps, "sector half-opening complement, in (0, pi/2)")->required();
  sweep->add_option("--out", out, "CSV output")->required();

  std::string ledger;
  double c3 = 1.0;
  auto* diag = app.add_subcommand("diagnose", "summarize a ledger as JSON");
  diag->add_option("--ledger", ledger, "ledger CSV")->required();
  diag->add_option("--out", out, "JSON output (stdout if omitted)");
  diag->add_option("--c3", c3, "weight of the L4 term in Phi")->check(CLI::PositiveNumber);

  double mms_T = 0.5, dt0 = 0.01;
  int levels = 4;
  auto* mms = app.add_subcommand("mms", "temporal convergence against a manufactured solution");
  add_config(mms, false);
  mms->add_option("--T", mms_T, "final time")->check(CLI::PositiveNumber);
  mms->add_option("--dt0", dt0, "coarsest step")->check(CLI::PositiveNumber);
  mms->add_option("--levels", levels, "number of step sizes")->check(CLI::Range(2, 12));
  mms->add_option("--out", out, "JSON output (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_imex(build_config(config, sets));
    if (*picard) return run_picard(build_config(config, sets));
    if (*spectrum) return cmd_spectrum(build_config(config, sets), out);
    if (*sweep) return cmd_resolvent(build_config(config, sets), eps, out);
    if (*diag) return cmd_diagnose(ledger, out, c3);
    if (*mms) return cmd_mms(build_config(config, sets), mms_T, dt0, levels, out);
  } catch (const StabilityError& e) {
    std::cerr << "pe: " << e.what() << '\n';
    return exit_unstable;
  } catch (const std::exception& e) {
    std::cerr << "pe: " << e.what() << '\n';
    return exit_io;
  }
  return exit_ok;
}
