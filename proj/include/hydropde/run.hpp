#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"
#include "diagnostics.hpp"
#include "evolution.hpp"
#include "io.hpp"
#include "ledger_io.hpp"
#include "stokes.hpp"

namespace hydropde {

/// Process exit codes of the `pe` tool.
enum ExitCode : int { exit_ok = 0, exit_io = 1, exit_unstable = 2, exit_nonconvergent = 3 };

using json = nlohmann::json;

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Summary of a ledger: energy budget, Gronwall monitor, decay rates and
/// residual maxima.
inline json diagnose(const TrajectoryLedger& led, double c3 = 1.0) {
  json out;
  const EnergyReport en = energy_budget(led);
  const GronwallReport gr = gronwall_monitor(led, c3);
  out["samples"] = led.rows.size();
  out["status"] = led.status;
  out["energy_residual_max"] = en.residual_max;
  out["energy_residual_trapezoid_max"] = en.trapezoid_residual_max;
  out["energy_strictly_decreasing"] = en.strictly_decreasing;
  out["phi_max"] = gr.phi_max;
  out["gronwall"] = {{"c3", c3},
                     {"phi0", gr.phi.empty() ? 0.0 : gr.phi.front()},
                     {"ratio_max", gr.ratio_max},
                     {"dominated", gr.dominated},
                     {"int_k1", gr.int_k1.empty() ? 0.0 : gr.int_k1.back()},
                     {"int_k2", gr.int_k2.empty() ? 0.0 : gr.int_k2.back()},
                     {"dissipation_integral", gr.dissipation_integral},
                     {"max_jump", gr.max_jump}};
  json rates = json::object();
  for (const char* q : {"E2", "D2", "H1", "gradHbar", "vz2", "tilde4"}) {
    try {
      const DecayFit f = decay_fit(led, q);
      rates[q] = number_or_null(f.rate);
    } catch (const DomainError&) {
      rates[q] = nullptr;
    }
  }
  out["decay_rates"] = rates;
  double rec = 0.0, gal = 0.0, bar = 0.0, bcl = 0.0, con = 0.0;
  for (const auto& r : led.rows) {
    rec = std::max(rec, r.recomb_res);
    gal = std::max(gal, r.galerkin_res);
    bar = std::max(bar, r.baro_res);
    bcl = std::max(bcl, r.bclin_res);
    con = std::max(con, r.constraint);
  }
  out["split_residual_max"] = rec;
  out["galerkin_residual_max"] = gal;
  out["barotropic_residual_max"] = bar;
  out["baroclinic_residual_max"] = bcl;
  out["constraint_max"] = con;
  return out;
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open report for writing: " + path);
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

/// Forcing spec with the manufactured solution attached when requested.
inline ForcingSpec resolve_forcing(const RunConfig& cfg) {
  ForcingSpec f = cfg.forcing;
  if (f.kind == ForcingKind::mms) f.mms = std::make_shared<ManufacturedSolution>(cfg.grid, cfg.mms_amplitude);
  return f;
}

/// IMEX run: ledger CSV, JSON report and final checkpoint as configured.
inline int run_imex(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const Grid& g = cfg.grid;
  const SpectralField a = make_initial(g, cfg.ic, cfg.mms_amplitude);
  ImexStepper st(std::make_shared<StokesOperator>(g), std::make_shared<NonlinearWorkspace>(g), resolve_forcing(cfg),
                 cfg.imex());
  ImexResult res = imex_run(st, a);
  if (!cfg.checkpoint.empty() && !res.aborted) {
    save_checkpoint(cfg.checkpoint, res.final_state);
    res.ledger.checkpoints.push_back(cfg.checkpoint);
  }
  if (!cfg.ledger.empty()) save_ledger(cfg.ledger, res.ledger);
  if (!cfg.report.empty()) {
    json rep = diagnose(res.ledger, cfg.c3);
    rep["final_time"] = res.final_time;
    rep["aborted"] = res.aborted;
    if (res.aborted) rep["message"] = res.message;
    write_json(cfg.report, rep);
  }
  if (res.aborted) {
    log << "pe: run aborted: " << res.message << '\n';
    return exit_unstable;
  }
  return exit_ok;
}

/// Picard run on [0, T]: ledger rows at the panel endpoints, iteration
/// report in the JSON output.
inline int run_picard(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const Grid& g = cfg.grid;
  const SpectralField a = make_initial(g, cfg.ic, cfg.mms_amplitude);
  StokesOperator A(g);
  NonlinearWorkspace ws(g);
  const ForcingSpec forcing = resolve_forcing(cfg);
  const PicardResult res = picard_solve(A, ws, a, forcing, cfg.picard_config());
  const auto& rep = res.report;

  TrajectoryLedger led;
  led.status = rep.status;
  const std::size_t n = res.times.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t l = j == 0 ? 0 : j - 1, r = j + 1 < n ? j + 1 : j;
    const SpectralField d = (1.0 / (res.times[r] - res.times[l])) * (res.states[r] - res.states[l]);
    led.rows.push_back(detail::ledger_row(ws, forcing, res.states[j], res.times[j], d, 0.0, 0.0));
  }
  // Dissipation by trapezoidal rule between endpoints.
  for (std::size_t j = 1; j < n; ++j)
    led.rows[j].dissipation = led.rows[j - 1].dissipation +
                              0.5 * (res.times[j] - res.times[j - 1]) * (led.rows[j].rec.D2 + led.rows[j - 1].rec.D2);
  if (!cfg.checkpoint.empty() && rep.converged) {
    save_checkpoint(cfg.checkpoint, res.states.back());
    led.checkpoints.push_back(cfg.checkpoint);
  }
  if (!cfg.ledger.empty()) save_ledger(cfg.ledger, led);
  if (!cfg.report.empty()) {
    json j = diagnose(led, cfg.c3);
    j["picard"] = {{"k", rep.k},
                   {"d", rep.d},
                   {"increments", rep.increments},
                   {"c1_samples", rep.c1_samples},
                   {"c1", rep.c1},
                   {"bound", number_or_null(rep.bound)},
                   {"smallness", rep.smallness},
                   {"converged", rep.converged},
                   {"iterations", rep.iterations},
                   {"status", rep.status}};
    write_json(cfg.report, j);
  }
  if (!rep.converged) {
    log << "pe: Picard iteration did not converge: " << rep.status << '\n';
    return exit_nonconvergent;
  }
  return exit_ok;
}

struct MmsStudy {
  std::vector<double> dts, errors, orders;
  double richardson_error = 0.0;  // relative, finest pair
  double T = 0.0;
};

/// Temporal convergence of the IMEX scheme against the manufactured
/// solution, over `levels` successive halvings of dt0.
inline MmsStudy mms_study(const Grid& g, int order, double T, double dt0, int levels, double amplitude = 1.0) {
  if (levels < 2) throw ConfigError("mms: at least two levels required");
  auto mms = std::make_shared<ManufacturedSolution>(g, amplitude);
  ForcingSpec f;
  f.kind = ForcingKind::mms;
  f.mms = mms;
  auto A = std::make_shared<StokesOperator>(g);
  auto ws = std::make_shared<NonlinearWorkspace>(g);
  MmsStudy out;
  out.T = T;
  const SpectralField exact = mms->exact(T);
  const double scale = l2_norm(exact);
  std::vector<SpectralField> finals;
  for (int l = 0; l < levels; ++l) {
    ImexConfig c;
    c.dt = dt0 / std::pow(2.0, l);
    c.T = T;
    c.order = order;
    c.record = false;
    c.sample_every = 0;
    c.cfl_max = 0.0;
    ImexStepper st(A, ws, f, c);
    ImexResult r = imex_run(st, mms->exact(0.0));
    if (r.aborted) throw StabilityError("mms: " + r.message);
    out.dts.push_back(c.dt);
    out.errors.push_back(l2_norm(r.final_state - exact) / scale);
    finals.push_back(std::move(r.final_state));
  }
  for (int l = 1; l < levels; ++l) out.orders.push_back(std::log2(out.errors[l - 1] / out.errors[l]));
  const double p2 = std::pow(2.0, order);
  SpectralField rich = (p2 / (p2 - 1.0)) * finals[levels - 1];
  rich.axpy(-1.0 / (p2 - 1.0), finals[levels - 2]);
  out.richardson_error = l2_norm(rich - exact) / scale;
  return out;
}

}  // namespace hydropde
