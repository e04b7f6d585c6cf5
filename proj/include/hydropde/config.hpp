#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "evolution.hpp"
#include "grid.hpp"

namespace hydropde {

enum class InitialKind { eigenmode, random_band, shear, manufactured, zero };

struct InitialConditionSpec {
  InitialKind kind = InitialKind::eigenmode;
  double amplitude = 1e-2;
  int kx = 1, ky = 0, m = 0;
  std::string component = "perp";  // eigenmode direction: perp, x or y
  int band = 2;                    // random-band: max |kx|, |ky|
  int mband = 3;                   // random-band: max m
  std::uint64_t seed = 1;
};

/// Everything a run needs; see README for the key reference.
struct RunConfig {
  Grid grid;
  double dt = 1e-3;
  double T = 1.0;
  int order = 2;
  int sample_every = 10;
  bool nonlinear = true;
  double cfl_max = 10.0;
  double c3 = 1.0;
  InitialConditionSpec ic;
  ForcingSpec forcing;
  double mms_amplitude = 1.0;
  std::string ledger, report, checkpoint;
  PicardConfig picard;

  ImexConfig imex() const {
    ImexConfig c;
    c.dt = dt;
    c.T = T;
    c.order = order;
    c.sample_every = sample_every;
    c.nonlinear = nonlinear;
    c.cfl_max = cfl_max;
    return c;
  }

  PicardConfig picard_config() const {
    PicardConfig c = picard;
    c.T = T;
    c.nonlinear = nonlinear;
    return c;
  }
};

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ValueParser {
  int line;
  const std::string& key;
  const std::string& text;

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + why);
  }
  double real() const {
    const char* b = text.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e == b || *e != '\0' || std::isnan(v)) fail("malformed number '" + text + "'");
    return v;
  }
  long integer() const {
    const char* b = text.c_str();
    char* e = nullptr;
    const long v = std::strtol(b, &e, 10);
    if (e == b || *e != '\0') fail("malformed integer '" + text + "'");
    return v;
  }
  bool boolean() const {
    if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
    if (text == "false" || text == "no" || text == "off" || text == "0") return false;
    fail("malformed boolean '" + text + "'");
  }
  /// Accepts a decimal or a fraction "p/q".
  double fraction() const {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return real();
    const std::string a = trim(text.substr(0, slash)), b = trim(text.substr(slash + 1));
    ValueParser pa{line, key, a}, pb{line, key, b};
    const double den = pb.real();
    if (den == 0.0) fail("zero denominator");
    return pa.real() / den;
  }
  void require(bool ok, const std::string& what) const {
    if (!ok) fail("value out of range (" + what + ")");
  }
};
}  // namespace detail

/// Line-oriented "key = value" text with '#' comments. Unknown keys,
/// malformed values and out-of-range values raise ConfigError naming the line.
inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  int amp_line = 0;
  bool amp_set = false;

  using P = detail::ValueParser;
  const std::map<std::string, std::function<void(const P&)>> keys = {
      {"nx", [&](const P& p) { auto v = p.integer(); p.require(v >= 4 && v % 2 == 0 && v <= 4096, "even, >= 4"); cfg.grid.nx = int(v); }},
      {"ny", [&](const P& p) { auto v = p.integer(); p.require(v >= 4 && v % 2 == 0 && v <= 4096, "even, >= 4"); cfg.grid.ny = int(v); }},
      {"nz", [&](const P& p) { auto v = p.integer(); p.require(v >= 2 && v <= 1024, ">= 2"); cfg.grid.nz = int(v); }},
      {"h", [&](const P& p) { auto v = p.real(); p.require(v > 0.0 && std::isfinite(v), "> 0"); cfg.grid.h = v; }},
      {"dealias", [&](const P& p) { auto v = p.fraction(); p.require(v > 0.0 && v <= 1.0, "in (0, 1]"); cfg.grid.dealias = v; }},
      {"dt", [&](const P& p) { auto v = p.real(); p.require(v > 0.0 && std::isfinite(v), "> 0"); cfg.dt = v; }},
      {"T", [&](const P& p) { auto v = p.real(); p.require(v >= 0.0 && std::isfinite(v), ">= 0"); cfg.T = v; }},
      {"scheme", [&](const P& p) {
         if (p.text == "cn-ab2" || p.text == "2") cfg.order = 2;
         else if (p.text == "be-fe" || p.text == "1") cfg.order = 1;
         else p.fail("unknown scheme '" + p.text + "' (cn-ab2 or be-fe)");
       }},
      {"sample_every", [&](const P& p) { auto v = p.integer(); p.require(v >= 0, ">= 0"); cfg.sample_every = int(v); }},
      {"nonlinear", [&](const P& p) { cfg.nonlinear = p.boolean(); }},
      {"cfl_max", [&](const P& p) { auto v = p.real(); p.require(v >= 0.0, ">= 0, 0 disables"); cfg.cfl_max = v; }},
      {"c3", [&](const P& p) { auto v = p.real(); p.require(v > 0.0 && std::isfinite(v), "> 0"); cfg.c3 = v; }},
      {"ic", [&](const P& p) {
         static const std::map<std::string, InitialKind> kinds = {{"eigenmode", InitialKind::eigenmode},
                                                                  {"random-band", InitialKind::random_band},
                                                                  {"shear", InitialKind::shear},
                                                                  {"manufactured", InitialKind::manufactured},
                                                                  {"zero", InitialKind::zero}};
         auto it = kinds.find(p.text);
         if (it == kinds.end()) p.fail("unknown initial condition '" + p.text + "'");
         cfg.ic.kind = it->second;
       }},
      {"ic_amplitude", [&](const P& p) {
         auto v = p.real();
         p.require(v >= 0.0 && std::isfinite(v), ">= 0");
         cfg.ic.amplitude = v;
         amp_line = p.line;
         amp_set = true;
       }},
      {"ic_kx", [&](const P& p) { cfg.ic.kx = int(p.integer()); }},
      {"ic_ky", [&](const P& p) { cfg.ic.ky = int(p.integer()); }},
      {"ic_m", [&](const P& p) { auto v = p.integer(); p.require(v >= 0, ">= 0"); cfg.ic.m = int(v); }},
      {"ic_component", [&](const P& p) {
         if (p.text != "perp" && p.text != "x" && p.text != "y") p.fail("expected perp, x or y");
         cfg.ic.component = p.text;
       }},
      {"ic_band", [&](const P& p) { auto v = p.integer(); p.require(v >= 0, ">= 0"); cfg.ic.band = int(v); }},
      {"ic_mband", [&](const P& p) { auto v = p.integer(); p.require(v >= 0, ">= 0"); cfg.ic.mband = int(v); }},
      {"ic_seed", [&](const P& p) { auto v = p.integer(); p.require(v >= 0, ">= 0"); cfg.ic.seed = std::uint64_t(v); }},
      {"forcing", [&](const P& p) {
         try {
           cfg.forcing.kind = parse_forcing_kind(p.text);
         } catch (const ConfigError& e) {
           p.fail(e.what());
         }
       }},
      {"forcing_amplitude", [&](const P& p) { auto v = p.real(); p.require(std::isfinite(v), "finite"); cfg.forcing.amplitude = v; }},
      {"forcing_kx", [&](const P& p) { cfg.forcing.kx = int(p.integer()); }},
      {"forcing_ky", [&](const P& p) { cfg.forcing.ky = int(p.integer()); }},
      {"forcing_m", [&](const P& p) { auto v = p.integer(); p.require(v >= 0, ">= 0"); cfg.forcing.m = int(v); }},
      {"forcing_component", [&](const P& p) {
         if (p.text == "x") cfg.forcing.component = 0;
         else if (p.text == "y") cfg.forcing.component = 1;
         else p.fail("expected x or y");
       }},
      {"forcing_rate", [&](const P& p) { auto v = p.real(); p.require(v >= 0.0 && std::isfinite(v), ">= 0"); cfg.forcing.rate = v; }},
      {"mms_amplitude", [&](const P& p) { auto v = p.real(); p.require(v > 0.0 && std::isfinite(v), "> 0"); cfg.mms_amplitude = v; }},
      {"ledger", [&](const P& p) { cfg.ledger = p.text; }},
      {"report", [&](const P& p) { cfg.report = p.text; }},
      {"checkpoint", [&](const P& p) { cfg.checkpoint = p.text; }},
      {"picard_subintervals", [&](const P& p) { auto v = p.integer(); p.require(v >= 1, ">= 1"); cfg.picard.subintervals = int(v); }},
      {"picard_nodes", [&](const P& p) { auto v = p.integer(); p.require(v >= 4 && v <= 64, "4..64"); cfg.picard.nodes = int(v); }},
      {"picard_max_iter", [&](const P& p) { auto v = p.integer(); p.require(v >= 1, ">= 1"); cfg.picard.max_iter = int(v); }},
      {"picard_tol", [&](const P& p) { auto v = p.real(); p.require(v > 0.0, "> 0"); cfg.picard.tol = v; }},
      {"picard_ceiling", [&](const P& p) { auto v = p.real(); p.require(v > 0.0, "> 0"); cfg.picard.ceiling = v; }},
  };

  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": " + key + ": missing value");
    it->second(P{lineno, key, value});
  }

  if (cfg.ic.kind != InitialKind::zero && amp_set && !(cfg.ic.amplitude > 0.0))
    throw ConfigError("line " + std::to_string(amp_line) + ": ic_amplitude: must be > 0 for ic kind other than zero");
  cfg.grid.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

/// Projected, masked initial velocity; deterministic in the seed.
inline SpectralField make_initial(const Grid& g, const InitialConditionSpec& spec, double mms_amplitude = 1.0) {
  SpectralField v(g, 2);
  const double a = spec.amplitude;
  switch (spec.kind) {
    case InitialKind::zero:
      break;
    case InitialKind::eigenmode: {
      double ux = 0.0, uy = 1.0;
      if (spec.component == "x") {
        ux = 1.0;
        uy = 0.0;
      } else if (spec.component == "perp" && !(spec.kx == 0 && spec.ky == 0)) {
        const double n = std::hypot(double(spec.kx), double(spec.ky));
        ux = -spec.ky / n;
        uy = spec.kx / n;
      }
      if (ux * spec.kx + uy * spec.ky != 0.0)
        throw DomainError("eigenmode: the direction must be perpendicular to k");
      v = mode_field(g, spec.kx, spec.ky, spec.m, a * ux, a * uy);
      break;
    }
    case InitialKind::shear:
      if (spec.kx == 0) throw DomainError("shear: ic_kx must be nonzero");
      v = mode_field(g, spec.kx, 0, spec.m, 0.0, a, true);
      break;
    case InitialKind::random_band: {
      RandomBand band;
      band.kband = spec.band;
      band.mband = std::min(spec.mband, g.nz - 1);
      band.decay = 2.0;
      v = galerkin_project(random_field(g, 2, spec.seed, band));
      const double n = l2_norm(v);
      if (n > 0.0) v *= a / n;
      break;
    }
    case InitialKind::manufactured:
      v = ManufacturedSolution(g, mms_amplitude).exact(0.0);
      break;
  }
  apply_mask(v);
  return galerkin_project(v);
}

}  // namespace hydropde
