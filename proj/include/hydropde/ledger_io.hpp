#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "errors.hpp"

namespace hydropde {

// Ledger CSV: "# hydropde-ledger v1", a header row with the columns below,
// one row per sample (%.17g), and an optional trailing "# status: ..." line.

inline const std::vector<std::string>& ledger_columns() {
  static const std::vector<std::string> cols = {
      "t",           "E2",         "D2",          "gradHbar",     "vz2",        "tilde4",   "gradpi",
      "vz3",         "dtv2",       "H1",          "H2",           "dissipation", "forcing_work", "grad_vz2",
      "tilde_grad2", "constraint", "baro_res",    "bclin_res",    "galerkin_res", "recomb_res"};
  return cols;
}

namespace detail {
inline std::vector<double*> row_fields(LedgerRow& r) {
  auto& e = r.rec;
  return {&e.t,          &e.E2,           &e.D2,         &e.gradHbar,     &e.vz2,          &e.tilde4,   &e.gradpi,
          &e.vz3,        &e.dtv2,         &e.H1,         &e.H2,           &r.dissipation,  &r.forcing_work,
          &r.grad_vz2,   &r.tilde_grad2,  &r.constraint, &r.baro_res,     &r.bclin_res,    &r.galerkin_res,
          &r.recomb_res};
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_ledger(std::ostream& os, const TrajectoryLedger& led) {
  os << "# hydropde-ledger v1\n";
  const auto& cols = ledger_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  for (LedgerRow r : led.rows) {
    const auto f = detail::row_fields(r);
    for (std::size_t c = 0; c < f.size(); ++c) os << (c ? "," : "") << detail::fmt17(*f[c]);
    os << '\n';
  }
  for (const auto& cp : led.checkpoints) os << "# checkpoint: " << cp << '\n';
  os << "# status: " << led.status << '\n';
}

inline TrajectoryLedger read_ledger(std::istream& is) {
  TrajectoryLedger led;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# hydropde-ledger v1", 0) != 0)
    throw ConfigError("ledger: missing '# hydropde-ledger v1' header");
  if (!std::getline(is, line)) throw ConfigError("ledger: missing column header");
  {
    std::vector<std::string> got;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) got.push_back(tok);
    if (got != ledger_columns()) throw ConfigError("ledger: unexpected column header");
  }
  int lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# status: ", 0) == 0) led.status = line.substr(10);
      if (line.rfind("# checkpoint: ", 0) == 0) led.checkpoints.push_back(line.substr(14));
      continue;
    }
    LedgerRow r;
    auto f = detail::row_fields(r);
    std::stringstream ss(line);
    std::string tok;
    std::size_t c = 0;
    while (std::getline(ss, tok, ',')) {
      if (c >= f.size()) throw ConfigError("ledger line " + std::to_string(lineno) + ": too many fields");
      try {
        std::size_t used = 0;
        *f[c] = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("ledger line " + std::to_string(lineno) + ": malformed number '" + tok + "'");
      }
      ++c;
    }
    if (c != f.size()) throw ConfigError("ledger line " + std::to_string(lineno) + ": too few fields");
    led.rows.push_back(r);
  }
  return led;
}

inline void save_ledger(const std::string& path, const TrajectoryLedger& led) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open ledger for writing: " + path);
  write_ledger(os, led);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline TrajectoryLedger load_ledger(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open ledger: " + path);
  return read_ledger(is);
}

}  // namespace hydropde
