#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "fields.hpp"
#include "projection.hpp"

namespace hydropde {

// Checkpoint layout: ASCII header line "HYDROPDE1 nx ny nz h components",
// then little-endian float64 pairs (re, im) in (component, kx, ky, m)
// row-major order. Surface pressures use components = 1 and nz = 0.

namespace detail {
inline void put_le(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

inline double get_le(std::istream& is) {
  std::uint64_t bits = 0;
  if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw ConfigError("checkpoint: truncated payload");
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

inline void write_header(std::ostream& os, const Grid& g, int nz, int comps) {
  std::ostringstream hs;
  hs << std::setprecision(17) << "HYDROPDE1 " << g.nx << ' ' << g.ny << ' ' << nz << ' ' << g.h << ' ' << comps
     << '\n';
  os << hs.str();
}

struct Header {
  int nx = 0, ny = 0, nz = 0, comps = 0;
  double h = 0.0;
};

inline Header read_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("checkpoint: missing header");
  std::istringstream hs(line);
  std::string magic;
  Header hd;
  if (!(hs >> magic >> hd.nx >> hd.ny >> hd.nz >> hd.h >> hd.comps) || magic != "HYDROPDE1")
    throw ConfigError("checkpoint: malformed header '" + line + "'");
  return hd;
}
}  // namespace detail

inline void write_checkpoint(std::ostream& os, const SpectralField& f) {
  detail::write_header(os, f.grid(), f.grid().nz, f.components());
  for (const cplx& c : f.coeffs()) {
    detail::put_le(os, c.real());
    detail::put_le(os, c.imag());
  }
}

inline void write_checkpoint(std::ostream& os, const SurfacePressure& p) {
  detail::write_header(os, p.grid(), 0, 1);
  for (const cplx& c : p.coeffs().coeffs()) {
    detail::put_le(os, c.real());
    detail::put_le(os, c.imag());
  }
}

/// Reads a spectral field; `base` supplies the grid settings that the
/// header does not carry (dealias fraction).
inline SpectralField read_checkpoint(std::istream& is, Grid base = {}) {
  const auto hd = detail::read_header(is);
  if (hd.nz == 0) throw ConfigError("checkpoint: file holds a surface pressure");
  base.nx = hd.nx;
  base.ny = hd.ny;
  base.nz = hd.nz;
  base.h = hd.h;
  base.validate();
  SpectralField f(base, hd.comps);
  for (cplx& c : f.coeffs()) {
    const double re = detail::get_le(is);
    const double im = detail::get_le(is);
    c = cplx(re, im);
  }
  return f;
}

inline SurfacePressure read_pressure_checkpoint(std::istream& is, Grid base = {}) {
  const auto hd = detail::read_header(is);
  if (hd.nz != 0 || hd.comps != 1) throw ConfigError("checkpoint: not a surface pressure");
  base.nx = hd.nx;
  base.ny = hd.ny;
  base.h = hd.h;
  AveragedField c(base, 1);
  for (cplx& v : c.coeffs()) {
    const double re = detail::get_le(is);
    const double im = detail::get_le(is);
    v = cplx(re, im);
  }
  return SurfacePressure(std::move(c));
}

inline void save_checkpoint(const std::string& path, const SpectralField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  write_checkpoint(os, f);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline SpectralField load_checkpoint(const std::string& path, Grid base = {}) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  return read_checkpoint(is, base);
}

}  // namespace hydropde
