#pragma once

#include <cmath>

#include "fields.hpp"

namespace hydropde {

/// Surface pressure pi on G with zero mean: coefficient (0,0) is always 0.
class SurfacePressure {
 public:
  SurfacePressure() = default;
  explicit SurfacePressure(const Grid& g) : coeffs_(g, 1) {}
  explicit SurfacePressure(AveragedField c) : coeffs_(std::move(c)) {
    if (coeffs_.components() != 1) throw ConfigError("SurfacePressure: scalar field required");
    coeffs_(0, 0, 0) = 0.0;
  }

  const Grid& grid() const { return coeffs_.grid(); }
  const AveragedField& coeffs() const { return coeffs_; }
  cplx operator()(int i, int j) const { return coeffs_(0, i, j); }

  /// nabla_H pi as a z-independent vector field.
  AveragedField gradient() const {
    const Grid& g = grid();
    AveragedField out(g, 2);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        if (g.nyquist(i, j)) continue;
        out(0, i, j) = cplx(0.0, two_pi * g.kx(i)) * coeffs_(0, i, j);
        out(1, i, j) = cplx(0.0, two_pi * g.ky(j)) * coeffs_(0, i, j);
      }
    return out;
  }

 private:
  AveragedField coeffs_;
};

/// Horizontal velocity split into a cosine-basis part and a z-independent
/// column part. The column channel carries the pressure gradients that
/// the basis cannot represent.
struct HydroField {
  SpectralField modal;
  AveragedField column;

  HydroField() = default;
  explicit HydroField(SpectralField v) : modal(std::move(v)), column(modal.grid(), modal.components()) {}
  HydroField(SpectralField v, AveragedField c) : modal(std::move(v)), column(std::move(c)) {
    require_same(modal.grid(), column.grid(), "HydroField");
  }
  const Grid& grid() const { return modal.grid(); }
};

inline AveragedField vertical_average(const HydroField& v) { return vertical_average(v.modal) + v.column; }

/// Real L^2(Omega) inner product on the split representation.
inline double inner(const HydroField& a, const HydroField& b) {
  const Grid& g = a.grid();
  double s = inner(a.modal, b.modal);
  double cross = 0.0, cc = 0.0;
  for (int c = 0; c < a.modal.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        cplx avg_a{}, avg_b{};
        for (int m = 0; m < g.nz; ++m) {
          avg_a += g.avg_weight(m) * a.modal(c, i, j, m);
          avg_b += g.avg_weight(m) * b.modal(c, i, j, m);
        }
        cross += (std::conj(a.column(c, i, j)) * avg_b + std::conj(avg_a) * b.column(c, i, j)).real();
        cc += (std::conj(a.column(c, i, j)) * b.column(c, i, j)).real();
      }
  return s + g.h * (cross + cc);
}

inline double l2_norm(const HydroField& v) { return std::sqrt(std::max(0.0, inner(v, v))); }

inline PhysicalField to_physical(const Transform& tr, const HydroField& v) {
  PhysicalField out = tr.to_physical(v.modal);
  const PhysicalField col = tr.broadcast(v.column);
  for (std::size_t n = 0; n < out.values().size(); ++n) out.values()[n] += col.values()[n];
  return out;
}

/// Periodic Poisson problem Delta_H pi = div_H f with zero-mean gauge.
inline SurfacePressure solve_surface_poisson(const AveragedField& f) {
  if (f.components() != 2) throw ConfigError("solve_surface_poisson: vector field required");
  const Grid& g = f.grid();
  AveragedField p(g, 1);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.nyquist(i, j) || (i == 0 && j == 0)) continue;
      const double kx = g.kx(i), ky = g.ky(j);
      const cplx kdotf = kx * f(0, i, j) + ky * f(1, i, j);
      p(0, i, j) = cplx(0.0, -two_pi) * kdotf / g.k2(i, j);
    }
  return SurfacePressure(std::move(p));
}

inline AveragedField divergence_of_average(const AveragedField& vbar) {
  const Grid& g = vbar.grid();
  AveragedField out(g, 1);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.nyquist(i, j)) continue;
      out(0, i, j) = cplx(0.0, two_pi * g.kx(i)) * vbar(0, i, j) + cplx(0.0, two_pi * g.ky(j)) * vbar(1, i, j);
    }
  return out;
}

/// div_H of the vertical average.
inline AveragedField divergence_of_average(const HydroField& v) { return divergence_of_average(vertical_average(v)); }
inline AveragedField divergence_of_average(const SpectralField& v) { return divergence_of_average(vertical_average(v)); }

/// Hydrostatic Helmholtz projection P v = v - nabla_H pi,
/// Delta_H pi = div_H vbar. The subtracted gradient goes to the column channel.
inline HydroField project(const HydroField& v, SurfacePressure* pressure = nullptr) {
  SurfacePressure p = solve_surface_poisson(vertical_average(v));
  HydroField out = v;
  out.column -= p.gradient();
  if (pressure) *pressure = std::move(p);
  return out;
}

inline HydroField project(const SpectralField& v, SurfacePressure* pressure = nullptr) {
  return project(HydroField(v), pressure);
}

/// 2D Leray projection of a z-independent vector field.
inline AveragedField leray_2d(const AveragedField& b) {
  return b - solve_surface_poisson(b).gradient();
}

/// Orthogonal projection (in L^2) of a cosine-basis field onto the
/// constrained subspace {k . sum_m a_m c_m = 0}: the discrete counterpart
/// of P used by the Stokes operator and the time integrators.
inline SpectralField galerkin_project(const SpectralField& v) {
  if (v.components() != 2) throw ConfigError("galerkin_project: vector field required");
  const Grid& g = v.grid();
  SpectralField out = v;
  const double an2 = g.avg_weight_norm2();
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (i == 0 && j == 0) continue;
      if (g.nyquist(i, j)) continue;
      const double kx = g.kx(i), ky = g.ky(j);
      cplx* cx = out.column(0, i, j);
      cplx* cy = out.column(1, i, j);
      cplx gc{};
      for (int m = 0; m < g.nz; ++m) gc += g.avg_weight(m) * (kx * cx[m] + ky * cy[m]);
      const cplx alpha = gc / (an2 * (kx * kx + ky * ky));
      for (int m = 0; m < g.nz; ++m) {
        cx[m] -= alpha * g.avg_weight(m) * kx;
        cy[m] -= alpha * g.avg_weight(m) * ky;
      }
    }
  return out;
}

/// Galerkin restriction onto the cosine basis: L^2 projection of the column
/// channel (coefficients 2 a_m b), added to the modal part.
inline SpectralField restrict_to_basis(const HydroField& v) {
  const Grid& g = v.grid();
  SpectralField out = v.modal;
  for (int c = 0; c < out.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const cplx b = v.column(c, i, j);
        if (b == cplx{}) continue;
        cplx* col = out.column(c, i, j);
        for (int m = 0; m < g.nz; ++m) col[m] += 2.0 * g.avg_weight(m) * b;
      }
  return out;
}

}  // namespace hydropde
