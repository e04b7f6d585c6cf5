#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"
#include "nonlinear.hpp"
#include "projection.hpp"

namespace hydropde {

/// Norms along a trajectory; squared quantities unless noted.
struct EstimateRecord {
  double t = 0.0;
  double E2 = 0.0;        // ||v||^2
  double D2 = 0.0;        // ||grad v||^2
  double gradHbar = 0.0;  // ||grad_H vbar||^2 over G
  double vz2 = 0.0;       // ||v_z||^2
  double tilde4 = 0.0;    // ||v - vbar||_{L4}^4
  double gradpi = 0.0;    // ||grad_H pi||^2 over G
  double vz3 = 0.0;       // ||v_z||_{L3}^3
  double dtv2 = 0.0;      // ||d_t v||^2, finite differences
  double H1 = 0.0;        // squared H^1 surrogate
  double H2 = 0.0;        // squared H^2 surrogate
};

/// One ledger row: the record plus budget and consistency columns.
struct LedgerRow {
  EstimateRecord rec;
  double dissipation = 0.0;   // cumulative int D2, as dissipated by the time stepper
  double forcing_work = 0.0;  // cumulative int <P f, v>
  double grad_vz2 = 0.0;      // ||grad v_z||^2
  double tilde_grad2 = 0.0;   // || |vt| |grad_H vt| ||^2
  double constraint = 0.0;    // max |div_H vbar| relative to ||v||
  double baro_res = 0.0;      // vertical-average equation, pointwise
  double bclin_res = 0.0;     // fluctuation equation, pointwise
  double galerkin_res = 0.0;  // full equation tested against the basis
  double recomb_res = 0.0;    // (avg eq) + (fluct eq) - (full eq), relative
};

struct TrajectoryLedger {
  std::vector<LedgerRow> rows;
  std::vector<std::string> checkpoints;
  std::string status = "ok";
};

// ---------------------------------------------------------------------------
// Spectral quadratic forms (exact in the basis)
// ---------------------------------------------------------------------------

namespace detail {
template <class W>
double weighted_energy(const SpectralField& v, W&& weight) {
  const Grid& g = v.grid();
  double acc = 0.0;
  for (int c = 0; c < v.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double kk = g.k2(i, j);
        const cplx* col = v.column(c, i, j);
        for (int m = 0; m < g.nz; ++m) {
          const double l = g.lambda(m);
          acc += weight(kk, l * l) * std::norm(col[m]);
        }
      }
  return 0.5 * g.h * acc;
}

}  // namespace detail

/// <A v, v> = ||grad v||^2 for fields satisfying the boundary conditions.
inline double dissipation_rate(const SpectralField& v) {
  return detail::weighted_energy(v, [](double kk, double l2) { return kk + l2; });
}

inline double vz_energy(const SpectralField& v) {
  return detail::weighted_energy(v, [](double, double l2) { return l2; });
}

inline double grad_vz_energy(const SpectralField& v) {
  return detail::weighted_energy(v, [](double kk, double l2) { return (kk + l2) * l2; });
}

inline double grad_h_energy(const AveragedField& b) {
  const Grid& g = b.grid();
  double s = 0.0;
  for (int c = 0; c < b.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) s += g.k2(i, j) * std::norm(b(c, i, j));
  return s;
}

/// d_z v at the bottom z = -h, per horizontal wavenumber.
inline AveragedField vz_bottom(const SpectralField& v) {
  const Grid& g = v.grid();
  AveragedField out(g, v.components());
  for (int c = 0; c < v.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        cplx s{};
        for (int m = 0; m < g.nz; ++m) s += ((m % 2 == 0) ? 1.0 : -1.0) * g.lambda(m) * v(c, i, j, m);
        out(c, i, j) = s;
      }
  return out;
}

/// max_k |div_H vbar(k)| / ||v||, zero for the zero field.
inline double constraint_defect(const SpectralField& v) {
  const AveragedField d = divergence_of_average(v);
  double mx = 0.0;
  for (const auto& c : d.coeffs()) mx = std::max(mx, std::abs(c));
  const double n = l2_norm(v);
  return n > 0.0 ? mx / n : mx;
}

// ---------------------------------------------------------------------------
// Physical-space helpers
// ---------------------------------------------------------------------------

/// Physical values of v - vbar, with vbar the exact vertical average.
inline PhysicalField fluctuation_values(const Transform& tr, const SpectralField& v) {
  PhysicalField vt = tr.to_physical(v);
  const PhysicalField vb = tr.broadcast(vertical_average(v));
  for (std::size_t n = 0; n < vt.values().size(); ++n) vt.values()[n] -= vb.values()[n];
  return vt;
}

/// Same fluctuation, with the average taken by quadrature of the samples.
inline PhysicalField fluctuation_values_quadrature(const Transform& tr, const SpectralField& v) {
  PhysicalField vt = tr.to_physical(v);
  const auto avg = quadrature_average(vt);
  const std::size_t plane = tr.grid().plane();
  for (int c = 0; c < vt.components(); ++c)
    for (int q = 0; q < vt.levels(); ++q)
      for (std::size_t n = 0; n < plane; ++n) vt.values()[vt.index(c, q, 0, 0) + n] -= avg[c * plane + n];
  return vt;
}

/// d/dx (axis 0) or d/dy (axis 1) of a z-independent field.
inline AveragedField partial_h(const AveragedField& b, int axis) {
  const Grid& g = b.grid();
  AveragedField out(g, b.components());
  for (int c = 0; c < b.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        if (!g.nyquist(i, j)) out(c, i, j) = cplx(0.0, two_pi * (axis == 0 ? g.kx(i) : g.ky(j))) * b(c, i, j);
  return out;
}

/// int_Omega |vt|^2 |grad_H vt|^2.
inline double tilde_grad_energy(const Transform& tr, const SpectralField& v) {
  const PhysicalField vt = fluctuation_values(tr, v);
  const AveragedField vb = vertical_average(v);
  const PhysicalField dx = tr.to_physical(partial_h(v, 0)), dy = tr.to_physical(partial_h(v, 1));
  const PhysicalField dxb = tr.broadcast(partial_h(vb, 0)), dyb = tr.broadcast(partial_h(vb, 1));
  const std::size_t plane = tr.grid().plane();
  double s = 0.0;
  for (int q = 0; q < vt.levels(); ++q) {
    double lev = 0.0;
    for (std::size_t n = 0; n < plane; ++n) {
      double a2 = 0.0, g2 = 0.0;
      for (int c = 0; c < 2; ++c) {
        const std::size_t p = vt.index(c, q, 0, 0) + n;
        a2 += vt.values()[p] * vt.values()[p];
        const double gx = dx.values()[p] - dxb.values()[p];
        const double gy = dy.values()[p] - dyb.values()[p];
        g2 += gx * gx + gy * gy;
      }
      lev += a2 * g2;
    }
    s += tr.basis().w[q] * lev / static_cast<double>(plane);
  }
  return s;
}

// ---------------------------------------------------------------------------
// record
// ---------------------------------------------------------------------------

/// Estimate quantities of one state; dtv2 is filled by the caller from
/// neighbouring samples.
inline EstimateRecord record(const Transform& tr, const SpectralField& v, double t, const SurfacePressure& p) {
  EstimateRecord r;
  r.t = t;
  r.E2 = inner(v, v);
  r.D2 = dissipation_rate(v);
  r.gradHbar = grad_h_energy(vertical_average(v));
  r.vz2 = vz_energy(v);
  r.tilde4 = std::pow(lp_norm(fluctuation_values(tr, v), 4.0), 4.0);
  r.gradpi = grad_h_energy(p.coeffs());
  r.vz3 = std::pow(lp_norm(tr.to_physical(v, Vertical::dz), 3.0), 3.0);
  const double h1 = sobolev_norm(v, 1.0), h2 = sobolev_norm(v, 2.0);
  r.H1 = h1 * h1;
  r.H2 = h2 * h2;
  return r;
}

// ---------------------------------------------------------------------------
// Split residuals
// ---------------------------------------------------------------------------

struct SplitResiduals {
  double barotropic = 0.0;     // ||R_avg||_{L2(Omega)}
  double baroclinic = 0.0;     // ||R_fluct||_{L2(Omega)}
  double galerkin = 0.0;       // ||P_N Pi R||, Pi = L2 projection onto the basis
  double recombination = 0.0;  // ||R_avg + R_fluct - R|| / scale
  double scale = 0.0;          // sum of the L2 norms of the individual terms
};

/// Surface pressure consistent with the full equation: the Poisson problem
/// for the vertical average of Delta v - (transport) + f.
inline SurfacePressure diagnostic_pressure(NonlinearWorkspace& ws, const SpectralField& v, const PhysicalField* f) {
  const Transform& tr = ws.transform();
  const Grid& g = v.grid();
  AveragedField rhs = vertical_average(laplacian(v));
  const SpectralField vm = [&] {
    SpectralField c = v;
    apply_mask(c);
    return c;
  }();
  const PhysicalField u = tr.to_physical(vm), w = diagnostic_w(tr, vm);
  const PhysicalField dx = tr.to_physical(partial_h(vm, 0)), dy = tr.to_physical(partial_h(vm, 1));
  const PhysicalField dz = tr.to_physical(vm, Vertical::dz);
  PhysicalField n(g, tr.basis_ptr(), 2);
  for (int c = 0; c < 2; ++c)
    for (std::size_t p = 0; p < n.component(c).size(); ++p)
      n.component(c)[p] = u.component(0)[p] * dx.component(c)[p] + u.component(1)[p] * dy.component(c)[p] +
                          w.component(0)[p] * dz.component(c)[p];
  rhs -= tr.plane_coeffs(quadrature_average(n), 2);
  if (f) rhs += tr.plane_coeffs(quadrature_average(*f), 2);
  return solve_surface_poisson(rhs);
}

/// Residuals of the vertical-average equation, the fluctuation equation and
/// the full momentum equation for a state v with time derivative dvdt,
/// pressure p and (optional) forcing f, all evaluated pointwise on the
/// quadrature grid. Velocities are used as given (no truncation).
inline SplitResiduals split_residuals(const Transform& tr, const SpectralField& v, const SpectralField& dvdt,
                                      const SurfacePressure& p, const PhysicalField* f) {
  const Grid& g = v.grid();
  const std::size_t plane = g.plane();
  const int nq = tr.basis().nq;
  const auto& wq = tr.basis().w;

  const AveragedField vb = vertical_average(v);
  const PhysicalField V = tr.to_physical(v);
  const PhysicalField Vt = tr.to_physical(dvdt);
  const PhysicalField LV = tr.to_physical(laplacian(v));
  const PhysicalField Dx = tr.to_physical(partial_h(v, 0)), Dy = tr.to_physical(partial_h(v, 1));
  const PhysicalField Dz = tr.to_physical(v, Vertical::dz);
  const PhysicalField W = diagnostic_w(tr, v);

  auto plane_of = [&](const AveragedField& a) { return tr.plane_values(a); };
  AveragedField lapb(g, 2);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) lapb(c, i, j) = -g.k2(i, j) * vb(c, i, j);
  const auto vbar = plane_of(vb), vbar_x = plane_of(partial_h(vb, 0)), vbar_y = plane_of(partial_h(vb, 1));
  const auto vbar_lap = plane_of(lapb);
  const auto vbar_t = plane_of(vertical_average(dvdt));
  const auto gradp = plane_of(p.gradient());
  const auto vzb = plane_of(vz_bottom(v));
  std::vector<double> fbar(2 * plane, 0.0);
  if (f) fbar = quadrature_average(*f);

  auto at = [&](const PhysicalField& F, int c, int q, std::size_t n) { return F.values()[F.index(c, q, 0, 0) + n]; };

  // J = (1/h) int (vt . grad_H vt + div_H v vt) dz
  std::vector<double> J(2 * plane, 0.0);
  for (int q = 0; q < nq; ++q)
    for (std::size_t n = 0; n < plane; ++n) {
      const double ux = at(V, 0, q, n) - vbar[n], uy = at(V, 1, q, n) - vbar[plane + n];
      const double div = at(Dx, 0, q, n) + at(Dy, 1, q, n);
      for (int c = 0; c < 2; ++c) {
        const double vtc = at(V, c, q, n) - vbar[c * plane + n];
        const double gx = at(Dx, c, q, n) - vbar_x[c * plane + n];
        const double gy = at(Dy, c, q, n) - vbar_y[c * plane + n];
        J[c * plane + n] += wq[q] / g.h * (ux * gx + uy * gy + div * vtc);
      }
    }

  double rbar2 = 0.0, rt2 = 0.0, rec2 = 0.0;
  double s_t = 0.0, s_lap = 0.0, s_nl = 0.0, s_p = 0.0, s_f = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < plane; ++n) {
      const std::size_t k = c * plane + n;
      const double vbx = vbar[n], vby = vbar[plane + n];
      const double rb = vbar_t[k] - vbar_lap[k] + gradp[k] + vbx * vbar_x[k] + vby * vbar_y[k] + J[k] +
                        vzb[k] / g.h - fbar[k];
      rbar2 += g.h * rb * rb / plane;
      s_p += g.h * gradp[k] * gradp[k] / plane;
      for (int q = 0; q < nq; ++q) {
        const double u0 = at(V, 0, q, n), u1 = at(V, 1, q, n);
        const double t0 = u0 - vbx, t1 = u1 - vby;
        const double fx = at(Dx, c, q, n), fy = at(Dy, c, q, n), fz = at(Dz, c, q, n);
        const double tgx = fx - vbar_x[k], tgy = fy - vbar_y[k];
        const double w = at(W, 0, q, n);
        const double fc = f ? at(*f, c, q, n) : 0.0;
        const double vt_t = at(Vt, c, q, n) - vbar_t[k];
        const double lap_t = at(LV, c, q, n) - vbar_lap[k];
        const double rt = vt_t - lap_t + t0 * tgx + t1 * tgy + w * fz + vbx * tgx + vby * tgy + t0 * vbar_x[k] +
                          t1 * vbar_y[k] - J[k] - vzb[k] / g.h - (fc - fbar[k]);
        const double nl = u0 * fx + u1 * fy + w * fz;
        const double r = at(Vt, c, q, n) + nl - at(LV, c, q, n) + gradp[k] - fc;
        const double d = rb + rt - r;
        const double wt = wq[q] / plane;
        rt2 += wt * rt * rt;
        rec2 += wt * d * d;
        s_t += wt * at(Vt, c, q, n) * at(Vt, c, q, n);
        s_lap += wt * at(LV, c, q, n) * at(LV, c, q, n);
        s_nl += wt * nl * nl;
        s_f += wt * fc * fc;
      }
    }

  SplitResiduals res;
  res.barotropic = std::sqrt(rbar2);
  res.baroclinic = std::sqrt(rt2);
  res.scale = std::sqrt(s_t) + std::sqrt(s_lap) + std::sqrt(s_nl) + std::sqrt(s_p) + std::sqrt(s_f);
  res.recombination = res.scale > 0.0 ? std::sqrt(rec2) / res.scale : std::sqrt(rec2);

  // Weak residual: dvdt - Delta v + Pi(transport) - Pi f, constrained part.
  PhysicalField nl(g, tr.basis_ptr(), 2);
  for (int c = 0; c < 2; ++c)
    for (std::size_t q = 0; q < nl.component(c).size(); ++q)
      nl.component(c)[q] = V.component(0)[q] * Dx.component(c)[q] + V.component(1)[q] * Dy.component(c)[q] +
                           W.component(0)[q] * Dz.component(c)[q];
  SpectralField weak = dvdt - laplacian(v) + tr.to_spectral(nl);
  if (f) weak -= tr.to_spectral(*f);
  res.galerkin = l2_norm(galerkin_project(weak));
  return res;
}

// ---------------------------------------------------------------------------
// Ledger consumers
// ---------------------------------------------------------------------------

struct EnergyReport {
  double residual_max = 0.0;            // scheme-consistent dissipation column
  double trapezoid_residual_max = 0.0;  // trapezoidal rule on sampled D2
  bool strictly_decreasing = true;
  double e0 = 0.0;
};

/// E2(t) + 2 int D2 - 2 int <Pf, v> - E2(0), relative to E2(0) when nonzero.
inline EnergyReport energy_budget(const TrajectoryLedger& led) {
  EnergyReport rep;
  if (led.rows.empty()) return rep;
  const auto& r0 = led.rows.front();
  rep.e0 = r0.rec.E2;
  const double scale = rep.e0 > 0.0 ? rep.e0 : 1.0;
  double trap = 0.0;
  for (std::size_t n = 0; n < led.rows.size(); ++n) {
    const auto& r = led.rows[n];
    if (n > 0) {
      const auto& q = led.rows[n - 1];
      trap += 0.5 * (r.rec.t - q.rec.t) * (r.rec.D2 + q.rec.D2);
      if (!(r.rec.E2 < q.rec.E2)) rep.strictly_decreasing = false;
    }
    const double d0 = r0.dissipation, w0 = r0.forcing_work;
    const double res =
        std::abs(r.rec.E2 + 2.0 * (r.dissipation - d0) - 2.0 * (r.forcing_work - w0) - rep.e0) / scale;
    const double res_t = std::abs(r.rec.E2 + 2.0 * trap - 2.0 * (r.forcing_work - w0) - rep.e0) / scale;
    rep.residual_max = std::max(rep.residual_max, res);
    rep.trapezoid_residual_max = std::max(rep.trapezoid_residual_max, res_t);
  }
  if (led.rows.size() < 2) rep.strictly_decreasing = false;
  return rep;
}

struct GronwallReport {
  std::vector<double> phi, int_k1, int_k2, bound;
  double phi_max = 0.0;
  double ratio_max = 0.0;       // max Phi(t) / (Phi(0) e^{int K1}), 0 if Phi(0) = 0
  bool dominated = true;        // Phi(t) <= Phi(0) e^{int K1} on every sample
  double dissipation_integral = 0.0;
  double max_jump = 0.0;        // largest sample-to-sample ratio of Phi
};

inline double phi_value(const EstimateRecord& r, double c3) { return 8.0 * r.gradHbar + r.vz2 + 0.25 * c3 * r.tilde4; }

/// Unit-constant surrogates of the Gronwall multipliers.
inline double k1_hat(const EstimateRecord& r) {
  const double n = std::sqrt(std::max(0.0, r.E2));
  return (1.0 + n + n * n) * (std::cbrt(r.H1) + std::sqrt(r.H1) + r.H1);
}

inline double k2_hat(const EstimateRecord& r) { return (1.0 + r.E2 + r.E2 * r.E2) * r.H1; }

inline GronwallReport gronwall_monitor(const TrajectoryLedger& led, double c3 = 1.0) {
  GronwallReport rep;
  double ik1 = 0.0, ik2 = 0.0;
  for (std::size_t n = 0; n < led.rows.size(); ++n) {
    const auto& r = led.rows[n];
    if (n > 0) {
      const auto& q = led.rows[n - 1];
      const double dt = r.rec.t - q.rec.t;
      ik1 += 0.5 * dt * (k1_hat(r.rec) + k1_hat(q.rec));
      ik2 += 0.5 * dt * (k2_hat(r.rec) + k2_hat(q.rec));
      const double diss_r = r.rec.gradpi + r.grad_vz2 + c3 * r.tilde_grad2;
      const double diss_q = q.rec.gradpi + q.grad_vz2 + c3 * q.tilde_grad2;
      rep.dissipation_integral += 0.5 * dt * (diss_r + diss_q);
    }
    const double p = phi_value(r.rec, c3);
    rep.phi.push_back(p);
    rep.int_k1.push_back(ik1);
    rep.int_k2.push_back(ik2);
    const double b = rep.phi.front() * std::exp(ik1);
    rep.bound.push_back(b);
    rep.phi_max = std::max(rep.phi_max, p);
    if (b > 0.0) rep.ratio_max = std::max(rep.ratio_max, p / b);
    if (p > b * (1.0 + 1e-12) + 1e-300) rep.dominated = false;
    if (n > 0) {
      const double a = rep.phi[n - 1];
      if (a > 0.0 && p > 0.0) rep.max_jump = std::max(rep.max_jump, std::max(p / a, a / p));
    }
  }
  return rep;
}

struct DecayFit {
  double rate = 0.0;       // c in q ~ A e^{-c t}
  double amplitude = 0.0;  // A
  double residual = 0.0;   // rms of the log-fit residual
  std::size_t samples = 0;
};

/// Least-squares fit of log q against t over the trailing `tail` fraction of
/// the positive prefix of the series.
inline DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& q, double tail = 0.5) {
  if (t.size() != q.size()) throw ConfigError("decay_fit: length mismatch");
  std::size_t n = 0;
  while (n < q.size() && q[n] > 0.0 && std::isfinite(q[n])) ++n;
  const std::size_t start = n - static_cast<std::size_t>(std::floor(tail * n));
  if (n - start < 10) throw DomainError("decay_fit: fewer than 10 positive samples in the tail window");
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(n - start);
  for (std::size_t k = start; k < n; ++k) {
    const double y = std::log(q[k]);
    st += t[k];
    sy += y;
    stt += t[k] * t[k];
    sty += t[k] * y;
  }
  const double den = m * stt - st * st;
  const double slope = den != 0.0 ? (m * sty - st * sy) / den : 0.0;
  const double icpt = (sy - slope * st) / m;
  DecayFit fit;
  fit.rate = -slope;
  fit.amplitude = std::exp(icpt);
  fit.samples = n - start;
  double r2 = 0.0;
  for (std::size_t k = start; k < n; ++k) {
    const double e = std::log(q[k]) - (icpt + slope * t[k]);
    r2 += e * e;
  }
  fit.residual = std::sqrt(r2 / m);
  return fit;
}

/// Column accessor by name for the record quantities.
inline double record_value(const EstimateRecord& r, const std::string& name) {
  static const std::map<std::string, double EstimateRecord::*> cols = {
      {"E2", &EstimateRecord::E2},         {"D2", &EstimateRecord::D2},     {"gradHbar", &EstimateRecord::gradHbar},
      {"vz2", &EstimateRecord::vz2},       {"tilde4", &EstimateRecord::tilde4}, {"gradpi", &EstimateRecord::gradpi},
      {"vz3", &EstimateRecord::vz3},       {"dtv2", &EstimateRecord::dtv2}, {"H1", &EstimateRecord::H1},
      {"H2", &EstimateRecord::H2}};
  const auto it = cols.find(name);
  if (it == cols.end()) throw ConfigError("unknown ledger quantity '" + name + "'");
  return r.*(it->second);
}

inline DecayFit decay_fit(const TrajectoryLedger& led, const std::string& quantity, double tail = 0.5) {
  std::vector<double> t, q;
  for (const auto& r : led.rows) {
    t.push_back(r.rec.t);
    q.push_back(record_value(r.rec, quantity));
  }
  return decay_fit(t, q, tail);
}

}  // namespace hydropde
