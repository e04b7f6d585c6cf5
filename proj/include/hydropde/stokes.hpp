#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"
#include "parallel.hpp"
#include "projection.hpp"

namespace hydropde {

/// Orthonormal basis of the complement of `g` (n x (n-1)), built from the
/// Householder reflector that maps g/|g| to +-e_1.
inline Eigen::MatrixXd complement_basis(const Eigen::VectorXd& g) {
  const Eigen::Index n = g.size();
  Eigen::VectorXd u = g.normalized();
  Eigen::VectorXd w = u;
  const double sgn = u(0) >= 0.0 ? 1.0 : -1.0;
  w(0) += sgn;
  w.normalize();
  Eigen::MatrixXd hh = Eigen::MatrixXd::Identity(n, n) - 2.0 * w * w.transpose();
  return hh.rightCols(n - 1);
}

/// Per-wavenumber realization of A on the constrained coefficients.
///
/// Unknowns are the stacked vertical coefficients (c^x_0..c^x_{nz-1},
/// c^y_0..c^y_{nz-1}). For k != 0 the constraint k . sum_m a_m c_m = 0
/// is eliminated through `basis` (orthonormal columns), and `reduced` is
/// basis^T D basis with D = diag(4 pi^2 |k|^2 + lambda_m^2).
struct StokesBlock {
  int kx = 0, ky = 0;
  Eigen::MatrixXd laplacian;  // D, 2nz x 2nz
  Eigen::MatrixXd basis;      // 2nz x r
  Eigen::MatrixXd reduced;    // r x r, symmetric positive definite
};

inline StokesBlock assemble_block(const Grid& g, int i, int j) {
  if (i < 0 || i >= g.nx || j < 0 || j >= g.ny || g.nyquist(i, j))
    throw DomainError("assemble_block: wavenumber out of range");
  StokesBlock b;
  b.kx = g.kx(i);
  b.ky = g.ky(j);
  const int n = 2 * g.nz;
  b.laplacian = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < g.nz; ++m) {
    const double l = g.lambda(m);
    b.laplacian(m, m) = b.laplacian(g.nz + m, g.nz + m) = g.k2(i, j) + l * l;
  }
  if (b.kx == 0 && b.ky == 0) {
    b.basis = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::VectorXd con(n);
    for (int m = 0; m < g.nz; ++m) {
      con(m) = g.avg_weight(m) * b.kx;
      con(g.nz + m) = g.avg_weight(m) * b.ky;
    }
    b.basis = complement_basis(con);
  }
  b.reduced = b.basis.transpose() * b.laplacian * b.basis;
  return b;
}

struct BlockSpectrum {
  int kx = 0, ky = 0;
  std::vector<double> eigenvalues;
};

struct SpectrumReport {
  std::vector<BlockSpectrum> blocks;
  double beta = 0.0;
  double max_eigenvalue = 0.0;
};

struct SectorSample {
  cplx lambda;
  double m = 0.0;  // |lambda| ||(lambda + A)^{-1}||
};

struct SectorReport {
  double eps = 0.0;
  std::vector<SectorSample> samples;
  double sup_m = 0.0;
  double bound = 0.0;            // 1 / sin(eps)
  double inverse_norm = 0.0;     // ||A^{-1}|| (the lambda = 0 case)
};

struct SmoothingReport {
  std::vector<double> t, g;
  double sup = 0.0;
};

struct ResolventResult {
  SpectralField v;
  SurfacePressure pressure;
};

/// Hydrostatic Stokes operator A = -P Delta on the constrained cosine-basis
/// space, for one grid.
///
/// For k != 0, rotating to (k-parallel, k-perpendicular) components
/// decouples the blocks: the perpendicular part is diagonal with
/// 4 pi^2|k|^2 + lambda_m^2, the parallel part carries the constraint
/// a . c = 0 and is diagonalized once (independent of k up to the shift
/// 4 pi^2 |k|^2). All functions of A are applied exactly through that
/// eigendecomposition.
class StokesOperator {
 public:
  explicit StokesOperator(const Grid& g) : grid_(g) {
    g.validate();
    const int nz = g.nz;
    Eigen::VectorXd a(nz);
    for (int m = 0; m < nz; ++m) a(m) = g.avg_weight(m);
    Eigen::MatrixXd q = complement_basis(a);
    Eigen::MatrixXd lz = Eigen::MatrixXd::Zero(nz, nz);
    for (int m = 0; m < nz; ++m) lz(m, m) = g.lambda(m) * g.lambda(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.transpose() * lz * q);
    sigma_ = es.eigenvalues();
    vpar_ = q * es.eigenvectors();
    lambda2_.resize(nz);
    for (int m = 0; m < nz; ++m) lambda2_[m] = g.lambda(m) * g.lambda(m);
  }

  const Grid& grid() const { return grid_; }

  /// Eigenvalues of the parallel (constrained) vertical system, ascending.
  const Eigen::VectorXd& constrained_vertical_eigenvalues() const { return sigma_; }

  /// phi(A) P_N f for a scalar function phi of the eigenvalue.
  template <class Phi>
  SpectralField apply_function(const SpectralField& f, Phi&& phi) const {
    if (f.components() != 2) throw ConfigError("StokesOperator: vector field required");
    require_same(grid_, f.grid(), "StokesOperator");
    const Grid& g = grid_;
    const int nz = g.nz;
    SpectralField out(g, 2);
    parallel_for(
        g.nx,
        [&](int i0, int i1) {
          std::vector<cplx> par(nz), perp(nz), y(nz > 1 ? nz - 1 : 1);
          for (int i = i0; i < i1; ++i)
            for (int j = 0; j < g.ny; ++j) {
              if (g.nyquist(i, j)) continue;
              const cplx* fx = f.column(0, i, j);
              const cplx* fy = f.column(1, i, j);
              cplx* ox = out.column(0, i, j);
              cplx* oy = out.column(1, i, j);
              const int kx = g.kx(i), ky = g.ky(j);
              if (kx == 0 && ky == 0) {
                for (int m = 0; m < nz; ++m) {
                  const cplx s = phi(lambda2_[m]);
                  ox[m] = s * fx[m];
                  oy[m] = s * fy[m];
                }
                continue;
              }
              bool any = false;
              for (int m = 0; m < nz; ++m) any = any || fx[m] != cplx{} || fy[m] != cplx{};
              if (!any) continue;
              const double kn = std::sqrt(double(kx) * kx + double(ky) * ky);
              const double ux = kx / kn, uy = ky / kn;
              const double shift = g.k2(i, j);
              for (int m = 0; m < nz; ++m) {
                par[m] = ux * fx[m] + uy * fy[m];
                perp[m] = (-uy * fx[m] + ux * fy[m]) * phi(shift + lambda2_[m]);
              }
              for (int r = 0; r < nz - 1; ++r) {
                cplx s{};
                for (int m = 0; m < nz; ++m) s += vpar_(m, r) * par[m];
                y[r] = s * phi(shift + sigma_(r));
              }
              for (int m = 0; m < nz; ++m) {
                cplx s{};
                for (int r = 0; r < nz - 1; ++r) s += vpar_(m, r) * y[r];
                par[m] = s;
              }
              for (int m = 0; m < nz; ++m) {
                ox[m] = ux * par[m] - uy * perp[m];
                oy[m] = uy * par[m] + ux * perp[m];
              }
            }
        },
        8);
    return out;
  }

  /// A P_N f.
  SpectralField apply(const SpectralField& f) const {
    return apply_function(f, [](double mu) { return cplx(mu); });
  }

  /// e^{-tA} P_N f.
  SpectralField semigroup_apply(double t, const SpectralField& f) const {
    if (!(t >= 0.0)) throw DomainError("semigroup_apply: t must be >= 0");
    return apply_function(f, [t](double mu) { return cplx(std::exp(-t * mu)); });
  }

  /// (lambda + A) v = P_N f together with the pressure multiplier.
  ResolventResult resolvent_solve(cplx lambda, const SpectralField& f) const {
    const double b = beta(), mx = max_eigenvalue();
    if (lambda.imag() == 0.0 && lambda.real() < 0.0 && -lambda.real() >= b * (1 - 1e-14) &&
        -lambda.real() <= mx * (1 + 1e-14))
      throw SingularSolve("resolvent_solve: lambda lies on the negative spectrum");
    ResolventResult res;
    res.v = apply_function(f, [lambda](double mu) { return 1.0 / (lambda + mu); });
    // residual lambda v + D v - f is parallel to the constraint row a (x) k;
    // its coefficient mu gives pi = i mu / (4 pi).
    const Grid& g = grid_;
    AveragedField p(g, 1);
    const double an2 = g.avg_weight_norm2();
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        if (g.nyquist(i, j) || (i == 0 && j == 0)) continue;
        const double kx = g.kx(i), ky = g.ky(j);
        cplx gr{};
        for (int m = 0; m < g.nz; ++m) {
          const double l = g.lambda(m), d = g.k2(i, j) + l * l, a = g.avg_weight(m);
          const cplx rx = (lambda + d) * res.v(0, i, j, m) - f(0, i, j, m);
          const cplx ry = (lambda + d) * res.v(1, i, j, m) - f(1, i, j, m);
          gr += a * (kx * rx + ky * ry);
        }
        const cplx mu = gr / (an2 * (kx * kx + ky * ky));
        p(0, i, j) = cplx(0.0, 1.0) * mu / (4.0 * pi);
      }
    res.pressure = SurfacePressure(std::move(p));
    return res;
  }

  std::vector<double> block_eigenvalues(int i, int j) const {
    if (i < 0 || i >= grid_.nx || j < 0 || j >= grid_.ny || grid_.nyquist(i, j))
      throw DomainError("block_eigenvalues: wavenumber out of range");
    std::vector<double> ev;
    if (i == 0 && j == 0) {
      for (double l2 : lambda2_) ev.push_back(l2), ev.push_back(l2);
    } else {
      const double s = grid_.k2(i, j);
      for (double l2 : lambda2_) ev.push_back(s + l2);
      for (int r = 0; r < sigma_.size(); ++r) ev.push_back(s + sigma_(r));
    }
    std::sort(ev.begin(), ev.end());
    return ev;
  }

  SpectrumReport spectrum() const {
    SpectrumReport rep;
    rep.beta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_.nx; ++i)
      for (int j = 0; j < grid_.ny; ++j) {
        if (grid_.nyquist(i, j)) continue;
        BlockSpectrum bs{grid_.kx(i), grid_.ky(j), block_eigenvalues(i, j)};
        rep.beta = std::min(rep.beta, bs.eigenvalues.front());
        rep.max_eigenvalue = std::max(rep.max_eigenvalue, bs.eigenvalues.back());
        rep.blocks.push_back(std::move(bs));
      }
    return rep;
  }

  /// Smallest eigenvalue over all blocks (the k = 0 block gives lambda_0^2).
  double beta() const { return lambda2_.front(); }

  double max_eigenvalue() const {
    double s = 0.0;
    for (int i = 0; i < grid_.nx; ++i)
      for (int j = 0; j < grid_.ny; ++j)
        if (!grid_.nyquist(i, j)) s = std::max(s, grid_.k2(i, j));
    return s + std::max(lambda2_.back(), sigma_.size() ? sigma_(sigma_.size() - 1) : 0.0);
  }

  /// Distinct eigenvalues of the discrete operator, ascending.
  std::vector<double> distinct_eigenvalues() const {
    std::set<double> shifts;
    for (int i = 0; i < grid_.nx; ++i)
      for (int j = 0; j < grid_.ny; ++j)
        if (!grid_.nyquist(i, j) && !(i == 0 && j == 0)) shifts.insert(grid_.k2(i, j));
    std::vector<double> ev(lambda2_.begin(), lambda2_.end());
    for (double s : shifts) {
      for (double l2 : lambda2_) ev.push_back(s + l2);
      for (int r = 0; r < sigma_.size(); ++r) ev.push_back(s + sigma_(r));
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    return ev;
  }

  /// Default sweep: |lambda| log-spaced over [1e-3, 1e6] (10 per decade),
  /// arguments {0, pi/4, pi/2, 3pi/4, pi - eps}.
  static std::vector<cplx> default_sector_samples(double eps) {
    std::vector<cplx> out;
    const double args[] = {0.0, pi / 4, pi / 2, 3 * pi / 4, pi - eps};
    for (double a : args)
      for (int n = 0; n <= 90; ++n) out.push_back(std::polar(std::pow(10.0, -3.0 + n / 10.0), a));
    return out;
  }

  /// |lambda| ||(lambda + A)^{-1}||_{L2 -> L2} = sup_mu |lambda| / |lambda + mu|.
  SectorReport sector_sweep(double eps, const std::vector<cplx>& samples) const {
    if (!(eps > 0.0 && eps < pi / 2)) throw DomainError("sector_sweep: eps must lie in (0, pi/2)");
    const auto ev = distinct_eigenvalues();
    SectorReport rep;
    rep.eps = eps;
    rep.bound = 1.0 / std::sin(eps);
    rep.inverse_norm = 1.0 / ev.front();
    for (const cplx& l : samples) {
      double m = 0.0;
      if (std::abs(l) > 0.0)
        for (double mu : ev) m = std::max(m, std::abs(l) / std::abs(l + mu));
      rep.samples.push_back({l, m});
      rep.sup_m = std::max(rep.sup_m, m);
    }
    return rep;
  }

  /// g(t) = ||e^{-tA} f||_{H^{2(th1+th2)}} t^{th1} e^{beta t} / ||f||_{H^{2 th2}}.
  SmoothingReport smoothing_probe(double th1, double th2, const std::vector<double>& ts,
                                  const SpectralField& f) const {
    if (th1 < 0.0 || th2 < 0.0 || th1 + th2 > 1.0) throw DomainError("smoothing_probe: need th1, th2 >= 0, th1+th2 <= 1");
    SmoothingReport rep;
    const double den = sobolev_norm(f, 2.0 * th2);
    const double b = beta();
    for (double t : ts) {
      const double num = sobolev_norm(semigroup_apply(t, f), 2.0 * (th1 + th2));
      const double gt = (th1 == 0.0 ? 1.0 : std::pow(t, th1)) * std::exp(b * t) * num / den;
      rep.t.push_back(t);
      rep.g.push_back(gt);
      rep.sup = std::max(rep.sup, gt);
    }
    return rep;
  }

 private:
  Grid grid_;
  Eigen::VectorXd sigma_;
  Eigen::MatrixXd vpar_;
  std::vector<double> lambda2_;
};

}  // namespace hydropde
