#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hydropde/stokes.hpp"
#include "test_util.hpp"

using namespace hydropde;
using namespace hydropde::test_support;

namespace {

// (0, cos(2 pi kx x) phi_m): perpendicular to k = (kx, 0), eigenvalue 4 pi^2 kx^2 + lambda_m^2
SpectralField perp_mode(const Grid& g, int kx, int m) {
  SpectralField f(g, 2);
  f(1, g.ix(kx), 0, m) += 0.5;
  f(1, g.ix(-kx), 0, m) += 0.5;
  return f;
}

// Eigenvector of the dense constrained block at (i, j), embedded as a real field.
SpectralField block_eigenfunction(const Grid& g, int i, int j, int r, double* mu) {
  const StokesBlock b = assemble_block(g, i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.reduced);
  *mu = es.eigenvalues()(r);
  const Eigen::VectorXd c = b.basis * es.eigenvectors().col(r);
  SpectralField f(g, 2);
  const int ni = g.ix(-g.kx(i)), nj = g.iy(-g.ky(j));
  for (int m = 0; m < g.nz; ++m)
    for (int comp = 0; comp < 2; ++comp) {
      f(comp, i, j, m) += 0.5 * c(comp * g.nz + m);
      f(comp, ni, nj, m) += 0.5 * c(comp * g.nz + m);
    }
  return f;
}

double rel(const SpectralField& a, const SpectralField& b) { return l2_norm(a - b) / std::max(l2_norm(b), 1e-300); }

}  // namespace

TEST(StokesBlock, ZeroWavenumberIsDiagonal) {
  const Grid g = make_grid(8, 6);
  const StokesBlock b = assemble_block(g, 0, 0);
  EXPECT_EQ(b.reduced.rows(), 2 * g.nz);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.reduced);
  EXPECT_NEAR(es.eigenvalues()(0), pi * pi / 4, 1e-12);
  EXPECT_NEAR((b.reduced - Eigen::MatrixXd(b.reduced.diagonal().asDiagonal())).norm(), 0.0, 0.0);
}

TEST(StokesBlock, PerpendicularComponentEigenvalues) {
  const Grid g = make_grid(8, 5);
  StokesOperator A(g);
  const auto ev = A.block_eigenvalues(1, 0);
  // 4 pi^2 + lambda_m^2 appear exactly; the smallest is 4 pi^2 + pi^2 / 4
  EXPECT_NEAR(4 * pi * pi + pi * pi / 4, 41.9458, 1e-4);
  for (int m = 0; m < g.nz; ++m) {
    const double target = 4 * pi * pi + g.lambda(m) * g.lambda(m);
    double best = 1e300;
    for (double e : ev) best = std::min(best, std::abs(e - target));
    EXPECT_LE(best, 1e-10 * target);
  }
  EXPECT_NEAR(ev.front(), 4 * pi * pi + pi * pi / 4, 1e-10);
  // the perpendicular mode is an eigenfunction of the operator
  for (int m = 0; m < g.nz; ++m) {
    const SpectralField f = perp_mode(g, 1, m);
    EXPECT_LE(rel(A.apply(f), (4 * pi * pi + g.lambda(m) * g.lambda(m)) * f), 1e-14);
  }
}

TEST(StokesBlock, SymmetricPositiveDefinite) {
  const Grid g = make_grid(16, 6);
  for (int i = 0; i < g.nx; i += 3)
    for (int j = 0; j < g.ny; j += 5) {
      if (g.nyquist(i, j)) continue;
      const StokesBlock b = assemble_block(g, i, j);
      EXPECT_LE((b.reduced - b.reduced.transpose()).norm(), 1e-12 * b.reduced.norm());
      EXPECT_EQ(b.reduced.rows(), (i == 0 && j == 0) ? 2 * g.nz : 2 * g.nz - 1);
      // basis is orthonormal and spans the constraint manifold
      EXPECT_LE((b.basis.transpose() * b.basis - Eigen::MatrixXd::Identity(b.basis.cols(), b.basis.cols())).norm(),
                1e-13);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.reduced);
      EXPECT_GE(es.eigenvalues()(0), pi * pi / 4 - 1e-12);
    }
}

TEST(StokesBlock, OutOfRangeIsDomainError) {
  const Grid g = make_grid(8, 4);
  EXPECT_THROW(assemble_block(g, 8, 0), DomainError);
  EXPECT_THROW(assemble_block(g, -1, 0), DomainError);
  EXPECT_THROW(assemble_block(g, 4, 0), DomainError);  // Nyquist
  StokesOperator A(g);
  EXPECT_THROW(A.block_eigenvalues(0, 9), DomainError);
}

TEST(StokesOperator, BlockEigenvaluesMatchDenseSolver) {
  const Grid g = make_grid(16, 7, 1.3);
  StokesOperator A(g);
  for (int i = 0; i < g.nx; i += 2)
    for (int j = 0; j < g.ny; j += 3) {
      if (g.nyquist(i, j)) continue;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_block(g, i, j).reduced);
      const auto ev = A.block_eigenvalues(i, j);
      ASSERT_EQ(ev.size(), static_cast<std::size_t>(es.eigenvalues().size()));
      for (std::size_t r = 0; r < ev.size(); ++r) EXPECT_NEAR(ev[r], es.eigenvalues()(r), 1e-10 * ev[r]);
    }
}

TEST(StokesOperator, ActionMatchesDenseBlocks) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const SpectralField v = galerkin_project(random_field(g, 2, 12));
  const SpectralField av = A.apply(v);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.nyquist(i, j)) continue;
      const StokesBlock b = assemble_block(g, i, j);
      Eigen::VectorXcd c(2 * g.nz), ref;
      for (int m = 0; m < g.nz; ++m) c(m) = v(0, i, j, m), c(g.nz + m) = v(1, i, j, m);
      ref = b.basis * (b.reduced * (b.basis.transpose() * c));
      for (int m = 0; m < g.nz; ++m) {
        EXPECT_NEAR(std::abs(av(0, i, j, m) - ref(m)), 0.0, 1e-11 * (1 + std::abs(ref(m))));
        EXPECT_NEAR(std::abs(av(1, i, j, m) - ref(g.nz + m)), 0.0, 1e-11 * (1 + std::abs(ref(g.nz + m))));
      }
    }
}

TEST(StokesOperator, EqualsMinusProjectedLaplacian) {
  for (int nz : {3, 8}) {
    const Grid g = make_grid(16, nz);
    StokesOperator A(g);
    for (int s = 0; s < 3; ++s) {
      const SpectralField v = galerkin_project(random_field(g, 2, 40 + s));
      const SpectralField ref = galerkin_project(restrict_to_basis(project(-1.0 * laplacian(v))));
      EXPECT_LE(rel(A.apply(v), ref), 1e-11);
    }
  }
}

TEST(StokesOperator, SelfAdjointOnConstrainedSpace) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const SpectralField u = galerkin_project(random_field(g, 2, 1)), v = galerkin_project(random_field(g, 2, 2));
  EXPECT_NEAR(inner(A.apply(u), v), inner(u, A.apply(v)), 1e-11 * l2_norm(A.apply(u)) * l2_norm(v));
  EXPECT_GT(inner(A.apply(u), u), 0.0);
}

TEST(Spectrum, BetaForDepths) {
  for (int n : {8, 16}) {
    const Grid g1 = make_grid(n, 6, 1.0), g2 = make_grid(n, 6, 2.0);
    StokesOperator A1(g1), A2(g2);
    const SpectrumReport r1 = A1.spectrum(), r2 = A2.spectrum();
    EXPECT_NEAR(r1.beta, pi * pi / 4, 1e-10);
    EXPECT_NEAR(r1.beta, 2.4674, 1e-4);
    EXPECT_NEAR(r2.beta, pi * pi / 16, 1e-10);
    // beta is the minimum over every block, checked against the dense solver
    double mn = 1e300;
    for (int i = 0; i < g1.nx; ++i)
      for (int j = 0; j < g1.ny; ++j) {
        if (g1.nyquist(i, j)) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_block(g1, i, j).reduced);
        mn = std::min(mn, es.eigenvalues()(0));
      }
    EXPECT_NEAR(r1.beta, mn, 1e-10);
    for (const auto& b : r1.blocks)
      for (double e : b.eigenvalues) {
        EXPECT_TRUE(std::isfinite(e));
        EXPECT_GE(e, r1.beta - 1e-12);
      }
    EXPECT_EQ(r1.blocks.size(), static_cast<std::size_t>((n - 1) * (n - 1)));
  }
}

TEST(Resolvent, ZeroLambdaOnEigenfunction) {
  const Grid g = make_grid(16, 5);
  StokesOperator A(g);
  double mu = 0.0;
  const SpectralField e = block_eigenfunction(g, g.ix(2), g.iy(-1), 1, &mu);
  const ResolventResult r = A.resolvent_solve(0.0, e);
  EXPECT_LE(rel(r.v, (1.0 / mu) * e), 1e-12);
  const SpectralField f = perp_mode(g, 3, 2);
  EXPECT_LE(rel(A.resolvent_solve(0.0, f).v, (1.0 / (36 * pi * pi + std::pow(g.lambda(2), 2))) * f), 1e-13);
}

TEST(Resolvent, LargeImaginaryLambdaContractive) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const cplx lambda(0.0, 1e6);
  for (int s = 0; s < 5; ++s) {
    const SpectralField f = random_field(g, 2, 80 + s);
    const SpectralField pf = galerkin_project(f);
    const ResolventResult r = A.resolvent_solve(lambda, f);
    EXPECT_LE(std::abs(lambda) * l2_norm(r.v), (1 + 1e-12) * l2_norm(pf));
    EXPECT_LE(std::abs(lambda) * l2_norm(r.v), (1 + 1e-12) * l2_norm(f));
  }
}

TEST(Resolvent, ResidualWithPressureVanishes) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  for (cplx lambda : {cplx(0.0), cplx(3.0, -2.0), cplx(-1.0, 50.0)}) {
    const SpectralField f = random_field(g, 2, 7);
    const ResolventResult r = A.resolvent_solve(lambda, f);
    // lambda v - Delta v + grad pi - f, with grad pi restricted to the basis
    SpectralField res = lambda * r.v - laplacian(r.v) - f;
    res += restrict_to_basis(HydroField(SpectralField(g, 2), r.pressure.gradient()));
    EXPECT_LE(l2_norm(res), 1e-10 * l2_norm(f));
    // the residual without pressure is orthogonal to the constraint space
    EXPECT_LE(l2_norm(galerkin_project(lambda * r.v - laplacian(r.v) - f)), 1e-10 * l2_norm(f));
    EXPECT_LE(max_abs(divergence_of_average(r.v)), 1e-11 * max_abs(f));
  }
}

TEST(Resolvent, NegativeSpectrumIsSingular) {
  const Grid g = make_grid(8, 4);
  StokesOperator A(g);
  const SpectralField f = random_field(g, 2, 1);
  EXPECT_THROW(A.resolvent_solve(-A.beta(), f), SingularSolve);
  EXPECT_THROW(A.resolvent_solve(-10.0, f), SingularSolve);
  EXPECT_NO_THROW(A.resolvent_solve(-1.0, f));  // below beta
}

TEST(Resolvent, ResolventIdentity) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const cplx l(2.0, 5.0), m(0.5, -30.0);
  const SpectralField f = galerkin_project(random_field(g, 2, 3));
  const SpectralField lhs = A.resolvent_solve(l, f).v - A.resolvent_solve(m, f).v;
  const SpectralField rhs = (m - l) * A.resolvent_solve(l, A.resolvent_solve(m, f).v).v;
  EXPECT_LE(rel(lhs, rhs), 1e-10);
}

TEST(Resolvent, H2RatioStableUnderRefinement) {
  double ratio[3];
  int k = 0;
  for (auto [n, nz] : {std::pair{16, 8}, std::pair{32, 16}, std::pair{64, 32}}) {
    const Grid g = make_grid(n, nz);
    StokesOperator A(g);
    const SpectralField f = fixed_band_field(g, 2, 11, 3, 3);
    ratio[k++] = sobolev_norm(A.resolvent_solve(0.0, f).v, 2.0) / l2_norm(f);
  }
  for (double r : ratio) EXPECT_TRUE(std::isfinite(r));
  EXPECT_NEAR(ratio[1], ratio[0], 0.1 * ratio[0]);
  EXPECT_NEAR(ratio[2], ratio[1], 0.05 * ratio[1]);
}

TEST(Semigroup, IdentityEigenfunctionAndLaw) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const SpectralField f = galerkin_project(random_field(g, 2, 21));
  EXPECT_LE(rel(A.semigroup_apply(0.0, f), f), 1e-14);
  double mu = 0.0;
  const SpectralField e = block_eigenfunction(g, g.ix(1), g.iy(1), 0, &mu);
  for (double t : {0.01, 0.1, 1.0}) EXPECT_LE(rel(A.semigroup_apply(t, e), std::exp(-mu * t) * e), 1e-12);
  for (auto [s, t] : {std::pair{0.01, 0.02}, std::pair{0.1, 0.3}, std::pair{1.0, 0.5}}) {
    const SpectralField a = A.semigroup_apply(s, A.semigroup_apply(t, f));
    const SpectralField b = A.semigroup_apply(s + t, f);
    EXPECT_LE(l2_norm(a - b), 1e-11 * l2_norm(f));
  }
  EXPECT_THROW(A.semigroup_apply(-1e-3, f), DomainError);
}

TEST(Semigroup, DecaysAtRateBeta) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  for (int s = 0; s < 5; ++s) {
    const SpectralField f = galerkin_project(random_field(g, 2, 60 + s));
    for (double t : {0.0, 0.01, 0.3, 1.0, 4.0})
      EXPECT_LE(l2_norm(A.semigroup_apply(t, f)), std::exp(-A.beta() * t) * l2_norm(f) * (1 + 1e-12));
  }
  // the k = 0, m = 0 mode decays at exactly beta
  SpectralField b(g, 2);
  b(0, 0, 0, 0) = 1.0;
  EXPECT_NEAR(l2_norm(A.semigroup_apply(2.0, b)), std::exp(-2.0 * A.beta()) * l2_norm(b), 1e-15);
}

TEST(Sector, SweepBoundsAndRealAxis) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  for (double eps : {pi / 8, pi / 4}) {
    const auto samples = StokesOperator::default_sector_samples(eps);
    const SectorReport rep = A.sector_sweep(eps, samples);
    EXPECT_LE(rep.sup_m, 1.0 / std::sin(eps) + 1e-9);
    EXPECT_NEAR(rep.bound, 1.0 / std::sin(eps), 1e-15);
    EXPECT_NEAR(rep.inverse_norm, 1.0 / A.beta(), 1e-12);
    for (const auto& s : rep.samples) {
      EXPECT_TRUE(std::isfinite(s.m));
      if (s.lambda.imag() == 0.0 && s.lambda.real() > 0.0) {
        EXPECT_NEAR(s.m, s.lambda.real() / (s.lambda.real() + A.beta()), 1e-14);
        EXPECT_LT(s.m, 1.0);
      }
    }
    // samples span |lambda| in [1e-3, 1e6]
    double lo = 1e300, hi = 0.0;
    for (const auto& l : samples) lo = std::min(lo, std::abs(l)), hi = std::max(hi, std::abs(l));
    EXPECT_NEAR(lo, 1e-3, 1e-15);
    EXPECT_NEAR(hi, 1e6, 1e-6);
  }
  EXPECT_THROW(A.sector_sweep(0.0, {}), DomainError);
  EXPECT_THROW(A.sector_sweep(pi / 2, {}), DomainError);
}

TEST(Sector, SweepMatchesDirectResolventNorm) {
  // M(lambda) from the spectrum equals |lambda| ||(lambda + A)^{-1} e|| / ||e|| maximized over eigenfunctions
  const Grid g = make_grid(8, 4);
  StokesOperator A(g);
  const cplx l = std::polar(3.0, pi - pi / 8);
  const SectorReport rep = A.sector_sweep(pi / 8, {l});
  double best = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.nyquist(i, j)) continue;
      const int nb = (i == 0 && j == 0) ? 2 * g.nz : 2 * g.nz - 1;
      for (int r = 0; r < nb; ++r) {
        double mu;
        const SpectralField e = block_eigenfunction(g, i, j, r, &mu);
        best = std::max(best, std::abs(l) * l2_norm(A.resolvent_solve(l, e).v) / l2_norm(e));
      }
    }
  EXPECT_NEAR(rep.sup_m, best, 1e-10 * best);
}

TEST(Smoothing, DecayWithoutSmoothingGain) {
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const std::vector<double> ts = {1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0};
  for (int s = 0; s < 3; ++s) {
    const SpectralField f = galerkin_project(random_field(g, 2, 90 + s));
    EXPECT_LE(A.smoothing_probe(0.0, 0.0, ts, f).sup, 1.0 + 1e-12);
  }
  EXPECT_THROW(A.smoothing_probe(0.7, 0.5, ts, SpectralField(g, 2)), DomainError);
  EXPECT_THROW(A.smoothing_probe(-0.1, 0.5, ts, SpectralField(g, 2)), DomainError);
}

TEST(Smoothing, SingleModeClosedForm) {
  // f perpendicular eigenfunction with eigenvalue mu of both A and -Delta:
  // g(t) = t^th1 e^{(beta - mu) t} (1 + mu)^th1
  const Grid g = make_grid(16, 6);
  StokesOperator A(g);
  const SpectralField f = perp_mode(g, 2, 1);
  const double mu = 16 * pi * pi + g.lambda(1) * g.lambda(1);
  const std::vector<double> ts = {1e-4, 1e-3, 1e-2, 0.05, 0.2};
  for (auto [t1, t2] : {std::pair{0.5, 0.5}, std::pair{0.25, 0.0}, std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
    const SmoothingReport rep = A.smoothing_probe(t1, t2, ts, f);
    for (std::size_t n = 0; n < ts.size(); ++n) {
      const double ref = std::pow(ts[n], t1) * std::exp((A.beta() - mu) * ts[n]) * std::pow(1 + mu, t1);
      EXPECT_NEAR(rep.g[n], ref, 1e-10 * ref);
    }
    // closed-form supremum at t* = th1 / (mu - beta) when sampled
    if (t1 > 0.0) {
      const double ts_star = t1 / (mu - A.beta());
      const double sup = std::pow(ts_star, t1) * std::exp(-t1) * std::pow(1 + mu, t1);
      const SmoothingReport at = A.smoothing_probe(t1, t2, {ts_star}, f);
      EXPECT_NEAR(at.sup, sup, 1e-10 * sup);
      EXPECT_LE(rep.sup, sup * (1 + 1e-12));
    }
  }
}

TEST(Smoothing, SupStableUnderRefinement) {
  std::vector<double> ts;
  for (int k = 0; k <= 40; ++k) ts.push_back(std::pow(10.0, -4.0 + k / 10.0));
  double sup[3];
  int k = 0;
  for (auto [n, nz] : {std::pair{16, 8}, std::pair{32, 16}, std::pair{64, 32}}) {
    const Grid g = make_grid(n, nz);
    StokesOperator A(g);
    const SpectralField f = galerkin_project(fixed_band_field(g, 2, 5, 3, 3));
    sup[k++] = A.smoothing_probe(0.5, 0.25, ts, f).sup;
  }
  EXPECT_NEAR(sup[1], sup[0], 0.1 * sup[0]);
  EXPECT_NEAR(sup[2], sup[1], 0.05 * sup[1]);
}
