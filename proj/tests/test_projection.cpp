#include <gtest/gtest.h>

#include <cmath>

#include "hydropde/projection.hpp"
#include "test_util.hpp"

using namespace hydropde;
using namespace hydropde::test_support;

namespace {

// scalar amp * cos(2 pi (kx x + ky y))
AveragedField cos_mode(const Grid& g, int kx, int ky, double amp = 1.0) {
  AveragedField f(g, 1);
  f(0, g.ix(kx), g.iy(ky)) += 0.5 * amp;
  f(0, g.ix(-kx), g.iy(-ky)) += 0.5 * amp;
  return f;
}

// sin(2 pi (kx x + ky y)) on component c of a 2-vector field
AveragedField sin_vec(const Grid& g, int c, int kx, int ky) {
  AveragedField f(g, 2);
  f(c, g.ix(kx), g.iy(ky)) += cplx(0.0, -0.5);
  f(c, g.ix(-kx), g.iy(-ky)) += cplx(0.0, 0.5);
  return f;
}

double rel_diff(const HydroField& a, const HydroField& b, double scale) {
  HydroField d(a.modal - b.modal, a.column - b.column);
  return l2_norm(d) / scale;
}

}  // namespace

TEST(SurfacePoisson, GradientInputRecovered) {
  const Grid g = make_grid(16, 4);
  // f = grad cos(2 pi x) = (-2 pi sin(2 pi x), 0)
  AveragedField f = sin_vec(g, 0, 1, 0);
  f *= -two_pi;
  const SurfacePressure p = solve_surface_poisson(f);
  const AveragedField ref = cos_mode(g, 1, 0);
  EXPECT_LE(max_abs(p.coeffs() - ref), 1e-15);
}

TEST(SurfacePoisson, DivergenceFreeInputGivesZero) {
  const Grid g = make_grid(16, 4);
  EXPECT_EQ(max_abs(solve_surface_poisson(sin_vec(g, 0, 0, 1)).coeffs()), 0.0);
  // random divergence-free field: (d_y psi, -d_x psi)
  const SpectralField psi = random_field(g, 1, 3);
  const SpectralField v = stack(partial_h(psi, 1), -1.0 * partial_h(psi, 0));
  EXPECT_LE(max_abs(solve_surface_poisson(vertical_average(v)).coeffs()), 1e-13 * max_abs(v));
}

TEST(SurfacePoisson, SineInXHandComputation) {
  const Grid g = make_grid(16, 4);
  const AveragedField f = sin_vec(g, 0, 1, 0);
  const SurfacePressure p = solve_surface_poisson(f);
  AveragedField ref = cos_mode(g, 1, 0, -1.0 / two_pi);
  EXPECT_LE(max_abs(p.coeffs() - ref), 1e-16);
  // Delta_H pi - div_H f = 0 on every retained mode
  const AveragedField lap = divergence_of_average(p.gradient());
  EXPECT_LE(max_abs(lap - divergence_of_average(f)), 1e-14);
}

TEST(SurfacePoisson, ZeroMeanAndRealness) {
  const Grid g = make_grid(16, 4);
  AveragedField f = vertical_average(random_field(g, 2, 17));
  f(0, 0, 0) = 3.0;
  const SurfacePressure p = solve_surface_poisson(f);
  EXPECT_EQ(p(0, 0), cplx{});
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.nyquist(i, j)) continue;
      EXPECT_NEAR(std::abs(p(i, j) - std::conj(p(g.ix(-g.kx(i)), g.iy(-g.ky(j))))), 0.0, 1e-15);
    }
  EXPECT_THROW(solve_surface_poisson(AveragedField(g, 1)), ConfigError);
}

TEST(SurfacePoisson, WeakResidualOnRandomData) {
  const Grid g = make_grid(32, 4);
  const AveragedField f = vertical_average(random_field(g, 2, 5));
  const SurfacePressure p = solve_surface_poisson(f);
  // <grad pi - f, grad phi> = 0 for phi = each Fourier mode, i.e. k . (grad pi - f)^ = 0
  const AveragedField r = divergence_of_average(p.gradient() - f);
  EXPECT_LE(max_abs(r), 1e-12 * max_abs(f));
}

TEST(Projection, Idempotent) {
  for (int n : {16, 32}) {
    const Grid g = make_grid(n, 6);
    for (int s = 0; s < 5; ++s) {
      const SpectralField v = random_field(g, 2, 100 + s);
      const HydroField p1 = project(v);
      const HydroField p2 = project(p1);
      EXPECT_LE(rel_diff(p2, p1, l2_norm(HydroField(v))), 1e-12);
    }
  }
}

TEST(Projection, IdentityOnConstrainedFields) {
  const Grid g = make_grid(16, 5);
  const SpectralField v = galerkin_project(random_field(g, 2, 9));
  ASSERT_LE(max_abs(divergence_of_average(v)), 1e-12 * max_abs(v));
  const HydroField p = project(v);
  EXPECT_LE(rel_diff(p, HydroField(v), l2_norm(HydroField(v))), 1e-12);
  // a fluctuation (zero average) is untouched as well
  const SpectralField u = fluctuation(random_field(g, 2, 10));
  EXPECT_LE(rel_diff(project(u), HydroField(u), l2_norm(HydroField(u))), 1e-12);
}

TEST(Projection, GradientIsInKernel) {
  const Grid g = make_grid(16, 4);
  // v = grad psi on the column channel, psi = cos(2 pi (x + 2y)) + 0.3 sin(4 pi y)
  AveragedField psi = cos_mode(g, 1, 2);
  psi(0, 0, g.iy(2)) += cplx(0.0, -0.15);
  psi(0, 0, g.iy(-2)) += cplx(0.0, 0.15);
  const AveragedField grad = SurfacePressure(psi).gradient();
  const HydroField v(SpectralField(g, 2), grad);
  const HydroField p = project(v);
  EXPECT_LE(l2_norm(p), 1e-14 * l2_norm(v));
}

TEST(Projection, AverageBecomesDivergenceFree) {
  for (int nz : {2, 7}) {
    const Grid g = make_grid(32, nz, 1.4);
    const SpectralField v = random_field(g, 2, 33 + nz);
    SurfacePressure pi;
    const HydroField p = project(v, &pi);
    EXPECT_LE(max_abs(divergence_of_average(p)), 1e-12 * max_abs(divergence_of_average(v)));
    EXPECT_EQ(pi(0, 0), cplx{});
  }
  const Grid g = make_grid(8, 3);
  EXPECT_EQ(l2_norm(project(SpectralField(g, 2))), 0.0);
}

TEST(Projection, OrthogonalAtP2ByQuadrature) {
  const Grid g = make_grid(16, 5);
  Transform tr(g);
  for (int s = 0; s < 5; ++s) {
    const SpectralField v = random_field(g, 2, 70 + s);
    const HydroField pv = project(v);
    const HydroField rest(v - pv.modal, -1.0 * pv.column);
    // inner product by quadrature of the physical values
    const PhysicalField a = to_physical(tr, pv), b = to_physical(tr, rest);
    double ip = 0.0, nv = 0.0;
    const auto& w = tr.basis().w;
    const double cell = 1.0 / (g.nx * g.ny);
    for (int c = 0; c < 2; ++c)
      for (int q = 0; q < a.levels(); ++q)
        for (int i = 0; i < g.nx; ++i)
          for (int j = 0; j < g.ny; ++j) {
            ip += w[q] * cell * a(c, q, i, j) * b(c, q, i, j);
            const double x = a(c, q, i, j) + b(c, q, i, j);
            nv += w[q] * cell * x * x;
          }
    EXPECT_LE(std::abs(ip), 1e-10 * nv);
    // the split inner product agrees with the quadrature
    EXPECT_NEAR(inner(pv, rest), ip, 1e-10 * nv);
  }
}

TEST(Projection, L2Contraction) {
  const Grid g = make_grid(16, 6);
  for (int s = 0; s < 20; ++s) {
    const SpectralField v = random_field(g, 2, 300 + s);
    EXPECT_LE(l2_norm(project(v)), l2_norm(HydroField(v)) * (1 + 1e-14));
  }
}

TEST(Projection, LpRatioStableUnderRefinement) {
  for (double p : {4.0 / 3.0, 4.0}) {
    double worst[2] = {0.0, 0.0};
    int gi = 0;
    for (int n : {16, 32}) {
      const Grid g = make_grid(n, 8);
      Transform tr(g);
      for (int s = 0; s < 8; ++s) {
        const SpectralField v = fixed_band_field(g, 2, 900 + s, 4, 3);
        const double r = lp_norm(to_physical(tr, project(v)), p) / lp_norm(tr.to_physical(v), p);
        EXPECT_TRUE(std::isfinite(r));
        worst[gi] = std::max(worst[gi], r);
      }
      ++gi;
    }
    EXPECT_LT(worst[0], 3.0) << p;
    EXPECT_NEAR(worst[1], worst[0], 0.05 * worst[0]) << p;
  }
}

TEST(DivergenceOfAverage, ProfileWithNonzeroAverage) {
  const Grid g = make_grid(16, 4);
  // v = (sin(2 pi x) (phi_0 + 0.5 phi_2), 0): average factor 2/pi + 0.5 * 2/(5 pi)
  SpectralField v(g, 2);
  for (int m : {0, 2}) {
    const double a = m == 0 ? 1.0 : 0.5;
    v(0, 1, 0, m) = cplx(0.0, -0.5 * a);
    v(0, g.ix(-1), 0, m) = cplx(0.0, 0.5 * a);
  }
  const double factor = test_support::midpoint(
      [&](double z) { return std::cos(g.lambda(0) * z) + 0.5 * std::cos(g.lambda(2) * z); }, -1.0, 0.0, 200000);
  const AveragedField d = divergence_of_average(v);
  // 2 pi cos(2 pi x) * factor
  EXPECT_NEAR(d(0, 1, 0).real(), pi * factor, 1e-9);
  EXPECT_NEAR(d(0, g.ix(-1), 0).real(), pi * factor, 1e-9);
  EXPECT_NEAR(d(0, 1, 0).imag(), 0.0, 1e-15);
  EXPECT_EQ(max_abs(divergence_of_average(SpectralField(g, 2))), 0.0);
}

TEST(GalerkinProjection, OrthogonalProjectorOntoConstraint) {
  const Grid g = make_grid(16, 6);
  for (int s = 0; s < 5; ++s) {
    const SpectralField v = random_field(g, 2, 500 + s), u = random_field(g, 2, 600 + s);
    const SpectralField pv = galerkin_project(v), pu = galerkin_project(u);
    EXPECT_LE(max_abs(divergence_of_average(pv)), 1e-12 * max_abs(v));
    EXPECT_LE(max_abs(galerkin_project(pv) - pv), 1e-13 * max_abs(v));
    // self-adjoint: <Pv, u> = <v, Pu>
    EXPECT_NEAR(inner(pv, u), inner(v, pu), 1e-12 * l2_norm(v) * l2_norm(u));
  }
  EXPECT_THROW(galerkin_project(SpectralField(g, 1)), ConfigError);
}

TEST(GalerkinProjection, AgreesWithContinuousProjectionAfterRestriction) {
  // P_N v equals the L2 restriction of P v onto the cosine basis, followed by P_N
  const Grid g = make_grid(16, 6);
  const SpectralField v = random_field(g, 2, 42);
  const SpectralField a = galerkin_project(restrict_to_basis(project(v)));
  const SpectralField b = galerkin_project(v);
  EXPECT_LE(max_abs(a - b), 1e-12 * max_abs(v));
}
