#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hydropde {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Gauss-Legendre nodes and weights on (-1, 1), Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {std::move(x), std::move(w)};
}

/// Periodic box G = (0,1)^2 times the layer (-h, 0).
///
/// Horizontal modes are stored in FFT order; the vertical basis is
/// phi_m(z) = cos(lambda_m z), lambda_m = (m + 1/2) pi / h, which satisfies
/// phi_m'(0) = 0 and phi_m(-h) = 0.
struct Grid {
  int nx = 32;
  int ny = 32;
  int nz = 16;
  double h = 1.0;
  double dealias = 2.0 / 3.0;

  void validate() const {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
      throw ConfigError("grid: nx, ny must be even and >= 4");
    if (nz < 2) throw ConfigError("grid: nz must be >= 2");
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid: h must be positive");
    if (!(dealias > 0.0 && dealias <= 1.0)) throw ConfigError("grid: dealias fraction must lie in (0,1]");
  }

  /// Vertical quadrature node count.
  int nq() const { return 4 * nz; }
  std::size_t plane() const { return static_cast<std::size_t>(nx) * ny; }

  int kx(int i) const { return i <= nx / 2 ? i : i - nx; }
  int ky(int j) const { return j <= ny / 2 ? j : j - ny; }
  int ix(int k) const { return k >= 0 ? k : k + nx; }
  int iy(int k) const { return k >= 0 ? k : k + ny; }
  bool nyquist(int i, int j) const { return i == nx / 2 || j == ny / 2; }

  /// 2/3-type truncation in the horizontal wavenumbers.
  bool retained(int i, int j) const {
    if (nyquist(i, j)) return false;
    return std::abs(kx(i)) <= dealias * nx / 2.0 && std::abs(ky(j)) <= dealias * ny / 2.0;
  }

  double lambda(int m) const { return (m + 0.5) * pi / h; }
  /// (1/h) * integral of phi_m over (-h, 0).
  double avg_weight(int m) const { return ((m % 2 == 0) ? 1.0 : -1.0) / (lambda(m) * h); }
  double avg_weight_norm2() const {
    double s = 0.0;
    for (int m = 0; m < nz; ++m) s += avg_weight(m) * avg_weight(m);
    return s;
  }
  double k2(int i, int j) const {
    const double a = kx(i), b = ky(j);
    return two_pi * two_pi * (a * a + b * b);
  }

  bool operator==(const Grid& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && h == o.h && dealias == o.dealias;
  }
};

inline void require_same(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ConfigError(std::string(what) + ": grid mismatch");
}

/// Vertical quadrature and basis tables, shared between fields on one grid.
struct VerticalBasis {
  std::vector<double> z, w;        // nodes in (-h,0), weights summing to h
  std::vector<double> cos_tab;     // [q*nz + m] = cos(lambda_m z_q)
  std::vector<double> sin_tab;     // [q*nz + m] = sin(lambda_m z_q)
  int nq = 0, nz = 0;

  explicit VerticalBasis(const Grid& g) : nq(g.nq()), nz(g.nz) {
    auto [x, wx] = gauss_legendre(nq);
    z.resize(nq);
    w.resize(nq);
    for (int q = 0; q < nq; ++q) {
      z[q] = 0.5 * g.h * (x[q] - 1.0);
      w[q] = 0.5 * g.h * wx[q];
    }
    cos_tab.resize(static_cast<std::size_t>(nq) * nz);
    sin_tab.resize(cos_tab.size());
    for (int q = 0; q < nq; ++q)
      for (int m = 0; m < nz; ++m) {
        cos_tab[q * nz + m] = std::cos(g.lambda(m) * z[q]);
        sin_tab[q * nz + m] = std::sin(g.lambda(m) * z[q]);
      }
  }
};

}  // namespace hydropde
