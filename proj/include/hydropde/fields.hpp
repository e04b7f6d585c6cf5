#pragma once

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace hydropde {

// ---------------------------------------------------------------------------
// Field containers
// ---------------------------------------------------------------------------

/// Coefficients of a scalar or horizontal-vector field in the mixed
/// Fourier x cosine basis, indexed (component, kx, ky, m), m fastest.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const Grid& g, int components) : grid_(g), ncomp_(components) {
    if (components != 1 && components != 2) throw ConfigError("SpectralField: components must be 1 or 2");
    data_.assign(static_cast<std::size_t>(components) * g.plane() * g.nz, cplx{});
  }

  const Grid& grid() const { return grid_; }
  int components() const { return ncomp_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int c, int i, int j, int m) const {
    return ((static_cast<std::size_t>(c) * grid_.nx + i) * grid_.ny + j) * grid_.nz + m;
  }
  cplx& operator()(int c, int i, int j, int m) { return data_[index(c, i, j, m)]; }
  const cplx& operator()(int c, int i, int j, int m) const { return data_[index(c, i, j, m)]; }
  cplx* column(int c, int i, int j) { return data_.data() + index(c, i, j, 0); }
  const cplx* column(int c, int i, int j) const { return data_.data() + index(c, i, j, 0); }

  std::span<cplx> coeffs() { return data_; }
  std::span<const cplx> coeffs() const { return data_; }

  SpectralField& operator+=(const SpectralField& o) {
    check(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  /// Complex scaling; the result is no longer a real field unless s is real.
  SpectralField& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o) {
    check(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += s * o.data_[n];
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
  }

 private:
  void check(const SpectralField& o) const {
    require_same(grid_, o.grid_, "SpectralField");
    if (ncomp_ != o.ncomp_) throw ConfigError("SpectralField: component mismatch");
  }

  Grid grid_{};
  int ncomp_ = 0;
  std::vector<cplx> data_;
};

/// z-independent field on G, coefficients indexed (component, kx, ky).
class AveragedField {
 public:
  AveragedField() = default;
  AveragedField(const Grid& g, int components) : grid_(g), ncomp_(components) {
    if (components != 1 && components != 2) throw ConfigError("AveragedField: components must be 1 or 2");
    data_.assign(static_cast<std::size_t>(components) * g.plane(), cplx{});
  }

  const Grid& grid() const { return grid_; }
  int components() const { return ncomp_; }
  std::size_t index(int c, int i, int j) const {
    return (static_cast<std::size_t>(c) * grid_.nx + i) * grid_.ny + j;
  }
  cplx& operator()(int c, int i, int j) { return data_[index(c, i, j)]; }
  const cplx& operator()(int c, int i, int j) const { return data_[index(c, i, j)]; }
  std::span<cplx> coeffs() { return data_; }
  std::span<const cplx> coeffs() const { return data_; }

  AveragedField& operator+=(const AveragedField& o) {
    check(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  AveragedField& operator-=(const AveragedField& o) {
    check(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
  }
  AveragedField& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend AveragedField operator+(AveragedField a, const AveragedField& b) { return a += b; }
  friend AveragedField operator-(AveragedField a, const AveragedField& b) { return a -= b; }
  friend AveragedField operator*(double s, AveragedField a) { return a *= s; }

 private:
  void check(const AveragedField& o) const {
    require_same(grid_, o.grid_, "AveragedField");
    if (ncomp_ != o.ncomp_) throw ConfigError("AveragedField: component mismatch");
  }

  Grid grid_{};
  int ncomp_ = 0;
  std::vector<cplx> data_;
};

/// Values on the collocation grid (x_i, y_j, z_q), indexed (component, q, i, j).
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(const Grid& g, std::shared_ptr<const VerticalBasis> basis, int components)
      : grid_(g), basis_(std::move(basis)), ncomp_(components) {
    values_.assign(static_cast<std::size_t>(components) * basis_->nq * g.plane(), 0.0);
  }

  const Grid& grid() const { return grid_; }
  const VerticalBasis& basis() const { return *basis_; }
  std::shared_ptr<const VerticalBasis> basis_ptr() const { return basis_; }
  int components() const { return ncomp_; }
  int levels() const { return basis_->nq; }

  std::size_t index(int c, int q, int i, int j) const {
    return ((static_cast<std::size_t>(c) * basis_->nq + q) * grid_.nx + i) * grid_.ny + j;
  }
  double& operator()(int c, int q, int i, int j) { return values_[index(c, q, i, j)]; }
  double operator()(int c, int q, int i, int j) const { return values_[index(c, q, i, j)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  /// Contiguous block of one component.
  std::span<double> component(int c) {
    const std::size_t n = static_cast<std::size_t>(basis_->nq) * grid_.plane();
    return {values_.data() + c * n, n};
  }
  std::span<const double> component(int c) const {
    const std::size_t n = static_cast<std::size_t>(basis_->nq) * grid_.plane();
    return {values_.data() + c * n, n};
  }

 private:
  Grid grid_{};
  std::shared_ptr<const VerticalBasis> basis_;
  int ncomp_ = 0;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Spectral helpers
// ---------------------------------------------------------------------------

inline void zero_nyquist(SpectralField& f) {
  const Grid& g = f.grid();
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        if (g.nyquist(i, j)) std::fill_n(f.column(c, i, j), g.nz, cplx{});
}

/// Zero every horizontal wavenumber outside the dealiasing mask.
inline void apply_mask(SpectralField& f) {
  const Grid& g = f.grid();
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        if (!g.retained(i, j)) std::fill_n(f.column(c, i, j), g.nz, cplx{});
}

inline void apply_mask(AveragedField& f) {
  const Grid& g = f.grid();
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        if (!g.retained(i, j)) f(c, i, j) = 0.0;
}

/// Symmetrize so that c(-k) = conj(c(k)); Nyquist rows are zeroed.
inline void enforce_hermitian(SpectralField& f) {
  const Grid& g = f.grid();
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const int pi_ = (g.nx - i) % g.nx, pj = (g.ny - j) % g.ny;
        if (std::make_pair(pi_, pj) < std::make_pair(i, j)) continue;
        for (int m = 0; m < g.nz; ++m) {
          const cplx a = f(c, i, j, m), b = std::conj(f(c, pi_, pj, m));
          const cplx s = 0.5 * (a + b);
          f(c, i, j, m) = s;
          f(c, pi_, pj, m) = std::conj(s);
        }
      }
  zero_nyquist(f);
}

inline double hermitian_defect(const SpectralField& f) {
  const Grid& g = f.grid();
  double d = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int m = 0; m < g.nz; ++m)
          d = std::max(d, std::abs(f(c, i, j, m) - std::conj(f(c, (g.nx - i) % g.nx, (g.ny - j) % g.ny, m))));
  return d;
}

/// Component c of a vector field as a scalar field.
inline SpectralField component(const SpectralField& f, int c) {
  SpectralField out(f.grid(), 1);
  const std::size_t n = f.grid().plane() * f.grid().nz;
  std::copy_n(f.coeffs().data() + c * n, n, out.coeffs().data());
  return out;
}

inline SpectralField stack(const SpectralField& a, const SpectralField& b) {
  SpectralField out(a.grid(), 2);
  const std::size_t n = a.grid().plane() * a.grid().nz;
  std::copy_n(a.coeffs().data(), n, out.coeffs().data());
  std::copy_n(b.coeffs().data(), n, out.coeffs().data() + n);
  return out;
}

/// Horizontal derivative d/dx (axis 0) or d/dy (axis 1), componentwise.
inline SpectralField partial_h(const SpectralField& f, int axis) {
  const Grid& g = f.grid();
  SpectralField out(g, f.components());
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        if (g.nyquist(i, j)) continue;
        const cplx mult(0.0, two_pi * (axis == 0 ? g.kx(i) : g.ky(j)));
        for (int m = 0; m < g.nz; ++m) out(c, i, j, m) = mult * f(c, i, j, m);
      }
  return out;
}

/// Full Laplacian, diagonal in the mixed basis: -(4 pi^2 |k|^2 + lambda_m^2).
inline SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out(g, f.components());
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int m = 0; m < g.nz; ++m) {
          const double l = g.lambda(m);
          out(c, i, j, m) = -(g.k2(i, j) + l * l) * f(c, i, j, m);
        }
  return out;
}

/// Horizontal divergence of a vector field.
inline SpectralField divergence_h(const SpectralField& v) {
  if (v.components() != 2) throw ConfigError("divergence_h: vector field required");
  const Grid& g = v.grid();
  SpectralField out(g, 1);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.nyquist(i, j)) continue;
      const cplx ax(0.0, two_pi * g.kx(i)), ay(0.0, two_pi * g.ky(j));
      for (int m = 0; m < g.nz; ++m) out(0, i, j, m) = ax * v(0, i, j, m) + ay * v(1, i, j, m);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Averages and fluctuations
// ---------------------------------------------------------------------------

/// (1/h) int_{-h}^0 f dz, exact from the basis integrals.
inline AveragedField vertical_average(const SpectralField& f) {
  const Grid& g = f.grid();
  AveragedField out(g, f.components());
  std::vector<double> a(g.nz);
  for (int m = 0; m < g.nz; ++m) a[m] = g.avg_weight(m);
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const cplx* col = f.column(c, i, j);
        cplx s{};
        for (int m = 0; m < g.nz; ++m) s += a[m] * col[m];
        out(c, i, j) = s;
      }
  return out;
}

/// Minimal-norm basis expansion whose vertical average is exactly `b`.
inline SpectralField lift_average(const AveragedField& b) {
  const Grid& g = b.grid();
  SpectralField out(g, b.components());
  const double an2 = g.avg_weight_norm2();
  for (int c = 0; c < b.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        cplx* col = out.column(c, i, j);
        for (int m = 0; m < g.nz; ++m) col[m] = g.avg_weight(m) / an2 * b(c, i, j);
      }
  return out;
}

/// f minus the basis re-expansion of its vertical average.
inline SpectralField fluctuation(const SpectralField& f) {
  return f - lift_average(vertical_average(f));
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanPtr = std::shared_ptr<fftw_plan_s>;

inline PlanPtr make_plan(int nx, int ny, int sign) {
  std::lock_guard lock(fftw_planner_mutex());
  std::vector<cplx> scratch(static_cast<std::size_t>(nx) * ny);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_2d(nx, ny, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw ConfigError("fftw: plan creation failed");
  return PlanPtr(plan, PlanDeleter{});
}
}  // namespace detail

/// Which vertical profile a synthesis uses for coefficient c_m.
enum class Vertical {
  value,          // c_m cos(lambda_m z)
  dz,             // c_m d/dz cos = -lambda_m c_m sin(lambda_m z)
  antiderivative  // c_m int_z^0 cos = -c_m sin(lambda_m z) / lambda_m
};

/// Spectral <-> physical transforms on one grid. Immutable after
/// construction; concurrent calls are safe.
class Transform {
 public:
  explicit Transform(const Grid& g)
      : grid_(g),
        basis_(std::make_shared<VerticalBasis>(g)),
        fwd_(detail::make_plan(g.nx, g.ny, FFTW_FORWARD)),
        bwd_(detail::make_plan(g.nx, g.ny, FFTW_BACKWARD)) {
    g.validate();
    const int nq = basis_->nq, nz = g.nz;
    dz_tab_.resize(static_cast<std::size_t>(nq) * nz);
    anti_tab_.resize(dz_tab_.size());
    proj_tab_.resize(dz_tab_.size());
    for (int q = 0; q < nq; ++q)
      for (int m = 0; m < nz; ++m) {
        const double l = g.lambda(m);
        dz_tab_[q * nz + m] = -l * basis_->sin_tab[q * nz + m];
        anti_tab_[q * nz + m] = -basis_->sin_tab[q * nz + m] / l;
      }
    // Discrete least-squares analysis: the quadrature Gram matrix equals
    // (h/2) I up to quadrature error; inverting it makes the round trip exact.
    Eigen::MatrixXd C(nq, nz), W = Eigen::VectorXd::Map(basis_->w.data(), nq).asDiagonal();
    for (int q = 0; q < nq; ++q)
      for (int m = 0; m < nz; ++m) C(q, m) = basis_->cos_tab[q * nz + m];
    const Eigen::MatrixXd P = (C.transpose() * W * C).llt().solve(C.transpose() * W);
    for (int m = 0; m < nz; ++m)
      for (int q = 0; q < nq; ++q) proj_tab_[m * nq + q] = P(m, q);
  }

  const Grid& grid() const { return grid_; }
  const VerticalBasis& basis() const { return *basis_; }
  std::shared_ptr<const VerticalBasis> basis_ptr() const { return basis_; }

  PhysicalField to_physical(const SpectralField& f, Vertical kind = Vertical::value) const {
    require_same(grid_, f.grid(), "to_physical");
    const double* tab = kind == Vertical::value ? basis_->cos_tab.data()
                        : kind == Vertical::dz  ? dz_tab_.data()
                                                : anti_tab_.data();
    const int nq = basis_->nq, nz = grid_.nz;
    const std::size_t plane = grid_.plane();
    PhysicalField out(grid_, basis_, f.components());
    std::vector<cplx> buf(static_cast<std::size_t>(nq) * plane);
    for (int c = 0; c < f.components(); ++c) {
      std::fill(buf.begin(), buf.end(), cplx{});
      for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j) {
          const cplx* col = f.column(c, i, j);
          if (std::all_of(col, col + nz, [](const cplx& v) { return v == cplx{}; })) continue;
          for (int q = 0; q < nq; ++q) {
            const double* row = tab + q * nz;
            cplx s{};
            for (int m = 0; m < nz; ++m) s += row[m] * col[m];
            buf[q * plane + i * grid_.ny + j] = s;
          }
        }
      for (int q = 0; q < nq; ++q) {
        auto* p = reinterpret_cast<fftw_complex*>(buf.data() + q * plane);
        fftw_execute_dft(bwd_.get(), p, p);
      }
      auto dst = out.component(c);
      for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = buf[n].real();
    }
    return out;
  }

  /// Galerkin projection of physical values onto the retained basis
  /// (quadrature in z, discrete Fourier transform in x, y).
  SpectralField to_spectral(const PhysicalField& g) const {
    require_same(grid_, g.grid(), "to_spectral");
    const int nq = basis_->nq, nz = grid_.nz;
    const std::size_t plane = grid_.plane();
    SpectralField out(grid_, g.components());
    std::vector<cplx> buf(static_cast<std::size_t>(nq) * plane);
    const double scale = 1.0 / static_cast<double>(plane);
    for (int c = 0; c < g.components(); ++c) {
      auto src = g.component(c);
      for (std::size_t n = 0; n < src.size(); ++n) buf[n] = src[n];
      for (int q = 0; q < nq; ++q) {
        auto* p = reinterpret_cast<fftw_complex*>(buf.data() + q * plane);
        fftw_execute_dft(fwd_.get(), p, p);
      }
      for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j) {
          if (grid_.nyquist(i, j)) continue;
          cplx* col = out.column(c, i, j);
          const std::size_t off = i * grid_.ny + j;
          for (int m = 0; m < nz; ++m) {
            const double* row = proj_tab_.data() + m * nq;
            cplx s{};
            for (int q = 0; q < nq; ++q) s += row[q] * buf[q * plane + off];
            col[m] = s * scale;
          }
        }
    }
    return out;
  }

  /// Evaluate a z-independent field on the horizontal grid, (component, i, j).
  std::vector<double> plane_values(const AveragedField& b) const {
    require_same(grid_, b.grid(), "plane_values");
    const std::size_t plane = grid_.plane();
    std::vector<double> out(b.components() * plane);
    std::vector<cplx> buf(plane);
    for (int c = 0; c < b.components(); ++c) {
      std::copy_n(b.coeffs().data() + c * plane, plane, buf.data());
      for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j)
          if (grid_.nyquist(i, j)) buf[i * grid_.ny + j] = 0.0;
      auto* p = reinterpret_cast<fftw_complex*>(buf.data());
      fftw_execute_dft(bwd_.get(), p, p);
      for (std::size_t n = 0; n < plane; ++n) out[c * plane + n] = buf[n].real();
    }
    return out;
  }

  AveragedField plane_coeffs(std::span<const double> values, int components) const {
    const std::size_t plane = grid_.plane();
    if (values.size() != components * plane) throw ConfigError("plane_coeffs: shape mismatch");
    AveragedField out(grid_, components);
    std::vector<cplx> buf(plane);
    for (int c = 0; c < components; ++c) {
      for (std::size_t n = 0; n < plane; ++n) buf[n] = values[c * plane + n];
      auto* p = reinterpret_cast<fftw_complex*>(buf.data());
      fftw_execute_dft(fwd_.get(), p, p);
      for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j)
          out(c, i, j) = grid_.nyquist(i, j) ? cplx{} : buf[i * grid_.ny + j] / static_cast<double>(plane);
    }
    return out;
  }

  /// Broadcast a z-independent field onto every quadrature level.
  PhysicalField broadcast(const AveragedField& b) const {
    auto vals = plane_values(b);
    PhysicalField out(grid_, basis_, b.components());
    const std::size_t plane = grid_.plane();
    for (int c = 0; c < b.components(); ++c)
      for (int q = 0; q < basis_->nq; ++q)
        std::copy_n(vals.data() + c * plane, plane, out.values().data() + out.index(c, q, 0, 0));
    return out;
  }

 private:
  Grid grid_;
  std::shared_ptr<const VerticalBasis> basis_;
  detail::PlanPtr fwd_, bwd_;
  std::vector<double> dz_tab_, anti_tab_, proj_tab_;
};

/// w(x,y,z) = int_z^0 div_H v dzeta, sampled on the quadrature grid.
inline PhysicalField diagnostic_w(const Transform& tr, const SpectralField& v) {
  return tr.to_physical(divergence_h(v), Vertical::antiderivative);
}

/// Coefficients over (kx, ky) of w at a fixed depth z in [-h, 0].
inline AveragedField w_at_depth(const SpectralField& v, double z) {
  const Grid& g = v.grid();
  const SpectralField d = divergence_h(v);
  AveragedField out(g, 1);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      cplx s{};
      for (int m = 0; m < g.nz; ++m) s += -std::sin(g.lambda(m) * z) / g.lambda(m) * d(0, i, j, m);
      out(0, i, j) = s;
    }
  return out;
}

/// Vertical average of physical values by quadrature, (component, i, j).
inline std::vector<double> quadrature_average(const PhysicalField& f) {
  const Grid& g = f.grid();
  const auto& vb = f.basis();
  const std::size_t plane = g.plane();
  std::vector<double> out(f.components() * plane, 0.0);
  for (int c = 0; c < f.components(); ++c)
    for (int q = 0; q < vb.nq; ++q) {
      const double wq = vb.w[q] / g.h;
      const double* src = f.values().data() + f.index(c, q, 0, 0);
      double* dst = out.data() + c * plane;
      for (std::size_t n = 0; n < plane; ++n) dst[n] += wq * src[n];
    }
  return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

inline constexpr double inf_norm = std::numeric_limits<double>::infinity();

namespace detail {
/// Pointwise Euclidean magnitude over components.
inline double magnitude(const PhysicalField& f, int q, std::size_t n) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const double v = f.values()[f.index(c, q, 0, 0) + n];
    s += v * v;
  }
  return std::sqrt(s);
}

inline double horizontal_norm(const PhysicalField& f, int q, double p) {
  const std::size_t plane = f.grid().plane();
  if (std::isinf(p)) {
    double mx = 0.0;
    for (std::size_t n = 0; n < plane; ++n) mx = std::max(mx, magnitude(f, q, n));
    return mx;
  }
  double s = 0.0;
  for (std::size_t n = 0; n < plane; ++n) s += std::pow(magnitude(f, q, n), p);
  return std::pow(s / static_cast<double>(plane), 1.0 / p);
}
}  // namespace detail

/// Mixed anisotropic norm L^{q_z} L^{p_xy}: horizontal norm on every
/// quadrature level, then the weighted vertical norm.
inline double mixed_norm(const PhysicalField& f, double q_z, double p_xy) {
  if (q_z < 1.0 || p_xy < 1.0) throw DomainError("mixed_norm: exponents must be >= 1");
  const auto& vb = f.basis();
  if (std::isinf(q_z)) {
    double mx = 0.0;
    for (int q = 0; q < vb.nq; ++q) mx = std::max(mx, detail::horizontal_norm(f, q, p_xy));
    return mx;
  }
  double s = 0.0;
  for (int q = 0; q < vb.nq; ++q) s += vb.w[q] * std::pow(detail::horizontal_norm(f, q, p_xy), q_z);
  return std::pow(s, 1.0 / q_z);
}

/// L^p(Omega) norm by quadrature (|G| = 1).
inline double lp_norm(const PhysicalField& f, double p) {
  if (p < 1.0) throw DomainError("lp_norm: p must be >= 1");
  return mixed_norm(f, p, p);
}

/// Spectral H^s surrogate: sum (h/2) (1 + 4 pi^2 |k|^2 + lambda_m^2)^s |c|^2.
inline double sobolev_norm(const SpectralField& f, double s) {
  if (s < 0.0 || s > 2.0) throw DomainError("sobolev_norm: s must lie in [0, 2]");
  const Grid& g = f.grid();
  double acc = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double kk = g.k2(i, j);
        const cplx* col = f.column(c, i, j);
        for (int m = 0; m < g.nz; ++m) {
          const double a2 = std::norm(col[m]);
          if (a2 == 0.0) continue;
          const double l = g.lambda(m);
          acc += (s == 0.0 ? 1.0 : std::pow(1.0 + kk + l * l, s)) * a2;
        }
      }
  return std::sqrt(0.5 * g.h * acc);
}

inline double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

/// Real L^2(Omega) inner product of two fields in the cosine basis.
inline double inner(const SpectralField& a, const SpectralField& b) {
  require_same(a.grid(), b.grid(), "inner");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += (std::conj(a.coeffs()[n]) * b.coeffs()[n]).real();
  return 0.5 * a.grid().h * s;
}

/// L^2(G) norm of a z-independent field.
inline double l2_norm(const AveragedField& f) {
  double s = 0.0;
  for (const auto& v : f.coeffs()) s += std::norm(v);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Random fields
// ---------------------------------------------------------------------------

struct RandomBand {
  int kband = -1;         // max |kx|, |ky|; -1 = all retained
  int mband = -1;         // max m; -1 = all
  double decay = 0.0;     // amplitude ~ (1 + |k|^2 + m^2)^(-decay/2)
  bool masked = true;     // restrict to the dealiasing mask
};

/// Real random field with Hermitian-symmetric coefficients, deterministic in `seed`.
inline SpectralField random_field(const Grid& g, int components, std::uint64_t seed, RandomBand band = {}) {
  SpectralField f(g, components);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int c = 0; c < components; ++c)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int m = 0; m < g.nz; ++m) {
          const double re = nd(rng), im = nd(rng);
          const int kx = g.kx(i), ky = g.ky(j);
          bool keep = !g.nyquist(i, j);
          if (band.masked) keep = keep && g.retained(i, j);
          if (band.kband >= 0) keep = keep && std::abs(kx) <= band.kband && std::abs(ky) <= band.kband;
          if (band.mband >= 0) keep = keep && m <= band.mband;
          if (!keep) continue;
          const double amp = std::pow(1.0 + kx * kx + ky * ky + m * m, -0.5 * band.decay);
          f(c, i, j, m) = amp * cplx(re, im);
        }
  enforce_hermitian(f);
  return f;
}

}  // namespace hydropde
