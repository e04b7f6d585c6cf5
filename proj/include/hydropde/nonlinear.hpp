#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "fields.hpp"
#include "projection.hpp"

namespace hydropde {

/// Pseudospectral evaluation of the transport term
/// v_adv . nabla_H v + w(v_adv) d_z v with 2/3 horizontal dealiasing.
///
/// Inputs and output are truncated to the dealiasing mask; the vertical
/// Galerkin projection uses the over-resolved quadrature of the grid,
/// which integrates triple products of basis functions to round-off.
/// One workspace per thread.
class NonlinearWorkspace {
 public:
  explicit NonlinearWorkspace(std::shared_ptr<const Transform> tr) : tr_(std::move(tr)) {}
  explicit NonlinearWorkspace(const Grid& g) : tr_(std::make_shared<Transform>(g)) {}

  const Transform& transform() const { return *tr_; }
  const Grid& grid() const { return tr_->grid(); }

  /// Unprojected transport term v_adv . nabla_H v + w(v_adv) d_z v.
  SpectralField advect(const SpectralField& v, const SpectralField& v_adv) {
    if (v.components() != 2 || v_adv.components() != 2) throw ConfigError("advect: vector fields required");
    require_same(v.grid(), v_adv.grid(), "advect");
    SpectralField vm = v, am = v_adv;
    apply_mask(vm);
    apply_mask(am);
    const Transform& tr = *tr_;
    u_ = tr.to_physical(am);
    w_ = diagnostic_w(tr, am);
    dx_ = tr.to_physical(partial_h(vm, 0));
    dy_ = tr.to_physical(partial_h(vm, 1));
    dz_ = tr.to_physical(vm, Vertical::dz);
    PhysicalField n(grid(), tr.basis_ptr(), 2);
    const auto ux = u_.component(0), uy = u_.component(1), w = w_.component(0);
    for (int c = 0; c < 2; ++c) {
      auto out = n.component(c);
      const auto gx = dx_.component(c), gy = dy_.component(c), gz = dz_.component(c);
      for (std::size_t p = 0; p < out.size(); ++p) out[p] = ux[p] * gx[p] + uy[p] * gy[p] + w[p] * gz[p];
    }
    SpectralField res = tr.to_spectral(n);
    apply_mask(res);
    return res;
  }

  /// F v = -P(v . nabla_H v + w d_z v), with the continuous-symbol projection.
  HydroField F(const SpectralField& v) {
    HydroField out = project(HydroField(advect(v, v)));
    out.modal *= -1.0;
    out.column *= -1.0;
    return out;
  }

  /// Galerkin form of F on the constrained cosine-basis space.
  SpectralField F_galerkin(const SpectralField& v) { return -1.0 * galerkin_project(advect(v, v)); }

 private:
  std::shared_ptr<const Transform> tr_;
  PhysicalField u_, w_, dx_, dy_, dz_;
};

struct BilinearProbe {
  std::vector<double> ratios;       // ||F v|| / ||v||_{H^{3/2}}^2
  double m_hat = 0.0;
  std::vector<double> lipschitz;    // ||F v - F v'|| / ((|v| + |v'|) |v - v'|)
  double m_lip = 0.0;
};

/// Surrogate of ||F v||_{X} <= M ||v||^2_{V_gamma} at p = 2 (gamma = 3/4,
/// norm H^{3/2}); pairs of consecutive samples feed the Lipschitz variant.
inline BilinearProbe bilinear_estimate_probe(NonlinearWorkspace& ws, const std::vector<SpectralField>& samples) {
  BilinearProbe rep;
  std::vector<HydroField> fs;
  for (const auto& v : samples) {
    fs.push_back(ws.F(v));
    const double hv = sobolev_norm(v, 1.5);
    const double r = l2_norm(fs.back()) / (hv * hv);
    rep.ratios.push_back(r);
    rep.m_hat = std::max(rep.m_hat, r);
  }
  for (std::size_t n = 1; n < samples.size(); ++n) {
    HydroField d = fs[n];
    d.modal -= fs[n - 1].modal;
    d.column -= fs[n - 1].column;
    const double den = (sobolev_norm(samples[n], 1.5) + sobolev_norm(samples[n - 1], 1.5)) *
                       sobolev_norm(samples[n] - samples[n - 1], 1.5);
    const double r = l2_norm(d) / den;
    rep.lipschitz.push_back(r);
    rep.m_lip = std::max(rep.m_lip, r);
  }
  return rep;
}

}  // namespace hydropde
