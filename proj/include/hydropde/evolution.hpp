#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "nonlinear.hpp"
#include "projection.hpp"
#include "stokes.hpp"

namespace hydropde {

/// Real vector mode (ax, ay) * cos(2 pi (kx x + ky y)) phi_m(z), or the
/// sine variant. Throws DomainError if the mode is not retained by the grid.
inline SpectralField mode_field(const Grid& g, int kx, int ky, int m, double ax, double ay, bool sine = false) {
  const int i = g.ix(kx), j = g.iy(ky);
  if (std::abs(kx) >= g.nx / 2 || std::abs(ky) >= g.ny / 2 || !g.retained(i, j) || m < 0 || m >= g.nz)
    throw DomainError("mode (" + std::to_string(kx) + "," + std::to_string(ky) + "," + std::to_string(m) +
                      ") outside the retained grid range");
  SpectralField f(g, 2);
  const double amp[2] = {ax, ay};
  for (int c = 0; c < 2; ++c) {
    if (kx == 0 && ky == 0) {
      f(c, 0, 0, m) = sine ? 0.0 : amp[c];
      continue;
    }
    const cplx half = sine ? cplx(0.0, -0.5 * amp[c]) : cplx(0.5 * amp[c], 0.0);
    f(c, i, j, m) += half;
    f(c, g.ix(-kx), g.iy(-ky), m) += std::conj(half);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Manufactured solution
// ---------------------------------------------------------------------------

/// v*(t) = s1(t) U1 + s2(t) U2 with band-limited constrained profiles
/// (|k| <= 1, m <= 1), and the forcing that makes v* an exact solution of
/// the discrete system: f = v*' + A v* + P_N (v*.grad_H v* + w d_z v*).
class ManufacturedSolution {
 public:
  explicit ManufacturedSolution(const Grid& g, double amplitude = 1.0)
      : grid_(g), amp_(amplitude), stokes_(std::make_shared<StokesOperator>(g)), ws_(g) {
    // shear in y, divergent zero-average x-profile, and a second shear pair
    u1_ = mode_field(g, 1, 0, 0, 0.0, 1.0);
    u1_.axpy(0.5, mode_field(g, 1, 0, 0, 1.0, 0.0, true));
    u1_.axpy(1.5, mode_field(g, 1, 0, 1, 1.0, 0.0, true));
    u2_ = mode_field(g, 0, 1, 1, 1.0, 0.0);
    u2_.axpy(0.4 / std::sqrt(2.0), mode_field(g, 1, 1, 0, 1.0, -1.0));
    u2_.axpy(0.3, mode_field(g, 0, 0, 0, 1.0, 0.5));
    u1_ = galerkin_project(u1_);
    u2_ = galerkin_project(u2_);
  }

  const Grid& grid() const { return grid_; }
  double s1(double t) const { return amp_ * (1.0 + 0.5 * std::sin(2.0 * t)); }
  double s2(double t) const { return amp_ * 0.8 * std::cos(3.0 * t); }
  double ds1(double t) const { return amp_ * std::cos(2.0 * t); }
  double ds2(double t) const { return -amp_ * 2.4 * std::sin(3.0 * t); }

  SpectralField exact(double t) const { return s1(t) * u1_ + s2(t) * u2_; }
  SpectralField exact_dt(double t) const { return ds1(t) * u1_ + ds2(t) * u2_; }

  SpectralField forcing(double t) const {
    const SpectralField v = exact(t);
    SpectralField f = exact_dt(t) + stokes_->apply(v);
    std::lock_guard lock(mu_);
    f += galerkin_project(ws_.advect(v, v));
    return f;
  }

 private:
  Grid grid_;
  double amp_;
  SpectralField u1_, u2_;
  std::shared_ptr<StokesOperator> stokes_;
  mutable NonlinearWorkspace ws_;
  mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Forcing
// ---------------------------------------------------------------------------

enum class ForcingKind { none, mode, mms };

inline ForcingKind parse_forcing_kind(const std::string& s) {
  if (s == "none") return ForcingKind::none;
  if (s == "mode") return ForcingKind::mode;
  if (s == "mms") return ForcingKind::mms;
  throw ConfigError("unknown forcing '" + s + "' (expected none, mode or mms)");
}

/// f(t) = amplitude e^{-rate t} * mode, or the manufactured forcing.
struct ForcingSpec {
  ForcingKind kind = ForcingKind::none;
  double amplitude = 0.0;
  int kx = 1, ky = 0, m = 0;
  int component = 1;  // 0: x, 1: y
  double rate = 0.0;
  std::shared_ptr<const ManufacturedSolution> mms;

  bool active() const { return kind != ForcingKind::none; }
};

/// P_N f(t), truncated to the dealiasing mask.
inline SpectralField forcing_eval(const Grid& g, const ForcingSpec& spec, double t) {
  switch (spec.kind) {
    case ForcingKind::none:
      return SpectralField(g, 2);
    case ForcingKind::mode: {
      const double a = spec.amplitude * std::exp(-spec.rate * t);
      SpectralField f = mode_field(g, spec.kx, spec.ky, spec.m, spec.component == 0 ? a : 0.0,
                                   spec.component == 1 ? a : 0.0);
      return galerkin_project(f);
    }
    case ForcingKind::mms: {
      if (!spec.mms) throw ConfigError("forcing: manufactured solution missing");
      require_same(g, spec.mms->grid(), "forcing_eval");
      SpectralField f = spec.mms->forcing(t);
      apply_mask(f);
      return galerkin_project(f);
    }
  }
  throw ConfigError("forcing: unknown kind");
}

// ---------------------------------------------------------------------------
// Picard iteration for the mild formulation
// ---------------------------------------------------------------------------

struct PicardConfig {
  double T = 0.5;
  int subintervals = 20;   // composite Gauss-Legendre panels on [0, T]
  int nodes = 6;           // nodes per panel
  int max_iter = 20;
  double tol = 1e-10;      // relative sup-in-time L2 change
  double ceiling = 1e6;    // k_m above this counts as divergence
  bool nonlinear = true;

  void validate() const {
    if (!(T > 0.0)) throw ConfigError("picard: T must be positive");
    if (nodes < 4) throw ConfigError("picard: at least 4 quadrature nodes required");
    if (subintervals < 1) throw ConfigError("picard: subintervals must be >= 1");
    if (max_iter < 1) throw ConfigError("picard: max_iter must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("picard: tol must be positive");
  }
};

struct PicardReport {
  std::vector<double> k;           // k_m = sup_t t^{1/4} ||v_m(t)||_{H^{3/2}}
  std::vector<double> d;           // same weighted norm of v_{m+1} - v_0
  std::vector<double> increments;  // sup_t ||v_{m+1} - v_m|| / sup_t ||v_{m+1}||
  std::vector<double> c1_samples;  // d_m / k_m^2
  double c1 = 0.0;                 // max of c1_samples
  double bound = 0.0;              // smaller root of c1 K^2 - K + k_0 = 0 (inf if none)
  bool smallness = false;          // 4 c1 k_0 < 1
  bool converged = false;
  int iterations = 0;
  std::string status;
};

struct PicardResult {
  std::vector<double> times;  // panel endpoints 0 = t_0 < ... < t_S = T
  std::vector<SpectralField> states;
  std::vector<double> node_times;
  std::vector<SpectralField> node_states;
  PicardReport report;
};

namespace detail {
inline double lagrange(const std::vector<double>& x, int r, double s) {
  double p = 1.0;
  for (std::size_t q = 0; q < x.size(); ++q)
    if (static_cast<int>(q) != r) p *= (s - x[q]) / (x[r] - x[q]);
  return p;
}
}  // namespace detail

/// v_{m+1}(t) = e^{-tA} a + int_0^t e^{-(t-s)A} (P f(s) + F v_m(s)) ds,
/// started from the linear solution v_0 (F omitted).
inline PicardResult picard_solve(const StokesOperator& A, NonlinearWorkspace& ws, SpectralField a,
                                 const ForcingSpec& forcing, const PicardConfig& cfg) {
  cfg.validate();
  const Grid& g = A.grid();
  require_same(g, a.grid(), "picard_solve");
  apply_mask(a);
  a = galerkin_project(a);

  const int S = cfg.subintervals, n = cfg.nodes;
  const double panel = cfg.T / S;
  auto [gx, gw] = gauss_legendre(n);
  std::vector<double> x(n), w(n);  // on [0, 1]
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (gx[i] + 1.0);
    w[i] = 0.5 * gw[i];
  }

  PicardResult res;
  for (int j = 0; j <= S; ++j) res.times.push_back(j * panel);
  for (int j = 0; j < S; ++j)
    for (int i = 0; i < n; ++i) res.node_times.push_back(j * panel + panel * x[i]);
  const int total = S * n;

  std::vector<SpectralField> lin_nodes, lin_ends, f_nodes;
  for (double s : res.node_times) lin_nodes.push_back(A.semigroup_apply(s, a));
  for (double t : res.times) lin_ends.push_back(A.semigroup_apply(t, a));
  for (double s : res.node_times) f_nodes.push_back(forcing_eval(g, forcing, s));

  // Duhamel integral of nodal integrand values G: returns node and endpoint values.
  auto duhamel = [&](const std::vector<SpectralField>& G, std::vector<SpectralField>& at_nodes,
                     std::vector<SpectralField>& at_ends) {
    at_nodes.assign(total, SpectralField(g, 2));
    at_ends.assign(S + 1, SpectralField(g, 2));
    SpectralField I(g, 2);
    for (int j = 0; j < S; ++j) {
      const double tj = j * panel;
      std::vector<double> xs(n);
      for (int i = 0; i < n; ++i) xs[i] = tj + panel * x[i];
      for (int i = 0; i < n; ++i) {
        const double si = xs[i];
        SpectralField u = A.semigroup_apply(si - tj, I);
        const double len = si - tj;
        for (int l = 0; l < n; ++l) {
          const double sig = tj + len * x[l];
          SpectralField p(g, 2);
          for (int r = 0; r < n; ++r) p.axpy(detail::lagrange(xs, r, sig), G[j * n + r]);
          u.axpy(len * w[l], A.semigroup_apply(si - sig, p));
        }
        at_nodes[j * n + i] = std::move(u);
      }
      SpectralField next = A.semigroup_apply(panel, I);
      for (int i = 0; i < n; ++i) next.axpy(panel * w[i], A.semigroup_apply(tj + panel - xs[i], G[j * n + i]));
      I = std::move(next);
      at_ends[j + 1] = I;
    }
  };

  auto weighted_sup = [&](const std::vector<SpectralField>& nodes, const std::vector<SpectralField>& ends) {
    double k = 0.0;
    for (int q = 0; q < total; ++q) k = std::max(k, std::pow(res.node_times[q], 0.25) * sobolev_norm(nodes[q], 1.5));
    for (int j = 0; j <= S; ++j) k = std::max(k, std::pow(res.times[j], 0.25) * sobolev_norm(ends[j], 1.5));
    return k;
  };

  auto assemble = [&](const std::vector<SpectralField>& G, std::vector<SpectralField>& nodes,
                      std::vector<SpectralField>& ends) {
    duhamel(G, nodes, ends);
    for (int q = 0; q < total; ++q) nodes[q] += lin_nodes[q];
    for (int j = 0; j <= S; ++j) ends[j] += lin_ends[j];
  };

  std::vector<SpectralField> v0_nodes, v0_ends;
  assemble(f_nodes, v0_nodes, v0_ends);
  std::vector<SpectralField> cur_nodes = v0_nodes, cur_ends = v0_ends;
  PicardReport& rep = res.report;
  rep.k.push_back(weighted_sup(cur_nodes, cur_ends));

  for (int it = 1; it <= cfg.max_iter; ++it) {
    std::vector<SpectralField> G = f_nodes;
    if (cfg.nonlinear)
      for (int q = 0; q < total; ++q) G[q] += ws.F_galerkin(cur_nodes[q]);
    std::vector<SpectralField> nxt_nodes, nxt_ends;
    assemble(G, nxt_nodes, nxt_ends);
    rep.iterations = it;

    bool finite = true;
    for (const auto& f : nxt_nodes) finite = finite && f.all_finite();
    double diff = 0.0, size = 0.0;
    for (int q = 0; q < total; ++q) {
      diff = std::max(diff, l2_norm(nxt_nodes[q] - cur_nodes[q]));
      size = std::max(size, l2_norm(nxt_nodes[q]));
    }
    std::vector<SpectralField> dn(total), de(S + 1);
    for (int q = 0; q < total; ++q) dn[q] = nxt_nodes[q] - v0_nodes[q];
    for (int j = 0; j <= S; ++j) de[j] = nxt_ends[j] - v0_ends[j];
    const double km = rep.k.back();
    const double dm = weighted_sup(dn, de);
    rep.d.push_back(dm);
    if (km > 0.0) rep.c1_samples.push_back(dm / (km * km));
    const double inc = size > 0.0 ? diff / size : diff;
    rep.increments.push_back(inc);
    cur_nodes = std::move(nxt_nodes);
    cur_ends = std::move(nxt_ends);
    rep.k.push_back(finite ? weighted_sup(cur_nodes, cur_ends) : std::numeric_limits<double>::infinity());

    if (!finite || !(rep.k.back() <= cfg.ceiling)) {
      rep.status = "diverged: k_m exceeded the ceiling";
      break;
    }
    if (inc < cfg.tol) {
      rep.converged = true;
      rep.status = "converged";
      break;
    }
  }
  if (!rep.converged && rep.status.empty()) rep.status = "iteration limit reached";

  rep.c1 = 0.0;
  for (double c : rep.c1_samples) rep.c1 = std::max(rep.c1, c);
  const double k0 = rep.k.front();
  rep.smallness = 4.0 * rep.c1 * k0 < 1.0;
  if (rep.c1 == 0.0)
    rep.bound = k0;
  else if (rep.smallness)
    rep.bound = (1.0 - std::sqrt(1.0 - 4.0 * rep.c1 * k0)) / (2.0 * rep.c1);
  else
    rep.bound = std::numeric_limits<double>::infinity();

  res.node_states = std::move(cur_nodes);
  res.states = std::move(cur_ends);
  return res;
}

inline PicardResult picard_solve(const SpectralField& a, const ForcingSpec& forcing, const PicardConfig& cfg) {
  StokesOperator A(a.grid());
  NonlinearWorkspace ws(a.grid());
  return picard_solve(A, ws, a, forcing, cfg);
}

// ---------------------------------------------------------------------------
// IMEX time stepping
// ---------------------------------------------------------------------------

struct ImexConfig {
  double dt = 1e-3;
  int order = 2;            // 1: backward/forward Euler, 2: Crank-Nicolson/Adams-Bashforth
  double T = 1.0;
  bool nonlinear = true;
  int sample_every = 10;    // steps between ledger rows (0: first and last only)
  double cfl_max = 10.0;    // dt * max|v| * max(nx, ny); <= 0 disables the check
  bool record = true;       // compute ledger rows

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("imex: dt must be positive");
    if (order != 1 && order != 2) throw ConfigError("imex: order must be 1 or 2");
    if (!(T >= 0.0)) throw ConfigError("imex: T must be >= 0");
    if (sample_every < 0) throw ConfigError("imex: sample_every must be >= 0");
  }
};

struct ImexState {
  SpectralField v;
  SpectralField n_prev;  // explicit term of the previous step
  bool have_prev = false;
  double t = 0.0;
  long step = 0;
  double dissipation = 0.0;   // cumulative int <A v, v> as dissipated by the scheme
  double forcing_work = 0.0;  // cumulative int <P f, v>
};

/// Upper bound of max |v| over Omega: sum of coefficient moduli per component.
inline double velocity_bound(const SpectralField& v) {
  const std::size_t n = v.grid().plane() * v.grid().nz;
  double mx = 0.0;
  for (int c = 0; c < v.components(); ++c) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::abs(v.coeffs()[c * n + k]);
    mx = std::max(mx, s);
  }
  return mx;
}

/// One step of the IMEX scheme. A is treated implicitly through its exact
/// eigendecomposition, F explicitly; forcing enters at the step midpoint
/// (order 2) or the new time level (order 1). The first order-2 step uses
/// forward Euler for F. Throws StabilityError on a non-finite state or a
/// violated CFL bound.
class ImexStepper {
 public:
  ImexStepper(std::shared_ptr<const StokesOperator> A, std::shared_ptr<NonlinearWorkspace> ws, ForcingSpec forcing,
              ImexConfig cfg)
      : A_(std::move(A)), ws_(std::move(ws)), forcing_(std::move(forcing)), cfg_(cfg) {
    cfg_.validate();
  }

  const ImexConfig& config() const { return cfg_; }
  const StokesOperator& stokes() const { return *A_; }
  NonlinearWorkspace& workspace() const { return *ws_; }
  const ForcingSpec& forcing() const { return forcing_; }

  void step(ImexState& s, double dt) const {
    const Grid& g = A_->grid();
    if (cfg_.cfl_max > 0.0) {
      const double c = dt * velocity_bound(s.v) * std::max(g.nx, g.ny);
      if (c > cfg_.cfl_max)
        throw StabilityError("CFL bound violated at t = " + std::to_string(s.t) + " (" + std::to_string(c) + " > " +
                             std::to_string(cfg_.cfl_max) + ")");
    }
    SpectralField n = cfg_.nonlinear ? ws_->F_galerkin(s.v) : SpectralField(g, 2);
    SpectralField next;
    SpectralField fwork(g, 2);
    if (cfg_.order == 2) {
      SpectralField e = n;
      if (s.have_prev) {
        e *= 1.5;
        e.axpy(-0.5, s.n_prev);
      }
      if (forcing_.active()) {
        fwork = forcing_eval(g, forcing_, s.t);
        fwork += forcing_eval(g, forcing_, s.t + dt);
        fwork *= 0.5;
        e += fwork;
      }
      next = A_->apply_function(s.v, [dt](double mu) { return cplx((1.0 - 0.5 * dt * mu) / (1.0 + 0.5 * dt * mu)); });
      next.axpy(dt, A_->apply_function(e, [dt](double mu) { return cplx(1.0 / (1.0 + 0.5 * dt * mu)); }));
    } else {
      SpectralField r = s.v;
      r.axpy(dt, n);
      if (forcing_.active()) {
        fwork = forcing_eval(g, forcing_, s.t + dt);
        r.axpy(dt, fwork);
      }
      next = A_->apply_function(r, [dt](double mu) { return cplx(1.0 / (1.0 + dt * mu)); });
    }
    apply_mask(next);
    next = galerkin_project(next);
    if (!next.all_finite()) throw StabilityError("non-finite state at t = " + std::to_string(s.t + dt));

    if (cfg_.order == 2) {
      SpectralField mid = s.v + next;
      mid *= 0.5;
      s.dissipation += dt * dissipation_rate(mid);
      s.forcing_work += dt * inner(fwork, mid);
    } else {
      s.dissipation += dt * dissipation_rate(next);
      s.forcing_work += dt * inner(fwork, next);
    }
    s.n_prev = std::move(n);
    s.have_prev = true;
    s.v = std::move(next);
    s.t += dt;
    ++s.step;
  }

 private:
  std::shared_ptr<const StokesOperator> A_;
  std::shared_ptr<NonlinearWorkspace> ws_;
  ForcingSpec forcing_;
  ImexConfig cfg_;
};

/// Single step with freshly built operators (convenience form).
inline ImexState imex_step(ImexState s, const ForcingSpec& forcing, const ImexConfig& cfg) {
  const Grid& g = s.v.grid();
  ImexStepper st(std::make_shared<StokesOperator>(g), std::make_shared<NonlinearWorkspace>(g), forcing, cfg);
  st.step(s, cfg.dt);
  return s;
}

struct ImexResult {
  TrajectoryLedger ledger;
  SpectralField final_state;
  double final_time = 0.0;
  bool aborted = false;
  std::string message;
};

/// Hook called for every ledger sample (state, time).
using SampleHook = std::function<void(const SpectralField&, double)>;

namespace detail {
/// Ledger row for a state with a given time derivative.
inline LedgerRow ledger_row(NonlinearWorkspace& ws, const ForcingSpec& forcing, const SpectralField& v, double t,
                            const SpectralField& dvdt, double dissipation, double forcing_work) {
  const Transform& tr = ws.transform();
  std::optional<PhysicalField> fphys;
  if (forcing.active()) fphys = tr.to_physical(forcing_eval(v.grid(), forcing, t));
  const PhysicalField* fp = fphys ? &*fphys : nullptr;
  const SurfacePressure p = diagnostic_pressure(ws, v, fp);
  LedgerRow row;
  row.rec = record(tr, v, t, p);
  row.rec.dtv2 = inner(dvdt, dvdt);
  row.dissipation = dissipation;
  row.forcing_work = forcing_work;
  row.grad_vz2 = grad_vz_energy(v);
  row.tilde_grad2 = tilde_grad_energy(tr, v);
  row.constraint = constraint_defect(v);
  const SplitResiduals sr = split_residuals(tr, v, dvdt, p, fp);
  row.baro_res = sr.barotropic;
  row.bclin_res = sr.baroclinic;
  row.galerkin_res = sr.galerkin;
  row.recomb_res = sr.recombination;
  return row;
}

struct Sample {
  SpectralField v;
  double t, dissipation, forcing_work;
};
}  // namespace detail

inline ImexResult imex_run(const ImexStepper& stepper, SpectralField a, const SampleHook& hook = {}) {
  const ImexConfig& cfg = stepper.config();
  const Grid& g = stepper.stokes().grid();
  require_same(g, a.grid(), "imex_run");
  apply_mask(a);
  a = galerkin_project(a);

  const long nsteps = cfg.T > 0.0 ? static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)) : 0;
  const double dt = nsteps > 0 ? cfg.T / nsteps : cfg.dt;

  ImexResult res;
  ImexState s;
  s.v = a;
  // A sampled row waits for the following step so that d_t v is the centred
  // difference over the neighbouring steps; one-sided at the ends.
  std::optional<detail::Sample> pending;
  std::optional<SpectralField> pending_prev;
  SpectralField prev_v;
  auto emit = [&](const detail::Sample& smp, const SpectralField& d) {
    res.ledger.rows.push_back(detail::ledger_row(stepper.workspace(), stepper.forcing(), smp.v, smp.t, d,
                                                 smp.dissipation, smp.forcing_work));
  };
  auto take = [&](const ImexState& st, bool last) {
    if (hook) hook(st.v, st.t);
    if (!cfg.record) {
      res.ledger.rows.push_back({});
      res.ledger.rows.back().rec.t = st.t;
      return;
    }
    detail::Sample smp{st.v, st.t, st.dissipation, st.forcing_work};
    if (last && st.step > 0)
      emit(smp, (1.0 / dt) * (st.v - prev_v));
    else if (last)
      emit(smp, SpectralField(g, 2));
    else {
      pending = std::move(smp);
      pending_prev.reset();
      if (st.step > 0) pending_prev = prev_v;
    }
  };
  auto resolve = [&](const SpectralField& next) {
    if (!pending) return;
    if (pending_prev)
      emit(*pending, (0.5 / dt) * (next - *pending_prev));
    else
      emit(*pending, (1.0 / dt) * (next - pending->v));
    pending.reset();
  };

  take(s, nsteps == 0);
  try {
    for (long k = 1; k <= nsteps; ++k) {
      prev_v = s.v;
      stepper.step(s, dt);
      s.t = k == nsteps ? cfg.T : k * dt;
      resolve(s.v);
      if (k == nsteps || (cfg.sample_every > 0 && k % cfg.sample_every == 0)) take(s, k == nsteps);
    }
  } catch (const StabilityError& e) {
    res.aborted = true;
    res.message = e.what();
    res.ledger.status = std::string("aborted: ") + e.what();
    if (pending) {
      if (pending_prev)
        emit(*pending, (1.0 / dt) * (pending->v - *pending_prev));
      else
        emit(*pending, SpectralField(g, 2));
    }
  }
  if (!res.aborted) res.ledger.status = "completed";
  res.final_state = s.v;
  res.final_time = s.t;
  return res;
}

inline ImexResult imex_run(const SpectralField& a, const ForcingSpec& forcing, const ImexConfig& cfg,
                           const SampleHook& hook = {}) {
  const Grid& g = a.grid();
  ImexStepper st(std::make_shared<StokesOperator>(g), std::make_shared<NonlinearWorkspace>(g), forcing, cfg);
  return imex_run(st, a, hook);
}

}  // namespace hydropde
