#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vgcg/model.hpp"

// Local Lax-Friedrichs finite-volume solver for the transformed
// conservative systems:
//   U_j^{n+1} = (U_{j-1} + U_{j+1})/2 - (dt/2dx)(F_{j+1} - F_{j-1}),
// dt = cfl dx / lambda_max with the global wave-speed bound, Neumann
// boundaries, fluxes frozen at the step's start time, and periodic
// renormalization of near-plateau cells.
namespace vgcg {

struct SolverConfig {
  int nx = 1000;
  double x_min = -500.0;
  double x_max = 500.0;
  double cfl = 0.5;
  int iterations = 20;
  int steps_per_iteration = 1000;
  int renorm_interval = 100;
  double renorm_tol = 1e-7;
  double stop_time = std::numeric_limits<double>::infinity();

  void validate() const {
    if (nx < 8) throw std::invalid_argument("solver: nx must be >= 8");
    if (!(x_min < x_max)) throw std::invalid_argument("solver: empty domain");
    if (!(cfl > 0.0 && cfl <= 0.5))
      throw std::invalid_argument("solver: cfl must lie in (0, 0.5]");
    if (iterations < 1 || steps_per_iteration < 1 || renorm_interval < 1)
      throw std::invalid_argument("solver: counts must be positive");
  }
};

struct FieldState {
  double t = 0.0;
  double dx = 1.0;
  double x_min = 0.0;
  std::vector<ConservedPair> H;

  double cell_center(size_t j) const { return x_min + (j + 0.5) * dx; }
};

struct Snapshot {
  double t;
  std::vector<double> v;
  std::vector<double> w;
};

struct RunResult {
  std::vector<Snapshot> snapshots;    // initial state plus one per iteration
  std::vector<double> dt_history;
  std::vector<double> lambda_history;
  std::vector<double> delta_metric;   // max v per snapshot
  bool stopped_early = false;
};

class SolverAbort : public std::runtime_error {
 public:
  explicit SolverAbort(const std::string& what) : std::runtime_error(what) {}
};

// Piecewise-constant Riemann data with the jump at the interface nearest 0.
inline FieldState init(const RiemannProblem& prob, const SolverConfig& cfg,
                       const PhysParams& p) {
  cfg.validate();
  if (!(cfg.x_min < 0.0 && cfg.x_max > 0.0))
    throw std::invalid_argument("init: domain must contain x = 0");
  if (prob.left.v <= 0.0 || prob.right.v <= 0.0)
    throw std::domain_error("init: states must have v > 0");
  FieldState fs;
  fs.t = 0.0;
  fs.dx = (cfg.x_max - cfg.x_min) / cfg.nx;
  fs.x_min = cfg.x_min;
  fs.H.resize(cfg.nx);
  const ConservedPair hl = conserved_and_flux(prob.left, 0.0, p).H;
  const ConservedPair hr = conserved_and_flux(prob.right, 0.0, p).H;
  const long split = std::lround((0.0 - cfg.x_min) / fs.dx);
  for (int j = 0; j < cfg.nx; ++j) fs.H[j] = (j < split) ? hl : hr;
  return fs;
}

namespace detail {

// Per-cell decode + wave speed + flux in one pass (one pow per cell).
inline double cell_speeds_and_flux(const FieldState& fs, const PhysParams& p,
                                   std::vector<FluxPair>& flux) {
  const size_t n = fs.H.size();
  flux.resize(n);
  double lam_max = 0.0;
  const bool eq = p.eta_eq_k();
  const double t = fs.t;
  const double ek = std::exp(p.k * t * (p.gamma + 1.0));
  const double em = eq ? 1.0 : std::exp((p.eta - p.k) * t);
  const double bt = p.beta * t;
  for (size_t j = 0; j < n; ++j) {
    const double v = fs.H[j].h1;
    if (!(v > 0.0)) {
      char msg[96];
      std::snprintf(msg, sizeof(msg),
                    "positivity lost at cell %zu (t = %.9g)", j, t);
      throw SolverAbort(msg);
    }
    const double y = fs.H[j].h2;
    const double vg = std::pow(v, p.gamma);
    const double press = p.A * vg * v * ek;  // A v^{g+1} e^{kt(g+1)}
    const double avg = p.A * vg * ek;        // A v^g  e^{kt(g+1)}
    double lam1, lam2, g1, g2;
    if (eq) {
      const double w = y / v;
      lam1 = w + bt - (p.gamma + 1.0) * avg;
      lam2 = w + bt - avg;
      g1 = y + v * bt - press;
      g2 = y * y / v + y * bt - press * y / v;
    } else {
      const double wc = y / v;  // w + c
      lam1 = -p.c + (wc - (p.gamma + 1.0) * avg) * em;
      lam2 = -p.c + (wc - avg) * em;
      g1 = y * em - v * p.c - press * em;
      g2 = y * y / v * em - y / v * em * press - p.c * y;
    }
    if (!std::isfinite(g1) || !std::isfinite(g2))
      throw SolverAbort("non-finite flux");
    flux[j] = {g1, g2};
    lam_max = std::max(lam_max, std::max(std::abs(lam1), std::abs(lam2)));
  }
  if (!(lam_max > 0.0)) throw SolverAbort("vanishing wave-speed bound");
  return lam_max;
}

}  // namespace detail

struct StepInfo {
  double dt;
  double lambda;
};

inline StepInfo step(FieldState& fs, const SolverConfig& cfg,
                     const PhysParams& p) {
  static thread_local std::vector<FluxPair> flux;
  static thread_local std::vector<ConservedPair> next;
  const double lam = detail::cell_speeds_and_flux(fs, p, flux);
  double dt = cfg.cfl * fs.dx / lam;
  if (fs.t + dt > cfg.stop_time) dt = cfg.stop_time - fs.t;
  const size_t n = fs.H.size();
  next.resize(n);
  const double r = dt / (2.0 * fs.dx);
  for (size_t j = 0; j < n; ++j) {
    const ConservedPair& um = fs.H[j == 0 ? 0 : j - 1];
    const ConservedPair& up = fs.H[j + 1 == n ? n - 1 : j + 1];
    const FluxPair& fm = flux[j == 0 ? 0 : j - 1];
    const FluxPair& fp = flux[j + 1 == n ? n - 1 : j + 1];
    next[j].h1 = 0.5 * (um.h1 + up.h1) - r * (fp.g1 - fm.g1);
    next[j].h2 = 0.5 * (um.h2 + up.h2) - r * (fp.g2 - fm.g2);
    if (!(next[j].h1 > 0.0)) {
      char msg[96];
      std::snprintf(msg, sizeof(msg),
                    "positivity lost at cell %zu after update (t = %.9g)", j,
                    fs.t);
      throw SolverAbort(msg);
    }
  }
  fs.H.swap(next);
  fs.t += dt;
  return {dt, lam};
}

// Clamps cells whose (v,w) both sit within tol of the exact left or right
// plateau back onto that plateau.  Plateau states are time-invariant in
// (v,w), so the clamp targets are the initial data.
inline void renormalize(FieldState& fs, const RiemannProblem& prob, double tol,
                        const PhysParams& p) {
  const ConservedPair hl = conserved_and_flux(prob.left, 0.0, p).H;
  const ConservedPair hr = conserved_and_flux(prob.right, 0.0, p).H;
  for (auto& h : fs.H) {
    const TransState s = state_of_conserved(h, p);
    if (std::abs(s.v - prob.left.v) <= tol &&
        std::abs(s.w - prob.left.w) <= tol) {
      h = hl;
    } else if (std::abs(s.v - prob.right.v) <= tol &&
               std::abs(s.w - prob.right.w) <= tol) {
      h = hr;
    }
  }
}

namespace detail {

inline Snapshot snapshot_of(const FieldState& fs, const PhysParams& p) {
  Snapshot s;
  s.t = fs.t;
  s.v.resize(fs.H.size());
  s.w.resize(fs.H.size());
  for (size_t j = 0; j < fs.H.size(); ++j) {
    const TransState st = state_of_conserved(fs.H[j], p);
    s.v[j] = st.v;
    s.w[j] = st.w;
  }
  return s;
}

inline double max_of(const std::vector<double>& xs) {
  double m = xs.front();
  for (double x : xs) m = std::max(m, x);
  return m;
}

}  // namespace detail

inline RunResult run(const RiemannProblem& prob, const SolverConfig& cfg,
                     const PhysParams& p) {
  FieldState fs = init(prob, cfg, p);
  RunResult out;
  out.snapshots.push_back(detail::snapshot_of(fs, p));
  out.delta_metric.push_back(detail::max_of(out.snapshots.back().v));
  long steps_done = 0;
  for (int it = 0; it < cfg.iterations && !out.stopped_early; ++it) {
    for (int s = 0; s < cfg.steps_per_iteration; ++s) {
      const StepInfo info = step(fs, cfg, p);
      out.dt_history.push_back(info.dt);
      out.lambda_history.push_back(info.lambda);
      ++steps_done;
      if (steps_done % cfg.renorm_interval == 0)
        renormalize(fs, prob, cfg.renorm_tol, p);
      if (fs.t >= cfg.stop_time) {
        out.stopped_early = true;
        break;
      }
    }
    out.snapshots.push_back(detail::snapshot_of(fs, p));
    out.delta_metric.push_back(detail::max_of(out.snapshots.back().v));
  }
  return out;
}

struct DeltaDetection {
  bool is_delta;
  double growth_rate;  // least-squares slope of max v per snapshot
};

// A run concentrates into a delta when max v tops five times both plateau
// values and keeps growing through the last half of the snapshots.
inline DeltaDetection detect_delta(const RunResult& result) {
  const size_t n = result.delta_metric.size();
  if (n < 3) throw std::invalid_argument("detect_delta: too few snapshots");
  const double v_left = result.snapshots.front().v.front();
  const double v_right = result.snapshots.front().v.back();
  const double plateau = std::max(v_left, v_right);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += i;
    sy += result.delta_metric[i];
    sxx += double(i) * i;
    sxy += i * result.delta_metric[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  bool monotone = true;
  for (size_t i = n / 2; i + 1 < n; ++i) {
    if (result.delta_metric[i + 1] <= result.delta_metric[i]) {
      monotone = false;
      break;
    }
  }
  const bool big = result.delta_metric.back() > 5.0 * plateau;
  return {big && monotone, slope};
}

// Rows: x, v, w, rho, u at the snapshot time.
inline void export_snapshot(std::ostream& os, const Snapshot& snap,
                            double x_min, double dx, const PhysParams& p) {
  char buf[160];
  for (size_t j = 0; j < snap.v.size(); ++j) {
    const PrimState prim =
        to_primitive(TransState{snap.v[j], snap.w[j]}, snap.t, p);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  x_min + (j + 0.5) * dx, snap.v[j], snap.w[j], prim.rho,
                  prim.u);
    os << buf;
  }
}

}  // namespace vgcg
