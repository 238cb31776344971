#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vgcg/characteristics.hpp"
#include "vgcg/model.hpp"

// Delta-shock trajectory construction: the singular g(t) ODE and its
// quadrature seed, explicit weight formulas for equal densities, the
// independent closed-form oracle, original-variable reconstruction
// (omega_bar, u_delta, x), overcompressibility, and the residuals of the
// Rankine-Hugoniot-deficit relations.
namespace vgcg {

struct DeltaProblem {
  double rho_l, u_l;  // left Riemann data in original variables
  double rho_r, u_r;  // right Riemann data

  TransState left() const { return {rho_l, u_l}; }
  TransState right() const { return {rho_r, u_r}; }
};

namespace detail {

// (e^{a t} - 1)/a, continuous through a = 0.
inline double phi1(double a, double t) {
  if (a == 0.0) return t;
  return std::expm1(a * t) / a;
}

// Jump coefficients of the g ODE, original variables, [.] = left - right.
struct DeltaCoeffs {
  double a;   // [rho]
  double b;   // [rho u]
  double d;   // [rho u^2]
  double p;   // A [rho^{gamma+1}]
  double q;   // A [u rho^{gamma+1}]
  double m;   // eta - k (0 in the EtaEqK case: g has no exponential weight)
  double K;   // exponent of the pressure antiderivative
};

inline DeltaCoeffs delta_coeffs(const DeltaProblem& pr, const PhysParams& p) {
  if (pr.rho_l <= 0.0 || pr.rho_r <= 0.0)
    throw std::domain_error("delta problem: densities must be positive");
  DeltaCoeffs c;
  c.a = pr.rho_l - pr.rho_r;
  c.b = pr.rho_l * pr.u_l - pr.rho_r * pr.u_r;
  c.d = pr.rho_l * pr.u_l * pr.u_l - pr.rho_r * pr.u_r * pr.u_r;
  const double pl = std::pow(pr.rho_l, p.gamma + 1.0);
  const double prr = std::pow(pr.rho_r, p.gamma + 1.0);
  c.p = p.A * (pl - prr);
  c.q = p.A * (pr.u_l * pl - pr.u_r * prr);
  if (p.eta_eq_k()) {
    c.m = 0.0;
    c.K = p.k * (p.gamma + 1.0);
  } else {
    c.m = p.eta - p.k;
    c.K = p.eta + p.k * p.gamma;
  }
  return c;
}

}  // namespace detail

struct InitialSpeed {
  double value;              // selected w_delta(0)
  double continuation_root;  // root continuous with the pressureless speed
  bool bracket_used;         // a strict overcompressive bracket singled out a root
  bool conflict;             // bracket choice disagreed with continuation
};

// Small-t limit of the weight relations: [rho] w^2 - (2[rho u] - A[rho^{g+1}]) w
// + ([rho u^2] - A[u rho^{g+1}]) = 0.  Branch fixed by continuity with the
// pressureless weighted-average speed; a unique root inside the strict
// overcompressive bracket takes precedence and any disagreement is flagged.
inline InitialSpeed initial_speed(const DeltaProblem& pr, const PhysParams& p) {
  const detail::DeltaCoeffs c = detail::delta_coeffs(pr, p);
  InitialSpeed out{0.0, 0.0, false, false};
  if (c.a == 0.0) {
    out.value = 0.5 * (pr.u_l + pr.u_r) -
                0.5 * p.A * std::pow(pr.rho_l, p.gamma);
    out.continuation_root = out.value;
    return out;
  }
  const double qb = c.p - 2.0 * c.b;
  const double qc = c.d - c.q;
  const double disc = qb * qb - 4.0 * c.a * qc;
  if (disc < 0.0)
    throw std::domain_error("initial_speed: no real delta speed");
  const double sq = std::sqrt(disc);
  const double r_plus = (-qb + sq) / (2.0 * c.a);
  const double r_minus = (-qb - sq) / (2.0 * c.a);

  // Pressureless (A -> 0) limit and the matching quadratic branch.
  const double sl = std::sqrt(pr.rho_l), sr = std::sqrt(pr.rho_r);
  const double w_pressureless = (sl * pr.u_l + sr * pr.u_r) / (sl + sr);
  const double disc0 = c.b * c.b - c.a * c.d;
  const double sq0 = std::sqrt(std::max(disc0, 0.0));
  const double r0_plus = (c.b + sq0) / c.a;
  const double r0_minus = (c.b - sq0) / c.a;
  const bool plus_branch = std::abs(r0_plus - w_pressureless) <=
                           std::abs(r0_minus - w_pressureless);
  out.continuation_root = plus_branch ? r_plus : r_minus;
  out.value = out.continuation_root;

  // t = 0 overcompressive bracket (lambda2(R), lambda1(L)).
  const double lam2_r = pr.u_r - p.A * std::pow(pr.rho_r, p.gamma);
  const double lam1_l =
      pr.u_l - p.A * (p.gamma + 1.0) * std::pow(pr.rho_l, p.gamma);
  const bool plus_in = r_plus > lam2_r && r_plus < lam1_l;
  const bool minus_in = r_minus > lam2_r && r_minus < lam1_l;
  if (plus_in != minus_in) {
    out.bracket_used = true;
    const double preferred = plus_in ? r_plus : r_minus;
    out.conflict = preferred != out.continuation_root;
    out.value = preferred;
  }
  return out;
}

// Right-hand side of the quasi-linear g ODE,
//   g' = e^{mt} (b g - d E1 + q Phi) / (a g + p Phi - b E1),
// with E1 = (e^{mt}-1)/m and Phi = (e^{Kt}-1)/K.
inline double g_prime(double t, double g, const DeltaProblem& pr,
                      const PhysParams& p) {
  if (t <= 0.0) throw std::domain_error("g_prime: defined for t > 0 only");
  const detail::DeltaCoeffs c = detail::delta_coeffs(pr, p);
  const double e1 = detail::phi1(c.m, t);
  const double ph = detail::phi1(c.K, t);
  const double den = c.a * g + c.p * ph - c.b * e1;
  const double scale =
      std::abs(c.a * g) + std::abs(c.p * ph) + std::abs(c.b * e1);
  if (std::abs(den) <= 1e-12 * scale || den == 0.0) {
    char msg[96];
    std::snprintf(msg, sizeof(msg),
                  "g_prime: denominator breakdown at t = %.12g", t);
    throw std::runtime_error(msg);
  }
  const double num = std::exp(c.m * t) * (c.b * g - c.d * e1 + c.q * ph);
  return num / den;
}

namespace detail {

// integral_0^t e^{ms} (e^{xs}-1)/x ds, all degenerate exponents included.
inline double weighted_phi_integral(double m, double x, double t) {
  if (x != 0.0) return (phi1(m + x, t) - phi1(m, t)) / x;
  if (m != 0.0) return (t * std::exp(m * t) - phi1(m, t)) / m;
  return 0.5 * t * t;
}

}  // namespace detail

// Independent closed form for equal densities:
//   (g E1)(t) = integral_0^t e^{ms} (S E1(s) - A rho^g Phi(s)) ds,
// obtained by quadrature of the linear ODE.  This is the oracle the
// integrator and the printed formulas are checked against.
inline double g_oracle_equal_rho(double t, const DeltaProblem& pr,
                                 const PhysParams& p) {
  if (pr.rho_l != pr.rho_r)
    throw std::domain_error("g_oracle_equal_rho: needs rho_l == rho_r");
  const detail::DeltaCoeffs c = detail::delta_coeffs(pr, p);
  const double S = pr.u_l + pr.u_r;
  const double arg = p.A * std::pow(pr.rho_l, p.gamma);
  const double i2 = detail::weighted_phi_integral(c.m, c.m, t);
  const double i3 = detail::weighted_phi_integral(c.m, c.K, t);
  return (S * i2 - arg * i3) / detail::phi1(c.m, t);
}

inline double wdelta_oracle_equal_rho(double t, const DeltaProblem& pr,
                                      const PhysParams& p) {
  const detail::DeltaCoeffs c = detail::delta_coeffs(pr, p);
  const double S = pr.u_l + pr.u_r;
  const double arg = p.A * std::pow(pr.rho_l, p.gamma);
  const double e1 = detail::phi1(c.m, t);
  const double g = g_oracle_equal_rho(t, pr, p);
  return (S * e1 - arg * detail::phi1(c.K, t) - g) / e1;
}

struct ExplicitWdelta {
  double printed;   // the closed form as printed
  double oracle;    // quadrature closed form
  double rel_diff;  // |printed - oracle| / (1 + |oracle|)
};

// The three printed closed forms for rho_l == rho_r, transcribed verbatim
// and cross-checked against the quadrature oracle.  Disagreements are
// returned, not hidden: the eta != k forms are reference formulas only.
inline ExplicitWdelta explicit_wdelta(double t, const DeltaProblem& pr,
                                      const PhysParams& p) {
  if (pr.rho_l != pr.rho_r)
    throw std::domain_error(
        "explicit_wdelta: the ODEs have no explicit solution for rho_l != "
        "rho_r");
  if (t <= 0.0) throw std::domain_error("explicit_wdelta: t must be > 0");
  const double S = pr.u_l + pr.u_r;
  const double rg = std::pow(pr.rho_l, p.gamma);
  double printed;
  if (p.eta_eq_k()) {
    const double kg = p.k * (p.gamma + 1.0);
    const double ekg = std::exp(kg * t);
    printed = 0.5 * S -
              (kg * t * rg * p.A * ekg - rg * p.A * ekg + p.A * rg) /
                  (t * t * kg * kg);
  } else if (p.eta == -p.k * p.gamma) {
    const double mk = p.k - p.eta;  // k - eta
    const double den = std::expm1(mk * t);
    printed = (((1.0 + (p.eta - p.k) * t) * p.A * rg - S) *
                   std::exp(-2.0 * (p.eta - p.k) * t) -
               (p.A * rg + S) * std::exp(mk * t) + S) /
              (den * den);
  } else {
    const double mk = p.k - p.eta;
    const double den1 = std::expm1(mk * t);
    const double den2 = std::expm1((p.eta - p.k) * t);
    printed =
        (-2.0 * p.A * rg * mk * std::exp(t * ((p.gamma + 2.0) * p.k - p.eta)) +
         (p.k * p.gamma + p.eta) * S * std::exp(2.0 * mk * t) -
         2.0 * S * std::exp(mk * t) + 0.5 * S) /
            (2.0 * den1 * den1) +
        (-2.0 * p.A * mk * mk * rg * std::exp(2.0 * mk * t) +
         p.A * mk * rg * std::exp(p.k * t * (p.gamma + 1.0))) /
            (2.0 * ((p.gamma - 1.0) * p.k + 2.0 * p.eta) * den2 * den2);
  }
  ExplicitWdelta out;
  out.printed = printed;
  out.oracle = wdelta_oracle_equal_rho(t, pr, p);
  out.rel_diff = std::abs(printed - out.oracle) / (1.0 + std::abs(out.oracle));
  return out;
}

struct StepControl {
  double t0 = 1e-6;     // series seed time (the ODE is singular at t = 0)
  double tol = 1e-10;   // local error target for step halving
  double max_dt = 2.5e-4;
  double min_dt = 1e-13;
  int samples = 8000;   // uniform output intervals on [t0, t_end]

  // Residual differentiation balances h^4 truncation against eps/h
  // roundoff on omega_bar * u_delta; fast exponential rates push the
  // optimum toward a denser grid.
  static StepControl for_rate(double rate) {
    StepControl c;
    if (std::abs(rate) >= 4.0) c.samples = 16000;
    return c;
  }
};

struct DeltaTrajectory {
  std::vector<double> times;
  std::vector<double> g;
  std::vector<double> w_delta;   // delta speed, transformed frame
  std::vector<double> omega1;    // weight, transformed frame
  std::vector<double> x;         // shock position
  std::vector<double> omega_bar; // weight, original variables (= omega1 e^{kt})
  std::vector<double> u_delta;   // delta speed, original variables
  size_t size() const { return times.size(); }
};

// Advances g with classic RK4 plus step-doubling error control (factor-2
// halving against the 1e-10 local target), seeded at t0 with the two-term
// small-t series g = w0 t + g2 t^2 / 2.  Everything else on the trajectory
// is a closed form of g.
inline DeltaTrajectory integrate(const DeltaProblem& pr, const PhysParams& p,
                                 double t_end, StepControl ctrl = {}) {
  if (t_end <= ctrl.t0)
    throw std::invalid_argument("integrate: t_end must exceed the seed time");
  const detail::DeltaCoeffs c = detail::delta_coeffs(pr, p);
  const double w0 = initial_speed(pr, p).value;

  // Zero-strength data: every jump vanishes, the ODE degenerates to 0 = 0
  // and the weight is identically zero.  Use the b-independent closed form
  // for the phantom speed.
  const bool zero_strength = c.a == 0.0 && c.b == 0.0 && c.d == 0.0 &&
                             c.p == 0.0 && c.q == 0.0;

  // Second series coefficient from the O(t) balance of the ODE.
  const double nu1 = c.b * w0 - c.d + c.q;
  const double den2 = 1.5 * (c.a * w0 - c.b) + c.p;
  const double g2 =
      (std::abs(den2) > 1e-300)
          ? (c.m * (nu1 + 0.5 * (w0 * c.b - c.d)) +
             0.5 * c.K * (c.q - w0 * c.p)) /
                den2
          : 0.0;

  auto rhs = [&](double t, double g) { return g_prime(t, g, pr, p); };
  auto rk4 = [&](double t, double g, double h) {
    const double k1 = rhs(t, g);
    const double k2 = rhs(t + 0.5 * h, g + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, g + 0.5 * h * k2);
    const double k4 = rhs(t + h, g + h * k3);
    return g + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  DeltaTrajectory traj;
  traj.times.reserve(ctrl.samples + 2);
  auto push = [&](double t, double g) {
    const double wd = (t == 0.0) ? w0
                      : zero_strength
                          ? wdelta_oracle_equal_rho(t, pr, p)
                          : rhs(t, g) * std::exp(-c.m * t);
    const double om1 = -c.a * g + c.b * detail::phi1(c.m, t) -
                       c.p * detail::phi1(c.K, t);
    double xx, ud;
    if (p.eta_eq_k()) {
      xx = g + 0.5 * p.beta * t * t;
      ud = wd + p.beta * t;
    } else {
      xx = g + p.c * detail::phi1(c.m, t) - p.c * t;
      ud = (wd + p.c) * std::exp(c.m * t) - p.c;
    }
    if (!std::isfinite(g) || !std::isfinite(wd) || !std::isfinite(om1))
      throw std::runtime_error("integrate: non-finite trajectory value");
    traj.times.push_back(t);
    traj.g.push_back(g);
    traj.w_delta.push_back(wd);
    traj.omega1.push_back(om1);
    traj.x.push_back(xx);
    traj.omega_bar.push_back(om1 * std::exp(p.k * t));
    traj.u_delta.push_back(ud);
  };

  push(0.0, 0.0);  // exact initial point: g(0) = omega1(0) = x(0) = 0

  double t = ctrl.t0;
  double g = w0 * ctrl.t0 + 0.5 * g2 * ctrl.t0 * ctrl.t0;  // series seed
  if (zero_strength) g = g_oracle_equal_rho(t, pr, p);
  push(t, g);
  const double h_out = (t_end - ctrl.t0) / ctrl.samples;
  double h = std::min(ctrl.max_dt, h_out);
  for (int i = 1; i <= ctrl.samples; ++i) {
    const double t_target = ctrl.t0 + i * h_out;
    if (zero_strength) {
      t = t_target;
      push(t, g_oracle_equal_rho(t, pr, p));
      continue;
    }
    while (t < t_target - 1e-15 * t_end) {
      double step = std::min(h, t_target - t);
      for (;;) {
        const double full = rk4(t, g, step);
        const double half = rk4(t + 0.5 * step, rk4(t, g, 0.5 * step),
                                0.5 * step);
        const double err = std::abs(half - full) / 15.0;
        if (err <= ctrl.tol * (1.0 + std::abs(half))) {
          g = half;
          t += step;
          if (err < ctrl.tol * (1.0 + std::abs(half)) / 64.0)
            h = std::min(2.0 * step, ctrl.max_dt);
          else
            h = step;
          break;
        }
        step *= 0.5;
        if (step < ctrl.min_dt)
          throw std::runtime_error("integrate: step size underflow");
      }
    }
    t = t_target;
    push(t, g);
  }
  return traj;
}

enum class Overcompress { Strict, WeakBoundary, No };

struct OvercompressStatus {
  Overcompress status;
  double at;  // evaluation time
};

// Strict iff lambda2(right) < sigma < lambda1(left) strictly; equalities
// within 1e-10 give WeakBoundary.  The outer inequalities hold for every
// admissible state.
inline OvercompressStatus overcompressive(const TransState& left,
                                          const TransState& right,
                                          double sigma, double t,
                                          const PhysParams& p) {
  const double lam1_l = eigen(left, t, p).lambda1;
  const double lam2_r = eigen(right, t, p).lambda2;
  const double tol =
      1e-10 * (1.0 + std::max({std::abs(lam1_l), std::abs(lam2_r),
                               std::abs(sigma)}));
  OvercompressStatus out{Overcompress::No, t};
  if (sigma > lam2_r + tol && sigma < lam1_l - tol) {
    out.status = Overcompress::Strict;
  } else if (sigma >= lam2_r - tol && sigma <= lam1_l + tol) {
    out.status = Overcompress::WeakBoundary;
  }
  return out;
}

struct ResidualSeries {
  std::vector<double> r1;  // defect of the omega_bar relation
  std::vector<double> r2;  // defect of the omega_bar * u_delta relation
  double max_abs = 0.0;
  double max_omega_bar = 0.0;
};

// Differentiates omega_bar and omega_bar*u_delta along the trajectory
// (five-point central stencils on the uniform part of the grid) and
// returns the residuals of the deficit relations
//   d(omega_bar)/dt = k w - [rho] u_d + [rho u] - A [rho^{g+1}] e^{eta t}
//   d(omega_bar u_d)/dt = eta w u_d + beta w - [rho u] u_d + [rho u^2]
//                         - A [rho^{g+1} u] e^{eta t},
// with the jumps evaluated on the evolved plateau states.
inline ResidualSeries rh_deficit_residual(const DeltaTrajectory& traj,
                                          const DeltaProblem& pr,
                                          const PhysParams& p) {
  const size_t n = traj.size();
  if (n < 3)
    throw std::invalid_argument(
        "rh_deficit_residual: trajectory too short to differentiate");
  // Uniform sub-grid: indices 1..n-1 (index 0 is the exact t = 0 row).
  const size_t m = n - 1;
  if (m < 5)
    throw std::invalid_argument(
        "rh_deficit_residual: need at least five uniform samples");
  const double h = traj.times[2] - traj.times[1];

  auto u_plateau = [&](double u0, double t) {
    return p.eta_eq_k() ? u0 + p.beta * t
                        : (u0 + p.c) * std::exp((p.eta - p.k) * t) - p.c;
  };
  const double pl = std::pow(pr.rho_l, p.gamma + 1.0);
  const double prr = std::pow(pr.rho_r, p.gamma + 1.0);

  std::vector<double> f1(m), f2(m);
  for (size_t i = 0; i < m; ++i) {
    f1[i] = traj.omega_bar[i + 1];
    f2[i] = traj.omega_bar[i + 1] * traj.u_delta[i + 1];
  }
  auto d5 = [&](const std::vector<double>& f, size_t i) {
    if (i >= 2 && i + 2 < m)
      return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) /
             (12.0 * h);
    if (i == 0)
      return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] -
              3.0 * f[4]) /
             (12.0 * h);
    if (i == 1)
      return (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) /
             (12.0 * h);
    if (i == m - 2)
      return (3.0 * f[m - 1] + 10.0 * f[m - 2] - 18.0 * f[m - 3] +
              6.0 * f[m - 4] - f[m - 5]) /
             (12.0 * h);
    return (25.0 * f[m - 1] - 48.0 * f[m - 2] + 36.0 * f[m - 3] -
            16.0 * f[m - 4] + 3.0 * f[m - 5]) /
           (12.0 * h);
  };

  ResidualSeries out;
  out.r1.assign(n, 0.0);
  out.r2.assign(n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const double t = traj.times[i + 1];
    const double w = traj.omega_bar[i + 1];
    const double ud = traj.u_delta[i + 1];
    const double ekt = std::exp(p.k * t);
    const double ul = u_plateau(pr.u_l, t);
    const double ur = u_plateau(pr.u_r, t);
    const double jr = (pr.rho_l - pr.rho_r) * ekt;
    const double jru = ekt * (pr.rho_l * ul - pr.rho_r * ur);
    const double jru2 = ekt * (pr.rho_l * ul * ul - pr.rho_r * ur * ur);
    const double eg = std::exp(p.k * t * (p.gamma + 1.0));
    const double jp = (pl - prr) * eg;
    const double jpu = (pl * ul - prr * ur) * eg;
    const double eet = std::exp(p.eta * t);
    const double rhs1 = p.k * w - jr * ud + jru - p.A * jp * eet;
    const double rhs2 = p.eta * w * ud + p.beta * w - jru * ud + jru2 -
                        p.A * jpu * eet;
    out.r1[i + 1] = d5(f1, i) - rhs1;
    out.r2[i + 1] = d5(f2, i) - rhs2;
    out.max_abs = std::max({out.max_abs, std::abs(out.r1[i + 1]),
                            std::abs(out.r2[i + 1])});
    out.max_omega_bar = std::max(out.max_omega_bar, std::abs(w));
  }
  return out;
}

// Rows: t, x, w_delta, u_delta, omega1, omega_bar, res1, res2.
inline void export_trajectory(std::ostream& os, const DeltaTrajectory& traj,
                              const ResidualSeries& res) {
  char buf[256];
  for (size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  traj.times[i], traj.x[i], traj.w_delta[i], traj.u_delta[i],
                  traj.omega1[i], traj.omega_bar[i], res.r1[i], res.r2[i]);
    os << buf;
  }
}

}  // namespace vgcg
