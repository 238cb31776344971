#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>
#include <span>
#include <stdexcept>

#include "vgcg/characteristics.hpp"
#include "vgcg/model.hpp"

// Time-dependent curves in the (v,w) plane through a left state: the
// 1-shock locus S1, the 2-contact locus C2, the delta boundary S_delta
// (v_- -> infinity limit of C2), the overcompressive bound S_o, and the
// lambda2 = lambda1(left) locus J.  S_o and J reduce to the same
// expression.  Shock/contact speeds and the classical middle state live
// here too.  Both source cases share these curve formulas; only the
// speeds differ.
namespace vgcg {

enum class CurveKind { S1, C2, SDelta, SOver, JBound, R2Approx };

inline const char* curve_name(CurveKind k) {
  switch (k) {
    case CurveKind::S1: return "S1";
    case CurveKind::C2: return "C2";
    case CurveKind::SDelta: return "S_delta";
    case CurveKind::SOver: return "S_o";
    case CurveKind::JBound: return "J";
    case CurveKind::R2Approx: return "R2";
  }
  return "?";
}

inline double curve_w(CurveKind kind, const TransState& left, double v,
                      double t, const PhysParams& p) {
  if (v <= 0.0 || left.v <= 0.0) throw std::domain_error("curve_w: v <= 0");
  const double E = std::exp(p.k * t * (p.gamma + 1.0));
  const double vg = std::pow(v, p.gamma);
  const double vlg = std::pow(left.v, p.gamma);
  switch (kind) {
    case CurveKind::S1:
      return left.w;
    case CurveKind::C2:
      return left.w + p.A * (vg - vlg) * E;
    case CurveKind::SDelta:
      return left.w + p.A * vg * E;
    case CurveKind::SOver:
    case CurveKind::JBound:
      return left.w + (p.A * vg - p.A * (p.gamma + 1.0) * vlg) * E;
    case CurveKind::R2Approx:
      throw std::invalid_argument("curve_w: use r2_w for the R2 curve");
  }
  throw std::invalid_argument("curve_w: unknown kind");
}

// Approximate 2-rarefaction ordinate: the printed integral with v held at
// the query abscissa, evaluated by adaptive quadrature (rel tol 1e-10).
// With v frozen the expression collapses onto C2 at the wave start time
// t0, so this is a rough outline of the true curve by construction.
inline double r2_w(const TransState& left, double v, double t, double t0,
                   const PhysParams& p) {
  if (v <= 0.0 || left.v <= 0.0) throw std::domain_error("r2_w: v <= 0");
  if (t < t0) throw std::invalid_argument("r2_w: t < t0");
  const double kg = p.k * (p.gamma + 1.0);
  const double vg = std::pow(v, p.gamma);
  const double vlg = std::pow(left.v, p.gamma);
  double integral = 0.0;
  if (t > t0) {
    auto f = [&](double s) { return vg * p.A * kg * std::exp(kg * s); };
    integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, t0, t, 12, 1e-10);
  }
  return left.w + p.A * vg * std::exp(kg * t) - p.A * vlg * std::exp(kg * t0) -
         integral;
}

// Rankine-Hugoniot speed of the 1-shock from the left state to density v;
// below 1e-12 relative separation the difference quotient switches to its
// analytic limit (gamma+1) v_-^gamma, giving lambda1(left).
inline double shock1_speed(const TransState& left, double v, double t,
                           const PhysParams& p) {
  if (v <= 0.0 || left.v <= 0.0)
    throw std::domain_error("shock1_speed: v <= 0");
  double q;
  if (std::abs(v - left.v) < 1e-12 * left.v) {
    q = (p.gamma + 1.0) * std::pow(left.v, p.gamma);
  } else {
    q = (std::pow(v, p.gamma + 1.0) - std::pow(left.v, p.gamma + 1.0)) /
        (v - left.v);
  }
  const double E = std::exp(p.k * t * (p.gamma + 1.0));
  if (p.eta_eq_k()) {
    return left.w + p.beta * t - p.A * E * q;
  }
  const double em = std::exp((p.eta - p.k) * t);
  return (left.w + p.c) * em - p.c - p.A * em * E * q;
}

// sigma2 = lambda2(state); constant along the C2 curve through the state.
inline double contact_speed(const TransState& s, double t,
                            const PhysParams& p) {
  return eigen(s, t, p).lambda2;
}

// Middle state of a classical solution at time t: w_M = w_L and v_M from
// the C2 relation v_M^gamma = v_R^gamma + (w_L - w_R) e^{-kt(gamma+1)}/A.
inline TransState middle_state(const TransState& left, const TransState& right,
                               double t, const PhysParams& p) {
  if (left.v <= 0.0 || right.v <= 0.0)
    throw std::domain_error("middle_state: v <= 0");
  const double base = std::pow(right.v, p.gamma) +
                      (left.w - right.w) *
                          std::exp(-p.k * t * (p.gamma + 1.0)) / p.A;
  if (base <= 0.0)
    throw std::domain_error(
        "middle_state: no middle state (right state unreachable by S1C2 at "
        "this time)");
  return TransState{std::pow(base, 1.0 / p.gamma), left.w};
}

// Emits "v,w" rows for one curve on the given v grid.
inline void sample_curve(std::ostream& os, CurveKind kind,
                         const TransState& left, double t,
                         std::span<const double> v_grid, const PhysParams& p,
                         double t0 = 0.0) {
  char buf[64];
  for (double v : v_grid) {
    const double w = (kind == CurveKind::R2Approx)
                         ? r2_w(left, v, t, t0, p)
                         : curve_w(kind, left, v, t, p);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", v, w);
    os << buf;
  }
}

}  // namespace vgcg
