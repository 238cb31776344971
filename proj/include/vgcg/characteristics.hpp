#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include "vgcg/model.hpp"

// Eigenstructure of the transformed systems, character of the two fields,
// Lax admissibility of 1-shocks, and the wave-speed bound used for CFL.
namespace vgcg {

struct EigenData {
  double lambda1;
  double lambda2;
  std::array<double, 2> r1;
  std::array<double, 2> r2;
};

// Closed-form eigenvalues/eigenvectors.  lambda1 < lambda2 holds for every
// admissible state (A < 0, gamma < 0, v > 0).
inline EigenData eigen(const TransState& s, double t, const PhysParams& p) {
  if (s.v <= 0.0) throw std::domain_error("eigen: v <= 0");
  const double avg = p.A * std::pow(s.v, p.gamma) *
                     std::exp(p.k * t * (p.gamma + 1.0));  // A v^g e^{kt(g+1)}
  EigenData out;
  out.r1 = {1.0, 0.0};
  out.r2 = {1.0, p.gamma * avg / s.v};
  if (p.eta_eq_k()) {
    const double carry = s.w + p.beta * t;
    out.lambda1 = carry - (p.gamma + 1.0) * avg;
    out.lambda2 = carry - avg;
  } else {
    const double em = std::exp((p.eta - p.k) * t);
    out.lambda1 = -p.c + (s.w + p.c - (p.gamma + 1.0) * avg) * em;
    out.lambda2 = -p.c + (s.w + p.c - avg) * em;
  }
  return out;
}

struct FieldCharacter {
  double gn1_closed;  // D lambda1 . r1, closed form (nonzero)
  double gn1_fd;      // same, central finite difference
  double ld2_closed;  // D lambda2 . r2, closed form (identically 0)
  double ld2_fd;      // same, central finite difference
};

// Evaluates both the closed forms and finite-difference directional
// derivatives of the eigenvalues along their eigenvectors.
inline FieldCharacter field_character(const TransState& s, double t,
                                      const PhysParams& p) {
  if (s.v <= 0.0) throw std::domain_error("field_character: v <= 0");
  const double scale = p.eta_eq_k() ? 1.0 : std::exp((p.eta - p.k) * t);
  FieldCharacter out;
  out.gn1_closed = -p.A * p.gamma * (p.gamma + 1.0) *
                   std::pow(s.v, p.gamma - 1.0) *
                   std::exp(p.k * t * (p.gamma + 1.0)) * scale;
  out.ld2_closed = 0.0;

  const double h = 1e-6 * (1.0 + std::abs(s.v));
  auto lam1 = [&](double v, double w) {
    return eigen(TransState{v, w}, t, p).lambda1;
  };
  auto lam2 = [&](double v, double w) {
    return eigen(TransState{v, w}, t, p).lambda2;
  };
  out.gn1_fd = (lam1(s.v + h, s.w) - lam1(s.v - h, s.w)) / (2.0 * h);
  const double r22 = eigen(s, t, p).r2[1];
  out.ld2_fd =
      (lam2(s.v + h, s.w + h * r22) - lam2(s.v - h, s.w - h * r22)) /
      (2.0 * h);
  return out;
}

inline double lax_h1(double v_minus, double v, double gamma) {
  return std::pow(v, gamma + 1.0) + gamma * std::pow(v_minus, gamma + 1.0) -
         (gamma + 1.0) * v * std::pow(v_minus, gamma);
}

inline double lax_h2(double v_minus, double v, double gamma) {
  return -gamma * std::pow(v, gamma + 1.0) - std::pow(v_minus, gamma + 1.0) +
         (gamma + 1.0) * std::pow(v, gamma) * v_minus;
}

// Lax criterion for a 1-shock from v_minus to v: admissible on v > v_minus
// for -1 < gamma < 0 and on v < v_minus for gamma < -1.  The h1/h2 sign
// rule is evaluated as well and must agree.
inline bool lax_admissible_1shock(double v_minus, double v, double gamma) {
  if (v_minus <= 0.0 || v <= 0.0)
    throw std::domain_error("lax_admissible_1shock: densities must be > 0");
  if (std::abs(v - v_minus) < 1e-12 * v_minus)
    throw std::domain_error("lax_admissible_1shock: zero-strength shock");
  const bool flag = (gamma > -1.0) ? (v > v_minus) : (v < v_minus);
  const double h1 = lax_h1(v_minus, v, gamma);
  const double h2 = lax_h2(v_minus, v, gamma);
  const bool sign_rule =
      (v > v_minus) ? (h1 < 0.0 && h2 > 0.0) : (h1 > 0.0 && h2 < 0.0);
  if (flag != sign_rule)
    throw std::logic_error("lax_admissible_1shock: h1/h2 sign rule mismatch");
  return flag;
}

// max over states of max(|lambda1|, |lambda2|); the solver's CFL bound.
inline double max_wave_speed(std::span<const TransState> states, double t,
                             const PhysParams& p) {
  if (states.empty())
    throw std::invalid_argument("max_wave_speed: empty collection");
  double m = 0.0;
  for (const auto& s : states) {
    const EigenData e = eigen(s, t, p);
    m = std::max(m, std::max(std::abs(e.lambda1), std::abs(e.lambda2)));
  }
  return m;
}

}  // namespace vgcg
