#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Physical parameters, state representations, the variable transforms
// between original (rho,u) and transformed (v,w) coordinates, and the
// conserved/flux maps of the two conservative systems (eta != k, eta == k).
namespace vgcg {

enum class SourceCase { EtaEqK, EtaNeqK };

struct PhysParams {
  double A;      // pressure amplitude, A < 0
  double gamma;  // adiabatic exponent, gamma < 0, gamma != -1
  double eta;    // velocity source rate, eta != 0
  double k;      // density source rate, k != 0
  double beta;   // constant forcing, beta != 0
  SourceCase source_case = SourceCase::EtaNeqK;
  double c = 0.0;  // beta/(eta-k), defined only for EtaNeqK

  bool eta_eq_k() const { return source_case == SourceCase::EtaEqK; }
};

struct PrimState {
  double rho;  // density, rho > 0
  double u;    // fluid velocity
};

struct TransState {
  double v;  // transformed density, v > 0
  double w;  // transformed velocity
};

struct RiemannProblem {
  TransState left;
  TransState right;
};

struct ConservedPair {
  double h1;  // = v
  double h2;  // = v*w + v*c (EtaNeqK), = v*w (EtaEqK)
};

struct FluxPair {
  double g1;
  double g2;
};

struct ValidatedParams {
  PhysParams params;
  std::vector<std::string> advisories;
};

// Rejects constants outside the model's domain; non-fatal regime issues
// (eta - k <= 0, |A| < 10, |eta - k| nearly zero) come back as advisories.
inline ValidatedParams validate_params(double A, double gamma, double eta,
                                       double k, double beta) {
  for (double x : {A, gamma, eta, k, beta}) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite parameter");
  }
  if (A >= 0.0) throw std::invalid_argument("A must be negative");
  if (gamma >= 0.0) throw std::invalid_argument("gamma must be negative");
  if (gamma == -1.0) throw std::invalid_argument("gamma = -1 is excluded");
  if (k == 0.0) throw std::invalid_argument("k must be non-zero");
  if (eta == 0.0) throw std::invalid_argument("eta must be non-zero");
  if (beta == 0.0) throw std::invalid_argument("beta must be non-zero");

  ValidatedParams out;
  out.params.A = A;
  out.params.gamma = gamma;
  out.params.eta = eta;
  out.params.k = k;
  out.params.beta = beta;
  if (eta == k) {
    out.params.source_case = SourceCase::EtaEqK;
    out.params.c = 0.0;
  } else {
    out.params.source_case = SourceCase::EtaNeqK;
    out.params.c = beta / (eta - k);
    if (std::abs(eta - k) < 1e-12) {
      out.advisories.push_back(
          "eta and k nearly equal: c = beta/(eta-k) is ill-conditioned");
    }
  }
  if (eta - k <= 0.0 && eta != k) {
    out.advisories.push_back(
        "eta - k <= 0: strict hyperbolicity is lost in the long-time limit");
  }
  if (std::abs(A) < 10.0) {
    out.advisories.push_back("|A| < 10: outside the tested numerical range");
  }
  return out;
}

inline PhysParams make_params(double A, double gamma, double eta, double k,
                              double beta) {
  return validate_params(A, gamma, eta, k, beta).params;
}

// p(rho,t) = A rho^gamma e^{eta t}; negative for every admissible state.
inline double pressure(double rho, double t, const PhysParams& p) {
  if (rho <= 0.0) throw std::domain_error("pressure: rho must be positive");
  return p.A * std::pow(rho, p.gamma) * std::exp(p.eta * t);
}

inline TransState to_transformed(const PrimState& s, double t,
                                 const PhysParams& p) {
  if (s.rho <= 0.0) throw std::domain_error("to_transformed: rho <= 0");
  TransState out;
  out.v = s.rho * std::exp(-p.k * t);
  if (p.eta_eq_k()) {
    out.w = s.u - p.beta * t;
  } else {
    out.w = (s.u + p.c) * std::exp(-(p.eta - p.k) * t) - p.c;
  }
  return out;
}

inline PrimState to_primitive(const TransState& s, double t,
                              const PhysParams& p) {
  if (s.v <= 0.0) throw std::domain_error("to_primitive: v <= 0");
  PrimState out;
  out.rho = s.v * std::exp(p.k * t);
  if (p.eta_eq_k()) {
    out.u = s.w + p.beta * t;
  } else {
    out.u = (s.w + p.c) * std::exp((p.eta - p.k) * t) - p.c;
  }
  return out;
}

struct ConservedFlux {
  ConservedPair H;
  FluxPair G;
};

// H and G of the conservative system for the active case, evaluated at
// time t.  A(v e^{kt})^{gamma+1} is folded into a single pow call.
inline ConservedFlux conserved_and_flux(const TransState& s, double t,
                                        const PhysParams& p) {
  if (s.v <= 0.0) throw std::domain_error("conserved_and_flux: v <= 0");
  const double press = p.A * std::pow(s.v, p.gamma + 1.0) *
                       std::exp(p.k * t * (p.gamma + 1.0));
  ConservedFlux out;
  if (p.eta_eq_k()) {
    out.H = {s.v, s.v * s.w};
    const double carry = s.w + p.beta * t;
    out.G.g1 = s.v * carry - press;
    out.G.g2 = s.v * s.w * carry - press * s.w;
  } else {
    const double em = std::exp((p.eta - p.k) * t);
    const double wc = s.w + p.c;
    out.H = {s.v, s.v * wc};
    out.G.g1 = s.v * em * wc - s.v * p.c - press * em;
    out.G.g2 = s.v * wc * wc * em - wc * em * press - p.c * wc * s.v;
  }
  return out;
}

// Flux written directly in terms of the conserved pair (v, y); this is the
// form the finite-volume solver advances.
inline FluxPair flux_of_conserved(const ConservedPair& H, double t,
                                  const PhysParams& p) {
  if (H.h1 <= 0.0) throw std::domain_error("flux_of_conserved: h1 <= 0");
  const double v = H.h1;
  const double y = H.h2;
  const double press =
      p.A * std::pow(v, p.gamma + 1.0) * std::exp(p.k * t * (p.gamma + 1.0));
  FluxPair out;
  if (p.eta_eq_k()) {
    const double bt = p.beta * t;
    out.g1 = y + v * bt - press;
    out.g2 = y * y / v + y * bt - press * y / v;
  } else {
    const double em = std::exp((p.eta - p.k) * t);
    out.g1 = y * em - v * p.c - press * em;
    out.g2 = y * y / v * em - y / v * em * press - p.c * y;
  }
  return out;
}

// Inverse of the H map; h1 <= 0 signals loss of positivity in the solver.
inline TransState state_of_conserved(const ConservedPair& H,
                                     const PhysParams& p) {
  if (H.h1 <= 0.0)
    throw std::domain_error("state_of_conserved: positivity lost (h1 <= 0)");
  TransState out;
  out.v = H.h1;
  out.w = p.eta_eq_k() ? H.h2 / H.h1 : H.h2 / H.h1 - p.c;
  return out;
}

}  // namespace vgcg
