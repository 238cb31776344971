#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vgcg/wavecurves.hpp"

// Time-dependent classification of a right state relative to a left state
// into the labeled regions, the predicted solution form, the t -> infinity
// limit tables, and region-crossing times.
//
// Case table: 1: gamma<-1,k>0; 2: -1<gamma<0,k<0; 3: gamma<-1,k<0;
// 4: -1<gamma<0,k>0.  k(gamma+1) < 0 for cases 1/2, > 0 for cases 3/4.
namespace vgcg {

struct CaseInfo {
  int id;             // 1..4
  int k_gamma1_sign;  // sign of k(gamma+1)
};

inline CaseInfo case_of(const PhysParams& p) {
  const bool steep = p.gamma < -1.0;  // gamma < -1
  const bool kpos = p.k > 0.0;
  CaseInfo ci;
  if (steep && kpos) ci.id = 1;
  else if (!steep && !kpos) ci.id = 2;
  else if (steep && !kpos) ci.id = 3;
  else ci.id = 4;
  ci.k_gamma1_sign = (p.k * (p.gamma + 1.0) > 0.0) ? 1 : -1;
  return ci;
}

enum class Region {
  I, II, III, IV, V, VI, VII, VIII, IX,
  Unclassified,
  OnBoundary,
};

enum class SolutionForm {
  S1C2, S1R2, R2C2, R2C2orC2R2, DeltaOC, DeltaCombo, Constant, Unknown,
};

inline const char* region_name(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
    case Region::V: return "V";
    case Region::VI: return "VI";
    case Region::VII: return "VII";
    case Region::VIII: return "VIII";
    case Region::IX: return "IX";
    case Region::Unclassified: return "unclassified";
    case Region::OnBoundary: return "boundary";
  }
  return "?";
}

inline const char* form_name(SolutionForm f) {
  switch (f) {
    case SolutionForm::S1C2: return "S1C2";
    case SolutionForm::S1R2: return "S1R2";
    case SolutionForm::R2C2: return "R2C2";
    case SolutionForm::R2C2orC2R2: return "R2C2-or-C2R2";
    case SolutionForm::DeltaOC: return "delta-overcompressive";
    case SolutionForm::DeltaCombo: return "delta-combination";
    case SolutionForm::Constant: return "constant";
    case SolutionForm::Unknown: return "unknown";
  }
  return "?";
}

struct Classification {
  Region region = Region::Unclassified;
  SolutionForm form = SolutionForm::Unknown;
  std::optional<CurveKind> boundary;  // set when region == OnBoundary
  std::string note;
};

namespace detail {

constexpr double kBoundaryTolW = 1e-9;

struct CurveVals {
  double s1, c2, sd, so, r2;
};

inline CurveVals curves_at(const TransState& left, double v, double t,
                           const PhysParams& p) {
  CurveVals cv;
  cv.s1 = left.w;
  cv.c2 = curve_w(CurveKind::C2, left, v, t, p);
  cv.sd = curve_w(CurveKind::SDelta, left, v, t, p);
  cv.so = curve_w(CurveKind::SOver, left, v, t, p);
  cv.r2 = r2_w(left, v, t, 0.0, p);
  return cv;
}

inline std::optional<CurveKind> near_boundary(double w, const CurveVals& cv,
                                              std::initializer_list<CurveKind> kinds) {
  for (CurveKind k : kinds) {
    double ref = 0.0;
    switch (k) {
      case CurveKind::S1: ref = cv.s1; break;
      case CurveKind::C2: ref = cv.c2; break;
      case CurveKind::SDelta: ref = cv.sd; break;
      case CurveKind::SOver:
      case CurveKind::JBound: ref = cv.so; break;
      case CurveKind::R2Approx: ref = cv.r2; break;
    }
    if (std::abs(w - ref) <= kBoundaryTolW) return k;
  }
  return std::nullopt;
}

}  // namespace detail

// Region and predicted solution form of the right state at time t,
// per the labeled sectors of the four case diagrams.  Sectors the
// diagrams leave unlabeled come back Unclassified; points within 1e-9 (in
// w) of a bounding curve come back OnBoundary.
inline Classification classify(const TransState& left, const TransState& right,
                               double t, const PhysParams& p) {
  if (left.v <= 0.0 || right.v <= 0.0)
    throw std::domain_error("classify: v <= 0");
  Classification out;
  if (left.v == right.v && left.w == right.w) {
    out.region = Region::OnBoundary;
    out.form = SolutionForm::Constant;
    out.boundary = CurveKind::S1;
    return out;
  }

  const CaseInfo ci = case_of(p);
  const detail::CurveVals cv = detail::curves_at(left, right.v, t, p);
  const double w = right.w;
  const bool left_flank = right.v <= left.v;

  auto ret = [&](Region r, SolutionForm f) {
    out.region = r;
    out.form = f;
    return out;
  };
  auto on = [&](std::optional<CurveKind> b) {
    out.region = Region::OnBoundary;
    out.form = SolutionForm::Unknown;
    out.boundary = b;
    return out;
  };

  if (ci.id == 1 || ci.id == 3) {  // gamma < -1
    if (left_flank) {
      const bool has_r2 = (ci.id == 1);  // R2 sits on v < v_L for case 1
      auto b = has_r2
                   ? detail::near_boundary(w, cv, {CurveKind::S1, CurveKind::R2Approx,
                                                   CurveKind::C2, CurveKind::SOver})
                   : detail::near_boundary(w, cv, {CurveKind::S1, CurveKind::C2,
                                                   CurveKind::SOver});
      if (b) return on(b);
      if (w > cv.s1)
        return ret(Region::VI,
                   ci.id == 1 ? SolutionForm::S1C2 : SolutionForm::S1R2);
      if (w < cv.so) return ret(Region::V, SolutionForm::DeltaOC);
      if (has_r2) {
        const double hi = std::max(cv.c2, cv.r2);
        const double lo = std::min(cv.c2, cv.r2);
        if (w > hi) return ret(Region::VII, SolutionForm::S1R2);
        if (w > lo) {
          out.note = "2-rarefaction first (numerical evidence)";
          return ret(Region::VIII, SolutionForm::R2C2orC2R2);
        }
        return ret(Region::Unclassified, SolutionForm::Unknown);
      }
      if (w > cv.c2) return ret(Region::VII, SolutionForm::S1C2);
      return ret(Region::Unclassified, SolutionForm::Unknown);
    }
    // right flank (v > v_L)
    const bool has_r2 = (ci.id == 3);  // R2 sits on v > v_L for case 3
    auto b = has_r2 ? detail::near_boundary(w, cv, {CurveKind::R2Approx,
                                                    CurveKind::C2, CurveKind::SOver})
                    : detail::near_boundary(w, cv, {CurveKind::C2, CurveKind::SOver});
    if (b) return on(b);
    if (w < cv.so) return ret(Region::V, SolutionForm::DeltaOC);
    if (has_r2) {
      const double hi = std::max(cv.c2, cv.r2);
      const double lo = std::min(cv.c2, cv.r2);
      if (w > hi) return ret(Region::Unclassified, SolutionForm::Unknown);
      if (w > lo) return ret(Region::VIII, SolutionForm::R2C2orC2R2);
      return ret(Region::IX, SolutionForm::DeltaCombo);
    }
    if (w < cv.c2) return ret(Region::IX, SolutionForm::DeltaCombo);
    return ret(Region::Unclassified, SolutionForm::Unknown);
  }

  // cases 2 and 4: -1 < gamma < 0
  if (left_flank) {
    const bool has_r2 = (ci.id == 2);  // R2 sits on v < v_L for case 2
    auto b = has_r2 ? detail::near_boundary(w, cv, {CurveKind::R2Approx,
                                                    CurveKind::C2, CurveKind::SDelta})
                    : detail::near_boundary(w, cv, {CurveKind::C2, CurveKind::SDelta});
    if (b) return on(b);
    if (has_r2) {
      const double hi = std::max(cv.c2, cv.r2);
      const double lo = std::min(cv.c2, cv.r2);
      if (w > hi) return ret(Region::I, SolutionForm::R2C2);
      if (w < cv.sd) return ret(Region::V, SolutionForm::DeltaOC);
      if (w > lo) return ret(Region::II, SolutionForm::R2C2orC2R2);
      return ret(Region::Unclassified, SolutionForm::Unknown);
    }
    if (w > cv.c2) return ret(Region::I, SolutionForm::R2C2);
    if (w < cv.sd) return ret(Region::V, SolutionForm::DeltaOC);
    return ret(Region::Unclassified, SolutionForm::Unknown);
  }
  // right flank (v > v_L)
  const bool has_r2 = (ci.id == 4);  // R2 sits on v > v_L for case 4
  auto b = has_r2 ? detail::near_boundary(w, cv, {CurveKind::R2Approx, CurveKind::C2,
                                                  CurveKind::S1, CurveKind::SDelta})
                  : detail::near_boundary(w, cv, {CurveKind::C2, CurveKind::S1,
                                                  CurveKind::SDelta});
  if (b) return on(b);
  if (has_r2) {
    const double hi = std::max(cv.c2, cv.r2);
    const double lo = std::min(cv.c2, cv.r2);
    if (w > hi) return ret(Region::Unclassified, SolutionForm::Unknown);
    if (w > lo) return ret(Region::II, SolutionForm::R2C2orC2R2);
    if (w > cv.s1) return ret(Region::III, SolutionForm::S1C2);
    if (w > cv.sd) return ret(Region::IV, SolutionForm::S1C2);
    return ret(Region::V, SolutionForm::DeltaOC);
  }
  if (w > cv.c2) return ret(Region::Unclassified, SolutionForm::Unknown);
  if (w > cv.s1) return ret(Region::III, SolutionForm::S1C2);
  if (w > cv.sd) return ret(Region::IV, SolutionForm::S1C2);
  return ret(Region::V, SolutionForm::DeltaOC);
}

// Limit classification as t -> infinity.  For k(gamma+1) < 0 all curves
// collapse onto w = w_L; for k(gamma+1) > 0 S_delta and S_o recede to
// -infinity while C2 splits to -/+ infinity across v = v_L.
inline Classification asymptotic_region(const TransState& left,
                                        const TransState& right,
                                        const PhysParams& p) {
  if (left.v <= 0.0 || right.v <= 0.0)
    throw std::domain_error("asymptotic_region: v <= 0");
  Classification out;
  if (left.v == right.v && left.w == right.w) {
    out.region = Region::OnBoundary;
    out.form = SolutionForm::Constant;
    out.boundary = CurveKind::S1;
    return out;
  }
  const CaseInfo ci = case_of(p);
  const double tol = detail::kBoundaryTolW;
  auto ret = [&](Region r, SolutionForm f) {
    out.region = r;
    out.form = f;
    return out;
  };
  auto on = [&](CurveKind k) {
    out.region = Region::OnBoundary;
    out.form = SolutionForm::Unknown;
    out.boundary = k;
    return out;
  };

  switch (ci.id) {
    case 1:
      if (std::abs(right.w - left.w) <= tol) return on(CurveKind::S1);
      return right.w > left.w ? ret(Region::VI, SolutionForm::S1C2)
                              : ret(Region::V, SolutionForm::DeltaOC);
    case 2:
      if (std::abs(right.w - left.w) <= tol) return on(CurveKind::S1);
      return right.w > left.w ? ret(Region::I, SolutionForm::R2C2)
                              : ret(Region::V, SolutionForm::DeltaOC);
    case 3:
      if (std::abs(right.v - left.v) <= tol * left.v) return on(CurveKind::C2);
      if (right.v > left.v) return ret(Region::IX, SolutionForm::DeltaCombo);
      if (std::abs(right.w - left.w) <= tol) return on(CurveKind::S1);
      return right.w > left.w ? ret(Region::VI, SolutionForm::S1R2)
                              : ret(Region::VII, SolutionForm::S1C2);
    default:  // case 4
      if (std::abs(right.v - left.v) <= tol * left.v) return on(CurveKind::C2);
      if (right.v < left.v) return ret(Region::I, SolutionForm::R2C2);
      if (std::abs(right.w - left.w) <= tol) return on(CurveKind::S1);
      return right.w > left.w ? ret(Region::III, SolutionForm::S1C2)
                              : ret(Region::IV, SolutionForm::S1C2);
  }
}

struct CrossingEvent {
  double t_star;
  Region from_label;
  Region to_label;
  CurveKind boundary;
};

// Times in (0, horizon] at which the right state changes region because a
// moving curve sweeps past it.  Each candidate curve ordinate is monotone
// in t, so a uniform scan plus bisection finds every root.
inline std::vector<CrossingEvent> crossing_times(const TransState& left,
                                                 const TransState& right,
                                                 const PhysParams& p,
                                                 double horizon) {
  if (horizon <= 0.0) throw std::invalid_argument("crossing_times: horizon <= 0");
  std::vector<CrossingEvent> events;
  if (left.v == right.v && left.w == right.w) return events;

  constexpr int kScan = 512;
  constexpr double kEps = 1e-6;
  const CurveKind kinds[] = {CurveKind::C2, CurveKind::SDelta, CurveKind::SOver};
  for (CurveKind kind : kinds) {
    auto f = [&](double t) {
      return curve_w(kind, left, right.v, t, p) - right.w;
    };
    double t_prev = horizon * 1e-12;
    double f_prev = f(t_prev);
    for (int i = 1; i <= kScan; ++i) {
      const double t_i = horizon * i / kScan;
      const double f_i = f(t_i);
      if ((f_prev < 0.0) != (f_i < 0.0)) {
        double lo = t_prev, hi = t_i;
        while (hi - lo > 1e-10) {
          const double mid = 0.5 * (lo + hi);
          if ((f(mid) < 0.0) == (f_prev < 0.0)) lo = mid;
          else hi = mid;
        }
        const double t_star = 0.5 * (lo + hi);
        const Classification before = classify(left, right, std::max(t_star - kEps, 0.0), p);
        const Classification after = classify(left, right, t_star + kEps, p);
        if (before.region != after.region) {
          events.push_back({t_star, before.region, after.region, kind});
        }
      }
      t_prev = t_i;
      f_prev = f_i;
    }
  }
  std::sort(events.begin(), events.end(),
            [](const CrossingEvent& a, const CrossingEvent& b) {
              return a.t_star < b.t_star;
            });
  return events;
}

// Rasterizes classify over a (v,w) rectangle at time t: rows "v,w,label".
inline void region_raster(std::ostream& os, const TransState& left, double t,
                          const PhysParams& p, double v_min, double v_max,
                          double w_min, double w_max, int nv, int nw) {
  if (v_min <= 0.0 || v_max <= v_min || nv < 2 || nw < 2)
    throw std::invalid_argument("region_raster: bad grid");
  char buf[96];
  for (int i = 0; i < nv; ++i) {
    const double v = v_min + (v_max - v_min) * i / (nv - 1);
    for (int j = 0; j < nw; ++j) {
      const double w = w_min + (w_max - w_min) * j / (nw - 1);
      const Classification c = classify(left, TransState{v, w}, t, p);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s\n", v, w,
                    region_name(c.region));
      os << buf;
    }
  }
}

}  // namespace vgcg
