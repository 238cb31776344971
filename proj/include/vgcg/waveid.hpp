#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vgcg/llf.hpp"
#include "vgcg/regions.hpp"
#include "vgcg/wavecurves.hpp"

// Classifies the wave structure of a finite-volume run and compares it
// with the analytic prediction.  Identification is calibrated on the
// solver's first-order profiles: a 1-shock keeps a fixed-width layer with
// w flat across it, a 2-contact carries a joint (v,w) jump whose layer
// widens diffusively, and a 2-rarefaction zone stretches linearly, so its
// width grows by more than the fanning ratio between the middle and final
// snapshots.
namespace vgcg {

struct WaveIdConfig {
  double plateau_rtol = 1e-3;  // cell-to-cell activity threshold
  double fanning_ratio = 1.5;  // mid-to-final core growth that marks R2
  double w_flat_tol = 1e-3;    // w-jump below this (relative) is "flat"
  double spike_factor = 3.0;   // max v above this multiple of the plateaus
  int merge_gap = 6;           // quiet cells that still bridge one zone
  int min_plateau_cells = 12;
};

enum class WaveTag { S1, C2, R2, Delta };

inline const char* wave_name(WaveTag t) {
  switch (t) {
    case WaveTag::S1: return "S1";
    case WaveTag::C2: return "C2";
    case WaveTag::R2: return "R2";
    case WaveTag::Delta: return "delta";
  }
  return "?";
}

struct WaveSegment {
  WaveTag tag;
  int lo = 0, hi = 0;          // final-snapshot cell range
  int width_mid = 0;           // core width at the middle snapshot
  int width_final = 0;         // core width at the final snapshot
  double growth_ratio = 1.0;
  double w_jump = 0.0;
  double speed = 0.0;          // center drift between middle and final
};

struct WaveReport {
  std::vector<WaveTag> sequence;
  std::vector<WaveSegment> segments;
  bool has_middle_plateau = false;
  TransState middle_measured{0.0, 0.0};
  bool match_defined = true;   // false when the prediction is descriptive only
  bool match = false;
  std::string detail;
};

namespace waveid_detail {

struct RawWave {
  int lo, hi;          // active cell range
  double v_in, v_out;  // states just outside the wave
  double w_in, w_out;
  int core;            // 10..90% width of the dominant transition
  double center;       // cell index of the mid-transition
  bool w_flat;
  bool has_spike;
};

// Width and center of the central 10..90% portion of f's transition.
inline void core_of(const std::vector<double>& f, int lo, int hi, double f_in,
                    double f_out, int* width, double* center) {
  const double jump = f_out - f_in;
  if (std::abs(jump) < 1e-300) {
    *width = 0;
    *center = 0.5 * (lo + hi);
    return;
  }
  int first = hi, last = lo;
  for (int i = lo; i <= hi; ++i) {
    if ((f[i] - f_in) / jump > 0.1) {
      first = i;
      break;
    }
  }
  for (int i = hi; i >= lo; --i) {
    if ((f[i] - f_in) / jump < 0.9) {
      last = i;
      break;
    }
  }
  *width = std::max(1, last - first + 1);
  double mid = 0.5 * (lo + hi);
  for (int i = lo; i < hi; ++i) {
    const double a = (f[i] - f_in) / jump;
    const double b = (f[i + 1] - f_in) / jump;
    if (a <= 0.5 && b > 0.5) {
      mid = i + (0.5 - a) / (b - a);
      break;
    }
  }
  *center = mid;
}

inline std::vector<RawWave> waves_of(const Snapshot& s,
                                     const WaveIdConfig& cfg,
                                     double spike_level) {
  const int n = static_cast<int>(s.v.size());
  std::vector<char> act(n, 0);
  for (int i = 0; i + 1 < n; ++i) {
    const double dv = std::abs(s.v[i + 1] - s.v[i]);
    const double dw = std::abs(s.w[i + 1] - s.w[i]);
    if (dv > cfg.plateau_rtol * (1.0 + std::abs(s.v[i])) ||
        dw > cfg.plateau_rtol * (1.0 + std::abs(s.w[i])))
      act[i] = 1;
  }
  // Active zones, bridging short quiet runs.
  struct Zone {
    int lo, hi;
  };
  std::vector<Zone> zones;
  int i = 0;
  while (i < n) {
    if (!act[i]) {
      ++i;
      continue;
    }
    int last = i, j = i, quiet = 0;
    while (j + 1 < n) {
      ++j;
      if (act[j]) {
        last = j;
        quiet = 0;
      } else if (++quiet > cfg.merge_gap) {
        break;
      }
    }
    zones.push_back({i, last + 1});
    i = last + 2;
  }

  std::vector<RawWave> out;
  auto emit = [&](int lo, int hi, double vi, double vo, double wi, double wo) {
    RawWave w;
    w.lo = lo;
    w.hi = hi;
    w.v_in = vi;
    w.v_out = vo;
    w.w_in = wi;
    w.w_out = wo;
    w.w_flat = std::abs(wo - wi) <=
               cfg.w_flat_tol * (1.0 + std::max(std::abs(wi), std::abs(wo)));
    w.has_spike = false;
    for (int c = lo; c <= hi; ++c) {
      if (s.v[c] > spike_level) w.has_spike = true;
    }
    // Dominant field: the one with the larger relative jump, unless a
    // spike hides the net v-jump.
    const double rv = std::abs(vo - vi) / (1.0 + std::max(vi, vo));
    const double rw =
        std::abs(wo - wi) / (1.0 + std::max(std::abs(wi), std::abs(wo)));
    if (w.has_spike) {
      core_of(s.w, lo, hi, wi, wo, &w.core, &w.center);
      if (w.core == 0) core_of(s.v, lo, hi, vi, vo, &w.core, &w.center);
    } else if (rv >= rw) {
      core_of(s.v, lo, hi, vi, vo, &w.core, &w.center);
    } else {
      core_of(s.w, lo, hi, wi, wo, &w.core, &w.center);
    }
    out.push_back(w);
  };

  for (const Zone& z : zones) {
    const int in = std::max(0, z.lo - 2);
    const int outi = std::min(n - 1, z.hi + 2);
    const double vi = s.v[in], vo = s.v[outi];
    const double wi = s.w[in], wo = s.w[outi];
    const bool flat =
        std::abs(wo - wi) <=
        cfg.w_flat_tol * (1.0 + std::max(std::abs(wi), std::abs(wo)));
    bool spike = false;
    for (int c = z.lo; c <= z.hi; ++c) {
      if (s.v[c] > spike_level) spike = true;
    }
    if (flat || spike) {
      emit(z.lo, z.hi, vi, vo, wi, wo);
      continue;
    }
    // Joint jump: split off a leading v-only stretch when the w-transition
    // is concentrated at the tail of the zone (a rarefaction running into
    // its contact).
    int wc_width;
    double wc_center;
    core_of(s.w, z.lo, z.hi, wi, wo, &wc_width, &wc_center);
    int a = z.lo;
    const double jump = wo - wi;
    for (int c = z.lo; c <= z.hi; ++c) {
      if ((s.w[c] - wi) / jump > 0.1) {
        a = c;
        break;
      }
    }
    const int lead = a - z.lo;
    if (lead >= std::max(8, wc_width)) {
      const int cut = a - wc_width / 4 - 1;
      emit(z.lo, cut, vi, s.v[cut + 1], wi, s.w[cut + 1]);
      emit(cut + 1, z.hi, s.v[cut + 1], vo, s.w[cut + 1], wo);
    } else {
      emit(z.lo, z.hi, vi, vo, wi, wo);
    }
  }
  return out;
}

inline bool nearly_constant(const Snapshot& s, double rtol) {
  double vmin = s.v[0], vmax = s.v[0], wmin = s.w[0], wmax = s.w[0];
  for (size_t i = 0; i < s.v.size(); ++i) {
    vmin = std::min(vmin, s.v[i]);
    vmax = std::max(vmax, s.v[i]);
    wmin = std::min(wmin, s.w[i]);
    wmax = std::max(wmax, s.w[i]);
  }
  return (vmax - vmin) <= rtol * (1.0 + std::abs(vmax)) &&
         (wmax - wmin) <= rtol * (1.0 + std::abs(wmax));
}

}  // namespace waveid_detail

// Expected tag sequences for each predicted form; empty list means the
// prediction is descriptive and no verdict is attached.
inline bool sequence_matches(const std::vector<WaveTag>& seq,
                             SolutionForm predicted, std::string* why) {
  using T = WaveTag;
  auto is = [&](std::initializer_list<T> want) {
    return seq == std::vector<T>(want);
  };
  switch (predicted) {
    case SolutionForm::Constant:
      *why = "constant data";
      return seq.empty();
    case SolutionForm::S1C2:
      return is({T::S1, T::C2});
    case SolutionForm::S1R2:
      // The 2-wave rides its own contact relation; the fanning signal can
      // stay under threshold, so a contact-looking second wave passes.
      *why = "second wave accepted as R2 or C2 (thin-fan ambiguity)";
      return is({T::S1, T::R2}) || is({T::S1, T::C2});
    case SolutionForm::R2C2:
      return is({T::R2, T::C2});
    case SolutionForm::R2C2orC2R2:
      *why = "either order accepted";
      return is({T::R2, T::C2}) || is({T::C2, T::R2}) || is({T::C2}) ||
             is({T::R2});
    case SolutionForm::DeltaOC:
      return seq.size() == 1 && seq[0] == T::Delta;
    default:
      return false;
  }
}

inline WaveReport classify_profile(const RunResult& result,
                                   SolutionForm predicted,
                                   const RiemannProblem& prob,
                                   const PhysParams& /*params*/,
                                   WaveIdConfig cfg = {}) {
  if (result.snapshots.size() < 3)
    throw std::invalid_argument("classify_profile: need >= 3 snapshots");
  WaveReport rep;
  const Snapshot& fin = result.snapshots.back();
  const Snapshot& mid = result.snapshots[result.snapshots.size() / 2];

  if (waveid_detail::nearly_constant(fin, cfg.plateau_rtol)) {
    rep.match = (predicted == SolutionForm::Constant);
    rep.detail = "constant profile";
    return rep;
  }

  const double plateau_v = std::max(prob.left.v, prob.right.v);
  const double spike_level = cfg.spike_factor * plateau_v;
  const DeltaDetection delta = detect_delta(result);

  auto fw = waveid_detail::waves_of(fin, cfg, spike_level);
  auto mw = waveid_detail::waves_of(mid, cfg, spike_level);
  if (fw.empty()) {
    rep.match = false;
    rep.match_defined = (predicted != SolutionForm::DeltaCombo);
    rep.detail = "no discernible structure";
    return rep;
  }

  const double dt = fin.t - mid.t;
  for (size_t i = 0; i < fw.size(); ++i) {
    const auto& w = fw[i];
    WaveSegment seg;
    seg.lo = w.lo;
    seg.hi = w.hi;
    seg.width_final = w.core;
    seg.w_jump = w.w_out - w.w_in;
    // Match the middle-snapshot wave by order when counts agree, else by
    // nearest center.
    const waveid_detail::RawWave* m = nullptr;
    if (mw.size() == fw.size()) {
      m = &mw[i];
    } else if (!mw.empty()) {
      size_t best = 0;
      double bestd = 1e300;
      for (size_t j = 0; j < mw.size(); ++j) {
        const double d = std::abs(mw[j].center - w.center);
        if (d < bestd) {
          bestd = d;
          best = j;
        }
      }
      m = &mw[best];
    }
    if (m != nullptr) {
      seg.width_mid = m->core;
      seg.growth_ratio =
          double(std::max(seg.width_final, 1)) / std::max(seg.width_mid, 1);
      // cells per unit time; callers scale by dx for a physical speed
      seg.speed = dt > 0.0 ? (w.center - m->center) / dt : 0.0;
    }
    if (w.has_spike && delta.is_delta) {
      seg.tag = WaveTag::Delta;
    } else if (w.w_flat) {
      seg.tag = seg.growth_ratio >= cfg.fanning_ratio ? WaveTag::R2
                                                      : WaveTag::S1;
    } else {
      seg.tag = seg.growth_ratio >= cfg.fanning_ratio ? WaveTag::R2
                                                      : WaveTag::C2;
    }
    rep.segments.push_back(seg);
    rep.sequence.push_back(seg.tag);
  }

  // Longest interior quiet run between the first and last wave.
  if (rep.segments.size() >= 2) {
    int best_lo = 0, best_len = 0;
    for (size_t i = 0; i + 1 < rep.segments.size(); ++i) {
      const int lo = rep.segments[i].hi + 1;
      const int hi = rep.segments[i + 1].lo - 1;
      if (hi - lo + 1 > best_len) {
        best_len = hi - lo + 1;
        best_lo = lo;
      }
    }
    if (best_len >= cfg.min_plateau_cells) {
      std::vector<double> vs(fin.v.begin() + best_lo,
                             fin.v.begin() + best_lo + best_len);
      std::vector<double> ws(fin.w.begin() + best_lo,
                             fin.w.begin() + best_lo + best_len);
      std::nth_element(vs.begin(), vs.begin() + best_len / 2, vs.end());
      std::nth_element(ws.begin(), ws.begin() + best_len / 2, ws.end());
      rep.has_middle_plateau = true;
      rep.middle_measured = {vs[best_len / 2], ws[best_len / 2]};
    }
  }

  if (predicted == SolutionForm::DeltaCombo) {
    // Wave order near C2 is unsettled for the combination regions; the
    // report stays descriptive.
    rep.match_defined = false;
    rep.match = false;
    rep.detail = "delta-combination region: descriptive report only";
  } else {
    std::string why;
    rep.match = sequence_matches(rep.sequence, predicted, &why);
    rep.detail = why;
  }
  return rep;
}

// Largest relative error of the measured middle plateau against the
// analytic middle state at the final snapshot time.
inline double middle_state_error(const RunResult& result,
                                 const RiemannProblem& prob,
                                 const PhysParams& p, WaveIdConfig cfg = {}) {
  WaveReport rep = classify_profile(result, SolutionForm::Unknown, prob, p, cfg);
  if (!rep.has_middle_plateau)
    throw std::domain_error("middle_state_error: no middle plateau detected");
  const TransState m =
      middle_state(prob.left, prob.right, result.snapshots.back().t, p);
  const double ev = std::abs(rep.middle_measured.v - m.v) / std::abs(m.v);
  const double ew =
      std::abs(rep.middle_measured.w - m.w) / (1.0 + std::abs(m.w));
  return std::max(ev, ew);
}

inline void export_report(std::ostream& os, const WaveReport& rep,
                          double x_min, double dx) {
  os << "sequence:";
  for (WaveTag t : rep.sequence) os << ' ' << wave_name(t);
  os << '\n';
  char buf[256];
  for (const WaveSegment& s : rep.segments) {
    std::snprintf(buf, sizeof(buf),
                  "wave %s cells [%d, %d] x [%.6g, %.6g] core %d -> %d "
                  "growth %.3f w_jump %.6g speed %.6g\n",
                  wave_name(s.tag), s.lo, s.hi, x_min + (s.lo + 0.5) * dx,
                  x_min + (s.hi + 0.5) * dx, s.width_mid, s.width_final,
                  s.growth_ratio, s.w_jump, s.speed * dx);
    os << buf;
  }
  if (rep.has_middle_plateau) {
    std::snprintf(buf, sizeof(buf), "middle plateau v %.9g w %.9g\n",
                  rep.middle_measured.v, rep.middle_measured.w);
    os << buf;
  }
  if (rep.match_defined) {
    os << "match: " << (rep.match ? "yes" : "no");
  } else {
    os << "match: descriptive";
  }
  if (!rep.detail.empty()) os << " (" << rep.detail << ")";
  os << '\n';
}

}  // namespace vgcg
