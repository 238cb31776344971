#include <cmath>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "vgcg/regions.hpp"

namespace vgcg {
namespace {

PhysParams case1() { return make_params(-10, -2, 3, 0.01, 10); }
PhysParams case2() { return make_params(-10, -0.5, 3, -0.01, 10); }
PhysParams case3() { return make_params(-10, -2, 3, -0.01, 10); }
PhysParams case4() { return make_params(-10, -0.5, 3, 0.01, 10); }

const TransState kLeft{1.0, 3.0};

TEST(CaseOf, FourCasesAndSign) {
  EXPECT_EQ(case_of(case1()).id, 1);
  EXPECT_EQ(case_of(case1()).k_gamma1_sign, -1);
  EXPECT_EQ(case_of(case2()).id, 2);
  EXPECT_EQ(case_of(case2()).k_gamma1_sign, -1);
  EXPECT_EQ(case_of(case3()).id, 3);
  EXPECT_EQ(case_of(case3()).k_gamma1_sign, 1);
  EXPECT_EQ(case_of(case4()).id, 4);
  EXPECT_EQ(case_of(case4()).k_gamma1_sign, 1);
}

TEST(Classify, IdenticalStatesAreConstant) {
  const Classification c = classify(kLeft, kLeft, 0.3, case1());
  EXPECT_EQ(c.region, Region::OnBoundary);
  EXPECT_EQ(c.form, SolutionForm::Constant);
}

TEST(Classify, Case1WorkedExamples) {
  const PhysParams p = case1();
  // S_o(2,0) = -9.5 < 2 < C2(2,0) = 10.5.
  const Classification ix = classify(kLeft, TransState{2.0, 2.0}, 0.0, p);
  EXPECT_EQ(ix.region, Region::IX);
  EXPECT_EQ(ix.form, SolutionForm::DeltaCombo);

  const Classification v = classify(kLeft, TransState{2.0, -12.0}, 0.0, p);
  EXPECT_EQ(v.region, Region::V);
  EXPECT_EQ(v.form, SolutionForm::DeltaOC);

  const Classification vi = classify(kLeft, TransState{0.5, 6.0}, 0.0, p);
  EXPECT_EQ(vi.region, Region::VI);
  EXPECT_EQ(vi.form, SolutionForm::S1C2);

  // Between R2 (= C2 at t = 0) and S1.
  const Classification vii = classify(kLeft, TransState{0.5, 2.0}, 0.0, p);
  EXPECT_EQ(vii.region, Region::VII);
  EXPECT_EQ(vii.form, SolutionForm::S1R2);

  // Above C2 on the v > v_L flank: unlabeled in the diagrams.
  const Classification un = classify(kLeft, TransState{2.0, 12.0}, 0.0, p);
  EXPECT_EQ(un.region, Region::Unclassified);
  EXPECT_EQ(un.form, SolutionForm::Unknown);
}

TEST(Classify, Case2Sectors) {
  const PhysParams p = case2();
  EXPECT_EQ(classify(kLeft, TransState{0.5, 4.0}, 0.0, p).region, Region::I);
  EXPECT_EQ(classify(kLeft, TransState{0.5, 4.0}, 0.0, p).form,
            SolutionForm::R2C2);
  // C2(2,0) = 5.93, S1 = 3, S_delta(2,0) = -4.07.
  EXPECT_EQ(classify(kLeft, TransState{2.0, 4.0}, 0.0, p).region, Region::III);
  EXPECT_EQ(classify(kLeft, TransState{2.0, 0.0}, 0.0, p).region, Region::IV);
  EXPECT_EQ(classify(kLeft, TransState{2.0, -12.0}, 0.0, p).region, Region::V);
  EXPECT_EQ(classify(kLeft, TransState{2.0, -12.0}, 0.0, p).form,
            SolutionForm::DeltaOC);
}

TEST(Classify, Case4ThinBandBetweenC2AndR2) {
  const PhysParams p = case4();
  const double t = 1.0;
  const double c2 = curve_w(CurveKind::C2, kLeft, 2.0, t, p);
  const double r2 = r2_w(kLeft, 2.0, t, 0.0, p);
  ASSERT_GT(std::abs(c2 - r2), 1e-4);
  const double mid = 0.5 * (c2 + r2);
  const Classification c = classify(kLeft, TransState{2.0, mid}, t, p);
  EXPECT_EQ(c.region, Region::II);
  EXPECT_EQ(c.form, SolutionForm::R2C2orC2R2);
}

TEST(Classify, BoundaryDetection) {
  const PhysParams p = case1();
  const Classification on_s1 = classify(kLeft, TransState{0.5, 3.0}, 0.0, p);
  EXPECT_EQ(on_s1.region, Region::OnBoundary);
  ASSERT_TRUE(on_s1.boundary.has_value());
  EXPECT_EQ(*on_s1.boundary, CurveKind::S1);

  const double so = curve_w(CurveKind::SOver, kLeft, 2.0, 0.4, p);
  const Classification on_so =
      classify(kLeft, TransState{2.0, so + 5e-10}, 0.4, p);
  EXPECT_EQ(on_so.region, Region::OnBoundary);
}

TEST(Classify, LocallyConstantAwayFromBoundaries) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> vv(0.2, 4.0), ww(-20.0, 15.0),
      tt(0.0, 1.5);
  for (const PhysParams& p : {case1(), case2(), case3(), case4()}) {
    for (int i = 0; i < 300; ++i) {
      const TransState right{vv(rng), ww(rng)};
      const double t = tt(rng);
      // Keep a margin from every decision curve.
      const double margin = 2e-6;
      bool near = std::abs(right.v - kLeft.v) < 1e-3;
      for (CurveKind k : {CurveKind::S1, CurveKind::C2, CurveKind::SDelta,
                          CurveKind::SOver}) {
        near |= std::abs(curve_w(k, kLeft, right.v, t, p) - right.w) < margin;
      }
      near |= std::abs(r2_w(kLeft, right.v, t, 0.0, p) - right.w) < margin;
      if (near) continue;
      const Region base = classify(kLeft, right, t, p).region;
      EXPECT_EQ(classify(kLeft, {right.v, right.w + 1e-6}, t, p).region, base);
      EXPECT_EQ(classify(kLeft, {right.v, right.w - 1e-6}, t, p).region, base);
    }
  }
}

TEST(Asymptotic, WorkedExamples) {
  const Classification a =
      asymptotic_region(kLeft, TransState{2.0, 2.0}, case1());
  EXPECT_EQ(a.region, Region::V);
  EXPECT_EQ(a.form, SolutionForm::DeltaOC);

  const Classification b =
      asymptotic_region(kLeft, TransState{2.0, 4.0}, case2());
  EXPECT_EQ(b.region, Region::I);
  EXPECT_EQ(b.form, SolutionForm::R2C2);

  const Classification c =
      asymptotic_region(kLeft, TransState{0.5, 4.0}, case4());
  EXPECT_EQ(c.region, Region::I);

  const Classification d =
      asymptotic_region(kLeft, TransState{2.0, 2.0}, case3());
  EXPECT_EQ(d.region, Region::IX);
}

// For k(gamma+1) < 0 every curve ordinate is within
// |coef| e^{k t (gamma+1)} of its limit; sampling away from w_L by a wide
// margin makes the late-time label match the limit table.
TEST(Asymptotic, LateTimeClassificationMatchesLimits) {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> vv(0.3, 3.0), dw(0.5, 8.0);
  for (const PhysParams& p : {case1(), case2()}) {
    const double t_late = 10.0 / std::abs(p.k * (p.gamma + 1.0));
    for (int i = 0; i < 200; ++i) {
      const bool above = (i % 2 == 0);
      // Above w_L only on the flank the diagrams label.
      const double v = above ? vv(rng) * 0.3 : vv(rng);
      const TransState right{v, kLeft.w + (above ? dw(rng) : -dw(rng))};
      if (std::abs(right.v - kLeft.v) < 1e-3) continue;
      const Classification lim = asymptotic_region(kLeft, right, p);
      const Classification late = classify(kLeft, right, t_late, p);
      EXPECT_EQ(late.region, lim.region)
          << "case " << case_of(p).id << " v=" << right.v << " w=" << right.w;
      EXPECT_EQ(late.form, lim.form);
    }
  }
}

TEST(CrossingTimes, RegionShiftWorkedExample) {
  const PhysParams p = make_params(-10, -2, 3, 2, 10);
  const auto events = crossing_times(kLeft, TransState{2.0, 2.0}, p, 3.0);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_NEAR(events[0].t_star, 0.5 * std::log(12.5), 1e-8);
  EXPECT_EQ(events[0].from_label, Region::IX);
  EXPECT_EQ(events[0].to_label, Region::V);
  EXPECT_EQ(events[0].boundary, CurveKind::SOver);

  // classify flips across t_star.
  const double ts = events[0].t_star;
  EXPECT_EQ(classify(kLeft, TransState{2.0, 2.0}, ts - 1e-6, p).region,
            Region::IX);
  EXPECT_EQ(classify(kLeft, TransState{2.0, 2.0}, ts + 1e-6, p).region,
            Region::V);
}

TEST(CrossingTimes, NoEventsOnS1OrForIdenticalStates) {
  const PhysParams p = make_params(-10, -2, 3, 2, 10);
  // w = w_L exactly: S1 is time-independent, no crossing is ever reported
  // for that boundary.
  const auto events = crossing_times(kLeft, TransState{0.5, 3.0}, p, 3.0);
  for (const auto& e : events) EXPECT_NE(e.boundary, CurveKind::S1);
  EXPECT_TRUE(crossing_times(kLeft, kLeft, p, 3.0).empty());
}

TEST(CrossingTimes, EventsConsistentWithClassify) {
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> vv(0.3, 3.0), ww(-15.0, 10.0);
  const PhysParams p = make_params(-10, -2, 3, 2, 10);
  for (int i = 0; i < 50; ++i) {
    const TransState right{vv(rng), ww(rng)};
    for (const auto& e : crossing_times(kLeft, right, p, 3.0)) {
      EXPECT_EQ(classify(kLeft, right, e.t_star - 1e-6, p).region,
                e.from_label);
      EXPECT_EQ(classify(kLeft, right, e.t_star + 1e-6, p).region,
                e.to_label);
      EXPECT_NE(e.from_label, e.to_label);
    }
  }
}

// Region V sits below IX (cases 1/3, S_o boundary) and below IV (cases
// 2/4, S_delta boundary) at every time.
TEST(Regions, VLiesBelowTheDeltaBoundary) {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> vv(1.1, 4.0), tt(0.0, 1.0);
  for (const PhysParams& p : {case1(), case2(), case3(), case4()}) {
    const bool steep = p.gamma < -1.0;
    for (int i = 0; i < 100; ++i) {
      const double v = vv(rng), t = tt(rng);
      const CurveKind bound = steep ? CurveKind::SOver : CurveKind::SDelta;
      const double wb = curve_w(bound, kLeft, v, t, p);
      EXPECT_EQ(classify(kLeft, TransState{v, wb - 0.5}, t, p).region,
                Region::V);
      const Region above = classify(kLeft, TransState{v, wb + 1e-3}, t, p).region;
      EXPECT_NE(above, Region::V);
    }
  }
}

TEST(RegionRaster, EmitsLabeledGrid) {
  std::ostringstream os;
  region_raster(os, kLeft, 0.0, case1(), 0.5, 3.0, -12.0, 5.0, 6, 6);
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 36);
  EXPECT_NE(s.find(",IX"), std::string::npos);
  EXPECT_NE(s.find(",V"), std::string::npos);
}

}  // namespace
}  // namespace vgcg
