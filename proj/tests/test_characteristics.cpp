#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "vgcg/characteristics.hpp"

namespace vgcg {
namespace {

PhysParams p1() { return make_params(-10, -2, 3, 0.01, 10); }

TEST(Eigen, WorkedValuesAtTimeZero) {
  const EigenData en = eigen(TransState{1.0, 0.0}, 0.0, p1());
  EXPECT_NEAR(en.lambda1, -10.0, 1e-12);
  EXPECT_NEAR(en.lambda2, 10.0, 1e-12);

  const EigenData ee =
      eigen(TransState{1.0, 0.0}, 0.0, make_params(-10, -2, 4, 4, 2));
  EXPECT_NEAR(ee.lambda1, -10.0, 1e-12);
  EXPECT_NEAR(ee.lambda2, 10.0, 1e-12);
}

TEST(Eigen, SecondEigenvectorMatchesBothPrintedForms) {
  const PhysParams p = p1();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> vv(0.1, 8.0), tt(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double v = vv(rng), t = tt(rng);
    const EigenData e = eigen(TransState{v, 0.5}, t, p);
    const double common = p.A * p.gamma * std::pow(v, p.gamma - 1.0) *
                          std::exp(p.k * t * (p.gamma + 1.0));
    const double printed =
        p.A * p.gamma / (v * v) * std::pow(v * std::exp(p.k * t), p.gamma + 1.0);
    EXPECT_NEAR(e.r2[1], common, 1e-12 * (1.0 + std::abs(common)));
    EXPECT_NEAR(e.r2[1], printed, 1e-12 * (1.0 + std::abs(printed)));
    EXPECT_DOUBLE_EQ(e.r1[0], 1.0);
    EXPECT_DOUBLE_EQ(e.r1[1], 0.0);
  }
}

TEST(Eigen, OrderingOverRandomAdmissibleInputs) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> aa(-500.0, -10.0), gg(-8.0, -0.01),
      vv(0.05, 10.0), ww(-10.0, 10.0), tt(0.0, 3.0), kk(0.05, 0.5),
      ee(0.1, 2.0);
  for (int i = 0; i < 1000; ++i) {
    double gamma = gg(rng);
    if (std::abs(gamma + 1.0) < 1e-3) gamma = -1.5;
    const double k = (i % 4 < 2) ? kk(rng) : -kk(rng);
    const bool same = (i % 2 == 0);
    const PhysParams p =
        make_params(aa(rng), gamma, same ? k : k + ee(rng), k, 10.0);
    const EigenData e = eigen(TransState{vv(rng), ww(rng)}, tt(rng), p);
    EXPECT_LT(e.lambda1, e.lambda2);
  }
}

TEST(FieldCharacter, ClosedFormsAndFiniteDifferences) {
  const PhysParams p = p1();
  // gn1 = -A gamma (gamma+1) v^{gamma-1}: at (1,0), t=0 this is +20, as the
  // finite-difference oracle on lambda1 = w - A(gamma+1)v^gamma confirms.
  const FieldCharacter fc = field_character(TransState{1.0, 0.0}, 0.0, p);
  EXPECT_NEAR(fc.gn1_closed, 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(fc.ld2_closed, 0.0);
  EXPECT_NEAR(fc.gn1_fd, fc.gn1_closed, 1e-5 * (1.0 + std::abs(fc.gn1_closed)));
  const double lam2 = eigen(TransState{1.0, 0.0}, 0.0, p).lambda2;
  EXPECT_LE(std::abs(fc.ld2_fd), 1e-6 * (1.0 + std::abs(lam2)));
}

TEST(FieldCharacter, SampledDegeneracyAndNonlinearity) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> vv(0.2, 5.0), ww(-5.0, 5.0),
      tt(0.0, 2.0), ts(0.0, 0.4);
  for (const PhysParams& p : {p1(), make_params(-10, -0.5, 3, -0.01, 10),
                              make_params(-10, -4, 4, 4, 2)}) {
    // Keep |k t (gamma+1)| small enough that the v-dependence of lambda1
    // stays resolvable in double precision.
    const bool fast = std::abs(p.k * (p.gamma + 1.0)) > 1.0;
    for (int i = 0; i < 100; ++i) {
      const TransState s{vv(rng), ww(rng)};
      const double t = fast ? ts(rng) : tt(rng);
      const FieldCharacter fc = field_character(s, t, p);
      const double lam2 = eigen(s, t, p).lambda2;
      EXPECT_LE(std::abs(fc.ld2_fd), 1e-6 * (1.0 + std::abs(lam2)));
      EXPECT_GT(std::abs(fc.gn1_closed), 0.0);
      EXPECT_NEAR(fc.gn1_fd, fc.gn1_closed,
                  1e-4 * (1.0 + std::abs(fc.gn1_closed)));
    }
  }
}

TEST(Lax, WorkedExamples) {
  EXPECT_TRUE(lax_admissible_1shock(1.0, 0.5, -2.0));
  EXPECT_NEAR(lax_h1(1.0, 0.5, -2.0), 0.5, 1e-13);
  EXPECT_NEAR(lax_h2(1.0, 0.5, -2.0), -1.0, 1e-13);

  EXPECT_TRUE(lax_admissible_1shock(1.0, 4.0, -0.5));
  EXPECT_NEAR(lax_h1(1.0, 4.0, -0.5), -0.5, 1e-13);
  EXPECT_NEAR(lax_h2(1.0, 4.0, -0.5), 0.25, 1e-13);

  EXPECT_FALSE(lax_admissible_1shock(1.0, 2.0, -2.0));
  EXPECT_FALSE(lax_admissible_1shock(1.0, 0.5, -0.5));
}

TEST(Lax, DegenerateShockRejected) {
  EXPECT_THROW(lax_admissible_1shock(1.0, 1.0, -2.0), std::domain_error);
  EXPECT_THROW(lax_admissible_1shock(1.0, 1.0 + 1e-14, -2.0),
               std::domain_error);
}

TEST(Lax, SignRuleAgreesOnGrid) {
  for (double gamma : {-2.0, -0.5}) {
    for (int i = 1; i <= 20; ++i) {
      for (int j = 1; j <= 20; ++j) {
        const double vm = 0.25 * i;
        const double v = 0.25 * j;
        if (std::abs(v - vm) < 1e-12) continue;
        // lax_admissible_1shock throws on any h1/h2 disagreement.
        const bool flag = lax_admissible_1shock(vm, v, gamma);
        if (gamma > -1.0) EXPECT_EQ(flag, v > vm);
        else EXPECT_EQ(flag, v < vm);
      }
    }
  }
}

TEST(MaxWaveSpeed, BoundAndMonotonicity) {
  const PhysParams p = p1();
  std::vector<TransState> one{{1.0, 0.0}};
  EXPECT_NEAR(max_wave_speed(one, 0.0, p), 10.0, 1e-12);

  std::vector<TransState> two{{1.0, 0.0}, {2.0, 5.0}};
  EXPECT_GE(max_wave_speed(two, 0.0, p), max_wave_speed(one, 0.0, p));

  std::vector<TransState> dup{{1.0, 0.0}, {1.0, 0.0}};
  EXPECT_DOUBLE_EQ(max_wave_speed(dup, 0.0, p), max_wave_speed(one, 0.0, p));

  std::vector<TransState> none;
  EXPECT_THROW(max_wave_speed(none, 0.0, p), std::invalid_argument);
}

}  // namespace
}  // namespace vgcg
