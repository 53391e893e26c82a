#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "swhomog/coefficients.hpp"
#include "swhomog/identities.hpp"

using namespace swhomog;

namespace {

PeriodicProfile two_level() { return PiecewiseConstant{{0.5, 1.0}, {1.0, 0.3}}; }
PeriodicProfile sine_profile() { return Sinusoidal{0.6, -0.4, 0.0}; }
constexpr double kG = 9.81;

void expect_rel(double got, double want, double rtol, const char* what) {
  EXPECT_NEAR(got, want, rtol * std::max(1e-30, std::abs(want))) << what;
}

}  // namespace

TEST(Coefficients, TwoLevelExactValues) {
  const HomogenizedCoefficients c = compute(two_level(), kG);
  EXPECT_DOUBLE_EQ(c.c * c.c * c.moment[1], kG);
  expect_rel(c.c, 2.1278374721045563, 1e-14, "c");
  expect_rel(c.mu, 49.0 / 8112.0, 1e-13, "mu");
  expect_rel(c.gamma, 49.0 / 1872.0, 1e-13, "gamma");
  expect_rel(c.nu1, 49.0 / 324480.0, 1e-13, "nu1");
  expect_rel(c.nu2, 49.0 / 108160.0, 1e-13, "nu2");
  expect_rel(c.stability_margin(), 5.675565505020443e-4, 1e-12, "margin");

  const double alpha[10] = {0, -19.48849441157133, -16.94444444444444, -0.4460628129267182,
                            69.26543209876543, 68.79141590384194, 132.4074074074074,
                            0.6862504814257204, -1.858595053861326e-2, 1.688223840590704e-2};
  for (int i = 1; i <= 9; ++i) expect_rel(c.alpha[i], alpha[i], 1e-12, "alpha");

  expect_rel(c.zeta13, 9.329114617576156e-2, 1e-12, "zeta13");
  expect_rel(c.zeta14, 1.463127328511944e-1, 1e-12, "zeta14");
  expect_rel(c.zeta22, 1.134259259259259e-1, 1e-12, "zeta22");
  expect_rel(c.zeta212, 7.315636642559720e-2, 1e-12, "zeta212");
  expect_rel(c.zeta122, 1.134259259259259e-1, 1e-12, "zeta122");
  expect_rel(c.zeta311, 5.302158667543283e-2, 1e-12, "zeta311");

  ASSERT_TRUE(c.translation_even);
  const double beta[15] = {0, -46.13842171889516, -10.35710341967126, -727.5,
                           -98.33587126598793, 1.192757115000821, -2.145862364763139,
                           -4.099686770286539e-2, 1.764096615171945, -237.7094907542487,
                           -0.5003830333256823, -7.004282257468421e-2, 0.2692738868205414,
                           -0.1401094732910846, -0.3255003585567992};
  for (int i = 1; i <= 14; ++i) expect_rel(c.beta[i], beta[i], 1e-11, "beta");

  expect_rel(c.alpha_hat[4], 126.6837606837607, 1e-12, "ah4");
  expect_rel(c.alpha_hat[6], -227.1225071225071, 1e-12, "ah6");
  expect_rel(c.alpha_hat[8], 6.412152935821575e-2, 1e-12, "ah8");
  expect_rel(c.alpha_hat[9], 6.233441872950293e-2, 1e-12, "ah9");
  expect_rel(c.alpha_hat[10], -7.863286766336380e-4, 1e-11, "ah10");
  expect_rel(c.alpha_hat[11], 6.752895362362818e-2, 1e-12, "ah11");
}

TEST(Coefficients, SinusoidalValues) {
  const HomogenizedCoefficients c = compute(sine_profile(), kG);
  expect_rel(c.c, 2.094556127644850, 1e-13, "c");
  expect_rel(c.mu, 7.679939289908186e-3, 1e-12, "mu");
  expect_rel(c.gamma, 4.090468871992282e-2, 1e-12, "gamma");
  expect_rel(c.nu1, 2.333473980472604e-4, 1e-11, "nu1");
  expect_rel(c.nu2, 5.669464987764727e-4, 1e-11, "nu2");
  expect_rel(c.stability_margin(), 7.413124293270578e-4, 1e-11, "margin");

  const double alpha[10] = {0, -26.0, -27.68691769624719, -0.8944271909999163,
                            260.9605331475110, 126.0, 327.1184005574681, 2.683281572999749,
                            -3.572974170039651e-2, 2.303981786972456e-2};
  for (int i = 1; i <= 9; ++i) expect_rel(c.alpha[i], alpha[i], 1e-11, "alpha");

  expect_rel(c.zeta13, 0.1865059065577988, 1e-11, "zeta13");
  expect_rel(c.zeta14, 0.3741815196139300, 1e-11, "zeta14");
  expect_rel(c.zeta22, 0.2195779897961963, 1e-11, "zeta22");
  expect_rel(c.zeta212, 0.1145611657861905, 1e-11, "zeta212");
  expect_rel(c.zeta122, 0.2358837905433523, 1e-11, "zeta122");
  expect_rel(c.zeta311, 6.002063106825617e-2, 1e-11, "zeta311");

  ASSERT_TRUE(c.translation_even);
  const double beta[15] = {0, -362.7364300584419, -87.74330743709163, -2790.257181143482,
                           -566.4101011376341, 2.663750305458499, -4.435918127011536,
                           0.1445308182196078, 3.900883931136258, -626.0, -1.245299420312753,
                           -0.2041443334935072, 0.6225287631966394, -8.260241171809446e-2,
                           -0.6284353219423713};
  for (int i = 1; i <= 14; ++i) expect_rel(c.beta[i], beta[i], 1e-10, "beta");
}

TEST(Coefficients, TwoLevelClosedForm) {
  const PwcClosedForm cf = pwc_closed_form(1.0, 10.0 / 3.0);
  expect_rel(cf.mu, 49.0 / 8112.0, 1e-14, "mu");
  expect_rel(cf.nu1, 49.0 / 324480.0, 1e-14, "nu1");
  expect_rel(cf.nu2, 49.0 / 108160.0, 1e-14, "nu2");
  expect_rel(cf.stability_margin, 5.675565505020443e-4, 1e-13, "margin");

  const HomogenizedCoefficients c = compute(two_level(), kG);
  expect_rel(c.mu, cf.mu, 1e-12, "mu vs computed");
  expect_rel(c.nu1, cf.nu1, 1e-12, "nu1 vs computed");
  expect_rel(c.nu2, cf.nu2, 1e-12, "nu2 vs computed");

  for (auto [d1, d2] : {std::pair{2.0, 0.5}, std::pair{1.0, 9.0}}) {
    const PwcClosedForm f = pwc_closed_form(d1, d2);
    const PeriodicProfile p = PiecewiseConstant{{0.5, 1.0}, {1.0 / d1, 1.0 / d2}};
    const HomogenizedCoefficients cc = compute(p, kG);
    expect_rel(cc.mu, f.mu, 1e-12, "mu closed form");
    expect_rel(cc.nu1, f.nu1, 1e-12, "nu1 closed form");
    expect_rel(cc.nu2, f.nu2, 1e-12, "nu2 closed form");
    expect_rel(cc.stability_margin(), f.stability_margin, 1e-12, "margin closed form");
  }
  EXPECT_THROW(pwc_closed_form(-1.0, 2.0), InvalidInput);
}

TEST(Coefficients, GridRefinementStable) {
  const HomogenizedCoefficients a = compute(sine_profile(), kG, 512);
  const HomogenizedCoefficients b = compute(sine_profile(), kG, 1024);
  expect_rel(a.mu, b.mu, 1e-12, "mu");
  expect_rel(a.gamma, b.gamma, 1e-12, "gamma");
  expect_rel(a.nu1, b.nu1, 1e-10, "nu1");
  expect_rel(a.nu2, b.nu2, 1e-10, "nu2");
  for (int i = 1; i <= 9; ++i) expect_rel(a.alpha[i], b.alpha[i], 1e-11, "alpha");
  for (int i = 1; i <= 14; ++i) expect_rel(a.beta[i], b.beta[i], 1e-10, "beta");
}

TEST(Coefficients, ScaleInvarianceOfMu) {
  const HomogenizedCoefficients base = compute(two_level(), kG);
  for (double lam : {0.5, 2.0}) {
    const PeriodicProfile scaled = PiecewiseConstant{{0.5, 1.0}, {lam * 1.0, lam * 0.3}};
    const HomogenizedCoefficients c = compute(scaled, kG);
    expect_rel(c.mu, base.mu, 1e-13, "mu scale invariance");
  }
  const HomogenizedCoefficients sb = compute(sine_profile(), kG);
  const HomogenizedCoefficients sb2 = compute(Sinusoidal{1.2, -0.8, 0.0}, kG);
  expect_rel(sb2.mu, sb.mu, 1e-12, "mu scale invariance sine");
}

TEST(Coefficients, SignConditions) {
  for (const PeriodicProfile& p : {two_level(), sine_profile()}) {
    const HomogenizedCoefficients c = compute(p, kG);
    const SignReport r = sign_report(c);
    EXPECT_FALSE(r.degenerate_flat);
    EXPECT_TRUE(r.alpha1_negative);
    EXPECT_TRUE(r.alpha2_negative);
    EXPECT_TRUE(r.alpha3_nonpositive);
    EXPECT_TRUE(r.mu_positive);
    EXPECT_TRUE(r.margin_positive);
    EXPECT_TRUE(r.all_ok());
    EXPECT_GT(c.nu1, 0.0);
    EXPECT_GT(c.nu2, 0.0);
  }

  std::mt19937_64 rng(11);
  for (int t = 0; t < 4; ++t) {
    const CellGrid H = random_smooth_depth(rng, 256);
    const HomogenizedCoefficients c = compute(Sampled{H.v}, kG);
    const SignReport r = sign_report(c);
    EXPECT_TRUE(r.all_ok()) << "trial " << t;
  }
}

TEST(Coefficients, FlatBottomDegenerates) {
  const HomogenizedCoefficients c = compute(PiecewiseConstant{{1.0}, {0.7}}, kG);
  EXPECT_LT(std::abs(c.mu), 1e-28);
  EXPECT_LT(std::abs(c.gamma), 1e-28);
  EXPECT_LT(std::abs(c.nu1), 1e-28);
  EXPECT_LT(std::abs(c.nu2), 1e-28);
  const SignReport r = sign_report(c);
  EXPECT_TRUE(r.degenerate_flat);
  EXPECT_TRUE(r.all_ok());
  EXPECT_DOUBLE_EQ(c.c, std::sqrt(kG * 0.7));
}

TEST(Coefficients, TranslationEvenGating) {
  const PeriodicProfile skew = PiecewiseConstant{{0.3, 0.6, 1.0}, {1.0, 0.5, 0.8}};
  const HomogenizedCoefficients c = compute(skew, kG);
  EXPECT_FALSE(c.translation_even);
  for (int i = 1; i <= 14; ++i) EXPECT_EQ(c.beta[i], 0.0);
  EXPECT_LT(c.alpha[1], 0.0);
  EXPECT_GT(c.mu, 0.0);
}

TEST(Coefficients, InputValidation) {
  EXPECT_THROW(compute(two_level(), 0.0), InvalidInput);
  EXPECT_THROW(compute(two_level(), -9.81), InvalidInput);
  EXPECT_THROW(compute(Sinusoidal{0.4, 0.5, 0.0}, kG), InvalidInput);
}
