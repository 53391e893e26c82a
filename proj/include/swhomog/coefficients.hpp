#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "swhomog/cell_average.hpp"
#include "swhomog/cell_profile.hpp"
#include "swhomog/errors.hpp"

namespace swhomog {

/// Effective constants of the averaged system for one depth profile.
/// beta[1..14] are defined only for translation-even profiles; theta[j] =
/// <H^-j>/<H^-1>, theta_hat[j] = <H^-j>/<H^-1>^2.
struct HomogenizedCoefficients {
  double g = 0.0;
  double c = 0.0;
  double mu = 0.0, gamma = 0.0, nu1 = 0.0, nu2 = 0.0;
  std::array<double, 8> moment{};     // [k] = <H^-k>, k = 1..7
  std::array<double, 8> theta{};      // valid j = 2..7
  std::array<double, 8> theta_hat{};  // valid j = 2..7
  std::array<double, 10> alpha{};     // valid 1..9
  std::array<double, 12> alpha_hat{};  // valid indices 4, 6, 8, 9, 10, 11
  double zeta13 = 0.0, zeta14 = 0.0, zeta22 = 0.0;
  double zeta212 = 0.0, zeta122 = 0.0, zeta311 = 0.0;
  bool translation_even = false;
  std::array<double, 15> beta{};  // valid 1..14 when translation_even

  double stability_margin() const { return nu1 + nu2 - mu * mu; }
};

namespace detail {

struct BracketQuadratics {
  double b1b1, b1b2, p1bb1bb1, bb1bb1, b1b3, b1b4, b2b2, p2b1b2, p1b2b2, p3b1b1;
};

inline BracketQuadratics quadratics_exact(const PiecewiseConstant& p) {
  std::array<PiecewisePoly, 5> P;
  for (unsigned k = 1; k <= 4; ++k) P[k] = inverse_power_poly(p, k);
  std::array<PiecewisePoly, 5> B;
  for (unsigned k = 1; k <= 4; ++k) B[k] = bracket(P[k]);
  const PiecewisePoly BB1 = bracket(B[1]);
  auto pm = [](const PiecewisePoly& a, const PiecewisePoly& b) { return mean(multiply(a, b)); };
  auto pm3 = [](const PiecewisePoly& a, const PiecewisePoly& b, const PiecewisePoly& c) {
    return mean(multiply(multiply(a, b), c));
  };
  return {pm(B[1], B[1]), pm(B[1], B[2]), pm3(P[1], BB1, BB1), pm(BB1, BB1),
          pm(B[1], B[3]), pm(B[1], B[4]), pm(B[2], B[2]), pm3(P[2], B[1], B[2]),
          pm3(P[1], B[2], B[2]), pm3(P[3], B[1], B[1])};
}

inline BracketQuadratics quadratics_grid(const PeriodicProfile& prof, std::size_t n) {
  std::array<CellGrid, 5> P;
  for (unsigned k = 1; k <= 4; ++k) {
    P[k] = sample(prof, n);
    for (double& v : P[k].v) v = std::pow(v, -static_cast<double>(k));
  }
  std::array<CellGrid, 5> B;
  for (unsigned k = 1; k <= 4; ++k) B[k] = bracket(P[k]);
  const CellGrid BB1 = bracket(B[1]);
  return {product_mean({&B[1], &B[1]}), product_mean({&B[1], &B[2]}),
          product_mean({&P[1], &BB1, &BB1}), product_mean({&BB1, &BB1}),
          product_mean({&B[1], &B[3]}), product_mean({&B[1], &B[4]}),
          product_mean({&B[2], &B[2]}), product_mean({&P[2], &B[1], &B[2]}),
          product_mean({&P[1], &B[2], &B[2]}), product_mean({&P[3], &B[1], &B[1]})};
}

}  // namespace detail

/// Evaluate every coefficient from the profile. Piecewise-constant profiles go
/// through exact piecewise-polynomial integration; other profiles use the
/// n-point spectral cell grid (default 512).
inline HomogenizedCoefficients compute(const PeriodicProfile& profile, double g,
                                       std::size_t grid_n = 512) {
  validate(profile);
  if (!(g > 0.0)) throw InvalidInput("coefficients: g must be positive");

  HomogenizedCoefficients r;
  r.g = g;
  for (unsigned k = 1; k <= 7; ++k) r.moment[k] = moment(profile, k);
  const double m1 = r.moment[1], m2 = r.moment[2], m3 = r.moment[3], m4 = r.moment[4],
               m5 = r.moment[5];
  r.c = std::sqrt(g / m1);
  for (unsigned j = 2; j <= 7; ++j) {
    r.theta[j] = r.moment[j] / m1;
    r.theta_hat[j] = r.moment[j] / (m1 * m1);
  }

  const detail::BracketQuadratics q =
      std::holds_alternative<PiecewiseConstant>(profile)
          ? detail::quadratics_exact(std::get<PiecewiseConstant>(profile))
          : detail::quadratics_grid(profile, grid_n);

  r.mu = q.b1b1 / (m1 * m1);
  r.gamma = q.b1b2 / (m1 * m1);
  r.nu1 = q.p1bb1bb1 / (m1 * m1 * m1);
  r.nu2 = 3.0 * q.bb1bb1 / (m1 * m1);
  r.zeta13 = q.b1b3 / (m1 * m1);
  r.zeta14 = q.b1b4 / (m1 * m1 * m1);
  r.zeta22 = q.b2b2 / (m1 * m1);
  r.zeta212 = q.p2b1b2 / (m1 * m1 * m1);
  r.zeta122 = q.p1b2b2 / (m1 * m1 * m1);
  r.zeta311 = q.p3b1b1 / (m1 * m1 * m1);

  r.alpha[1] = 2.0 * (m2 * m2 - 2.0 * m3 * m1) / (m1 * m1);
  r.alpha[2] = (3.0 * m2 * m2 - 2.0 * m1 * m3 - 3.0 * m4) / (2.0 * m1 * m1);
  r.alpha[3] = (m2 * m2 - m3 * m1) / (m1 * m1 * m1);
  r.alpha[4] = (3.0 * m2 * m2 * m2 - 4.0 * m1 * m2 * m3 - 3.0 * m2 * m4 + 4.0 * m1 * m5) / (m1 * m1);
  r.alpha[5] = (2.0 * m2 * m2 * m2 - 6.0 * m1 * m2 * m3 + 6.0 * m1 * m1 * m4) / (m1 * m1 * m1);
  r.alpha[6] = (3.0 * m2 * m2 * m2 - 7.0 * m1 * m2 * m3 + 3.0 * m1 * m1 * m4 - 3.0 * m2 * m4 +
                6.0 * m1 * m5) /
               (m1 * m1 * m1);
  r.alpha[7] = (m2 * m2 * m2 - 2.0 * m1 * m2 * m3 + m1 * m1 * m4) / (m1 * m1 * m1 * m1);
  r.alpha[8] = 2.0 * (r.mu * r.theta[2] - r.gamma);
  r.alpha[9] = r.mu * r.theta[2];

  r.alpha_hat[4] = (4.0 * m5 - 2.0 * m2 * m3) / (m1 * m1);
  r.alpha_hat[6] = (5.0 * m2 * m3 - 3.0 * m1 * m4 - 6.0 * m5) / (m1 * m1);
  r.alpha_hat[8] = -4.0 * r.gamma + 10.0 * r.mu * r.theta[2];
  r.alpha_hat[9] = 8.0 * r.mu * r.theta[2] / m1;
  r.alpha_hat[10] = (3.0 * r.mu * r.theta[2] - 2.0 * r.gamma) / m1;
  r.alpha_hat[11] = 4.0 * r.mu * r.theta[2];

  r.translation_even = translation_even(profile);
  if (r.translation_even) {
    const double c2 = r.c * r.c;
    const double th2 = r.theta[2], th3 = r.theta[3], th4 = r.theta[4], th5 = r.theta[5];
    const double thh4 = r.theta_hat[4], thh5 = r.theta_hat[5], thh6 = r.theta_hat[6];
    const double th7s = r.theta[7] / (m1 * m1);
    const double mu = r.mu, gam = r.gamma;
    const double z13 = r.zeta13, z14 = r.zeta14, z22 = r.zeta22;
    const double z212 = r.zeta212, z122 = r.zeta122, z311 = r.zeta311;
    r.beta[1] = (th3 * th3 - 5.25 * th2 * th2 * th3 + 1.5 * th2 * th4 + 1.5 * th3 * thh4 +
                 7.5 * th2 * thh5 - 2.5 * thh6 - 3.75 * th7s +
                 2.25 * (th2 * th2 - thh4) * (th2 * th2 - thh4)) /
                c2;
    r.beta[2] = c2 * (th2 * th2 * th2 * th2 - 3.0 * th2 * th2 * th3 + th3 * th3 +
                      2.0 * th2 * th4 - th5);
    r.beta[3] = -6.0 * th5 - 15.0 * thh6 + 4.5 * th2 * th2 * th2 * th2 -
                16.0 * th2 * th2 * th3 + 7.0 * th3 * th3 + 12.0 * th2 * th4 -
                4.5 * th2 * th2 * thh4 + 3.0 * th3 * thh4 + 12.0 * th2 * thh5;
    r.beta[4] = (-20.0 * thh6 + 6.0 * th2 * th2 * th2 * th2 - 22.0 * th2 * th2 * th3 +
                 8.0 * th3 * th3 + 12.0 * th2 * th4 - 6.0 * th2 * th2 * thh4 +
                 6.0 * th3 * thh4 + 16.0 * th2 * thh5) /
                c2;
    r.beta[5] = c2 * (-2.0 * z13 + z122 + 2.0 * z212 + z311 + 3.0 * z14 - 3.0 * gam * th2 -
                      z22 + 8.0 * mu * th2 * th2 - 2.0 * mu * th3 - 3.0 * mu * thh4);
    r.beta[6] = c2 * (-16.0 * gam * th2 + 26.0 * mu * th2 * th2 - 10.0 * mu * th3);
    r.beta[7] = c2 * (2.0 * z13 + z22 - 6.0 * gam * th2 + 5.0 * mu * th2 * th2 - 2.0 * mu * th3);
    r.beta[8] = 4.0 * z122 + 8.0 * z212 + 4.0 * z311 + 12.0 * z14 - 12.0 * gam * th2 -
                2.0 * z22 - 4.0 * z13 + 27.0 * mu * th2 * th2 - 6.0 * mu * th3 - 9.0 * mu * thh4;
    r.beta[9] = 2.0 * th2 * th2 * th2 * th2 - 8.0 * th2 * th2 * th3 + 4.0 * th3 * th3 +
                8.0 * th2 * th4 - 8.0 * th5;
    r.beta[10] = -4.0 * z13 - 2.0 * z22 - 8.0 * gam * th2 + 28.0 * mu * th2 * th2 - 12.0 * mu * th3;
    r.beta[11] = 2.0 * z13 + z22 - 12.0 * gam * th2 + 22.0 * mu * th2 * th2 - 10.0 * mu * th3;
    r.beta[12] = z122 + 2.0 * z212 + z311 + 3.0 * z14 - 3.0 * gam * th2 + mu * th3 - z22 -
                 2.0 * z13 + 7.0 * mu * th2 * th2 - 2.0 * mu * th3 - 3.0 * mu * thh4;
    r.beta[13] = 8.0 * z13 + 4.0 * z22 - 28.0 * gam * th2 + 24.0 * mu * th2 * th2 - 8.0 * mu * th3;
    r.beta[14] = -8.0 * gam * th2 + 10.0 * mu * th2 * th2 - 4.0 * mu * th3;
  }
  return r;
}

/// Equal-segment two-level closed forms; d1, d2 are the inverse depths.
struct PwcClosedForm {
  double mu, nu1, nu2, stability_margin;
};

inline PwcClosedForm pwc_closed_form(double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidInput("pwc closed form: inverse depths must be positive");
  const double dm = d1 - d2, dp = d1 + d2;
  const double mu = dm * dm / (48.0 * dp * dp);
  const double margin =
      dm * dm * (19.0 * d1 * d1 + 58.0 * d1 * d2 + 19.0 * d2 * d2) / (11520.0 * dp * dp * dp * dp);
  return {mu, mu / 40.0, 3.0 * mu / 40.0, margin};
}

struct SignReport {
  bool degenerate_flat = false;
  bool alpha1_negative = false;
  bool alpha2_negative = false;
  bool alpha3_nonpositive = false;
  bool mu_positive = false;
  bool margin_positive = false;

  bool all_ok() const {
    return degenerate_flat ||
           (alpha1_negative && alpha2_negative && alpha3_nonpositive && mu_positive && margin_positive);
  }
};

inline SignReport sign_report(const HomogenizedCoefficients& c) {
  SignReport r;
  if (c.mu < 1e-28) {
    r.degenerate_flat = true;
    return r;
  }
  r.alpha1_negative = c.alpha[1] < 0.0;
  r.alpha2_negative = c.alpha[2] < 0.0;
  r.alpha3_nonpositive = c.alpha[3] <= 1e-15;
  r.mu_positive = c.mu > 0.0;
  r.margin_positive = c.stability_margin() > 0.0;
  return r;
}

}  // namespace swhomog
