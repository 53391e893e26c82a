#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

/// Linearized wave families, labelled by the third-derivative term each model
/// carries. K is the scaled wavenumber k * delta * sqrt(mu).
enum class DispersionForm { ttt, xxx, xxt, xxt5 };

inline const char* to_string(DispersionForm f) {
  switch (f) {
    case DispersionForm::ttt: return "ttt";
    case DispersionForm::xxx: return "xxx";
    case DispersionForm::xxt: return "xxt";
    case DispersionForm::xxt5: return "xxt5";
  }
  return "?";
}

inline std::optional<DispersionForm> parse_dispersion_form(const std::string& s) {
  if (s == "ttt") return DispersionForm::ttt;
  if (s == "xxx") return DispersionForm::xxx;
  if (s == "xxt") return DispersionForm::xxt;
  if (s == "xxt5") return DispersionForm::xxt5;
  return std::nullopt;
}

struct DispersionPoint {
  double K = 0.0;
  std::vector<std::complex<double>> omega;
  /// ttt at K == 0: two branches escape to infinity and are omitted here.
  bool infinite_branches = false;
  /// Some branch has a nonzero imaginary part (exponential growth in time).
  bool unstable = false;
};

namespace detail {
inline void flag_instability(DispersionPoint& p, double tol = 1e-14) {
  for (const auto& w : p.omega)
    if (std::abs(w.imag()) > tol) p.unstable = true;
}
}  // namespace detail

/// Omega^2 + K^2 Omega^4 = 1. Quadratic in Z = Omega^2:
/// Z = (-1 +- sqrt(1 + 4 K^2)) / (2 K^2). The minus root is negative for all
/// K != 0, so one branch pair is always imaginary.
inline DispersionPoint omega_form1(double K) {
  DispersionPoint p;
  p.K = K;
  if (K == 0.0) {
    p.omega = {{1.0, 0.0}, {-1.0, 0.0}};
    p.infinite_branches = true;
    return p;
  }
  const double s = std::sqrt(1.0 + 4.0 * K * K);
  const double zp = (-1.0 + s) / (2.0 * K * K);
  const double zm = (-1.0 - s) / (2.0 * K * K);
  const double wp = std::sqrt(zp);
  const double wm = std::sqrt(-zm);
  p.omega = {{wp, 0.0}, {-wp, 0.0}, {0.0, wm}, {0.0, -wm}};
  detail::flag_instability(p);
  return p;
}

/// Omega^2 = 1 - K^2; imaginary beyond |K| = 1.
inline DispersionPoint omega_form2(double K) {
  DispersionPoint p;
  p.K = K;
  const double z = 1.0 - K * K;
  if (z >= 0.0) {
    const double w = std::sqrt(z);
    p.omega = {{w, 0.0}, {-w, 0.0}};
  } else {
    const double w = std::sqrt(-z);
    p.omega = {{0.0, w}, {0.0, -w}};
  }
  detail::flag_instability(p);
  return p;
}

/// Omega^2 (1 + K^2 + r K^4) = 1 with r = (nu1 + nu2) / mu^2 - 1; pass no r
/// for the third-order symbol. Real for every K whenever r >= 0.
inline DispersionPoint omega_form3(double K, std::optional<double> r = std::nullopt) {
  DispersionPoint p;
  p.K = K;
  const double rr = r.value_or(0.0);
  const double z = 1.0 + K * K + rr * K * K * K * K;
  if (z <= 0.0) {
    p.unstable = true;
    return p;
  }
  const double w = 1.0 / std::sqrt(z);
  p.omega = {{w, 0.0}, {-w, 0.0}};
  return p;
}

inline double form_residual(DispersionForm f, double K, std::complex<double> w,
                            std::optional<double> r = std::nullopt) {
  const std::complex<double> w2 = w * w;
  switch (f) {
    case DispersionForm::ttt: return std::abs(w2 + K * K * w2 * w2 - 1.0);
    case DispersionForm::xxx: return std::abs(w2 - (1.0 - K * K));
    case DispersionForm::xxt: return std::abs(w2 * (1.0 + K * K) - 1.0);
    case DispersionForm::xxt5:
      return std::abs(w2 * (1.0 + K * K + r.value_or(0.0) * K * K * K * K) - 1.0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct ResolvedWavenumber {
  double value = 0.0;
  bool infinite = false;
};

/// Largest physical wavenumber with K <= 1, i.e. 1 / (delta sqrt(mu)).
inline ResolvedWavenumber k_max(double mu, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("k_max: delta must be positive");
  if (mu < 0.0) throw InvalidInput("k_max: mu must be nonnegative");
  if (mu == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {1.0 / (delta * std::sqrt(mu)), false};
}

inline DispersionPoint evaluate_dispersion(DispersionForm f, double K,
                                           std::optional<double> r = std::nullopt) {
  switch (f) {
    case DispersionForm::ttt: return omega_form1(K);
    case DispersionForm::xxx: return omega_form2(K);
    case DispersionForm::xxt: return omega_form3(K);
    case DispersionForm::xxt5:
      if (!r) throw InvalidInput("dispersion: xxt5 needs the fifth-order ratio r");
      return omega_form3(K, r);
  }
  throw InvalidInput("dispersion: unknown form");
}

inline std::vector<DispersionPoint> dispersion_table(DispersionForm f,
                                                     const std::vector<double>& K,
                                                     std::optional<double> r = std::nullopt) {
  std::vector<DispersionPoint> out;
  out.reserve(K.size());
  for (double k : K) out.push_back(evaluate_dispersion(f, k, r));
  return out;
}

}  // namespace swhomog
