#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

/// Dormand-Prince 5(4) embedded pair on std::vector<double> states.
/// rhs has signature rhs(t, y, dydt).
class DormandPrince {
 public:
  explicit DormandPrince(std::size_t n) : n_(n) {
    for (auto& k : k_) k.assign(n, 0.0);
    stage_.assign(n, 0.0);
    y5_.assign(n, 0.0);
  }

  std::size_t size() const { return n_; }

  /// One trial step. Fills y5 (5th order result) and returns the weighted rms
  /// of the embedded error estimate; NaN anywhere maps to +inf.
  template <class RHS>
  double attempt(RHS&& rhs, double t, const std::vector<double>& y, double dt, double rtol,
                 double atol) {
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    rhs(t, y, k1);
    comb1(y, dt, 0.2, k1);
    rhs(t + 0.2 * dt, stage_, k2);
    comb2(y, dt, 3.0 / 40.0, k1, 9.0 / 40.0, k2);
    rhs(t + 0.3 * dt, stage_, k3);
    comb3(y, dt, 44.0 / 45.0, k1, -56.0 / 15.0, k2, 32.0 / 9.0, k3);
    rhs(t + 0.8 * dt, stage_, k4);
    comb4(y, dt, 19372.0 / 6561.0, k1, -25360.0 / 2187.0, k2, 64448.0 / 6561.0, k3,
          -212.0 / 729.0, k4);
    rhs(t + 8.0 / 9.0 * dt, stage_, k5);
    comb5(y, dt, 9017.0 / 3168.0, k1, -355.0 / 33.0, k2, 46732.0 / 5247.0, k3, 49.0 / 176.0, k4,
          -5103.0 / 18656.0, k5);
    rhs(t + dt, stage_, k6);
    for (std::size_t i = 0; i < n_; ++i)
      y5_[i] = y[i] + dt * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] + 125.0 / 192.0 * k4[i] -
                            2187.0 / 6784.0 * k5[i] + 11.0 / 84.0 * k6[i]);
    rhs(t + dt, y5_, k7);
    double acc = 0.0;
    bool bad = false;
    for (std::size_t i = 0; i < n_; ++i) {
      const double y4 = y[i] + dt * (5179.0 / 57600.0 * k1[i] + 7571.0 / 16695.0 * k3[i] +
                                     393.0 / 640.0 * k4[i] - 92097.0 / 339200.0 * k5[i] +
                                     187.0 / 2100.0 * k6[i] + 1.0 / 40.0 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5_[i]));
      const double e = (y5_[i] - y4) / sc;
      acc += e * e;
      if (!std::isfinite(y5_[i])) bad = true;
    }
    if (bad || !std::isfinite(acc)) return std::numeric_limits<double>::infinity();
    return std::sqrt(acc / static_cast<double>(n_));
  }

  const std::vector<double>& result() const { return y5_; }

  /// Unconditional fixed step, ignoring the error estimate.
  template <class RHS>
  void fixed_step(RHS&& rhs, double t, std::vector<double>& y, double dt) {
    attempt(rhs, t, y, dt, 1.0, 1.0);
    y = y5_;
  }

  /// Adaptive integration from t0 to exactly t1.
  template <class RHS>
  void integrate(RHS&& rhs, double t0, double t1, std::vector<double>& y, double rtol, double atol,
                 double dt_init = 0.0) {
    double t = t0;
    double dt = dt_init > 0.0 ? dt_init : (t1 - t0) * 1e-3;
    while (t < t1) {
      if (t + dt > t1) dt = t1 - t;
      if (!(dt > std::abs(t) * 1e-15 + 1e-300))
        throw SolverFailure("time step underflow in adaptive integration");
      const double err = attempt(rhs, t, y, dt, rtol, atol);
      if (err <= 1.0) {
        t += dt;
        y = y5_;
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        dt *= std::min(5.0, std::max(0.2, grow));
      } else {
        if (!std::isfinite(err)) {
          dt *= 0.1;
        } else {
          dt *= std::min(0.9, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        }
      }
    }
  }

 private:
  void comb1(const std::vector<double>& y, double dt, double a1, const std::vector<double>& v1) {
    for (std::size_t i = 0; i < n_; ++i) stage_[i] = y[i] + dt * a1 * v1[i];
  }
  void comb2(const std::vector<double>& y, double dt, double a1, const std::vector<double>& v1,
             double a2, const std::vector<double>& v2) {
    for (std::size_t i = 0; i < n_; ++i) stage_[i] = y[i] + dt * (a1 * v1[i] + a2 * v2[i]);
  }
  void comb3(const std::vector<double>& y, double dt, double a1, const std::vector<double>& v1,
             double a2, const std::vector<double>& v2, double a3, const std::vector<double>& v3) {
    for (std::size_t i = 0; i < n_; ++i)
      stage_[i] = y[i] + dt * (a1 * v1[i] + a2 * v2[i] + a3 * v3[i]);
  }
  void comb4(const std::vector<double>& y, double dt, double a1, const std::vector<double>& v1,
             double a2, const std::vector<double>& v2, double a3, const std::vector<double>& v3,
             double a4, const std::vector<double>& v4) {
    for (std::size_t i = 0; i < n_; ++i)
      stage_[i] = y[i] + dt * (a1 * v1[i] + a2 * v2[i] + a3 * v3[i] + a4 * v4[i]);
  }
  void comb5(const std::vector<double>& y, double dt, double a1, const std::vector<double>& v1,
             double a2, const std::vector<double>& v2, double a3, const std::vector<double>& v3,
             double a4, const std::vector<double>& v4, double a5, const std::vector<double>& v5) {
    for (std::size_t i = 0; i < n_; ++i)
      stage_[i] =
          y[i] + dt * (a1 * v1[i] + a2 * v2[i] + a3 * v3[i] + a4 * v4[i] + a5 * v5[i]);
  }

  std::size_t n_;
  std::vector<double> k_[7];
  std::vector<double> stage_, y5_;
};

}  // namespace swhomog
