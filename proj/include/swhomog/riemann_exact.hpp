#pragma once

#include <cmath>

#include "swhomog/errors.hpp"

namespace swhomog {

/// Exact wet dam-break solution over a flat bottom: still water of depth hl
/// on the left of the dam, hr on the right, released at t = 0. Positions are
/// measured from the dam. Left rarefaction, constant middle state, right shock.
class DamBreakExact {
 public:
  DamBreakExact(double hl, double hr, double g) : hl_(hl), hr_(hr), g_(g) {
    if (!(hl > 0.0) || !(hr > 0.0) || !(g > 0.0))
      throw InvalidInput("dam break: depths and gravity must be positive");
    if (!(hl > hr)) throw InvalidInput("dam break: needs hl > hr");
    cl_ = std::sqrt(g * hl);
    // middle depth: rarefaction relation meets the shock relation
    double lo = hr, hi = hl;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (mismatch(mid) > 0.0 ? lo : hi) = mid;
    }
    hm_ = 0.5 * (lo + hi);
    cm_ = std::sqrt(g * hm_);
    um_ = 2.0 * (cl_ - cm_);
    shock_speed_ = hm_ * um_ / (hm_ - hr_);
  }

  double middle_depth() const { return hm_; }
  double middle_velocity() const { return um_; }
  double shock_speed() const { return shock_speed_; }

  double h(double x, double t) const {
    if (t <= 0.0) return x < 0.0 ? hl_ : hr_;
    const double xi = x / t;
    if (xi <= -cl_) return hl_;
    if (xi < um_ - cm_) {
      const double c = (2.0 * cl_ - xi) / 3.0;
      return c * c / g_;
    }
    if (xi < shock_speed_) return hm_;
    return hr_;
  }

  double u(double x, double t) const {
    if (t <= 0.0) return 0.0;
    const double xi = x / t;
    if (xi <= -cl_) return 0.0;
    if (xi < um_ - cm_) return 2.0 / 3.0 * (cl_ + xi);
    if (xi < shock_speed_) return um_;
    return 0.0;
  }

 private:
  // positive while the trial middle depth is too shallow
  double mismatch(double h) const {
    const double rare = 2.0 * (cl_ - std::sqrt(g_ * h));
    const double shock = (h - hr_) * std::sqrt(0.5 * g_ * (h + hr_) / (h * hr_));
    return rare - shock;
  }

  double hl_, hr_, g_, cl_, hm_, cm_, um_, shock_speed_;
};

}  // namespace swhomog
