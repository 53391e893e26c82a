#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "swhomog/cell_profile.hpp"
#include "swhomog/errors.hpp"

namespace swhomog {

enum class Limiter { minmod, mc };

struct FvConfig {
  double length = 400.0;  // domain [0, length], wall at 0, outflow at the far end
  std::size_t cells_per_period = 64;
  double delta = 1.0;  // bathymetry period
  double g = 9.81;
  double cfl = 0.9;
  Limiter limiter = Limiter::minmod;
  double h_dry = 1e-12;
};

namespace detail {

inline double limited_slope(double left, double right, Limiter lim) {
  if (lim == Limiter::minmod) {
    if (left * right <= 0.0) return 0.0;
    return left > 0.0 ? std::min(left, right) : std::max(left, right);
  }
  if (left * right <= 0.0) return 0.0;
  const double s = left > 0.0 ? 1.0 : -1.0;
  return s * std::min({2.0 * std::abs(left), 2.0 * std::abs(right),
                       0.5 * std::abs(left + right)});
}

/// integral of the depth over [0, y] in cell coordinates, exact for steps
inline double depth_cumulative(const PiecewiseConstant& p, double y) {
  const double whole = std::floor(y);
  double frac = y - whole;
  double per = 0.0, part = 0.0, lo = 0.0;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    const double hi = p.breakpoints[i];
    per += (hi - lo) * p.values[i];
    if (frac > lo) part += (std::min(frac, hi) - lo) * p.values[i];
    lo = hi;
  }
  return whole * per + part;
}

}  // namespace detail

/// Mean depth over [a, b] in physical units for a profile with period delta.
inline double mean_depth(const PeriodicProfile& profile, double delta, double a, double b) {
  if (const auto* pwc = std::get_if<PiecewiseConstant>(&profile)) {
    return delta * (detail::depth_cumulative(*pwc, b / delta) -
                    detail::depth_cumulative(*pwc, a / delta)) /
           (b - a);
  }
  const int n = 64;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a + (b - a) * (i + 0.5) / n;
    s += eval(profile, x / delta);
  }
  return s / n;
}

/// Shallow water reference on [0, length]: MUSCL-Hancock in time, HLL fluxes,
/// hydrostatic reconstruction at interfaces so that still water over the
/// rough bottom is an exact steady state. Reflecting wall on the left,
/// outflow on the right. State is (h, hu) per cell over a fixed bottom b.
class FvReference {
 public:
  FvReference(const PeriodicProfile& profile, const FvConfig& cfg) : cfg_(cfg) {
    validate(profile);
    if (!(cfg.length > 0.0) || !(cfg.delta > 0.0)) throw InvalidInput("fv: bad domain");
    if (cfg.cells_per_period < 4) throw InvalidInput("fv: needs at least 4 cells per period");
    if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) throw InvalidInput("fv: cfl must be in (0,1]");
    dx_ = cfg.delta / static_cast<double>(cfg.cells_per_period);
    const double cells = cfg.length / dx_;
    n_ = static_cast<std::size_t>(std::llround(cells));
    if (n_ < 8 || std::abs(cells - static_cast<double>(n_)) > 1e-9)
      throw InvalidInput("fv: length must be a whole number of cells");
    const std::size_t padded = n_ + 4;
    b_.assign(padded, 0.0);
    h_.assign(padded, 0.0);
    hu_.assign(padded, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = static_cast<double>(i) * dx_;
      b_[i + 2] = -mean_depth(profile, cfg.delta, a, a + dx_);
      h_[i + 2] = -b_[i + 2];  // lake at rest
    }
    hm_.assign(padded, 0.0);
    hp_.assign(padded, 0.0);
    qm_.assign(padded, 0.0);
    qp_.assign(padded, 0.0);
    bm_.assign(padded, 0.0);
    bp_.assign(padded, 0.0);
    fm_.assign(padded + 1, 0.0);
    fq_left_.assign(padded + 1, 0.0);
    fq_right_.assign(padded + 1, 0.0);
  }

  std::size_t cells() const { return n_; }
  double dx() const { return dx_; }
  double x_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
  double t() const { return t_; }
  std::size_t steps_taken() const { return steps_; }

  double h(std::size_t i) const { return h_[i + 2]; }
  double hu(std::size_t i) const { return hu_[i + 2]; }
  double bottom(std::size_t i) const { return b_[i + 2]; }
  double eta(std::size_t i) const { return h_[i + 2] + b_[i + 2]; }

  std::vector<double> surface() const {
    std::vector<double> e(n_);
    for (std::size_t i = 0; i < n_; ++i) e[i] = eta(i);
    return e;
  }
  std::vector<double> discharge() const {
    return std::vector<double>(hu_.begin() + 2, hu_.begin() + 2 + static_cast<std::ptrdiff_t>(n_));
  }

  /// Load a state given per-cell free surface and discharge.
  void set_state(const std::vector<double>& eta_cells, const std::vector<double>& hu_cells,
                 double t0 = 0.0) {
    if (eta_cells.size() != n_ || hu_cells.size() != n_)
      throw InvalidInput("fv: state size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      const double depth = eta_cells[i] - b_[i + 2];
      if (!(depth > 0.0)) throw InvalidInput("fv: initial surface is below the bottom");
      h_[i + 2] = depth;
      hu_[i + 2] = hu_cells[i];
    }
    t_ = t0;
  }

  double mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += h_[i + 2];
    return s * dx_;
  }

  double max_wave_speed() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double hh = h_[i + 2];
      const double u = hh > cfg_.h_dry ? hu_[i + 2] / hh : 0.0;
      s = std::max(s, std::abs(u) + std::sqrt(cfg_.g * hh));
    }
    return s;
  }

  void advance_to(double t_end) {
    while (t_ < t_end - 1e-12 * (1.0 + std::abs(t_end))) {
      const double smax = max_wave_speed();
      if (!(smax > 0.0) || !std::isfinite(smax))
        throw SolverFailure("fv: wave speed estimate broke down");
      double dt = cfg_.cfl * dx_ / smax;
      dt = std::min(dt, t_end - t_);
      step(dt);
    }
  }

  void step(double dt) {
    fill_ghosts();
    reconstruct();
    predict(dt);
    fluxes();
    update(dt);
    t_ += dt;
    ++steps_;
    for (std::size_t i = 2; i < n_ + 2; ++i)
      if (!std::isfinite(h_[i]) || !std::isfinite(hu_[i]) || h_[i] < 0.0)
        throw SolverFailure("fv: state became invalid (negative depth or non-finite)");
  }

 private:
  void fill_ghosts() {
    // wall: mirror the depth and the bottom, negate the discharge
    h_[1] = h_[2];
    h_[0] = h_[3];
    hu_[1] = -hu_[2];
    hu_[0] = -hu_[3];
    b_[1] = b_[2];
    b_[0] = b_[3];
    // outflow: copy the last cell
    h_[n_ + 2] = h_[n_ + 1];
    h_[n_ + 3] = h_[n_ + 1];
    hu_[n_ + 2] = hu_[n_ + 1];
    hu_[n_ + 3] = hu_[n_ + 1];
    b_[n_ + 2] = b_[n_ + 1];
    b_[n_ + 3] = b_[n_ + 1];
  }

  void reconstruct() {
    // limited slopes for h, hu and the free surface; the bottom edge values
    // follow from surface minus depth so that flat water stays flat
    for (std::size_t i = 1; i <= n_ + 2; ++i) {
      const double dh = detail::limited_slope(h_[i] - h_[i - 1], h_[i + 1] - h_[i], cfg_.limiter);
      const double dq =
          detail::limited_slope(hu_[i] - hu_[i - 1], hu_[i + 1] - hu_[i], cfg_.limiter);
      const double ec = h_[i] + b_[i], el = h_[i - 1] + b_[i - 1], er = h_[i + 1] + b_[i + 1];
      const double de = detail::limited_slope(ec - el, er - ec, cfg_.limiter);
      double hmi = h_[i] - 0.5 * dh, hpi = h_[i] + 0.5 * dh;
      double emi = ec - 0.5 * de, epi = ec + 0.5 * de;
      if (hmi < 0.0 || hpi < 0.0) {
        hmi = hpi = h_[i];
        emi = epi = ec;
      }
      hm_[i] = hmi;
      hp_[i] = hpi;
      qm_[i] = hu_[i] - 0.5 * dq;
      qp_[i] = hu_[i] + 0.5 * dq;
      bm_[i] = emi - hmi;
      bp_[i] = epi - hpi;
    }
  }

  void predict(double dt) {
    const double lam = 0.5 * dt / dx_;
    for (std::size_t i = 1; i <= n_ + 2; ++i) {
      const double fmm = qm_[i], fmp = qp_[i];
      const double um = hm_[i] > cfg_.h_dry ? qm_[i] / hm_[i] : 0.0;
      const double up = hp_[i] > cfg_.h_dry ? qp_[i] / hp_[i] : 0.0;
      const double gm = qm_[i] * um + 0.5 * cfg_.g * hm_[i] * hm_[i];
      const double gp = qp_[i] * up + 0.5 * cfg_.g * hp_[i] * hp_[i];
      const double src = -cfg_.g * 0.5 * (hm_[i] + hp_[i]) * (bp_[i] - bm_[i]) / dx_;
      const double dhm = lam * (fmm - fmp);
      const double dqm = lam * (gm - gp) + 0.5 * dt * src;
      hm_[i] += dhm;
      hp_[i] += dhm;
      qm_[i] += dqm;
      qp_[i] += dqm;
    }
  }

  void fluxes() {
    // interface j sits between cells (j-1) and j in padded indexing
    for (std::size_t j = 2; j <= n_ + 2; ++j) {
      const double hl = hp_[j - 1], hr = hm_[j];
      const double bl = bp_[j - 1], br = bm_[j];
      const double bstar = std::max(bl, br);
      const double hls = std::max(0.0, hl + bl - bstar);
      const double hrs = std::max(0.0, hr + br - bstar);
      const double ul = hl > cfg_.h_dry ? qp_[j - 1] / hl : 0.0;
      const double ur = hr > cfg_.h_dry ? qm_[j] / hr : 0.0;
      const double cl = std::sqrt(cfg_.g * hls), cr = std::sqrt(cfg_.g * hrs);
      const double sl = std::min(ul - cl, ur - cr);
      const double sr = std::max(ul + cl, ur + cr);
      const double ql = hls * ul, qr = hrs * ur;
      const double fl_m = ql, fr_m = qr;
      const double fl_q = ql * ul + 0.5 * cfg_.g * hls * hls;
      const double fr_q = qr * ur + 0.5 * cfg_.g * hrs * hrs;
      double fm, fq;
      if (sl >= 0.0) {
        fm = fl_m;
        fq = fl_q;
      } else if (sr <= 0.0) {
        fm = fr_m;
        fq = fr_q;
      } else {
        const double inv = 1.0 / (sr - sl);
        fm = (sr * fl_m - sl * fr_m + sl * sr * (hrs - hls)) * inv;
        fq = (sr * fl_q - sl * fr_q + sl * sr * (qr - ql)) * inv;
      }
      fm_[j] = fm;
      fq_left_[j] = fq + 0.5 * cfg_.g * (hl * hl - hls * hls);
      fq_right_[j] = fq + 0.5 * cfg_.g * (hr * hr - hrs * hrs);
    }
  }

  void update(double dt) {
    const double lam = dt / dx_;
    for (std::size_t i = 2; i <= n_ + 1; ++i) {
      const double src = -cfg_.g * 0.5 * (hm_[i] + hp_[i]) * (bp_[i] - bm_[i]) / dx_;
      h_[i] -= lam * (fm_[i + 1] - fm_[i]);
      hu_[i] -= lam * (fq_left_[i + 1] - fq_right_[i]);
      hu_[i] += dt * src;
    }
  }

  FvConfig cfg_;
  std::size_t n_ = 0;
  double dx_ = 0.0, t_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<double> h_, hu_, b_;
  std::vector<double> hm_, hp_, qm_, qp_, bm_, bp_;
  std::vector<double> fm_, fq_left_, fq_right_;
};

}  // namespace swhomog
