#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "swhomog/cell_average.hpp"
#include "swhomog/coefficients.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/fftw_utils.hpp"
#include "swhomog/runge_kutta.hpp"

namespace swhomog {

/// Averaged surface and discharge on the periodic domain [-L, L), M samples.
struct FieldState {
  double L = 400.0;
  double t = 0.0;
  std::vector<double> eta, q;

  std::size_t size() const { return eta.size(); }
  double dx() const { return 2.0 * L / static_cast<double>(eta.size()); }
  double x(std::size_t j) const { return -L + static_cast<double>(j) * dx(); }
};

enum class Dealias { none, two_thirds, half };

struct DtControl {
  bool adaptive = true;
  double rtol = 1e-6;
  double atol = 1e-9;
  double dt = 0.05;  // fixed-step size, and the initial adaptive guess
};

struct SolverConfig {
  int order = 3;  // 3, 4, or 5
  double delta = 1.0;
  Dealias dealias = Dealias::two_thirds;
  DtControl dt_control;
};

/// Pseudo-spectral integrator for the averaged system. The time-derivative
/// corrections sit in a positive elliptic symbol that is inverted in Fourier
/// space; everything else is evaluated pointwise and dealiased.
class HomogenizedSolver {
 public:
  HomogenizedSolver(const PeriodicProfile& profile, double g, SolverConfig cfg, std::size_t M,
                    double L)
      : HomogenizedSolver(compute(profile, g), cfg, M, L) {
    profile_ = profile;
    have_profile_ = true;
    setup_cell_functions();
  }

  /// Coefficients-only construction; fast-scale reconstruction is unavailable.
  HomogenizedSolver(const HomogenizedCoefficients& coeffs, SolverConfig cfg, std::size_t M,
                    double L)
      : c_(coeffs), cfg_(cfg), fft_(M), rk_(2 * M) {
    if (M < 16 || !is_power_of_two(M))
      throw InvalidInput("solver: M must be a power of two >= 16");
    if (!(L > 0.0)) throw InvalidInput("solver: L must be positive");
    if (cfg.order < 3 || cfg.order > 5) throw InvalidInput("solver: order must be 3, 4, or 5");
    if (!(cfg.delta > 0.0)) throw InvalidInput("solver: delta must be positive");
    if (cfg.order == 5 && !c_.translation_even)
      throw InvalidInput(
          "solver: order 5 requires a translation-even profile (quartic flux weights undefined)");
    state_.L = L;
    state_.t = 0.0;
    state_.eta.assign(M, 0.0);
    state_.q.assign(M, 0.0);

    const std::size_t ns = M / 2 + 1;
    k_.resize(ns);
    for (std::size_t j = 0; j < ns; ++j)
      k_[j] = std::numbers::pi * static_cast<double>(j) / L;
    const double d2 = cfg.delta * cfg.delta;
    const double mu_hat = d2 * c_.mu;
    const double nu5 = d2 * d2 * c_.stability_margin();
    symbol_.resize(ns);
    for (std::size_t j = 0; j < ns; ++j) {
      const double k2 = k_[j] * k_[j];
      symbol_[j] = 1.0 + mu_hat * k2 + (cfg.order == 5 ? nu5 * k2 * k2 : 0.0);
      if (symbol_[j] <= 0.0)
        throw SolverFailure("solver: elliptic symbol is nonpositive at k=" +
                            std::to_string(k_[j]) +
                            " (fifth-order stability margin is negative)");
    }
    switch (cfg.dealias) {
      case Dealias::none: keep_ = M / 2; break;
      case Dealias::two_thirds: keep_ = M / 3; break;
      case Dealias::half: keep_ = M / 4; break;
    }
    spec_a_.resize(ns);
    spec_b_.resize(ns);
    const std::size_t nwork = cfg.order >= 4 ? 8 : 4;
    work_.assign(nwork, std::vector<double>(M));
    packed_.resize(2 * M);
    dstate_.resize(2 * M);
    dt_next_ = cfg.dt_control.dt > 0.0 ? cfg.dt_control.dt : 0.05;
  }

  const HomogenizedCoefficients& coefficients() const { return c_; }
  const SolverConfig& config() const { return cfg_; }
  FieldState& state() { return state_; }
  const FieldState& state() const { return state_; }
  std::size_t steps_taken() const { return steps_; }

  void set_initial(const std::vector<double>& eta, const std::vector<double>& q, double t0 = 0.0) {
    if (eta.size() != state_.size() || q.size() != state_.size())
      throw InvalidInput("solver: initial data size mismatch");
    state_.eta = eta;
    state_.q = q;
    state_.t = t0;
    dealias_state();
  }

  /// d/dt of the packed [eta; q] vector at the given state.
  void rhs(double, const std::vector<double>& y, std::vector<double>& dy) {
    const std::size_t M = state_.size();
    const double* eta = y.data();
    const double* q = y.data() + M;
    const double d = cfg_.delta, d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
    const double c2 = c_.c * c_.c, g = c_.g, th2 = c_.theta[2];

    std::vector<double>& eta_x = work_[0];
    std::vector<double>& q_x = work_[1];
    std::vector<double>& nl = work_[2];
    std::vector<double>& q_x_spec_scratch = work_[3];

    fft_.forward(eta, spec_a_.data());
    derivative(spec_a_, 1, spec_b_);
    fft_.inverse(spec_b_.data(), eta_x.data());
    if (cfg_.order >= 4) {
      derivative(spec_a_, 2, spec_b_);
      fft_.inverse(spec_b_.data(), work_[4].data());  // eta_xx
      derivative(spec_a_, 3, spec_b_);
      fft_.inverse(spec_b_.data(), work_[5].data());  // eta_xxx
    }
    fft_.forward(q, spec_a_.data());
    derivative(spec_a_, 1, spec_b_);
    fft_.inverse(spec_b_.data(), q_x.data());
    // d/dt eta = -d/dx q, reusing the q spectrum
    for (std::size_t j = 0; j < spec_b_.size(); ++j)
      spec_b_[j] = (j <= keep_) ? -spec_b_[j] : 0.0;
    fft_.inverse(spec_b_.data(), q_x_spec_scratch.data());
    for (std::size_t i = 0; i < M; ++i) dy[i] = q_x_spec_scratch[i];
    if (cfg_.order >= 4) {
      derivative(spec_a_, 2, spec_b_);
      fft_.inverse(spec_b_.data(), work_[6].data());  // q_xx
      derivative(spec_a_, 3, spec_b_);
      fft_.inverse(spec_b_.data(), work_[7].data());  // q_xxx
    }

    for (std::size_t i = 0; i < M; ++i) {
      const double e = eta[i], qq = q[i], ex = eta_x[i], qx = q_x[i];
      double n = -c2 * ex - d * th2 * (c2 * e * ex + 2.0 * qq * qx) -
                 d2 * (c_.alpha[1] * qq * e * qx + c_.alpha[2] * qq * qq * ex +
                       g * c_.alpha[3] * e * e * ex);
      if (cfg_.order >= 4) {
        const double exx = work_[4][i], exxx = work_[5][i], qxx = work_[6][i], qxxx = work_[7][i];
        n -= d3 * (c_.alpha[4] / g * qq * qq * qq * qx + c_.alpha[5] * e * e * qq * qx +
                   c_.alpha[6] * qq * qq * e * ex + g * c_.alpha[7] * e * e * e * ex +
                   c_.alpha[8] * (2.0 * qx * qxx + c2 * e * exxx) +
                   c_.alpha[9] * (5.0 * c2 * ex * exx + 2.0 * qq * qxxx));
        if (cfg_.order == 5) {
          const double e2 = e * e, q2 = qq * qq;
          n -= d4 * (c_.beta[1] * q2 * q2 * ex + c_.beta[2] * e2 * e2 * ex +
                     c_.beta[3] * e2 * q2 * ex + c_.beta[4] * e * q2 * qq * qx +
                     c_.beta[5] * ex * ex * ex + c_.beta[6] * e * ex * exx +
                     c_.beta[7] * e2 * exxx + c_.beta[8] * ex * qq * qxx +
                     c_.beta[9] * qq * e2 * e * qx + c_.beta[10] * exx * qq * qx +
                     c_.beta[11] * ex * qx * qx + c_.beta[12] * q2 * exxx +
                     c_.beta[13] * e * qx * qxx + c_.beta[14] * e * qq * qxxx);
        }
      }
      nl[i] = n;
    }
    fft_.forward(nl.data(), spec_a_.data());
    for (std::size_t j = 0; j < spec_a_.size(); ++j)
      spec_a_[j] = (j <= keep_) ? spec_a_[j] / symbol_[j] : 0.0;
    fft_.inverse(spec_a_.data(), q_x_spec_scratch.data());
    for (std::size_t i = 0; i < M; ++i) dy[M + i] = q_x_spec_scratch[i];
  }

  /// One time step (adaptive or fixed per the configuration).
  void step() {
    pack();
    auto f = [this](double t, const std::vector<double>& y, std::vector<double>& dy) {
      rhs(t, y, dy);
    };
    if (cfg_.dt_control.adaptive) {
      double dt = dt_next_;
      int guard = 0;
      while (true) {
        if (++guard > 200) throw SolverFailure("solver: step size control did not settle");
        if (!(dt > 1e-14)) throw SolverFailure("solver: time step underflow");
        const double err = rk_.attempt(f, state_.t, packed_, dt, cfg_.dt_control.rtol,
                                       cfg_.dt_control.atol);
        if (err <= 1.0) {
          packed_ = rk_.result();
          state_.t += dt;
          const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
          dt_next_ = dt * std::min(5.0, std::max(0.2, grow));
          break;
        }
        dt *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
      }
    } else {
      rk_.fixed_step(f, state_.t, packed_, cfg_.dt_control.dt);
      state_.t += cfg_.dt_control.dt;
    }
    unpack();
    ++steps_;
    for (double v : state_.eta)
      if (!std::isfinite(v)) throw SolverFailure("solver: non-finite surface value");
    for (double v : state_.q)
      if (!std::isfinite(v)) throw SolverFailure("solver: non-finite discharge value");
  }

  /// Step until t_end; the last adaptive step is clipped to land on it.
  /// Fixed stepping stops at the last full step that fits.
  void advance_to(double t_end) {
    const double guard = 1e-10 * (1.0 + std::abs(t_end));
    if (cfg_.dt_control.adaptive) {
      while (t_end - state_.t > guard) {
        const double unclipped = dt_next_;
        const bool clipped = dt_next_ > t_end - state_.t;
        if (clipped) dt_next_ = t_end - state_.t;
        step();
        if (clipped) dt_next_ = std::max(dt_next_, unclipped);
      }
    } else {
      const double dt = cfg_.dt_control.dt;
      while (state_.t + dt <= t_end + 1e-9 * dt) step();
    }
  }

  /// Entry point with the band-limit admission check on the initial data.
  void simulate(double t_end) {
    check_band_limited(state_.eta, "eta");
    check_band_limited(state_.q, "q");
    dealias_state();
    advance_to(t_end);
  }

  double mass() const {
    double s = 0.0;
    for (double v : state_.eta) s += v;
    return s * state_.dx();
  }

  /// F^{-1}[ F[f] / (1 + mu_hat k^2 [+ nu5 k^4]) ].
  std::vector<double> apply_inverse_elliptic(const std::vector<double>& f) {
    if (f.size() != state_.size()) throw InvalidInput("solver: elliptic input size mismatch");
    fft_.forward(f.data(), spec_a_.data());
    for (std::size_t j = 0; j < spec_a_.size(); ++j) spec_a_[j] /= symbol_[j];
    std::vector<double> out(f.size());
    fft_.inverse(spec_a_.data(), out.data());
    return out;
  }

  double symbol_at(std::size_t j) const { return symbol_[j]; }

  /// Surface with the per-period oscillation restored on top of the average.
  /// Time derivatives of the discharge come from the governing equations.
  std::vector<double> fast_scale_reconstruction() {
    if (!have_profile_)
      throw InvalidInput("solver: reconstruction needs the depth profile, not bare coefficients");
    const std::size_t M = state_.size();
    pack();
    rhs(state_.t, packed_, dstate_);
    // q_t and its x-derivative, spectrally
    std::vector<double> q_t(dstate_.begin() + static_cast<std::ptrdiff_t>(M), dstate_.end());
    std::vector<double> q_tx(M), q_x(M);
    fft_.forward(q_t.data(), spec_a_.data());
    derivative(spec_a_, 1, spec_b_);
    fft_.inverse(spec_b_.data(), q_tx.data());
    fft_.forward(state_.q.data(), spec_a_.data());
    derivative(spec_a_, 1, spec_b_);
    fft_.inverse(spec_b_.data(), q_x.data());

    const double d = cfg_.delta, g = c_.g;
    std::vector<double> full(M);
    for (std::size_t i = 0; i < M; ++i) {
      const double x = state_.x(i);
      double y = x / d;
      y -= std::floor(y);
      const double e = state_.eta[i], qq = state_.q[i];
      const double fast = -(d / g) * cf_b1_(y) * q_t[i] - 0.5 / g * cf_p2f_(y) * qq * qq +
                          (d * d / g) * cf_bb1_(y) * q_tx[i] - (d / g) * cf_b2_(y) * qq * q_x[i] +
                          (d / g) * cf_b2_(y) * e * q_t[i] + (1.0 / g) * cf_p3f_(y) * e * qq * qq;
      full[i] = e + fast;
    }
    return full;
  }

 private:
  void derivative(const std::vector<std::complex<double>>& in, int order,
                  std::vector<std::complex<double>>& out) {
    const std::size_t ns = in.size();
    out.resize(ns);
    for (std::size_t j = 0; j < ns; ++j) {
      std::complex<double> f = in[j];
      for (int p = 0; p < order; ++p) f *= std::complex<double>(0.0, k_[j]);
      out[j] = (j <= keep_) ? f : 0.0;
    }
    if (!out.empty()) out.back() = 0.0;
  }

  void dealias_state() {
    auto maskit = [this](std::vector<double>& v) {
      fft_.forward(v.data(), spec_a_.data());
      for (std::size_t j = 0; j < spec_a_.size(); ++j)
        if (j > keep_) spec_a_[j] = 0.0;
      fft_.inverse(spec_a_.data(), v.data());
    };
    maskit(state_.eta);
    maskit(state_.q);
  }

  void check_band_limited(const std::vector<double>& v, const char* name) {
    fft_.forward(v.data(), spec_a_.data());
    double peak = 0.0;
    for (const auto& s : spec_a_) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) return;
    const std::size_t lo = spec_a_.size() * 3 / 4;
    double tail = 0.0;
    for (std::size_t j = lo; j < spec_a_.size(); ++j) tail = std::max(tail, std::abs(spec_a_[j]));
    if (tail > 1e-12 * peak)
      throw InvalidInput(std::string("solver: initial ") + name +
                         " is not band-limited on this grid (top-quarter spectral tail " +
                         std::to_string(tail / peak) + " of peak)");
  }

  void pack() {
    const std::size_t M = state_.size();
    std::copy(state_.eta.begin(), state_.eta.end(), packed_.begin());
    std::copy(state_.q.begin(), state_.q.end(), packed_.begin() + static_cast<std::ptrdiff_t>(M));
  }
  void unpack() {
    const std::size_t M = state_.size();
    std::copy(packed_.begin(), packed_.begin() + static_cast<std::ptrdiff_t>(M),
              state_.eta.begin());
    std::copy(packed_.begin() + static_cast<std::ptrdiff_t>(M), packed_.end(), state_.q.begin());
  }

  void setup_cell_functions() {
    if (std::holds_alternative<PiecewiseConstant>(profile_)) {
      const auto& p = std::get<PiecewiseConstant>(profile_);
      cf_b1_ = CellFunction(bracket(inverse_power_poly(p, 1)));
      cf_b2_ = CellFunction(bracket(inverse_power_poly(p, 2)));
      cf_bb1_ = CellFunction(bracket(bracket(inverse_power_poly(p, 1))));
      PiecewisePoly p2 = inverse_power_poly(p, 2);
      const double m2 = mean(p2);
      for (auto& s : p2.segs) s.c[0] -= m2;
      cf_p2f_ = CellFunction(p2);
      PiecewisePoly p3 = inverse_power_poly(p, 3);
      const double m3 = mean(p3);
      for (auto& s : p3.segs) s.c[0] -= m3;
      cf_p3f_ = CellFunction(p3);
    } else {
      const std::size_t n = 512;
      CellGrid p1 = sample(profile_, n), p2 = p1, p3 = p1;
      for (double& v : p1.v) v = 1.0 / v;
      for (double& v : p2.v) v = 1.0 / (v * v);
      for (double& v : p3.v) v = 1.0 / (v * v * v);
      cf_b1_ = CellFunction(bracket(p1));
      cf_b2_ = CellFunction(bracket(p2));
      cf_bb1_ = CellFunction(bracket(bracket(p1)));
      cf_p2f_ = CellFunction(fluctuation(p2));
      cf_p3f_ = CellFunction(fluctuation(p3));
    }
  }

  HomogenizedCoefficients c_;
  SolverConfig cfg_;
  RealFFT fft_;
  DormandPrince rk_;
  FieldState state_;
  std::vector<double> k_, symbol_;
  std::size_t keep_ = 0;
  std::vector<std::complex<double>> spec_a_, spec_b_;
  std::vector<std::vector<double>> work_;
  std::vector<double> packed_, dstate_;
  double dt_next_ = 0.05;
  std::size_t steps_ = 0;

  PeriodicProfile profile_;
  bool have_profile_ = false;
  CellFunction cf_b1_, cf_b2_, cf_bb1_, cf_p2f_, cf_p3f_;
};

// ---------------------------------------------------------------------------
// Binary checkpoints

inline void write_checkpoint(const std::string& path, const FieldState& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("checkpoint: cannot open '" + path + "' for writing");
  f.write("SWHG1\n", 6);
  const std::uint64_t m = s.eta.size();
  f.write(reinterpret_cast<const char*>(&m), 8);
  f.write(reinterpret_cast<const char*>(&s.L), 8);
  f.write(reinterpret_cast<const char*>(&s.t), 8);
  f.write(reinterpret_cast<const char*>(s.eta.data()), static_cast<std::streamsize>(8 * m));
  f.write(reinterpret_cast<const char*>(s.q.data()), static_cast<std::streamsize>(8 * m));
  if (!f) throw Error("checkpoint: short write to '" + path + "'");
}

inline FieldState read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("checkpoint: cannot open '" + path + "'");
  char magic[6];
  f.read(magic, 6);
  if (!f || std::string(magic, 6) != "SWHG1\n")
    throw Error("checkpoint: bad magic in '" + path + "'");
  std::uint64_t m = 0;
  FieldState s;
  f.read(reinterpret_cast<char*>(&m), 8);
  f.read(reinterpret_cast<char*>(&s.L), 8);
  f.read(reinterpret_cast<char*>(&s.t), 8);
  if (!f || m == 0 || m > (1u << 26)) throw Error("checkpoint: corrupt header in '" + path + "'");
  s.eta.resize(m);
  s.q.resize(m);
  f.read(reinterpret_cast<char*>(s.eta.data()), static_cast<std::streamsize>(8 * m));
  f.read(reinterpret_cast<char*>(s.q.data()), static_cast<std::streamsize>(8 * m));
  if (!f) throw Error("checkpoint: truncated data in '" + path + "'");
  return s;
}

}  // namespace swhomog
