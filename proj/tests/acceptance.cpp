// Runs the nine acceptance checks end to end and prints one line per
// criterion. Exit status 0 means every criterion passed. The first argument
// overrides the directory holding the shipped scenario files.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "swhomog/dispersion.hpp"
#include "swhomog/harness.hpp"
#include "swhomog/riemann_exact.hpp"

using namespace swhomog;

namespace {

int failures = 0;
std::string configs_dir = "configs";

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void guard(int n, F fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

ScenarioConfig scenario_a() { return load_scenario(configs_dir + "/scenario_a.ini"); }

const HomogenizedCoefficients& coeffs_a() {
  static const HomogenizedCoefficients c = [] {
    const ScenarioConfig sc = scenario_a();
    return compute(sc.bathymetry, sc.g);
  }();
  return c;
}

// Long finite-volume run on a doubled domain, shared between the amplitude
// round trip and the crest count. Expensive, so it runs once.
struct FissionRun {
  std::vector<double> surface;
  double dx = 0.0;
  std::size_t period_cells = 0;
  double amplitude = 0.0;
  double seconds = 0.0;
};

const FissionRun& fission() {
  static const FissionRun run = [] {
    FissionRun r;
    ScenarioConfig sc = scenario_a();
    sc.reference_length = 800.0;
    FvReference ref = make_reference_solver(sc);
    Timer t;
    ref.advance_to(300.0);
    r.seconds = t.elapsed();
    r.surface = ref.surface();
    r.dx = ref.dx();
    r.period_cells = sc.cells_per_period;
    r.amplitude = extract_leading_crest(r.surface, r.dx, r.period_cells).amplitude;
    return r;
  }();
  return run;
}

constexpr double kTau = 2.0 * std::numbers::pi;

// timings filled by criterion 8 and judged by criterion 9
double g_sec_fv = 0.0, g_sec_o3 = 0.0, g_sec_o5 = 0.0;
bool g_c8_ran = false;

void criterion1() {
  Timer t;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t N = 512;
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::array<double, 9> a{};
    for (int j = 1; j <= 8; ++j) a[static_cast<std::size_t>(j)] = U(rng);
    CellGrid f = make_cell_grid(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double y = static_cast<double>(i) / static_cast<double>(N);
      for (int j = 1; j <= 8; ++j) f.v[i] += a[static_cast<std::size_t>(j)] * std::cos(kTau * j * y);
    }
    const CellGrid bf = bracket(f);
    for (std::size_t i = 0; i < N; ++i) {
      const double y = static_cast<double>(i) / static_cast<double>(N);
      double exact = 0.0;
      for (int j = 1; j <= 8; ++j)
        exact += a[static_cast<std::size_t>(j)] * std::sin(kTau * j * y) / (kTau * j);
      worst = std::max(worst, std::abs(bf.v[i] - exact));
    }
  }
  const double secs = t.elapsed();
  report(1, worst < 1e-10 && secs < 1.0,
         fmt("trig antidifferentiation max err %.2e, %.2fs", worst, secs));
}

void criterion2() {
  Timer t;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t N = 512;
  double worst = 0.0;
  auto poly = [&](std::array<double, 9>& a, std::array<double, 9>& b) {
    CellGrid f = make_cell_grid(N);
    for (int j = 1; j <= 8; ++j) {
      a[static_cast<std::size_t>(j)] = U(rng);
      b[static_cast<std::size_t>(j)] = U(rng);
    }
    for (std::size_t i = 0; i < N; ++i) {
      const double y = static_cast<double>(i) / static_cast<double>(N);
      for (int j = 1; j <= 8; ++j)
        f.v[i] += a[static_cast<std::size_t>(j)] * std::cos(kTau * j * y) +
                  b[static_cast<std::size_t>(j)] * std::sin(kTau * j * y);
    }
    return f;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 9> af{}, bf_{}, ag{}, bg_{};
    const CellGrid f = poly(af, bf_);
    const CellGrid g = poly(ag, bg_);
    const CellGrid brf = bracket(f), brg = bracket(g);
    worst = std::max(worst, std::abs(product_mean({&f, &brf})));
    worst = std::max(worst, std::abs(product_mean({&f, &brg}) + product_mean({&brf, &g})));
    const CellGrid n3 = nested_bracket(f, 3), n5 = nested_bracket(f, 5);
    worst = std::max(worst, std::abs(product_mean({&f, &n3})));
    worst = std::max(worst, std::abs(product_mean({&f, &n5})));
    const CellGrid n2 = nested_bracket(f, 2);
    double target = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const std::size_t js = static_cast<std::size_t>(j);
      target -= (af[js] * af[js] + bf_[js] * bf_[js]) / (2.0 * kTau * j * kTau * j);
    }
    worst = std::max(worst, std::abs(product_mean({&f, &n2}) - target));
  }
  const bool trig_ok = worst < 1e-12;

  bool generic_ok = true;
  for (const IdentityCheck& c : verify_bracket_identities(7, 100, 2048, 1e-8))
    generic_ok = generic_ok && c.ok;

  bool even_ok = true;
  std::uniform_real_distribution<double> W(0.2, 0.8), D(0.3, 2.0), P(0.0, kTau);
  for (int trial = 0; trial < 5; ++trial) {
    const PeriodicProfile pwc =
        PiecewiseConstant{{W(rng), 1.0}, {D(rng), D(rng)}};
    const PeriodicProfile sine = Sinusoidal{1.0, (trial % 2 ? -1.0 : 1.0) * W(rng), P(rng)};
    for (const PeriodicProfile* p : {&pwc, &sine}) {
      const auto checks = verify_profile_identities(*p, 2048);
      if (checks.size() != 8) even_ok = false;
      for (const auto& c : checks) even_ok = even_ok && c.ok;
    }
  }
  const double secs = t.elapsed();
  report(2, trig_ok && generic_ok && even_ok && secs < 10.0,
         fmt("trig max err %.2e, generic %s, even-profile %s, %.1fs", worst,
             generic_ok ? "ok" : "FAIL", even_ok ? "ok" : "FAIL", secs));
}

void criterion3() {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> D(0.2, 2.0);
  double worst_rel = 0.0;
  bool margins = true;
  int done = 0;
  while (done < 50) {
    const double d1 = D(rng), d2 = D(rng);
    if (std::abs(d1 - d2) < 0.1) continue;
    ++done;
    const PwcClosedForm cf = pwc_closed_form(d1, d2);
    const HomogenizedCoefficients c =
        compute(PiecewiseConstant{{0.5, 1.0}, {1.0 / d1, 1.0 / d2}}, 9.81);
    worst_rel = std::max(worst_rel, std::abs(c.mu - cf.mu) / cf.mu);
    worst_rel = std::max(worst_rel, std::abs(c.nu1 - cf.nu1) / cf.nu1);
    worst_rel = std::max(worst_rel, std::abs(c.nu2 - cf.nu2) / cf.nu2);
    margins = margins && c.stability_margin() > 0.0 && cf.stability_margin > 0.0;
  }

  int bad_signs = 0;
  std::uniform_real_distribution<double> A(0.2, 0.7), P(0.0, kTau), B(0.05, 0.95);
  auto check_signs = [&](const PeriodicProfile& p) {
    if (!sign_report(compute(p, 9.81)).all_ok()) ++bad_signs;
  };
  for (int i = 0; i < 25; ++i) check_signs(Sampled{random_smooth_depth(rng, 512).v});
  for (int i = 0; i < 15; ++i) check_signs(Sinusoidal{1.0, (i % 2 ? -1.0 : 1.0) * A(rng), P(rng)});
  for (int i = 0; i < 10; ++i) {
    std::vector<double> cuts = {B(rng), B(rng), B(rng)};
    std::sort(cuts.begin(), cuts.end());
    check_signs(PiecewiseConstant{{cuts[0], cuts[1], cuts[2], 1.0},
                                  {0.2 + D(rng), 0.2 + D(rng), 0.2 + D(rng), 0.2 + D(rng)}});
  }
  report(3, worst_rel < 1e-12 && margins && bad_signs == 0,
         fmt("closed-form rel err %.2e over 50 pairs, %d sign violations", worst_rel, bad_signs));
}

void criterion4() {
  const HomogenizedCoefficients& c = coeffs_a();
  const double r = (c.nu1 + c.nu2) / (c.mu * c.mu) - 1.0;
  std::vector<double> K(200);
  for (std::size_t i = 0; i < K.size(); ++i)
    K[i] = 0.01 * std::pow(1000.0, static_cast<double>(i) / 199.0);

  double worst_res = 0.0, worst_smallk = 0.0;
  bool structure = true;
  for (DispersionForm f : {DispersionForm::ttt, DispersionForm::xxx, DispersionForm::xxt,
                           DispersionForm::xxt5}) {
    const std::optional<double> rr =
        f == DispersionForm::xxt5 ? std::optional<double>(r) : std::nullopt;
    for (const DispersionPoint& p : dispersion_table(f, K, rr)) {
      for (const std::complex<double>& w : p.omega)
        worst_res = std::max(worst_res, form_residual(f, p.K, w, rr));
      if (f == DispersionForm::ttt) {
        bool has_pos_imag = false;
        for (const auto& w : p.omega) has_pos_imag = has_pos_imag || w.imag() > 0.0;
        structure = structure && has_pos_imag;
      }
      if (f == DispersionForm::xxx) structure = structure && (p.unstable == (p.K > 1.0));
      if (f == DispersionForm::xxt) structure = structure && !p.unstable;
      if (f != DispersionForm::xxt5 && p.K <= 0.1) {
        double principal = -2.0;
        for (const auto& w : p.omega)
          if (std::abs(w.imag()) < 1e-14) principal = std::max(principal, w.real());
        const double dev = std::abs(principal - (1.0 - 0.5 * p.K * p.K));
        worst_smallk = std::max(worst_smallk, dev / (p.K * p.K * p.K * p.K));
      }
    }
  }
  report(4, worst_res < 1e-12 && structure && worst_smallk <= 2.0,
         fmt("max residual %.2e, small-K deviation %.2f K^4, structure %s", worst_res,
             worst_smallk, structure ? "ok" : "FAIL"));
}

void criterion5() {
  Timer t;
  const HomogenizedCoefficients& c = coeffs_a();
  const TravelingWaveSolution w3 = solitary_wave_o3(c, 1.023928 * c.c);
  bool ok = w3.first_integral_drift < 1e-8 && w3.residual < 1e-6;
  std::string why;
  for (double ratio : {1.01, 1.02, 1.03, 1.04}) {
    try {
      const TravelingWaveSolution w5 = solitary_wave_o5(c, ratio * c.c);
      if (w5.collapsed || !(w5.residual < 1e-6)) {
        ok = false;
        why += fmt(" o5@%.2fc degenerate", ratio);
      }
    } catch (const std::exception&) {
      ok = false;
      why += fmt(" o5@%.2fc threw", ratio);
    }
  }
  SolitaryWaveOptions oB, oC;
  oB.points_per_half_width = 100.0;
  oC.points_per_half_width = 200.0;
  const double V5 = 1.02327 * c.c;
  const double a1 = solitary_wave_o5(c, V5).amplitude;
  const double a2 = solitary_wave_o5(c, V5, 1.0, oB).amplitude;
  const double a4 = solitary_wave_o5(c, V5, 1.0, oC).amplitude;
  const double decay = (a1 - a2) / (a2 - a4);
  ok = ok && decay > 3.3 && decay < 5.0;
  const double part1 = t.elapsed();

  const double A = fission().amplitude;
  Timer t2;
  const double r3 = speed_for_amplitude(c, A, 3) / c.c;
  const double r5 = speed_for_amplitude(c, A, 5) / c.c;
  const bool ok3 = std::abs(r3 - 1.023928) < 1e-3;
  const bool ok5 = std::abs(r5 - 1.02327) < 1e-3;
  const double own = part1 + t2.elapsed();
  report(5, ok && ok3 && ok5 && own < 30.0,
         fmt("A_fv=%.6e -> V3/c=%.6f%s V5/c=%.6f%s, refine ratio %.2f, drift %.1e, %.1fs%s", A,
             r3, ok3 ? "" : "(out)", r5, ok5 ? "" : "(out)", decay, w3.first_integral_drift, own,
             why.c_str()));
}

void criterion6() {
  const ScenarioConfig sc = scenario_a();
  auto propagate = [&](int order) {
    SolverConfig cfg;
    cfg.order = order;
    cfg.dt_control.rtol = 1e-8;
    cfg.dt_control.atol = 1e-12;
    HomogenizedSolver s(sc.bathymetry, sc.g, cfg, 4096, 100.0);
    const HomogenizedCoefficients& cc = s.coefficients();
    const double V = (order == 3 ? 1.023928 : 1.02327) * cc.c;
    const TravelingWaveSolution w =
        order == 3 ? solitary_wave_o3(cc, V) : solitary_wave_o5(cc, V);
    FieldState& st = s.state();
    const double x0 = -30.0;
    std::vector<double> eta(st.size()), q(st.size());
    for (std::size_t j = 0; j < st.size(); ++j) {
      eta[j] = eta_at(w, st.x(j) - x0);
      q[j] = V * eta[j];
    }
    s.set_initial(eta, q);
    const double T = 50.0 / cc.c;
    s.simulate(T);
    double err = 0.0;
    for (std::size_t j = 0; j < st.size(); ++j)
      err = std::max(err, std::abs(st.eta[j] - eta_at(w, st.x(j) - x0 - V * T)));
    return err / w.amplitude;
  };
  const double rel3 = propagate(3), rel5 = propagate(5);

  SolverConfig mc;
  HomogenizedSolver ms(sc.bathymetry, sc.g, mc, 1024, 100.0);
  {
    FieldState& st = ms.state();
    std::vector<double> eta(st.size()), q(st.size(), 0.0);
    for (std::size_t j = 0; j < st.size(); ++j) {
      const double x = st.x(j) / 3.0;
      eta[j] = 0.025 * std::exp(-x * x);
    }
    ms.set_initial(eta, q);
  }
  const double m0 = ms.mass();
  ms.simulate(10.0);
  const double drift = std::abs(ms.mass() - m0);

  double worst_phase = 0.0;
  const std::size_t M = 1024;
  const double L = 100.0;
  RealFFT fft(M);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  for (std::size_t j : {16u, 64u, 128u, 204u}) {
    SolverConfig cfg;
    cfg.dt_control.rtol = 1e-9;
    cfg.dt_control.atol = 1e-21;
    HomogenizedSolver s(sc.bathymetry, sc.g, cfg, M, L);
    const HomogenizedCoefficients& cc = s.coefficients();
    const double k = std::numbers::pi * static_cast<double>(j) / L;
    const double omega = cc.c * k / std::sqrt(1.0 + cc.mu * k * k);
    FieldState& st = s.state();
    std::vector<double> eta(M), q(M);
    for (std::size_t i = 0; i < M; ++i) {
      eta[i] = 1e-9 * std::cos(k * st.x(i));
      q[i] = (omega / k) * eta[i];
    }
    s.set_initial(eta, q);
    fft.forward(st.eta.data(), spec.data());
    const std::complex<double> before = spec[j];
    const double T = 5.0;
    s.simulate(T);
    fft.forward(st.eta.data(), spec.data());
    const std::complex<double> ratio = spec[j] / before;
    worst_phase = std::max(worst_phase, std::abs(std::abs(ratio) - 1.0));
    worst_phase =
        std::max(worst_phase, std::abs(std::arg(ratio * std::polar(1.0, omega * T))) / (omega * T));
  }
  report(6, rel3 < 1e-3 && rel5 < 1e-3 && drift < 1e-12 && worst_phase < 1e-6,
         fmt("shape rel err o3 %.2e, o5 %.2e, phase err %.2e, mass drift %.2e", rel3, rel5,
             worst_phase, drift));
}

void criterion7() {
  const ScenarioConfig sc = scenario_a();
  FvConfig lc;
  lc.length = 25.0;
  lc.cells_per_period = sc.cells_per_period;
  lc.g = sc.g;
  FvReference lake(sc.bathymetry, lc);
  const double eta_c = 0.02;
  lake.set_state(std::vector<double>(lake.cells(), eta_c),
                 std::vector<double>(lake.cells(), 0.0));
  for (int i = 0; i < 1000; ++i) lake.step(lc.cfl * lake.dx() / lake.max_wave_speed());
  double lake_dev = 0.0;
  const std::vector<double> ls = lake.surface(), lq = lake.discharge();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    lake_dev = std::max(lake_dev, std::abs(ls[i] - eta_c));
    lake_dev = std::max(lake_dev, std::abs(lq[i]));
  }

  auto dam_error = [](std::size_t cpp) {
    FvConfig fc;
    fc.length = 100.0;
    fc.cells_per_period = cpp;
    FvReference ref(PiecewiseConstant{{1.0}, {1.0}}, fc);
    std::vector<double> eta(ref.cells()), hu(ref.cells(), 0.0);
    for (std::size_t i = 0; i < eta.size(); ++i)
      eta[i] = ref.x_center(i) < 50.0 ? 0.0 : -0.8;
    ref.set_state(eta, hu);
    ref.advance_to(8.0);
    const DamBreakExact exact(1.0, 0.2, 9.81);
    const std::vector<double> s = ref.surface();
    double l1 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      l1 += std::abs(s[i] + 1.0 - exact.h(ref.x_center(i) - 50.0, 8.0)) * ref.dx();
    return l1;
  };
  const double e32 = dam_error(32), e64 = dam_error(64), e128 = dam_error(128);
  const bool dam_ok = e64 < e32 && e128 < e64 && e128 / e32 < 0.5;

  const FissionRun& fz = fission();
  const std::vector<double> smooth = detail::moving_mean(fz.surface, fz.period_cells);
  int crests = 0;
  bool armed = true;
  double peak = 0.0;
  for (double v : smooth) {
    if (armed) {
      if (v > 0.2 * fz.amplitude) {
        ++crests;
        armed = false;
        peak = v;
      }
    } else {
      peak = std::max(peak, v);
      if (v < 0.3 * peak) armed = true;
    }
  }
  report(7, lake_dev < 1e-14 && dam_ok && crests >= 3,
         fmt("lake dev %.1e, dam L1 %.3e/%.3e/%.3e, %d crests at t=300 (fv %.0fs)", lake_dev,
             e32, e64, e128, crests, fz.seconds));
}

void criterion8() {
  const ScenarioConfig sc = scenario_a();
  FvReference ref = make_reference_solver(sc);
  std::vector<double> surf50;
  Timer tf;
  for (double t : sc.output_times) {
    ref.advance_to(t);
    if (t == 50.0) surf50 = ref.surface();
  }
  g_sec_fv = tf.elapsed();
  const std::vector<double> surf150 = ref.surface();

  std::array<std::vector<double>, 6> eta150;
  std::vector<double> eta50_o5, xs;
  std::array<double, 6> secs{};
  double dxa = 0.0;
  for (int order : {3, 4, 5}) {
    HomogenizedSolver s = make_averaged_solver(sc, order);
    const FieldState& st = s.state();
    if (xs.empty()) {
      dxa = st.dx();
      xs.resize(st.size());
      for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = st.x(j);
    }
    Timer th;
    for (double t : sc.output_times) {
      s.advance_to(t);
      if (order == 5 && t == 50.0) eta50_o5 = st.eta;
    }
    secs[static_cast<std::size_t>(order)] = th.elapsed();
    eta150[static_cast<std::size_t>(order)] = st.eta;
  }
  g_sec_o3 = secs[3];
  g_sec_o5 = secs[5];
  g_c8_ran = true;

  std::vector<double> xq;
  for (std::size_t i = 0; i < ref.cells(); ++i) {
    const double xc = ref.x_center(i);
    if (!(xc < std::min(sc.half_length, sc.reference_length))) break;
    xq.push_back(xc);
  }
  const std::vector<double> fv150(surf150.begin(),
                                  surf150.begin() + static_cast<std::ptrdiff_t>(xq.size()));
  auto err_vs_fv = [&](const std::vector<double>& eta) {
    return linf_diff(resample_linear(xs, eta, xq), fv150);
  };
  const double err3 = err_vs_fv(eta150[3]);
  const double err4 = err_vs_fv(eta150[4]);
  const double err5 = err_vs_fv(eta150[5]);
  const double d43 = linf_diff(eta150[4], eta150[3]);
  const bool order_ok = err5 < err3;
  const bool o4_ok = d43 < 0.1 * (err3 - err5);

  const std::vector<double> right(eta50_o5.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2),
                                  eta50_o5.end());
  const CrestReport ch = extract_leading_crest(right, dxa, 0);
  const CrestReport cf = extract_leading_crest(surf50, ref.dx(), sc.cells_per_period);
  const double crest_rel = std::abs(ch.amplitude - cf.amplitude) / cf.amplitude;
  report(8, order_ok && o4_ok && crest_rel < 0.05,
         fmt("t=150 err o3 %.3e, o4 %.3e, o5 %.3e, |o4-o3| %.3e, crest rel %.4f at t=50", err3,
             err4, err5, d43, crest_rel));
}

void criterion9(double suite_seconds) {
  if (!g_c8_ran) {
    report(9, false, "comparison run unavailable");
    return;
  }
  const double ratio3 = g_sec_fv / g_sec_o3;
  const double ratio5 = g_sec_fv / g_sec_o5;
  report(9, ratio5 >= 50.0 && suite_seconds < 900.0,
         fmt("fv %.1fs, order 3 %.2fs (%.0fx), order 5 %.2fs (%.0fx), suite %.0fs", g_sec_fv,
             g_sec_o3, ratio3, g_sec_o5, ratio5, suite_seconds));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) configs_dir = argv[1];
  Timer total;
  guard(1, criterion1);
  guard(2, criterion2);
  guard(3, criterion3);
  guard(4, criterion4);
  guard(5, criterion5);
  guard(6, criterion6);
  guard(7, criterion7);
  guard(8, criterion8);
  guard(9, [&] { criterion9(total.elapsed()); });
  std::printf("total_seconds = %.1f\n", total.elapsed());
  return failures == 0 ? 0 : 1;
}
