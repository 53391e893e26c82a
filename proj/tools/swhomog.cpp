#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swhomog/dispersion.hpp"
#include "swhomog/harness.hpp"

namespace {

using namespace swhomog;

/// "-" means stdout; anything else is opened through output_path().
struct Sink {
  std::ofstream file;
  std::ostream* os = nullptr;

  explicit Sink(const std::string& path) {
    if (path == "-") {
      os = &std::cout;
      return;
    }
    const std::string p = output_path(path);
    file.open(p);
    if (!file) throw Error("cannot open '" + p + "' for writing");
    os = &file;
  }
  std::ostream& get() { return *os; }
};

void kv(const char* key, double v) { std::printf("%s = %s\n", key, format_double(v).c_str()); }
void kv(const char* key, const char* v) { std::printf("%s = %s\n", key, v); }

void run_dump(const std::string& config_path) {
  const ScenarioConfig sc = load_scenario(config_path);
  const HomogenizedCoefficients c = compute(sc.bathymetry, sc.g);
  char name[32];
  kv("g", c.g);
  kv("c", c.c);
  kv("mu", c.mu);
  kv("gamma", c.gamma);
  kv("nu1", c.nu1);
  kv("nu2", c.nu2);
  kv("stability_margin", c.stability_margin());
  for (int k = 1; k <= 7; ++k) {
    std::snprintf(name, sizeof name, "moment_%d", k);
    kv(name, c.moment[static_cast<std::size_t>(k)]);
  }
  for (int j = 2; j <= 7; ++j) {
    std::snprintf(name, sizeof name, "theta_%d", j);
    kv(name, c.theta[static_cast<std::size_t>(j)]);
  }
  for (int j = 2; j <= 7; ++j) {
    std::snprintf(name, sizeof name, "theta_hat_%d", j);
    kv(name, c.theta_hat[static_cast<std::size_t>(j)]);
  }
  for (int j = 1; j <= 9; ++j) {
    std::snprintf(name, sizeof name, "alpha_%d", j);
    kv(name, c.alpha[static_cast<std::size_t>(j)]);
  }
  for (int j : {4, 6, 8, 9, 10, 11}) {
    std::snprintf(name, sizeof name, "alpha_hat_%d", j);
    kv(name, c.alpha_hat[static_cast<std::size_t>(j)]);
  }
  kv("zeta_13", c.zeta13);
  kv("zeta_14", c.zeta14);
  kv("zeta_22", c.zeta22);
  kv("zeta_212", c.zeta212);
  kv("zeta_122", c.zeta122);
  kv("zeta_311", c.zeta311);
  kv("translation_even", c.translation_even ? "true" : "false");
  if (c.translation_even) {
    for (int j = 1; j <= 14; ++j) {
      std::snprintf(name, sizeof name, "beta_%d", j);
      kv(name, c.beta[static_cast<std::size_t>(j)]);
    }
  }
}

void run_dispersion(const std::string& form_s, double kmin, double kmax, int points,
                    std::optional<double> r, const std::string& config_path,
                    const std::string& out_path) {
  const auto form = parse_dispersion_form(form_s);
  if (!form)
    throw InvalidInput("dispersion: unknown form '" + form_s + "' (use ttt, xxx, xxt, xxt5)");
  if (points < 1) throw InvalidInput("dispersion: points must be >= 1");
  if (!(kmax >= kmin)) throw InvalidInput("dispersion: kmax must be >= kmin");
  if (!r && !config_path.empty()) {
    const ScenarioConfig sc = load_scenario(config_path);
    const HomogenizedCoefficients c = compute(sc.bathymetry, sc.g);
    if (!(c.mu > 0.0))
      throw InvalidInput("dispersion: flat bathymetry has no dispersion ratio");
    r = (c.nu1 + c.nu2) / (c.mu * c.mu) - 1.0;
  }
  std::vector<double> K(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    K[static_cast<std::size_t>(i)] =
        points == 1 ? kmin : kmin + (kmax - kmin) * static_cast<double>(i) / (points - 1);
  const auto table = dispersion_table(*form, K, r);
  Sink sink(out_path);
  CsvWriter csv(sink.get(), {"K", "branch", "omega_re", "omega_im", "unstable"});
  for (const DispersionPoint& p : table)
    for (std::size_t b = 0; b < p.omega.size(); ++b)
      csv.row({p.K, static_cast<double>(b), p.omega[b].real(), p.omega[b].imag(),
               p.unstable ? 1.0 : 0.0});
}

void run_wave(const std::string& config_path, int order_opt, std::optional<double> speed,
              std::optional<double> ratio, std::optional<double> amplitude,
              std::optional<double> level, const std::string& out_path) {
  const ScenarioConfig sc = load_scenario(config_path);
  const int order = order_opt > 0 ? order_opt : sc.order;
  if (order != 3 && order != 5)
    throw InvalidInput("traveling-wave: order must be 3 or 5");
  const int picks = (speed ? 1 : 0) + (ratio ? 1 : 0) + (amplitude ? 1 : 0);
  if (picks != 1)
    throw InvalidInput("traveling-wave: give exactly one of --speed, --ratio, --amplitude");
  const HomogenizedCoefficients c = compute(sc.bathymetry, sc.g);
  double V;
  if (speed) V = *speed;
  else if (ratio) V = *ratio * c.c;
  else V = speed_for_amplitude(c, *amplitude, order, sc.delta);

  Sink sink(out_path);
  if (level) {
    if (order != 3)
      throw InvalidInput("traveling-wave: periodic orbits are available at order 3 only");
    const PeriodicWaveSolution w = periodic_wave_o3(c, V, *level, sc.delta);
    CsvWriter csv(sink.get(), {"xi", "eta"});
    for (std::size_t i = 0; i < w.xi.size(); ++i) csv.row({w.xi[i], w.eta[i]});
    kv("speed", w.V);
    kv("sonic_speed", c.c);
    kv("energy_level", w.energy_level);
    kv("period", w.period);
    kv("eta_min", w.eta_min);
    kv("eta_max", w.eta_max);
    kv("period_exceeds_window", w.period_exceeds_window ? "true" : "false");
    return;
  }
  const TravelingWaveSolution w =
      order == 3 ? solitary_wave_o3(c, V, sc.delta) : solitary_wave_o5(c, V, sc.delta);
  CsvWriter csv(sink.get(), {"xi", "eta"});
  for (std::size_t i = 0; i < w.xi.size(); ++i) csv.row({w.xi[i], w.eta[i]});
  kv("speed", w.V);
  kv("sonic_speed", c.c);
  kv("speed_ratio", w.V / c.c);
  kv("amplitude", w.amplitude);
  kv("half_width", w.half_width);
  kv("decay_rate", w.decay_rate);
  kv("residual", w.residual);
  kv("first_integral_drift", w.first_integral_drift);
  kv("energy_level", w.energy_level);
  if (order == 5) kv("collapsed", w.collapsed ? "true" : "false");
}

void run_simulate(const std::string& config_path, int order, const std::string& out_path,
                  bool reconstruct, const std::string& save_path, const std::string& load_path) {
  const ScenarioConfig sc = load_scenario(config_path);
  if (sc.output_times.empty()) throw InvalidInput("simulate: no output times configured");
  HomogenizedSolver solver = make_averaged_solver(sc, order);
  if (!load_path.empty()) {
    const FieldState fs = read_checkpoint(load_path);
    if (fs.eta.size() != sc.modes)
      throw InvalidInput("simulate: checkpoint grid size differs from config");
    if (fs.L != sc.half_length)
      throw InvalidInput("simulate: checkpoint domain length differs from config");
    for (double t : sc.output_times)
      if (t < fs.t) throw InvalidInput("simulate: output time lies before the checkpoint time");
    solver.set_initial(fs.eta, fs.q, fs.t);
  }
  const auto& st = solver.state();
  std::vector<double> x(st.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = st.x(j);

  Sink sink(out_path);
  SnapshotWriter snap(sink.get(), reconstruct, false);
  const auto t0 = std::chrono::steady_clock::now();
  for (double t : sc.output_times) {
    solver.advance_to(t);
    if (reconstruct) {
      const std::vector<double> full = solver.fast_scale_reconstruction();
      snap.add(t, x, st.eta, st.q, &full, nullptr);
    } else {
      snap.add(t, x, st.eta, st.q);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!save_path.empty()) write_checkpoint(output_path(save_path), solver.state());
  std::printf("steps = %zu\n", solver.steps_taken());
  std::printf("wall_seconds = %.3f\n", secs);
}

void run_reference(const std::string& config_path, const std::string& out_path) {
  const ScenarioConfig sc = load_scenario(config_path);
  if (sc.output_times.empty()) throw InvalidInput("reference: no output times configured");
  FvReference ref = make_reference_solver(sc);
  std::vector<double> x(ref.cells());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = ref.x_center(i);

  Sink sink(out_path);
  SnapshotWriter snap(sink.get());
  const auto t0 = std::chrono::steady_clock::now();
  for (double t : sc.output_times) {
    ref.advance_to(t);
    snap.add(t, x, ref.surface(), ref.discharge());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("steps = %zu\n", ref.steps_taken());
  std::printf("wall_seconds = %.3f\n", secs);
}

void run_compare(const std::string& config_path, int order, const std::string& report_path,
                 const std::string& aligned_path) {
  const ScenarioConfig sc = load_scenario(config_path);
  Sink report(report_path);
  std::optional<Sink> aligned;
  if (!aligned_path.empty()) aligned.emplace(aligned_path);
  const ComparisonReport rep = run_comparison(sc, order, aligned ? &aligned->get() : nullptr);
  write_report_csv(report.get(), rep);
  for (const SnapshotMetrics& m : rep.snapshots)
    std::printf("t = %-8g linf = %-12.4e l2 = %-12.4e crest averaged (%.4f, %.6g) "
                "reference (%.4f, %.6g)\n",
                m.t, m.linf, m.l2, m.crest_x_averaged, m.crest_amplitude_averaged,
                m.crest_x_reference, m.crest_amplitude_reference);
  std::printf("steps_averaged = %zu\n", rep.steps_averaged);
  std::printf("steps_reference = %zu\n", rep.steps_reference);
  std::printf("wall_seconds_averaged = %.3f\n", rep.seconds_averaged);
  std::printf("wall_seconds_reference = %.3f\n", rep.seconds_reference);
  if (rep.seconds_averaged > 0.0)
    std::printf("speedup = %.1f\n", rep.seconds_reference / rep.seconds_averaged);
}

void run_verify(const std::string& config_path, std::size_t samples, int trials,
                std::uint64_t seed) {
  const ScenarioConfig sc = load_scenario(config_path);
  std::vector<IdentityCheck> checks = verify_profile_identities(sc.bathymetry, samples);
  const std::vector<IdentityCheck> generic = verify_bracket_identities(seed, trials, samples);
  checks.insert(checks.end(), generic.begin(), generic.end());
  bool all_ok = true;
  for (const IdentityCheck& c : checks) {
    std::printf("%s  %-44s |lhs - rhs| = %.3e\n", c.ok ? "PASS" : "FAIL", c.name.c_str(), c.diff);
    all_ok = all_ok && c.ok;
  }
  std::printf("%zu checks, %s\n", checks.size(), all_ok ? "all passed" : "FAILURES PRESENT");
  if (!all_ok) throw Error("identity checks failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenized shallow-water toolkit", "swhomog"};
  app.require_subcommand(1);

  std::string config_path, report_path, aligned_path, save_path, load_path, form_s;
  std::string disp_out = "-", wave_out = "traveling_wave.csv", sim_out = "averaged.csv",
              ref_out = "reference.csv";
  double kmin = 0.0, kmax = 5.0, r_val = 0.0;
  double speed_val = 0.0, ratio_val = 0.0, amp_val = 0.0, level_val = 0.0;
  int points = 201, order = 0;
  std::size_t samples = 4096;
  int trials = 3;
  std::uint64_t seed = 7;
  bool reconstruct = false;

  auto* dump = app.add_subcommand("dump-coefficients",
                                  "Print every homogenized coefficient of a scenario's bathymetry");
  dump->add_option("--config", config_path, "scenario file")->required();

  auto* disp = app.add_subcommand("dispersion", "Tabulate dispersion branches as CSV");
  disp->add_option("--form", form_s, "ttt, xxx, xxt, or xxt5")->required();
  disp->add_option("--kmin", kmin, "lowest scaled wavenumber");
  disp->add_option("--kmax", kmax, "highest scaled wavenumber");
  disp->add_option("--points", points, "number of samples");
  auto* r_opt = disp->add_option("--r", r_val, "dispersion ratio for xxt5");
  disp->add_option("--config", config_path, "scenario file supplying the ratio");
  disp->add_option("--output", disp_out, "CSV destination, - for stdout");

  auto* wave = app.add_subcommand("traveling-wave",
                                  "Solve for a solitary or periodic traveling wave profile");
  wave->add_option("--config", config_path, "scenario file")->required();
  wave->add_option("--order", order, "3 or 5 (default: from config)");
  auto* w_speed = wave->add_option("--speed", speed_val, "wave speed");
  auto* w_ratio = wave->add_option("--ratio", ratio_val, "wave speed over sonic speed");
  auto* w_amp = wave->add_option("--amplitude", amp_val, "crest height to match");
  auto* w_level = wave->add_option("--level", level_val, "energy level for a periodic orbit");
  wave->add_option("--output", wave_out, "CSV destination");

  auto* sim = app.add_subcommand("simulate", "Integrate the averaged equations");
  sim->add_option("--config", config_path, "scenario file")->required();
  sim->add_option("--order", order, "override the configured order");
  sim->add_option("--output", sim_out, "CSV destination");
  sim->add_flag("--reconstruct", reconstruct, "add the fast-scale surface column");
  sim->add_option("--save-state", save_path, "write a checkpoint after the last output time");
  sim->add_option("--load-state", load_path, "resume from a checkpoint");

  auto* refc = app.add_subcommand("reference", "Run the finite-volume reference solver");
  refc->add_option("--config", config_path, "scenario file")->required();
  refc->add_option("--output", ref_out, "CSV destination");

  auto* comp = app.add_subcommand("compare",
                                  "Run both solvers and report surface differences");
  comp->add_option("--config", config_path, "scenario file")->required();
  comp->add_option("--order", order, "override the configured order");
  comp->add_option("--report", report_path, "metrics CSV destination")
      ->default_val("compare_report.csv");
  comp->add_option("--aligned", aligned_path, "also write both surfaces on the shared grid");

  auto* verify = app.add_subcommand("verify-identities",
                                    "Check the averaging calculus on the scenario's bathymetry");
  verify->add_option("--config", config_path, "scenario file")->required();
  verify->add_option("--samples", samples, "cell samples per check");
  verify->add_option("--trials", trials, "random profiles for the generic checks");
  verify->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
    auto opt = [](CLI::Option* o, double v) {
      return o->count() ? std::optional<double>(v) : std::nullopt;
    };
    if (app.got_subcommand(dump)) run_dump(config_path);
    else if (app.got_subcommand(disp))
      run_dispersion(form_s, kmin, kmax, points, opt(r_opt, r_val), config_path, disp_out);
    else if (app.got_subcommand(wave))
      run_wave(config_path, order, opt(w_speed, speed_val), opt(w_ratio, ratio_val),
               opt(w_amp, amp_val), opt(w_level, level_val), wave_out);
    else if (app.got_subcommand(sim))
      run_simulate(config_path, order, sim_out, reconstruct, save_path, load_path);
    else if (app.got_subcommand(refc)) run_reference(config_path, ref_out);
    else if (app.got_subcommand(comp)) run_compare(config_path, order, report_path, aligned_path);
    else if (app.got_subcommand(verify)) run_verify(config_path, samples, trials, seed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const swhomog::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
