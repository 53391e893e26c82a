#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "swhomog/cell_profile.hpp"
#include "swhomog/csv_io.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/spectral_solver.hpp"

namespace swhomog {

/// Initial surface displacement choices. Displacements are measured from the
/// still surface; discharge starts at zero unless stated otherwise.
struct GaussianPulse {
  double amplitude = 0.025;
  double width = 3.0;
  double center = 0.0;
};

/// Solitary wave of the averaged model at the given order, moving right at
/// `speed` with its crest at `center`; discharge is speed times elevation.
struct SolitaryStart {
  int order = 3;
  double speed = 0.0;
  double center = 0.0;
};

/// Verbatim samples on the averaged grid (left edge to right edge). An empty
/// discharge list means zero discharge.
struct SampledStart {
  std::vector<double> eta;
  std::vector<double> q;
};

using InitialCondition = std::variant<GaussianPulse, SolitaryStart, SampledStart>;

/// Everything one run needs: the bottom, physics constants, initial data,
/// both solver grids, and the snapshot schedule.
struct ScenarioConfig {
  std::string name = "scenario";
  PeriodicProfile bathymetry = PiecewiseConstant{{1.0}, {1.0}};
  double delta = 1.0;
  double g = 9.81;
  double eta0 = 0.0;
  InitialCondition initial = GaussianPulse{};
  double half_length = 400.0;       // averaged domain [-half_length, half_length]
  std::size_t modes = 8192;         // averaged grid size
  double reference_length = 400.0;  // reference domain [0, reference_length]
  std::size_t cells_per_period = 64;
  std::vector<double> output_times;
  int order = 3;
  Dealias dealias = Dealias::two_thirds;
  DtControl dt_control;
};

inline void validate(const ScenarioConfig& c) {
  if (c.name.empty() || c.name.find('\n') != std::string::npos)
    throw InvalidInput("scenario: name must be a nonempty single line");
  validate(c.bathymetry);
  if (!(c.delta > 0.0)) throw InvalidInput("scenario: bathymetry period must be positive");
  if (!(c.g > 0.0)) throw InvalidInput("scenario: gravity must be positive");
  if (!(c.half_length > 0.0) || !(c.reference_length > 0.0))
    throw InvalidInput("scenario: domain lengths must be positive");
  if (c.modes < 16 || !is_power_of_two(c.modes))
    throw InvalidInput("scenario: modes must be a power of two >= 16");
  if (c.cells_per_period < 4)
    throw InvalidInput("scenario: needs at least 4 cells per period");
  for (std::size_t i = 0; i + 1 < c.output_times.size(); ++i)
    if (!(c.output_times[i] < c.output_times[i + 1]))
      throw InvalidInput("scenario: output times must be strictly increasing");
  for (double t : c.output_times)
    if (!(t >= 0.0)) throw InvalidInput("scenario: output times must be nonnegative");
  if (c.order < 3 || c.order > 5) throw InvalidInput("scenario: order must be 3, 4, or 5");
  if (!(c.dt_control.rtol > 0.0) || !(c.dt_control.atol >= 0.0) || !(c.dt_control.dt > 0.0))
    throw InvalidInput("scenario: step control values must be positive");
  if (const auto* s = std::get_if<SolitaryStart>(&c.initial)) {
    if (s->order != 3 && s->order != 5)
      throw InvalidInput("scenario: solitary start order must be 3 or 5");
    if (!(s->speed > 0.0)) throw InvalidInput("scenario: solitary start speed must be positive");
  } else if (const auto* s2 = std::get_if<SampledStart>(&c.initial)) {
    if (s2->eta.size() != c.modes)
      throw InvalidInput("scenario: sampled start must match the averaged grid size");
    if (!s2->q.empty() && s2->q.size() != s2->eta.size())
      throw InvalidInput("scenario: sampled discharge must match the elevation samples");
  } else if (const auto* s3 = std::get_if<GaussianPulse>(&c.initial)) {
    if (!(s3->width > 0.0)) throw InvalidInput("scenario: pulse width must be positive");
  }
}

inline const char* to_string(Dealias d) {
  switch (d) {
    case Dealias::none: return "none";
    case Dealias::two_thirds: return "two_thirds";
    case Dealias::half: return "half";
  }
  return "two_thirds";
}

namespace detail {

inline std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw InvalidInput("config: bad number '" + s + "' for " + where);
  return v;
}

inline long parse_integer(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw InvalidInput("config: bad integer '" + s + "' for " + where);
  return v;
}

inline bool parse_flag(const std::string& s, const std::string& where) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw InvalidInput("config: expected true or false for " + where + ", got '" + s + "'");
}

inline std::vector<double> parse_numbers(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, where));
  return out;
}

inline Dealias parse_dealias(const std::string& s) {
  if (s == "none") return Dealias::none;
  if (s == "two_thirds") return Dealias::two_thirds;
  if (s == "half") return Dealias::half;
  throw InvalidInput("config: unknown dealias rule '" + s + "'");
}

inline std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

struct ProfileStage {
  std::string kind = "piecewise_constant";
  std::vector<double> breakpoints{1.0}, depths{1.0};
  double mean = 1.0, amplitude = 0.0, phase = 0.0;
};

struct InitialStage {
  std::string kind = "gaussian";
  double amplitude = 0.025, width = 3.0, center = 0.0, speed = 0.0;
  int order = 3;
  std::vector<double> eta, q;
};

}  // namespace detail

inline ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig c;
  detail::ProfileStage prof;
  detail::InitialStage init;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidInput("config: unterminated section header: " + line);
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "bathymetry" && section != "initial" &&
          section != "domain" && section != "time" && section != "solver")
        throw InvalidInput("config: unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    const std::string where = section + "." + key;
    auto unknown = [&]() -> InvalidInput {
      return InvalidInput("config: unknown key '" + key + "' in section [" + section + "]");
    };
    if (section == "scenario") {
      if (key == "name") c.name = val;
      else if (key == "gravity") c.g = detail::parse_number(val, where);
      else if (key == "still_surface") c.eta0 = detail::parse_number(val, where);
      else throw unknown();
    } else if (section == "bathymetry") {
      if (key == "kind") prof.kind = val;
      else if (key == "period") c.delta = detail::parse_number(val, where);
      else if (key == "breakpoints") prof.breakpoints = detail::parse_numbers(val, where);
      else if (key == "depths") prof.depths = detail::parse_numbers(val, where);
      else if (key == "mean") prof.mean = detail::parse_number(val, where);
      else if (key == "amplitude") prof.amplitude = detail::parse_number(val, where);
      else if (key == "phase") prof.phase = detail::parse_number(val, where);
      else throw unknown();
    } else if (section == "initial") {
      if (key == "kind") init.kind = val;
      else if (key == "amplitude") init.amplitude = detail::parse_number(val, where);
      else if (key == "width") init.width = detail::parse_number(val, where);
      else if (key == "center") init.center = detail::parse_number(val, where);
      else if (key == "speed") init.speed = detail::parse_number(val, where);
      else if (key == "order") init.order = static_cast<int>(detail::parse_integer(val, where));
      else if (key == "eta") init.eta = detail::parse_numbers(val, where);
      else if (key == "q") init.q = detail::parse_numbers(val, where);
      else throw unknown();
    } else if (section == "domain") {
      if (key == "half_length") c.half_length = detail::parse_number(val, where);
      else if (key == "modes") c.modes = static_cast<std::size_t>(detail::parse_integer(val, where));
      else if (key == "reference_length") c.reference_length = detail::parse_number(val, where);
      else if (key == "cells_per_period")
        c.cells_per_period = static_cast<std::size_t>(detail::parse_integer(val, where));
      else throw unknown();
    } else if (section == "time") {
      if (key == "output") c.output_times = detail::parse_numbers(val, where);
      else throw unknown();
    } else if (section == "solver") {
      if (key == "order") c.order = static_cast<int>(detail::parse_integer(val, where));
      else if (key == "dealias") c.dealias = detail::parse_dealias(val);
      else if (key == "adaptive") c.dt_control.adaptive = detail::parse_flag(val, where);
      else if (key == "rtol") c.dt_control.rtol = detail::parse_number(val, where);
      else if (key == "atol") c.dt_control.atol = detail::parse_number(val, where);
      else if (key == "dt") c.dt_control.dt = detail::parse_number(val, where);
      else throw unknown();
    } else {
      throw InvalidInput("config: key '" + key + "' appears before any section");
    }
  }

  if (prof.kind == "piecewise_constant")
    c.bathymetry = PiecewiseConstant{prof.breakpoints, prof.depths};
  else if (prof.kind == "sinusoidal")
    c.bathymetry = Sinusoidal{prof.mean, prof.amplitude, prof.phase};
  else if (prof.kind == "sampled")
    c.bathymetry = Sampled{prof.depths};
  else
    throw InvalidInput("config: unknown bathymetry kind '" + prof.kind + "'");

  if (init.kind == "gaussian")
    c.initial = GaussianPulse{init.amplitude, init.width, init.center};
  else if (init.kind == "solitary")
    c.initial = SolitaryStart{init.order, init.speed, init.center};
  else if (init.kind == "samples")
    c.initial = SampledStart{init.eta, init.q};
  else
    throw InvalidInput("config: unknown initial kind '" + init.kind + "'");

  validate(c);
  return c;
}

inline std::string serialize(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "name = " << c.name << '\n';
  out << "gravity = " << format_double(c.g) << '\n';
  out << "still_surface = " << format_double(c.eta0) << '\n';
  out << "\n[bathymetry]\n";
  out << "period = " << format_double(c.delta) << '\n';
  if (const auto* p = std::get_if<PiecewiseConstant>(&c.bathymetry)) {
    out << "kind = piecewise_constant\n";
    out << "breakpoints = " << detail::join_numbers(p->breakpoints) << '\n';
    out << "depths = " << detail::join_numbers(p->values) << '\n';
  } else if (const auto* s = std::get_if<Sinusoidal>(&c.bathymetry)) {
    out << "kind = sinusoidal\n";
    out << "mean = " << format_double(s->mean) << '\n';
    out << "amplitude = " << format_double(s->amplitude) << '\n';
    out << "phase = " << format_double(s->phase) << '\n';
  } else {
    out << "kind = sampled\n";
    out << "depths = " << detail::join_numbers(std::get<Sampled>(c.bathymetry).values) << '\n';
  }
  out << "\n[initial]\n";
  if (const auto* gp = std::get_if<GaussianPulse>(&c.initial)) {
    out << "kind = gaussian\n";
    out << "amplitude = " << format_double(gp->amplitude) << '\n';
    out << "width = " << format_double(gp->width) << '\n';
    out << "center = " << format_double(gp->center) << '\n';
  } else if (const auto* sw = std::get_if<SolitaryStart>(&c.initial)) {
    out << "kind = solitary\n";
    out << "order = " << sw->order << '\n';
    out << "speed = " << format_double(sw->speed) << '\n';
    out << "center = " << format_double(sw->center) << '\n';
  } else {
    const auto& sm = std::get<SampledStart>(c.initial);
    out << "kind = samples\n";
    out << "eta = " << detail::join_numbers(sm.eta) << '\n';
    if (!sm.q.empty()) out << "q = " << detail::join_numbers(sm.q) << '\n';
  }
  out << "\n[domain]\n";
  out << "half_length = " << format_double(c.half_length) << '\n';
  out << "modes = " << c.modes << '\n';
  out << "reference_length = " << format_double(c.reference_length) << '\n';
  out << "cells_per_period = " << c.cells_per_period << '\n';
  out << "\n[time]\n";
  out << "output = " << detail::join_numbers(c.output_times) << '\n';
  out << "\n[solver]\n";
  out << "order = " << c.order << '\n';
  out << "dealias = " << to_string(c.dealias) << '\n';
  out << "adaptive = " << (c.dt_control.adaptive ? "true" : "false") << '\n';
  out << "rtol = " << format_double(c.dt_control.rtol) << '\n';
  out << "atol = " << format_double(c.dt_control.atol) << '\n';
  out << "dt = " << format_double(c.dt_control.dt) << '\n';
  return out.str();
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(e.what()) + " [" + path + "]");
  }
}

inline void save_scenario(const std::string& path, const ScenarioConfig& c) {
  std::ofstream f(path);
  if (!f) throw Error("config: cannot open '" + path + "' for writing");
  f << serialize(c);
  if (!f) throw Error("config: short write to '" + path + "'");
}

}  // namespace swhomog
