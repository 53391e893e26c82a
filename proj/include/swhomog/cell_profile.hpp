#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

/// Depth profile H(y) on the unit cell y in [0,1), constant on segments.
/// breakpoints are the right endpoints of the segments, strictly increasing,
/// the last one equal to 1.
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// H(y) = mean + amplitude * sin(2*pi*y + phase).
struct Sinusoidal {
  double mean = 1.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Uniform samples H(i/N), N a power of two >= 16.
struct Sampled {
  std::vector<double> values;
};

using PeriodicProfile = std::variant<PiecewiseConstant, Sinusoidal, Sampled>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void validate(const PiecewiseConstant& p) {
  if (p.breakpoints.empty() || p.breakpoints.size() != p.values.size())
    throw InvalidInput("piecewise profile: breakpoints/values size mismatch");
  double prev = 0.0;
  for (double b : p.breakpoints) {
    if (!(b > prev) || !(b <= 1.0)) throw InvalidInput("piecewise profile: breakpoints must increase within (0,1]");
    prev = b;
  }
  if (p.breakpoints.back() != 1.0) throw InvalidInput("piecewise profile: last breakpoint must be 1");
  for (double v : p.values)
    if (!(v > 0.0)) throw InvalidInput("piecewise profile: depths must be positive");
}

inline void validate(const Sinusoidal& p) {
  if (!(p.mean - std::abs(p.amplitude) > 0.0))
    throw InvalidInput("sinusoidal profile: mean - |amplitude| must be positive");
}

inline void validate(const Sampled& p) {
  if (p.values.size() < 16 || !is_power_of_two(p.values.size()))
    throw InvalidInput("sampled profile: need a power-of-two sample count >= 16");
  for (double v : p.values)
    if (!(v > 0.0)) throw InvalidInput("sampled profile: depths must be positive");
}

inline void validate(const PeriodicProfile& p) {
  std::visit([](const auto& v) { validate(v); }, p);
}

inline double eval(const PiecewiseConstant& p, double y) {
  y -= std::floor(y);
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i)
    if (y < p.breakpoints[i]) return p.values[i];
  return p.values.front();  // y == 1 wraps to 0
}

inline double eval(const Sinusoidal& p, double y) {
  return p.mean + p.amplitude * std::sin(2.0 * std::numbers::pi * y + p.phase);
}

inline double eval(const Sampled& p, double y) {
  y -= std::floor(y);
  const std::size_t n = p.values.size();
  return p.values[static_cast<std::size_t>(y * static_cast<double>(n)) % n];
}

inline double eval(const PeriodicProfile& p, double y) {
  return std::visit([y](const auto& v) { return eval(v, y); }, p);
}

inline double min_depth(const PeriodicProfile& p) {
  if (const auto* s = std::get_if<Sinusoidal>(&p)) return s->mean - std::abs(s->amplitude);
  if (const auto* pw = std::get_if<PiecewiseConstant>(&p)) return *std::min_element(pw->values.begin(), pw->values.end());
  const auto& sm = std::get<Sampled>(p);
  return *std::min_element(sm.values.begin(), sm.values.end());
}

inline bool is_constant(const PeriodicProfile& p, double tol = 0.0) {
  auto lohi = [&]() -> std::pair<double, double> {
    if (const auto* s = std::get_if<Sinusoidal>(&p)) return {s->mean - std::abs(s->amplitude), s->mean + std::abs(s->amplitude)};
    if (const auto* pw = std::get_if<PiecewiseConstant>(&p)) {
      auto [lo, hi] = std::minmax_element(pw->values.begin(), pw->values.end());
      return {*lo, *hi};
    }
    const auto& sm = std::get<Sampled>(p);
    auto [lo, hi] = std::minmax_element(sm.values.begin(), sm.values.end());
    return {*lo, *hi};
  }();
  return lohi.second - lohi.first <= tol;
}

namespace detail {

inline std::vector<double> pwc_jumps(const PiecewiseConstant& p) {
  std::vector<double> jumps;
  const double tol = 1e-14;
  if (std::abs(p.values.front() - p.values.back()) > tol) jumps.push_back(0.0);
  for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i)
    if (std::abs(p.values[i + 1] - p.values[i]) > tol) jumps.push_back(p.breakpoints[i]);
  return jumps;
}

// Reflection check about center c: every segment value must match under
// y -> 2c - y (mod 1), and every jump must map onto a jump with the two
// one-sided values swapped.
inline bool pwc_reflects_about(const PiecewiseConstant& p, double c, double tol) {
  auto val = [&](double y) { return eval(p, y); };
  double lo = 0.0;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    const double hi = p.breakpoints[i];
    for (double frac : {0.21, 0.5, 0.83}) {
      const double probe = lo + frac * (hi - lo);
      if (std::abs(val(probe) - val(2.0 * c - probe)) > tol) return false;
    }
    lo = hi;
  }
  const double eps = 1e-9;
  for (double b : pwc_jumps(p)) {
    const double r = 2.0 * c - b;
    if (std::abs(val(b + eps) - val(r - eps)) > tol) return false;
    if (std::abs(val(b - eps) - val(r + eps)) > tol) return false;
  }
  return true;
}

}  // namespace detail

/// A profile is translation-even when some shift makes it an even function.
/// Sinusoidal profiles always are. Piecewise-constant profiles are checked
/// structurally: a reflection center must send the first jump onto some jump,
/// which leaves finitely many candidates. Sampled profiles are checked by grid
/// shift search with threshold 1e-8 * max|H|.
inline bool translation_even(const PiecewiseConstant& p) {
  const std::vector<double> jumps = detail::pwc_jumps(p);
  if (jumps.empty()) return true;  // constant
  const double tol = 1e-12;
  for (double bj : jumps) {
    for (double c : {0.5 * (jumps.front() + bj), 0.5 * (jumps.front() + bj) + 0.5})
      if (detail::pwc_reflects_about(p, c, tol)) return true;
  }
  return false;
}

inline bool translation_even(const Sinusoidal&) { return true; }

inline bool translation_even(const Sampled& p) {
  const std::size_t n = p.values.size();
  double scale = 0.0;
  for (double v : p.values) scale = std::max(scale, std::abs(v));
  const double tol = 1e-8 * scale;
  // candidate centers y0 = m/(2n); partner of sample i is (m - i) mod n
  for (std::size_t m = 0; m < 2 * n; ++m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n && worst <= tol; ++i) {
      const std::size_t j = (m + 2 * n - i) % n;
      worst = std::max(worst, std::abs(p.values[i] - p.values[j]));
    }
    if (worst <= tol) return true;
  }
  return false;
}

inline bool translation_even(const PeriodicProfile& p) {
  return std::visit([](const auto& v) { return translation_even(v); }, p);
}

}  // namespace swhomog
