#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

#include "swhomog/cell_profile.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/fftw_utils.hpp"

namespace swhomog {

/// Samples of a 1-periodic function on y_i = i/N, N a power of two >= 16.
struct CellGrid {
  std::vector<double> v;

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

inline void validate(const CellGrid& f) {
  if (f.size() < 16 || !is_power_of_two(f.size()))
    throw InvalidInput("cell grid: need a power-of-two sample count >= 16");
}

inline CellGrid make_cell_grid(std::size_t n) {
  CellGrid g{std::vector<double>(n, 0.0)};
  validate(g);
  return g;
}

inline CellGrid sample(const PeriodicProfile& p, std::size_t n = 512) {
  CellGrid g = make_cell_grid(n);
  for (std::size_t i = 0; i < n; ++i) g.v[i] = eval(p, static_cast<double>(i) / static_cast<double>(n));
  return g;
}

inline double mean(const CellGrid& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s / static_cast<double>(f.size());
}

inline CellGrid fluctuation(const CellGrid& f) {
  const double m = mean(f);
  CellGrid g = f;
  for (double& x : g.v) x -= m;
  return g;
}

/// Zero-mean antiderivative of the zero-mean part, by Fourier
/// antidifferentiation. Exact for band-limited samples.
inline CellGrid bracket(const CellGrid& f) {
  const std::size_t n = f.size();
  RealFFT fft(n);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(f.v.data(), spec.data());
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k)
    spec[k] /= std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(k));
  if (n % 2 == 0) spec[n / 2] = 0.0;  // unpaired Nyquist mode has no odd partner
  CellGrid g = make_cell_grid(n);
  fft.inverse(spec.data(), g.v.data());
  return g;
}

/// Same operator through the single-integral representation
/// [[f]](y) = (integral of f from 0 to y) - (integral of (1/2 + y - s) f(s) ds),
/// with cumulative trapezoid quadrature. Agrees with the Fourier path on smooth
/// inputs; preferred for non-smooth samples.
inline CellGrid bracket_trapezoid(const CellGrid& f) {
  const std::size_t n = f.size();
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = f.v[i];
    const double fnext = f.v[(i + 1) % n];
    cum[i + 1] = cum[i] + 0.5 * (fi + fnext) * h;
  }
  const double total = cum[n];  // = <f>
  double int_sf = 0.0;          // trapezoid of s*f(s) over [0,1], f periodic
  for (std::size_t i = 0; i < n; ++i) {
    const double s0 = static_cast<double>(i) * h;
    const double s1 = s0 + h;
    int_sf += 0.5 * (s0 * f.v[i] + s1 * f.v[(i + 1) % n]) * h;
  }
  CellGrid g = make_cell_grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = static_cast<double>(i) * h;
    g.v[i] = cum[i] - (0.5 + y) * total + int_sf;
  }
  return g;
}

inline CellGrid nested_bracket(const CellGrid& f, unsigned j) {
  if (j == 0) throw InvalidInput("nested bracket: j must be >= 1");
  CellGrid g = bracket(f);
  for (unsigned i = 1; i < j; ++i) g = bracket(g);
  return g;
}

inline double product_mean(std::span<const CellGrid* const> factors) {
  if (factors.empty()) throw InvalidInput("product mean: empty factor list");
  const std::size_t n = factors.front()->size();
  for (const CellGrid* f : factors)
    if (f->size() != n) throw InvalidInput("product mean: mismatched grids");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = 1.0;
    for (const CellGrid* f : factors) p *= f->v[i];
    s += p;
  }
  return s / static_cast<double>(n);
}

inline double product_mean(std::initializer_list<const CellGrid*> factors) {
  std::vector<const CellGrid*> v(factors);
  return product_mean(std::span<const CellGrid* const>(v));
}

/// Spectral derivative d/dy on the unit cell.
inline CellGrid cell_derivative(const CellGrid& f) {
  const std::size_t n = f.size();
  RealFFT fft(n);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(f.v.data(), spec.data());
  for (std::size_t k = 0; k < spec.size(); ++k)
    spec[k] *= std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(k));
  if (n % 2 == 0) spec[n / 2] = 0.0;
  CellGrid g = make_cell_grid(n);
  fft.inverse(spec.data(), g.v.data());
  return g;
}

/// Cyclic shift by m samples: result(y) = f(y + m/N).
inline CellGrid shift(const CellGrid& f, std::size_t m) {
  const std::size_t n = f.size();
  CellGrid g = make_cell_grid(n);
  for (std::size_t i = 0; i < n; ++i) g.v[i] = f.v[(i + m) % n];
  return g;
}

inline CellGrid multiply(const CellGrid& a, const CellGrid& b) {
  if (a.size() != b.size()) throw InvalidInput("multiply: mismatched grids");
  CellGrid g = a;
  for (std::size_t i = 0; i < g.size(); ++i) g.v[i] *= b.v[i];
  return g;
}

inline CellGrid pow_grid(const CellGrid& a, int k) {
  CellGrid g = a;
  for (double& v : g.v) v = std::pow(v, k);
  return g;
}

// ---------------------------------------------------------------------------
// Exact piecewise-polynomial path, used for piecewise-constant depth profiles
// so that no discretization error enters the homogenized coefficients.

struct PiecewisePoly {
  struct Segment {
    double lo, hi;
    std::vector<double> c;  // value = sum c[j] * y^j, y absolute in [lo,hi]
  };
  std::vector<Segment> segs;

  double eval(double y) const {
    y -= std::floor(y);
    for (const auto& s : segs) {
      if (y < s.hi || &s == &segs.back()) {
        double p = 0.0;
        for (std::size_t j = s.c.size(); j-- > 0;) p = p * y + s.c[j];
        return p;
      }
    }
    return 0.0;
  }
};

namespace detail {

inline double poly_integral(const std::vector<double>& c, double lo, double hi) {
  double s = 0.0;
  double plo = lo, phi = hi;
  for (std::size_t j = 0; j < c.size(); ++j) {
    s += c[j] * (phi - plo) / static_cast<double>(j + 1);
    plo *= lo;
    phi *= hi;
  }
  return s;
}

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace detail

inline double mean(const PiecewisePoly& f) {
  double s = 0.0;
  for (const auto& seg : f.segs) s += detail::poly_integral(seg.c, seg.lo, seg.hi);
  return s;
}

inline PiecewisePoly align(const PiecewisePoly& f, const std::vector<double>& cuts) {
  PiecewisePoly g;
  for (const auto& seg : f.segs) {
    double lo = seg.lo;
    for (double c : cuts) {
      if (c > lo + 1e-15 && c < seg.hi - 1e-15) {
        g.segs.push_back({lo, c, seg.c});
        lo = c;
      }
    }
    g.segs.push_back({lo, seg.hi, seg.c});
  }
  return g;
}

inline PiecewisePoly multiply(const PiecewisePoly& a, const PiecewisePoly& b) {
  std::vector<double> cuts;
  for (const auto& s : a.segs) cuts.push_back(s.hi);
  for (const auto& s : b.segs) cuts.push_back(s.hi);
  std::sort(cuts.begin(), cuts.end());
  PiecewisePoly aa = align(a, cuts), bb = align(b, cuts);
  if (aa.segs.size() != bb.segs.size()) throw Error("piecewise multiply: segment mismatch");
  PiecewisePoly r;
  for (std::size_t i = 0; i < aa.segs.size(); ++i)
    r.segs.push_back({aa.segs[i].lo, aa.segs[i].hi, detail::poly_mul(aa.segs[i].c, bb.segs[i].c)});
  return r;
}

inline PiecewisePoly bracket(const PiecewisePoly& f) {
  const double m = mean(f);
  PiecewisePoly g;
  double acc = 0.0;
  for (const auto& seg : f.segs) {
    std::vector<double> prim(seg.c.size() + 1, 0.0);
    prim[0] = 0.0;
    for (std::size_t j = 0; j < seg.c.size(); ++j) prim[j + 1] = seg.c[j] / static_cast<double>(j + 1);
    prim[1] -= m;
    // shift so the antiderivative is continuous: value at lo equals acc
    double at_lo = 0.0;
    for (std::size_t j = prim.size(); j-- > 0;) at_lo = at_lo * seg.lo + prim[j];
    prim[0] += acc - at_lo;
    double at_hi = 0.0;
    for (std::size_t j = prim.size(); j-- > 0;) at_hi = at_hi * seg.hi + prim[j];
    g.segs.push_back({seg.lo, seg.hi, prim});
    acc = at_hi;
  }
  const double gm = mean(g);
  for (auto& seg : g.segs) seg.c[0] -= gm;
  return g;
}

/// H^{-k} of a piecewise-constant profile as an exact piecewise polynomial.
inline PiecewisePoly inverse_power_poly(const PiecewiseConstant& p, unsigned k) {
  PiecewisePoly f;
  double lo = 0.0;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    f.segs.push_back({lo, p.breakpoints[i], {std::pow(p.values[i], -static_cast<double>(k))}});
    lo = p.breakpoints[i];
  }
  return f;
}

// ---------------------------------------------------------------------------
// Moments <H^-k>, exact per profile family.

inline double moment(const PiecewiseConstant& p, unsigned k) {
  double s = 0.0, lo = 0.0;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    s += (p.breakpoints[i] - lo) * std::pow(p.values[i], -static_cast<double>(k));
    lo = p.breakpoints[i];
  }
  return s;
}

/// <(m + a sin)^-k> closed forms, k = 1..7, with s = m^2 - a^2.
inline double moment(const Sinusoidal& p, unsigned k) {
  const double m = p.mean;
  const double a2 = p.amplitude * p.amplitude;
  const double s = m * m - a2;
  const double m2 = m * m, m3 = m2 * m, m4 = m2 * m2, m5 = m4 * m, m6 = m4 * m2;
  const double a4 = a2 * a2, a6 = a4 * a2;
  switch (k) {
    case 1: return std::pow(s, -0.5);
    case 2: return m * std::pow(s, -1.5);
    case 3: return (m2 + 0.5 * a2) * std::pow(s, -2.5);
    case 4: return (m3 + 1.5 * a2 * m) * std::pow(s, -3.5);
    case 5: return (m4 + 3.0 * a2 * m2 + 0.375 * a4) * std::pow(s, -4.5);
    case 6: return (m5 + 5.0 * a2 * m3 + 1.875 * a4 * m) * std::pow(s, -5.5);
    case 7: return (m6 + 7.5 * a2 * m4 + 5.625 * a4 * m2 + 0.3125 * a6) * std::pow(s, -6.5);
    default: throw InvalidInput("moment: k must be in [1,7]");
  }
}

inline double moment(const Sampled& p, unsigned k) {
  if (k < 1 || k > 7) throw InvalidInput("moment: k must be in [1,7]");
  double s = 0.0;
  for (double v : p.values) s += std::pow(v, -static_cast<double>(k));
  return s / static_cast<double>(p.values.size());
}

inline double moment(const PeriodicProfile& p, unsigned k) {
  if (k < 1 || k > 7) throw InvalidInput("moment: k must be in [1,7]");
  if (!(min_depth(p) > 0.0)) throw InvalidInput("moment: profile must be positive");
  return std::visit([k](const auto& v) { return moment(v, k); }, p);
}

// ---------------------------------------------------------------------------
// Point evaluator for cell functions needed by the fast-scale reconstruction:
// either an exact piecewise polynomial or a truncated Fourier series.

class CellFunction {
 public:
  CellFunction() = default;

  explicit CellFunction(PiecewisePoly poly) : poly_(std::move(poly)), use_poly_(true) {}

  /// Build a Fourier-series evaluator from grid samples (band-limited input).
  explicit CellFunction(const CellGrid& f) : use_poly_(false) {
    const std::size_t n = f.size();
    nyquist_ = n / 2;
    RealFFT fft(n);
    spec_.resize(fft.spectrum_size());
    fft.forward(f.v.data(), spec_.data());
    for (auto& c : spec_) c /= static_cast<double>(n);
    while (spec_.size() > 1 && std::abs(spec_.back()) < 1e-16) spec_.pop_back();
  }

  double operator()(double y) const {
    if (use_poly_) return poly_.eval(y);
    if (spec_.empty()) throw Error("cell function: evaluator was not initialized");
    double s = spec_[0].real();
    for (std::size_t k = 1; k < spec_.size(); ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) * y;
      const double w = (k == nyquist_) ? 1.0 : 2.0;
      s += w * (spec_[k].real() * std::cos(ang) - spec_[k].imag() * std::sin(ang));
    }
    return s;
  }

 private:
  PiecewisePoly poly_;
  std::vector<std::complex<double>> spec_;
  std::size_t nyquist_ = 0;
  bool use_poly_ = false;
};

}  // namespace swhomog
