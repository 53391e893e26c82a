#pragma once

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

struct CrestReport {
  double position = 0.0;
  double amplitude = 0.0;
  bool found = false;
};

namespace detail {

/// centered moving mean over w cells; entry i averages cells [i-w/2, i+w/2),
/// so the window midpoint sits half a cell left of cell i's center
inline std::vector<double> moving_mean(const std::vector<double>& v, std::size_t w) {
  std::vector<double> out(v.size(), 0.0);
  if (w < 2) return v;
  std::vector<double> prefix(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) prefix[i + 1] = prefix[i] + v[i];
  const std::size_t half = w / 2;
  if (w % 2 == 0) {
    for (std::size_t i = half; i + half <= v.size(); ++i)
      out[i] = (prefix[i + half] - prefix[i - half]) / static_cast<double>(w);
  } else {
    for (std::size_t i = half; i + half + 1 <= v.size(); ++i)
      out[i] = (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(w);
  }
  return out;
}

}  // namespace detail

namespace detail {

inline CrestReport parabola_peak(const std::vector<double>& v, std::size_t lo, std::size_t hi,
                                 double dx) {
  CrestReport r;
  std::size_t imax = lo;
  for (std::size_t i = lo; i < hi; ++i)
    if (v[i] > v[imax]) imax = i;
  const double ym = v[imax - 1], y0 = v[imax], yp = v[imax + 1];
  const double denom = ym - 2.0 * y0 + yp;
  double shift = 0.0;
  r.amplitude = y0;
  if (denom < 0.0) {
    shift = 0.5 * (ym - yp) / denom;
    r.amplitude = y0 - 0.25 * (ym - yp) * shift;
  }
  r.position = (static_cast<double>(imax) + 0.5 + shift) * dx;
  r.found = true;
  return r;
}

/// least squares via QR; a is col-major nrows x ncols, solution lands in b
inline bool ls_solve(std::vector<double>& a, std::vector<double>& b, std::size_t nrows,
                     std::size_t ncols) {
  return LAPACKE_dgels(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(nrows),
                       static_cast<lapack_int>(ncols), 1, a.data(),
                       static_cast<lapack_int>(nrows), b.data(),
                       static_cast<lapack_int>(nrows)) == 0;
}

inline double polyval(const double* c, std::size_t n, double u) {
  double s = 0.0;
  for (std::size_t d = n; d-- > 0;) s = s * u + c[d];
  return s;
}

}  // namespace detail

/// Leading crest of a surface that carries a bottom-locked oscillation
/// (for fission trains the rightmost crest is also the highest). A period
/// moving average only locates the crest: with the crest just a period or
/// two wide, averaging flattens its height by several percent. The height
/// comes from a deconvolved fit instead: a mean over exactly one period
/// wipes out every phase-locked harmonic, and fitting the averaged samples
/// with an identically averaged polynomial basis returns the coefficients of
/// the unsmoothed envelope, so the averaging costs no height. The fit runs
/// on the logarithm when the window allows it, which also absorbs the slow
/// amplitude modulation the oscillation inherits from the envelope.
inline CrestReport extract_leading_crest(const std::vector<double>& eta, double dx,
                                         std::size_t period_cells) {
  if (eta.size() < 8 || !(dx > 0.0)) throw InvalidInput("crest extraction: bad input grid");
  if (period_cells < 2) return detail::parabola_peak(eta, 1, eta.size() - 1, dx);

  const std::size_t P = period_cells;
  const std::vector<double> s1 = detail::moving_mean(eta, P);
  if (2 * P + 2 >= eta.size())
    throw InvalidInput("crest extraction: grid shorter than the window");
  const std::vector<double> s2 = detail::moving_mean(eta, 2 * P);
  std::vector<double> env(eta.size(), 0.0);
  for (std::size_t i = P; i + P < eta.size(); ++i) env[i] = (4.0 * s1[i] - s2[i]) / 3.0;
  CrestReport rough = detail::parabola_peak(env, P, eta.size() - P, dx);
  if (P % 2 == 0) rough.position -= 0.5 * dx;
  const double env_max = std::max(rough.amplitude, 1e-300);

  const std::size_t ic = std::min(eta.size() - 1, static_cast<std::size_t>(std::max(
                                                      0.0, rough.position / dx)));
  const std::size_t half = std::max<std::size_t>(3 * P / 4, 2);
  const std::size_t m = 2 * half;
  const std::size_t ncoef = 11;
  if (m < ncoef + 8 || eta.size() < m + 2 * P + 1) return rough;
  std::size_t w_lo = ic > half ? ic - half : 0;
  w_lo = std::clamp(w_lo, P, eta.size() - P - m);
  const std::size_t ext_lo = w_lo - P;
  const std::size_t ext_n = m + 2 * P;

  // the averaged fit runs on the log when the window stays clearly positive
  double wmin = eta[ext_lo];
  for (std::size_t j = ext_lo; j < ext_lo + ext_n; ++j) wmin = std::min(wmin, eta[j]);
  const bool use_log = wmin > 1e-4 * env_max;

  const double xc = (static_cast<double>(w_lo) + static_cast<double>(half)) * dx;
  const double span = static_cast<double>(half) * dx;
  std::vector<double> ext(ext_n), col(ext_n);
  for (std::size_t j = 0; j < ext_n; ++j)
    ext[j] = use_log ? std::log(eta[ext_lo + j]) : eta[ext_lo + j];
  const std::vector<double> z = detail::moving_mean(ext, P);
  std::vector<double> a(m * ncoef, 0.0), b(std::max(m, ncoef), 0.0);
  for (std::size_t d = 0; d < ncoef; ++d) {
    for (std::size_t j = 0; j < ext_n; ++j) {
      const double u = ((static_cast<double>(ext_lo + j) + 0.5) * dx - xc) / span;
      col[j] = std::pow(u, static_cast<double>(d));
    }
    const std::vector<double> bc = detail::moving_mean(col, P);
    for (std::size_t i = 0; i < m; ++i) a[d * m + i] = bc[P + i];
  }
  for (std::size_t i = 0; i < m; ++i) b[i] = z[P + i];
  if (!detail::ls_solve(a, b, m, ncoef)) return rough;

  // peak of the recovered envelope; the crest sits near the window centre
  const int nscan = 400;
  double ubest = 0.0, vbest = detail::polyval(b.data(), ncoef, 0.0);
  for (int i = 0; i <= nscan; ++i) {
    const double u = -0.5 + 1.0 * i / nscan;
    const double v = detail::polyval(b.data(), ncoef, u);
    if (v > vbest) {
      vbest = v;
      ubest = u;
    }
  }
  const double du = 1e-3;
  const double vm = detail::polyval(b.data(), ncoef, ubest - du);
  const double vp = detail::polyval(b.data(), ncoef, ubest + du);
  const double denom = vm - 2.0 * vbest + vp;
  double shift = 0.0;
  if (denom < 0.0) shift = 0.5 * (vm - vp) / denom * du;
  CrestReport r;
  const double vpeak = detail::polyval(b.data(), ncoef, ubest + shift);
  r.amplitude = use_log ? std::exp(vpeak) : vpeak;
  r.position = xc + (ubest + shift) * span;
  r.found = true;
  return r;
}

/// Linear interpolation of samples (x monotone increasing) onto new points.
/// Query points outside the source range take the boundary values.
inline std::vector<double> resample_linear(const std::vector<double>& x,
                                           const std::vector<double>& v,
                                           const std::vector<double>& xq) {
  if (x.size() != v.size() || x.size() < 2)
    throw InvalidInput("resample: need matching x/v with at least two samples");
  std::vector<double> out(xq.size());
  for (std::size_t i = 0; i < xq.size(); ++i) {
    const double q = xq[i];
    if (q <= x.front()) {
      out[i] = v.front();
      continue;
    }
    if (q >= x.back()) {
      out[i] = v.back();
      continue;
    }
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double w = (q - x[j - 1]) / (x[j] - x[j - 1]);
    out[i] = (1.0 - w) * v[j - 1] + w * v[j];
  }
  return out;
}

inline double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidInput("norms: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l2_diff(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  if (a.size() != b.size()) throw InvalidInput("norms: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s * dx);
}

inline double l1_diff(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  if (a.size() != b.size()) throw InvalidInput("norms: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

}  // namespace swhomog
