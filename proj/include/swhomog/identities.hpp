#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "swhomog/cell_average.hpp"

namespace swhomog {

struct IdentityCheck {
  std::string name;
  double lhs, rhs, diff;
  bool ok;
};

/// Random smooth positive depth: 1 + four harmonics with geometrically
/// decaying amplitudes. Stays well above zero by construction.
inline CellGrid random_smooth_depth(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CellGrid H = make_cell_grid(n);
  for (double& v : H.v) v = 1.0;
  double scale = 0.18;
  for (int j = 1; j <= 4; ++j) {
    scale *= 0.55;
    const double aj = u(rng) * scale, bj = u(rng) * scale;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) *
                        static_cast<double>(i) / static_cast<double>(n);
      H.v[i] += aj * std::cos(ph) + bj * std::sin(ph);
    }
  }
  return H;
}

/// Integration-by-parts identities that eliminate every derivative of the
/// depth from the effective coefficients. Each entry compares the raw form
/// (with H') against its derivative-free rewrite on random smooth profiles.
inline std::vector<IdentityCheck> verify_bracket_identities(std::uint64_t seed = 7,
                                                            int trials = 3,
                                                            std::size_t n = 2048,
                                                            double tol = 1e-10) {
  std::mt19937_64 rng(seed);
  std::vector<IdentityCheck> out;
  auto push = [&](int t, const char* name, double lhs, double rhs) {
    IdentityCheck c;
    c.name = "t" + std::to_string(t) + ":" + name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.diff = std::abs(lhs - rhs);
    c.ok = c.diff < tol * std::max(1.0, std::abs(lhs));
    out.push_back(c);
  };
  for (int t = 0; t < trials; ++t) {
    const CellGrid H = random_smooth_depth(rng, n);
    const CellGrid Hp = cell_derivative(H);
    std::vector<CellGrid> Hi(6);
    for (int k = 1; k <= 5; ++k) Hi[k] = pow_grid(H, -k);
    const CellGrid B1 = bracket(Hi[1]), B2 = bracket(Hi[2]);
    const CellGrid B3 = bracket(Hi[3]), B4 = bracket(Hi[4]);
    const CellGrid BB1 = bracket(B1);

    push(t, "P1", product_mean({&Hi[5], &B1, &B1, &Hp}),
         0.5 * product_mean({&Hi[5], &B1}) - 0.5 * mean(Hi[1]) * product_mean({&Hi[4], &B1}));
    push(t, "P2", product_mean({&Hi[3], &B2, &B2, &Hp}), product_mean({&Hi[4], &B2}));
    {
      const CellGrid inner = bracket(bracket(multiply(multiply(Hi[3], BB1), Hp)));
      push(t, "P3", product_mean({&Hi[1], &inner}), product_mean({&Hi[2], &B1, &BB1}));
    }
    push(t, "P4", product_mean({&Hi[3], &B2, &BB1, &Hp}),
         0.5 * product_mean({&Hi[2], &B1, &B2}) - 0.5 * product_mean({&B1, &B4}) +
             0.5 * mean(Hi[2]) * product_mean({&B1, &B2}));
    {
      const CellGrid inner = bracket(bracket(multiply(multiply(Hi[4], B1), Hp)));
      push(t, "P5", product_mean({&Hi[1], &inner}),
           (product_mean({&Hi[3], &B1, &B1}) - product_mean({&B1, &B4}) +
            mean(Hi[1]) * product_mean({&B1, &B3})) /
               3.0);
    }
    push(t, "P6", product_mean({&Hi[4], &B2, &B1, &Hp}),
         (product_mean({&Hi[4], &B2}) - mean(Hi[1]) * product_mean({&Hi[3], &B2}) +
          product_mean({&Hi[5], &B1}) - mean(Hi[2]) * product_mean({&Hi[3], &B1})) /
             3.0);
    {
      const CellGrid inner = bracket(bracket(multiply(multiply(Hi[3], BB1), Hp)));
      push(t, "C1", product_mean({&Hi[3], &BB1, &BB1, &Hp}), product_mean({&Hi[1], &inner}));
    }
    {
      const CellGrid core = multiply(multiply(Hi[3], B2), Hp);
      const CellGrid once = bracket(core);
      const CellGrid twice = bracket(once);
      const double a = product_mean({&Hi[1], &twice});
      push(t, "C2a", a, -product_mean({&B1, &once}));
      push(t, "C2b", a, product_mean({&Hi[3], &B2, &BB1, &Hp}));
    }
    {
      const CellGrid inner = bracket(multiply(multiply(Hi[4], B1), Hp));
      push(t, "C3", product_mean({&Hi[2], &inner}), -product_mean({&Hi[4], &B2, &B1, &Hp}));
    }
  }
  return out;
}

}  // namespace swhomog
