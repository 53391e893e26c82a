#pragma once

#include <lapacke.h>

#include <cstddef>
#include <string>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

/// General banded matrix in LAPACK column storage, solved with dgbsv.
/// Entry (i, j) is addressable when |i - j| <= its band width.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

  int size() const { return n_; }

  void clear() { ab_.assign(ab_.size(), 0.0); }

  double& at(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
      throw InvalidInput("banded matrix: index outside the band");
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
  }

  /// Solve A x = b. The factorization works on a scratch copy, so the matrix
  /// can be reused or edited afterwards.
  std::vector<double> solve(std::vector<double> b) const {
    if (static_cast<int>(b.size()) != n_) throw InvalidInput("banded solve: rhs size mismatch");
    std::vector<double> work = ab_;
    std::vector<lapack_int> ipiv(n_);
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n_, kl_, ku_, 1, work.data(), ldab_,
                                          ipiv.data(), b.data(), n_);
    if (info != 0)
      throw SolverFailure("banded solve failed (dgbsv info=" + std::to_string(info) + ")");
    return b;
  }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
};

}  // namespace swhomog
