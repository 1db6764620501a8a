// SPDX-License-Identifier: Apache-2.0
// Banded LU factorisation backed by LAPACK (gbtrf/gbtrs).
#pragma once

#include <complex>
#include <vector>

namespace frontlab {

template <typename T>
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);
  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }
  void set_zero();
  // Entry (i, j) with |i - j| inside the band.
  T& at(int i, int j);
  T get(int i, int j) const;
  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  // y = A x (before factorisation only)
  std::vector<T> multiply(const std::vector<T>& x) const;
  std::vector<T> multiply_adjoint(const std::vector<T>& x) const;
  // In-place LU; throws NoConvergence on a singular pivot.
  void factor();
  bool factored() const { return factored_; }
  // Solve A x = b (trans = 'N') or A^H x = b (trans = 'C') in place.
  void solve(std::vector<T>& b, char trans = 'N') const;

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<T> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

extern template class BandedMatrix<double>;
extern template class BandedMatrix<std::complex<double>>;

}  // namespace frontlab
