// SPDX-License-Identifier: Apache-2.0
#include "frontlab/banded.hpp"

#include <complex>
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <string>
#include <type_traits>

#include "frontlab/errors.hpp"

namespace frontlab {

template <typename T>
BandedMatrix<T>::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, T(0)), ipiv_(n, 0) {}

template <typename T>
void BandedMatrix<T>::set_zero() {
  std::fill(ab_.begin(), ab_.end(), T(0));
  factored_ = false;
}

// column-major band storage: A(i,j) -> ab[kl+ku+i-j + j*ldab]
template <typename T>
T& BandedMatrix<T>::at(int i, int j) {
  return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_];
}

template <typename T>
T BandedMatrix<T>::get(int i, int j) const {
  if (!in_band(i, j)) return T(0);
  return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_];
}

template <typename T>
std::vector<T> BandedMatrix<T>::multiply(const std::vector<T>& x) const {
  std::vector<T> y(n_, T(0));
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    T s(0);
    for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

template <typename T>
static T conj_if(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return std::conj(v);
  }
}

template <typename T>
std::vector<T> BandedMatrix<T>::multiply_adjoint(const std::vector<T>& x) const {
  std::vector<T> y(n_, T(0));
  for (int j = 0; j < n_; ++j) {
    const int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
    T s(0);
    for (int i = i0; i <= i1; ++i) s += conj_if(get(i, j)) * x[i];
    y[j] = s;
  }
  return y;
}

template <typename T>
void BandedMatrix<T>::factor() {
  int info;
  if constexpr (std::is_same_v<T, double>) {
    info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_, ipiv_.data());
  } else {
    info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                          reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab_,
                          ipiv_.data());
  }
  if (info != 0) fail(ErrorKind::NoConvergence, "banded LU failed, info=" + std::to_string(info));
  factored_ = true;
}

template <typename T>
void BandedMatrix<T>::solve(std::vector<T>& b, char trans) const {
  int info;
  if constexpr (std::is_same_v<T, double>) {
    const char t = trans == 'C' ? 'T' : trans;
    info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, t, n_, kl_, ku_, 1, ab_.data(), ldab_, ipiv_.data(),
                          b.data(), n_);
  } else {
    info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, trans, n_, kl_, ku_, 1,
                          reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab_,
                          ipiv_.data(), reinterpret_cast<lapack_complex_double*>(b.data()), n_);
  }
  if (info != 0) fail(ErrorKind::NoConvergence, "banded solve failed");
}

template class BandedMatrix<double>;
template class BandedMatrix<std::complex<double>>;

}  // namespace frontlab
