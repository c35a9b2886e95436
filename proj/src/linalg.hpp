// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace swipt::detail {

// Minimal dense kernels for the solver's Newton systems (a few dozen
// unknowns). Matrices are row-major n x n.

// Solves (a + ridge*I) x = b by Cholesky; returns false if the matrix is not
// positive definite at this ridge.
inline bool cholesky_solve(std::vector<double> a, int n, std::vector<double> b,
                           std::vector<double>& x, double ridge = 0.0) {
  for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] += ridge;
  // In-place lower Cholesky.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(j) * n + k];
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        a[static_cast<size_t>(i) * n + i] = std::sqrt(s);
      } else {
        a[static_cast<size_t>(i) * n + j] = s / a[static_cast<size_t>(j) * n + j];
      }
    }
  }
  // Forward then backward substitution.
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= a[static_cast<size_t>(i) * n + k] * b[k];
    b[i] = s / a[static_cast<size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= a[static_cast<size_t>(k) * n + i] * b[k];
    b[i] = s / a[static_cast<size_t>(i) * n + i];
  }
  x = std::move(b);
  return true;
}

// Solves a x = b by LU with partial pivoting; returns false when singular.
inline bool lu_solve(std::vector<double> a, int n, std::vector<double> b,
                     std::vector<double>& x) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a[static_cast<size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a[static_cast<size_t>(r) * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) return false;
    if (pivot != col) {
      for (int c = 0; c < n; ++c)
        std::swap(a[static_cast<size_t>(pivot) * n + c], a[static_cast<size_t>(col) * n + c]);
      std::swap(b[pivot], b[col]);
    }
    const double d = a[static_cast<size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<size_t>(r) * n + col] / d;
      a[static_cast<size_t>(r) * n + col] = 0.0;
      if (f == 0.0) continue;
      for (int c = col + 1; c < n; ++c)
        a[static_cast<size_t>(r) * n + c] -= f * a[static_cast<size_t>(col) * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= a[static_cast<size_t>(i) * n + k] * b[k];
    b[i] = s / a[static_cast<size_t>(i) * n + i];
  }
  x = std::move(b);
  return true;
}

}  // namespace swipt::detail
