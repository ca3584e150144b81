#pragma once

// Ordinary least squares for low-degree polynomials.
//
// The cubic fit is the workhorse of the supply-curve estimation step. Raw
// regressor values can sit around 1e4, where raw-power normal equations lose
// most of their precision, so the fit internally rescales x to [-1, 1],
// solves the 4x4 normal equations in long double, and maps the coefficients
// back to the raw-x basis. Coefficients are exact for any cubic ground truth
// up to rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "essmei/errors.hpp"

namespace essmei {

struct CubicFit {
  // p(x) = c0 + c1 x + c2 x^2 + c3 x^3 in raw units
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double r_squared = 0.0;
  double domain_min = 0.0;  // observed regressor range
  double domain_max = 0.0;
  std::size_t sample_count = 0;
};

inline double evaluate(const CubicFit& f, double x) {
  return ((f.c3 * x + f.c2) * x + f.c1) * x + f.c0;
}

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::size_t sample_count = 0;
};

namespace detail {

// Gaussian elimination with partial pivoting on an N x N system.
// Raises DegenerateDesign when the matrix is (numerically) singular, which
// covers designs with fewer distinct regressor values than coefficients.
template <int N>
std::array<long double, N> solve_normal_equations(std::array<std::array<long double, N>, N> a,
                                                  std::array<long double, N> b) {
  for (int col = 0; col < N; ++col) {
    int pivot = col;
    for (int r = col + 1; r < N; ++r) {
      if (std::fabs(static_cast<double>(a[r][col])) >
          std::fabs(static_cast<double>(a[pivot][col]))) {
        pivot = r;
      }
    }
    if (std::fabs(static_cast<double>(a[pivot][col])) < 1e-12) {
      raise(ErrorKind::DegenerateDesign, "normal equations are singular");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < N; ++r) {
      const long double factor = a[r][col] / a[col][col];
      for (int c = col; c < N; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::array<long double, N> x{};
  for (int r = N - 1; r >= 0; --r) {
    long double s = b[r];
    for (int c = r + 1; c < N; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace detail

inline CubicFit fit_cubic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    raise(ErrorKind::LengthMismatch, "regressor and response lengths differ (" +
                                         std::to_string(x.size()) + " vs " +
                                         std::to_string(y.size()) + ")");
  }
  const std::size_t n = x.size();
  if (n < 4) {
    raise(ErrorKind::DegenerateDesign,
          "cubic fit needs at least 4 samples, got " + std::to_string(n));
  }
  const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
  const double a = *min_it, b = *max_it;
  if (!(b > a)) {
    raise(ErrorKind::DegenerateDesign, "all regressor values are identical");
  }

  // z = s*x + t maps [a, b] onto [-1, 1]
  const long double s = 2.0L / (static_cast<long double>(b) - a);
  const long double t = -(static_cast<long double>(a) + b) / (static_cast<long double>(b) - a);

  std::array<long double, 7> zm{};  // sum of z^k, k = 0..6
  std::array<long double, 4> zy{};  // sum of y * z^k, k = 0..3
  for (std::size_t i = 0; i < n; ++i) {
    const long double z = s * x[i] + t;
    long double zp = 1.0L;
    for (int k = 0; k <= 6; ++k) {
      zm[k] += zp;
      if (k <= 3) zy[k] += zp * y[i];
      zp *= z;
    }
  }
  std::array<std::array<long double, 4>, 4> gram{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) gram[r][c] = zm[r + c];
  }
  const auto beta = detail::solve_normal_equations<4>(gram, zy);

  // Goodness of fit, evaluated in the well conditioned z basis.
  long double mean = 0.0L;
  for (double v : y) mean += v;
  mean /= static_cast<long double>(n);
  long double ss_res = 0.0L, ss_tot = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double z = s * x[i] + t;
    const long double pred = ((beta[3] * z + beta[2]) * z + beta[1]) * z + beta[0];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }

  // raw[j] = sum_{k>=j} beta_k * C(k, j) * s^j * t^(k-j)
  static constexpr int choose[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  std::array<long double, 4> raw{};
  for (int j = 0; j < 4; ++j) {
    long double acc = 0.0L;
    for (int k = j; k < 4; ++k) {
      long double term = beta[k] * choose[k][j];
      for (int p = 0; p < j; ++p) term *= s;
      for (int p = 0; p < k - j; ++p) term *= t;
      acc += term;
    }
    raw[j] = acc;
  }

  CubicFit fit;
  fit.c0 = static_cast<double>(raw[0]);
  fit.c1 = static_cast<double>(raw[1]);
  fit.c2 = static_cast<double>(raw[2]);
  fit.c3 = static_cast<double>(raw[3]);
  // A constant response is fit exactly by the cubic, so zero total variance
  // means zero residual variance; report a perfect score rather than 0/0.
  fit.r_squared = ss_tot > 0.0L ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
  fit.domain_min = a;
  fit.domain_max = b;
  fit.sample_count = n;
  return fit;
}

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    raise(ErrorKind::LengthMismatch, "regressor and response lengths differ");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    raise(ErrorKind::DegenerateDesign,
          "linear fit needs at least 2 samples, got " + std::to_string(n));
  }
  long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double det = static_cast<long double>(n) * sxx - sx * sx;
  const long double scale = static_cast<long double>(n) * sxx + sx * sx;
  if (!(det > scale * 1e-15L)) {
    raise(ErrorKind::DegenerateDesign, "regressor has no spread");
  }
  LinearFit fit;
  fit.slope = static_cast<double>((static_cast<long double>(n) * sxy - sx * sy) / det);
  fit.intercept = static_cast<double>((sy - fit.slope * sx) / static_cast<long double>(n));
  fit.sample_count = n;
  return fit;
}

}  // namespace essmei
