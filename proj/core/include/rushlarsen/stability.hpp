#pragma once

// Dahlquist stability of the multistep schemes on the theta-split test equation
//   y' = lambda y,  a = theta lambda,  b = (1 - theta) lambda y,  z = lambda h.
//
// The k x k companion matrix is obtained by linearity probing: one scheme step is
// applied to each canonical unit history, using the same steppers as integrate().

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rushlarsen/schemes.hpp"

namespace rushlarsen {

using Complex = std::complex<double>;

/// Spectral radii above 1 + kUnitTolerance count as unstable in crossing searches.
inline constexpr double kUnitTolerance = 1e-9;

/// Maps (y_{n-k+1}, ..., y_n) to (y_{n-k+2}, ..., y_{n+1}).
struct RecurrenceMatrix {
  int k = 0;
  std::vector<Complex> entries;  // row-major k x k

  Complex operator()(int row, int col) const { return entries[static_cast<std::size_t>(row * k + col)]; }
  std::vector<Complex> last_row() const;
  std::vector<Complex> apply(std::span<const Complex> history) const;
};

/// One step of `scheme` on the test equation with h = 1; `history` is oldest first.
Complex test_equation_step(const SchemeSpec& scheme, double theta, Complex z, std::span<const Complex> history);

/// Throws std::invalid_argument for the RK4 family.
RecurrenceMatrix probe_recurrence(const SchemeSpec& scheme, double theta, Complex z);

/// Largest eigenvalue modulus. Throws std::domain_error on non-finite entries.
double spectral_radius(const RecurrenceMatrix& m);

/// spectral_radius(probe_recurrence(scheme, theta, z)).
double stability_radius(const SchemeSpec& scheme, double theta, Complex z);

struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

struct StabilityGrid {
  Rect rect;
  std::size_t n_re = 0;
  std::size_t n_im = 0;
  /// Row-major with the real index fastest, starting at (re_min, im_min).
  std::vector<double> rho;

  double re(std::size_t i) const;
  double im(std::size_t j) const;
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * n_re + i; }
  /// Strict rho < 1.
  bool stable(std::size_t i, std::size_t j) const { return rho[index(i, j)] < 1.0; }
};

/// Samples the rectangle on an n_re x n_im lattice including its edges. Work is split
/// across `workers` threads (0 = hardware concurrency); output does not depend on it.
StabilityGrid scan(const SchemeSpec& scheme, double theta, const Rect& rect, std::size_t n_re, std::size_t n_im,
                   unsigned workers = 0);

enum class CrossingKind {
  Crossing,
  /// Stable over the whole searched interval.
  NoCrossing,
  /// Already unstable just left of the origin.
  Degenerate,
};

struct CrossingResult {
  CrossingKind kind = CrossingKind::NoCrossing;
  /// Crossing abscissa, or the search limit for NoCrossing, or the first probe for Degenerate.
  double x = 0.0;
};

/// Left end of the stable real-axis segment adjacent to 0. Marches left from -1e-3
/// by doubling, then bisects to |dx| <= 1e-4 |x|. Requires search_limit < 0.
CrossingResult real_axis_crossing(const SchemeSpec& scheme, double theta, double search_limit);

}  // namespace rushlarsen
