#pragma once

// phi-functions of exponential integrators:
//   phi_0(z) = exp(z),  phi_{j+1}(z) = (phi_j(z) - 1/j!) / z,  phi_j(0) = 1/j!.
//
// Near the origin the recurrence cancels catastrophically, so |z| < kPhiSeriesRadius
// is evaluated from the truncated Taylor series sum_m z^m / (m+j)!.

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace rushlarsen {

inline constexpr int kMaxPhiOrder = 4;
inline constexpr double kPhiSeriesRadius = 0.5;

/// phi_j(z) for 0 <= j <= kMaxPhiOrder. Throws std::domain_error for non-finite z
/// and std::invalid_argument for j out of range.
double phi(int j, double z);
std::complex<double> phi(int j, std::complex<double> z);

/// phi_0(z) .. phi_order(z) in one pass; entry j is bit-identical to phi(j, z).
std::array<double, kMaxPhiOrder + 1> phi_all(int order, double z);
std::array<std::complex<double>, kMaxPhiOrder + 1> phi_all(int order, std::complex<double> z);

/// Elementwise phi_j(d_i * h) for a diagonal stabilizer d.
template <class Scalar>
std::vector<Scalar> phi_diag(int j, std::span<const Scalar> d, double h) {
  std::vector<Scalar> out;
  out.reserve(d.size());
  for (const Scalar& di : d) out.push_back(phi(j, di * h));
  return out;
}

template <class Scalar>
std::vector<Scalar> phi_diag(int j, const std::vector<Scalar>& d, double h) {
  return phi_diag(j, std::span<const Scalar>(d), h);
}

}  // namespace rushlarsen
