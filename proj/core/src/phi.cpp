#include "rushlarsen/phi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rushlarsen {
namespace {

// Terms m = 0..kSeriesTerms-1; at |z| = 0.5 the first dropped term is below 1e-17.
constexpr int kSeriesTerms = 18;
constexpr int kFactorialTable = kMaxPhiOrder + kSeriesTerms + 1;

constexpr std::array<double, kFactorialTable> make_inverse_factorials() {
  std::array<double, kFactorialTable> inv{};
  double fact = 1.0;
  inv[0] = 1.0;
  for (int n = 1; n < kFactorialTable; ++n) {
    fact *= n;  // exact in double up to 22!
    inv[n] = 1.0 / fact;
  }
  return inv;
}

constexpr auto kInvFactorial = make_inverse_factorials();

bool is_finite(double z) { return std::isfinite(z); }
bool is_finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <class Scalar>
void check_arguments(int order, Scalar z) {
  if (order < 0 || order > kMaxPhiOrder) {
    throw std::invalid_argument("phi: order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxPhiOrder) + "]");
  }
  if (!is_finite(z)) throw std::domain_error("phi: non-finite argument");
}

template <class Scalar>
std::array<Scalar, kMaxPhiOrder + 1> evaluate(int order, Scalar z) {
  check_arguments(order, z);
  std::array<Scalar, kMaxPhiOrder + 1> out{};
  if (std::abs(z) < kPhiSeriesRadius) {
    for (int j = 0; j <= order; ++j) {
      Scalar acc = kInvFactorial[j + kSeriesTerms - 1];
      for (int m = kSeriesTerms - 2; m >= 0; --m) acc = acc * z + kInvFactorial[j + m];
      out[j] = acc;
    }
    return out;
  }
  out[0] = std::exp(z);
  for (int j = 0; j < order; ++j) out[j + 1] = (out[j] - kInvFactorial[j]) / z;
  return out;
}

}  // namespace

std::array<double, kMaxPhiOrder + 1> phi_all(int order, double z) { return evaluate(order, z); }

std::array<std::complex<double>, kMaxPhiOrder + 1> phi_all(int order, std::complex<double> z) {
  return evaluate(order, z);
}

double phi(int j, double z) { return evaluate(j, z)[j]; }

std::complex<double> phi(int j, std::complex<double> z) { return evaluate(j, z)[j]; }

}  // namespace rushlarsen
