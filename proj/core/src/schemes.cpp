#include "rushlarsen/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace rushlarsen {
namespace {

constexpr Stencil kAdamsBashforth[3] = {
    {{3, -1, 0, 0}, 2, 2},
    {{23, -16, 5, 0}, 12, 3},
    {{55, -59, 37, -9}, 24, 4},
};

// Derivatives of the degree-(k-1) interpolant at t_n, scaled by h^{j-1}:
// backward-difference stencils of matching order.
constexpr Stencil kEabGamma2[2] = {
    {{1, 0, 0, 0}, 1, 1},
    {{1, -1, 0, 0}, 1, 2},
};
constexpr Stencil kEabGamma3[3] = {
    {{1, 0, 0, 0}, 1, 1},
    {{3, -4, 1, 0}, 2, 3},
    {{1, -2, 1, 0}, 1, 3},
};
constexpr Stencil kEabGamma4[4] = {
    {{1, 0, 0, 0}, 1, 1},
    {{11, -18, 9, -2}, 6, 4},
    {{2, -5, 4, -1}, 1, 4},
    {{1, -3, 3, -1}, 1, 4},
};

}  // namespace

const Stencil& adams_bashforth_stencil(int k) {
  detail::require_order(k);
  return kAdamsBashforth[k - 2];
}

const Stencil& eab_gamma_stencil(int k, int j) {
  detail::require_order(k);
  if (j < 1 || j > k) throw std::invalid_argument("eab_gamma_stencil: j outside [1, k]");
  switch (k) {
    case 2: return kEabGamma2[j - 1];
    case 3: return kEabGamma3[j - 1];
    default: return kEabGamma4[j - 1];
  }
}

std::string SchemeSpec::family_name() const {
  switch (family) {
    case Family::RushLarsen: return "RL";
    case Family::ExponentialAdams: return "EAB";
    case Family::RungeKutta4: return "RK";
  }
  return "?";
}

std::string SchemeSpec::name() const { return family_name() + std::to_string(order); }

void SchemeSpec::validate() const {
  if (family == Family::RungeKutta4) {
    if (order != 4) throw std::invalid_argument("RK4 reference has order 4");
    return;
  }
  if (order < 2 || order > 4) {
    throw std::invalid_argument(family_name() + " order must be 2, 3 or 4, got " + std::to_string(order));
  }
}

SchemeSpec SchemeSpec::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  SchemeSpec spec;
  std::string digits;
  if (s.rfind("EAB", 0) == 0) {
    spec.family = Family::ExponentialAdams;
    digits = s.substr(3);
  } else if (s.rfind("RL", 0) == 0) {
    spec.family = Family::RushLarsen;
    digits = s.substr(2);
  } else if (s.rfind("RK", 0) == 0) {
    spec.family = Family::RungeKutta4;
    digits = s.substr(2);
  } else {
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
  }
  if (digits.size() != 1 || !std::isdigit(static_cast<unsigned char>(digits[0]))) {
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
  }
  spec.order = digits[0] - '0';
  spec.validate();
  return spec;
}

std::vector<double> rk4_step(const RhsFn& f, double t, std::span<const double> y, double h,
                             std::span<const double> k1) {
  const std::size_t n = y.size();
  std::vector<double> k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  f(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  f(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  f(t + h, tmp, k4);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

std::vector<double> rk4_step(const RhsFn& f, double t, std::span<const double> y, double h) {
  std::vector<double> k1(y.size());
  f(t, y, k1);
  return rk4_step(f, t, y, h, k1);
}

}  // namespace rushlarsen
