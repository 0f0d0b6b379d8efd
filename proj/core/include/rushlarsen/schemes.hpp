#pragma once

// Rush-Larsen (RL_k) and exponential Adams-Bashforth (EAB_k) multistep steppers for
// y' = a(t,y) y + b(t,y) with a diagonal stabilizer a, plus classical RK4.
//
// Steppers are templated on the scalar so the stability scanner can drive the exact
// same code with complex z = lambda h. Vectors hold diagonal entries of a.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rushlarsen/errors.hpp"
#include "rushlarsen/history.hpp"
#include "rushlarsen/phi.hpp"

namespace rushlarsen {

enum class Family { RushLarsen, ExponentialAdams, RungeKutta4 };

struct SchemeSpec {
  Family family = Family::RushLarsen;
  int order = 2;
  /// RL only: use the simplified beta valid when a(t,y) is a constant matrix.
  bool constant_a = false;

  /// History records a step needs (k for the multistep families, 1 for RK4).
  int steps() const noexcept { return family == Family::RungeKutta4 ? 1 : order; }
  /// "RL3", "EAB2", "RK4".
  std::string name() const;
  std::string family_name() const;
  void validate() const;

  /// Parses "RL2".."RL4", "EAB2".."EAB4", "RK4" (case-insensitive).
  static SchemeSpec parse(std::string_view text);

  friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;
};

/// Rational weights applied to (x_n, x_{n-1}, ...), value = sum(num[i] x_{n-i}) / den.
struct Stencil {
  std::array<int, 4> num{};
  int den = 1;
  int width = 0;
};

/// Adams-Bashforth extrapolation weights used for alpha_n and the leading part of beta_n.
const Stencil& adams_bashforth_stencil(int k);

/// gamma_j stencils (j = 1..k) for the EAB interpolation coefficients.
const Stencil& eab_gamma_stencil(int k, int j);

template <class Scalar>
struct RLCoefficients {
  std::vector<Scalar> alpha;
  std::vector<Scalar> beta;
};

namespace detail {

inline void require_order(int k) {
  if (k < 2 || k > 4) throw std::invalid_argument("multistep order must be 2, 3 or 4");
}

template <class Scalar>
void require_history(int k, const History<Scalar>& hist, double h) {
  require_order(k);
  if (hist.size() < static_cast<std::size_t>(k)) {
    throw HistoryError("order " + std::to_string(k) + " step needs " + std::to_string(k) +
                       " records, history holds " + std::to_string(hist.size()));
  }
  const double spacing = hist.spacing();
  if (spacing != 0.0 && std::abs(spacing - h) > 1e-9 * std::abs(h)) {
    throw HistoryError("history spacing does not match the step h");
  }
}

template <class Scalar, class Pick>
std::vector<Scalar> combine(const Stencil& s, const History<Scalar>& hist, Pick pick) {
  const std::size_t n = pick(hist.back()).size();
  std::vector<Scalar> out(n, Scalar{0});
  for (int i = 0; i < s.width; ++i) {
    if (s.num[i] == 0) continue;
    const auto& v = pick(hist.back(i));
    const double w = s.num[i];
    for (std::size_t e = 0; e < n; ++e) out[e] += w * v[e];
  }
  const double inv = 1.0 / s.den;
  for (auto& x : out) x *= inv;
  return out;
}

}  // namespace detail

/// alpha_n and beta_n of RL_k (k = 2, 3, 4) from the k newest records.
template <class Scalar>
RLCoefficients<Scalar> rl_coefficients(int k, const History<Scalar>& hist, double h,
                                       bool constant_a = false) {
  detail::require_history(k, hist, h);
  const Stencil& ab = adams_bashforth_stencil(k);
  auto pick_a = [](const StepRecord<Scalar>& r) -> const std::vector<Scalar>& { return r.a; };
  auto pick_b = [](const StepRecord<Scalar>& r) -> const std::vector<Scalar>& { return r.b; };

  RLCoefficients<Scalar> c;
  c.beta = detail::combine(ab, hist, pick_b);
  if (constant_a) {
    c.alpha = hist.back().a;
  } else {
    c.alpha = detail::combine(ab, hist, pick_a);
  }
  if (k == 2) return c;

  const auto& an = hist.back(0).a;
  const auto& an1 = hist.back(1).a;
  const auto& bn = hist.back(0).b;
  const auto& bn1 = hist.back(1).b;
  const double s = h / 12.0;
  const std::size_t n = bn.size();

  if (k == 3) {
    for (std::size_t e = 0; e < n; ++e) {
      c.beta[e] += constant_a ? -s * an[e] * (bn[e] - bn1[e]) : s * (an[e] * bn1[e] - an1[e] * bn[e]);
    }
    return c;
  }

  const auto& an2 = hist.back(2).a;
  const auto& bn2 = hist.back(2).b;
  for (std::size_t e = 0; e < n; ++e) {
    if (constant_a) {
      c.beta[e] -= s * an[e] * (2.0 * bn[e] - 3.0 * bn1[e] + bn2[e]);
    } else {
      c.beta[e] += s * (an[e] * (3.0 * bn1[e] - bn2[e]) - (3.0 * an1[e] - an2[e]) * bn[e]);
    }
  }
  return c;
}

/// y_{n+1} = y_n + h phi_1(alpha h) (alpha y_n + beta).
template <class Scalar>
std::vector<Scalar> rl_step(int k, const History<Scalar>& hist, double h, bool constant_a = false) {
  const auto c = rl_coefficients(k, hist, h, constant_a);
  const auto& y = hist.back().y;
  std::vector<Scalar> next(y.size());
  for (std::size_t e = 0; e < y.size(); ++e) {
    next[e] = y[e] + h * phi(1, c.alpha[e] * h) * (c.alpha[e] * y[e] + c.beta[e]);
  }
  return next;
}

/// gamma_1..gamma_k from c_hist = (c_{n-k+1}, ..., c_n), oldest first.
template <class Scalar>
std::vector<std::vector<Scalar>> eab_gamma(int k, std::span<const std::vector<Scalar>> c_hist) {
  detail::require_order(k);
  if (c_hist.size() != static_cast<std::size_t>(k)) {
    throw HistoryError("eab_gamma: expected " + std::to_string(k) + " samples");
  }
  const std::size_t n = c_hist.back().size();
  std::vector<std::vector<Scalar>> gamma(k, std::vector<Scalar>(n, Scalar{0}));
  for (int j = 1; j <= k; ++j) {
    const Stencil& s = eab_gamma_stencil(k, j);
    auto& g = gamma[j - 1];
    for (int i = 0; i < s.width; ++i) {
      if (s.num[i] == 0) continue;
      const auto& c = c_hist[k - 1 - i];
      for (std::size_t e = 0; e < n; ++e) g[e] += static_cast<double>(s.num[i]) * c[e];
    }
    if (s.den != 1) {
      for (auto& x : g) x /= static_cast<double>(s.den);
    }
  }
  return gamma;
}

/// Remainder samples c_j = a_j y_j + b_j - a_n y_j, re-linearized about the newest a_n.
template <class Scalar>
std::vector<std::vector<Scalar>> eab_remainders(int k, const History<Scalar>& hist) {
  const auto& an = hist.back().a;
  std::vector<std::vector<Scalar>> c(k);
  for (int i = 0; i < k; ++i) {
    const auto& r = hist.back(k - 1 - i);
    auto& ci = c[i];
    ci.resize(r.y.size());
    for (std::size_t e = 0; e < ci.size(); ++e) ci[e] = (r.a[e] - an[e]) * r.y[e] + r.b[e];
  }
  return c;
}

/// y_{n+1} = y_n + h (phi_1(a_n h)(a_n y_n + gamma_1) + sum_{j>=2} phi_j(a_n h) gamma_j).
template <class Scalar>
std::vector<Scalar> eab_step(int k, const History<Scalar>& hist, double h) {
  detail::require_history(k, hist, h);
  const auto c = eab_remainders(k, hist);
  const auto gamma = eab_gamma<Scalar>(k, std::span<const std::vector<Scalar>>(c));
  const auto& y = hist.back().y;
  const auto& an = hist.back().a;
  std::vector<Scalar> next(y.size());
  for (std::size_t e = 0; e < y.size(); ++e) {
    const auto p = phi_all(k, an[e] * h);
    Scalar incr = p[1] * (an[e] * y[e] + gamma[0][e]);
    for (int j = 2; j <= k; ++j) incr += p[j] * gamma[j - 1][e];
    next[e] = y[e] + h * incr;
  }
  return next;
}

/// Full right-hand side f(t, y) written into `dydt`.
using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Classical four-stage Runge-Kutta step.
std::vector<double> rk4_step(const RhsFn& f, double t, std::span<const double> y, double h);

/// Same step with the first stage f(t, y) supplied by the caller.
std::vector<double> rk4_step(const RhsFn& f, double t, std::span<const double> y, double h,
                             std::span<const double> k1);

}  // namespace rushlarsen
