#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rushlarsen {

/// Writes the diagonal stabilizer a(t, y) and the remainder b(t, y) for state y.
using SplitFn =
    std::function<void(double t, std::span<const double> y, std::span<double> a, std::span<double> b)>;

/// Closed-form solution y*(t), when one is known.
using ExactFn = std::function<std::vector<double>(double t)>;

/// Stiff ODE y' = a(t,y) y + b(t,y) with a diagonal. Callbacks must be pure and reentrant.
struct SplitProblem {
  std::string name;
  std::vector<double> y0;
  double horizon = 0.0;
  SplitFn split;
  std::vector<std::string> labels;
  std::vector<std::string> units;
  ExactFn exact;

  std::size_t dimension() const noexcept { return y0.size(); }

  void evaluate(double t, std::span<const double> y, std::span<double> a, std::span<double> b) const {
    split(t, y, a, b);
  }

  /// f(t, y) = a(t, y) y + b(t, y).
  void rhs(double t, std::span<const double> y, std::span<double> dydt) const;
};

}  // namespace rushlarsen
