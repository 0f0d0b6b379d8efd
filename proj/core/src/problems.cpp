#include "rushlarsen/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace rushlarsen {

SplitProblem manufactured_smooth() {
  SplitProblem p;
  p.name = "manufactured_smooth";
  p.y0 = {1.0};
  p.horizon = 6.0;
  p.labels = {"y"};
  p.units = {"1"};
  p.split = [](double t, std::span<const double>, std::span<double> a, std::span<double> b) {
    const double ystar = std::exp(std::sin(t));
    const double dystar = std::cos(t) * ystar;
    a[0] = -(2.0 + std::cos(t));
    b[0] = dystar - a[0] * ystar;
  };
  p.exact = [](double t) { return std::vector<double>{std::exp(std::sin(t))}; };
  return p;
}

SplitProblem manufactured_membrane(double tau_min) {
  if (!(tau_min > 0.0)) throw std::invalid_argument("manufactured_membrane: tau_min must be positive");
  SplitProblem p;
  p.name = "manufactured_membrane";
  p.y0 = {0.0, -0.5};
  p.horizon = 10.0;
  p.labels = {"w", "v"};
  p.units = {"1", "1"};
  p.split = [tau_min](double t, std::span<const double> y, std::span<double> a, std::span<double> b) {
    const double w = y[0];
    const double v = y[1];
    const double w_inf = 1.0 / (1.0 + std::exp(-4.0 * v));
    const double tau = tau_min + 1.0 / (1.0 + v * v);
    const double stim = (t >= 0.0 && t < 1.0) ? 2.0 : 0.0;
    constexpr double reversal = -1.0;
    a[0] = -1.0 / tau;
    b[0] = w_inf / tau;
    a[1] = 0.0;
    b[1] = -w * (v - reversal) + stim;
  };
  return p;
}

SplitProblem theta_split(double lambda, double theta, double horizon, double y0) {
  SplitProblem p;
  p.name = "theta_split";
  p.y0 = {y0};
  p.horizon = horizon;
  p.labels = {"y"};
  p.units = {"1"};
  p.split = [lambda, theta](double, std::span<const double> y, std::span<double> a, std::span<double> b) {
    a[0] = theta * lambda;
    b[0] = (1.0 - theta) * lambda * y[0];
  };
  p.exact = [lambda, y0](double t) { return std::vector<double>{y0 * std::exp(lambda * t)}; };
  return p;
}

}  // namespace rushlarsen
