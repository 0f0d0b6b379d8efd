#pragma once

#include "rushlarsen/problem.hpp"

namespace rushlarsen {

/// Scalar problem with exact solution y*(t) = exp(sin t):
/// a(t,y) = -(2 + cos t), b(t,y) = y*'(t) - a y*(t), y0 = 1, T = 6.
SplitProblem manufactured_smooth();

/// Two-variable gate/potential model with tunable gate stiffness.
///   w' = (w_inf(v) - w) / tau(v),  w_inf(v) = 1 / (1 + e^{-4v}),  tau(v) = tau_min + 1 / (1 + v^2)
///   v' = -w (v - E) + I_st(t),      E = -1, I_st = 2 on [0, 1) else 0
/// Layout (w, v); a = (-1/tau(v), 0). y0 = (0, -0.5), T = 10.
SplitProblem manufactured_membrane(double tau_min);

/// Dahlquist test y' = lambda y split as a = theta lambda, b = (1 - theta) lambda y.
SplitProblem theta_split(double lambda, double theta, double horizon = 10.0, double y0 = 1.0);

}  // namespace rushlarsen
