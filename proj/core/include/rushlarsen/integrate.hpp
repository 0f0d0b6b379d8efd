#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rushlarsen/problem.hpp"
#include "rushlarsen/schemes.hpp"

namespace rushlarsen {

/// States with a non-finite entry or sup-norm above this are treated as overflow.
inline constexpr double kDefaultBlowupBound = 1e6;

enum class RunStatus { Completed, Overflow };

struct IntegrateOptions {
  double blowup_bound = kDefaultBlowupBound;
  /// Added to every component of the startup states y_0..y_{k-1} before their
  /// (a, b) records are taken. Zero for ordinary runs.
  double startup_perturbation = 0.0;
  /// RK4 substeps per startup interval; 0 picks the smallest power of two s with
  /// h max|a(0, y0)| / s <= 1, so stiff stabilized modes do not wreck the bootstrap.
  int startup_substeps = 0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  RunStatus status = RunStatus::Completed;
  /// Number of (a, b) evaluations, including RK4 startup stages.
  std::size_t evaluations = 0;
  /// RK4 substeps used per startup interval (multistep schemes only).
  int startup_substeps = 0;

  bool overflowed() const noexcept { return status == RunStatus::Overflow; }
  std::size_t size() const noexcept { return t.size(); }
  /// Values of one component over all nodes.
  std::vector<double> component(std::size_t i) const;
};

/// Number of uniform steps of size h that fit in [0, T].
std::size_t step_count(double h, double horizon);

/// True when a state should stop the run.
bool exceeds_bound(const std::vector<double>& y, double bound) noexcept;

/// Fixed-step integration of `problem` over [0, horizon].
///
/// Multistep schemes bootstrap y_1..y_{k-1} with RK4 (s substeps of h/s per interval,
/// s = 1 unless the stabilizer is stiff at y0). Afterwards exactly one (a, b)
/// evaluation is made per node; the first RK4 stage at a startup node reuses that
/// node's evaluation, so a run of N steps costs N + (4s - 1)(k - 1) evaluations.
/// Throws std::invalid_argument when h <= 0 or horizon < k h.
Trajectory integrate(const SplitProblem& problem, const SchemeSpec& scheme, double h, double horizon,
                     const IntegrateOptions& options = {});

/// Uses problem.horizon.
Trajectory integrate(const SplitProblem& problem, const SchemeSpec& scheme, double h,
                     const IntegrateOptions& options = {});

}  // namespace rushlarsen
