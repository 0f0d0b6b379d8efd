#pragma once

// Experiment protocols: RK4 reference solutions, piecewise-cubic projection onto the
// reference grid, the relative sup-norm error of one component, convergence studies
// over h = 2^m h_ref, and bisection for the critical time step.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rushlarsen/integrate.hpp"
#include "rushlarsen/problem.hpp"
#include "rushlarsen/schemes.hpp"

namespace rushlarsen {

struct ReferenceSolution {
  double h_ref = 0.0;
  /// Node times n h_ref.
  std::vector<double> nodes;
  /// Values of the compared component on the nodes.
  std::vector<double> values;
  /// True when taken from the problem's closed-form solution instead of RK4.
  bool exact = false;
};

/// RK4 at h_ref over [0, horizon]; throws std::runtime_error if it overflows.
ReferenceSolution rk4_reference(const SplitProblem& problem, double h_ref, double horizon, std::size_t component);

/// Closed-form reference; requires problem.exact.
ReferenceSolution exact_reference(const SplitProblem& problem, double h_ref, double horizon, std::size_t component);

struct Projection {
  /// P(y) at the leading reference nodes covered by the cubic windows.
  std::vector<double> values;
  /// Trailing trajectory nodes dropped so the node count is 1 (mod 3).
  std::size_t dropped_nodes = 0;
};

/// Piecewise cubic through trajectory nodes (t_{3n}, ..., t_{3n+3}), t_i = i h, evaluated
/// at each ref node inside the covered range. The ref grid must start at 0 with a
/// spacing that divides h by a power of two; otherwise std::invalid_argument.
Projection project_cubic(std::span<const double> values, double h, std::span<const double> ref_nodes);

/// max|ref - projected| / max|ref|. Throws std::domain_error for an all-zero reference.
double error_metric(std::span<const double> projected, std::span<const double> reference);

struct ConvergenceRow {
  int m = 0;
  double h = 0.0;
  std::optional<double> error;           // empty when the run overflowed
  std::optional<double> observed_order;  // log2(e(2h) / e(h)) against the previous row
  std::size_t dropped_nodes = 0;

  bool unstable() const noexcept { return !error.has_value(); }
};

struct ConvergenceReport {
  SchemeSpec scheme;
  std::string problem;
  double h_ref = 0.0;
  bool exact_reference = false;
  /// Reference self-check: error of the 2 h_ref reference against the h_ref one.
  std::optional<double> reference_disagreement;
  /// disagreement < 1% of the largest finite e(h); always true for exact references.
  bool reference_verified = true;
  /// Sorted by decreasing h.
  std::vector<ConvergenceRow> rows;
};

struct ConvergenceOptions {
  /// Component compared; defaults to the last one (the potential for membrane models).
  std::optional<std::size_t> component;
  /// Use problem.exact when available instead of an RK4 reference.
  bool prefer_exact = true;
  /// Horizon override; defaults to problem.horizon.
  std::optional<double> horizon;
  unsigned workers = 0;
  IntegrateOptions integrate;
};

/// e(h) for h = 2^m h_ref, m in m_list. Rows run in parallel and are reported sorted by h.
ConvergenceReport convergence_study(const SplitProblem& problem, const SchemeSpec& scheme, double h_ref,
                                    std::span<const int> m_list, const ConvergenceOptions& options = {});

/// Same, against a precomputed reference (shared across schemes).
ConvergenceReport convergence_study(const SplitProblem& problem, const SchemeSpec& scheme,
                                    const ReferenceSolution& reference, std::span<const int> m_list,
                                    const ConvergenceOptions& options = {});

enum class CriticalDtKind {
  Bracketed,
  /// No overflow up to the cap.
  UnconditionallyStable,
};

struct CriticalDtReport {
  SchemeSpec scheme;
  std::string problem;
  CriticalDtKind kind = CriticalDtKind::Bracketed;
  double dt0 = 0.0;
  /// Largest h seen to finish, and smallest h seen to overflow (0 if none).
  double stable_h = 0.0;
  double overflow_h = 0.0;
};

struct CriticalDtOptions {
  /// Relative bracket width at which bisection stops.
  double tol = 1e-2;
  /// Largest h tried while widening; defaults to horizon / k.
  std::optional<double> cap;
  std::optional<double> horizon;
  /// When set, the bracket is found by marching upward from this step by `growth` until the
  /// first overflow, instead of doubling from h_hi. Use when overflow is not monotone in h.
  std::optional<double> scan_from;
  double growth = 1.1;
  IntegrateOptions integrate;
};

/// True if a full run at step h finishes without overflow.
bool finishes(const SplitProblem& problem, const SchemeSpec& scheme, double h, double horizon,
              const IntegrateOptions& options = {});

/// Bisects between a finishing and an overflowing step; dt0 is the finishing end.
CriticalDtReport critical_dt(const SplitProblem& problem, const SchemeSpec& scheme, double h_hi,
                             const CriticalDtOptions& options = {});

}  // namespace rushlarsen
