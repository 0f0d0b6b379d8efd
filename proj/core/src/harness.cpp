#include "rushlarsen/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>

namespace rushlarsen {
namespace {

std::vector<double> grid_nodes(double h_ref, double horizon) {
  const std::size_t n = step_count(h_ref, horizon);
  std::vector<double> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = static_cast<double>(i) * h_ref;
  return nodes;
}

std::size_t resolve_component(const SplitProblem& problem, const std::optional<std::size_t>& c) {
  const std::size_t component = c.value_or(problem.dimension() - 1);
  if (component >= problem.dimension()) throw std::invalid_argument("component index out of range");
  return component;
}

}  // namespace

ReferenceSolution rk4_reference(const SplitProblem& problem, double h_ref, double horizon, std::size_t component) {
  if (component >= problem.dimension()) throw std::invalid_argument("component index out of range");
  const SchemeSpec rk4{Family::RungeKutta4, 4};
  IntegrateOptions opts;
  opts.blowup_bound = std::numeric_limits<double>::infinity();
  const Trajectory traj = integrate(problem, rk4, h_ref, horizon, opts);
  if (traj.overflowed()) {
    throw std::runtime_error("reference solution for '" + problem.name + "' is not finite at h_ref = " +
                             std::to_string(h_ref));
  }
  ReferenceSolution ref;
  ref.h_ref = h_ref;
  ref.nodes = traj.t;
  ref.values = traj.component(component);
  return ref;
}

ReferenceSolution exact_reference(const SplitProblem& problem, double h_ref, double horizon, std::size_t component) {
  if (!problem.exact) throw std::invalid_argument("problem '" + problem.name + "' has no exact solution");
  if (component >= problem.dimension()) throw std::invalid_argument("component index out of range");
  ReferenceSolution ref;
  ref.h_ref = h_ref;
  ref.exact = true;
  ref.nodes = grid_nodes(h_ref, horizon);
  ref.values.reserve(ref.nodes.size());
  for (double t : ref.nodes) ref.values.push_back(problem.exact(t).at(component));
  return ref;
}

Projection project_cubic(std::span<const double> values, double h, std::span<const double> ref_nodes) {
  if (values.size() < 4) throw std::invalid_argument("project_cubic: need at least 4 trajectory nodes");
  if (ref_nodes.empty()) throw std::invalid_argument("project_cubic: empty reference grid");
  if (ref_nodes.front() != 0.0) throw std::invalid_argument("project_cubic: reference grid must start at 0");

  // Reference node i sits at i / 2^m trajectory steps; using the index keeps node positions exact.
  double per_step = 1.0;
  if (ref_nodes.size() > 1) {
    const double h_ref = ref_nodes[1] - ref_nodes[0];
    const double ratio = h / h_ref;
    const double m = std::round(std::log2(ratio));
    if (!(h_ref > 0.0) || m < 0.0 || std::abs(ratio - std::exp2(m)) > 1e-9 * ratio) {
      throw std::invalid_argument("project_cubic: step is not 2^m times the reference step");
    }
    per_step = std::exp2(m);
  }

  Projection out;
  const std::size_t usable = 1 + 3 * ((values.size() - 1) / 3);
  out.dropped_nodes = values.size() - usable;
  const std::size_t windows = (usable - 1) / 3;
  const double covered_end = static_cast<double>(usable - 1) * h;

  for (std::size_t i = 0; i < ref_nodes.size(); ++i) {
    if (ref_nodes[i] > covered_end * (1.0 + 1e-12)) break;
    const double pos = static_cast<double>(i) / per_step;
    std::size_t w = static_cast<std::size_t>(std::floor(pos / 3.0));
    if (w >= windows) w = windows - 1;
    const double s = pos - 3.0 * static_cast<double>(w);
    const double* y = values.data() + 3 * w;
    // Lagrange basis on nodes 0, 1, 2, 3.
    const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    out.values.push_back(l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3]);
  }
  return out;
}

double error_metric(std::span<const double> projected, std::span<const double> reference) {
  if (projected.size() != reference.size()) throw std::invalid_argument("error_metric: grids differ in length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    num = std::max(num, std::abs(reference[i] - projected[i]));
    den = std::max(den, std::abs(reference[i]));
  }
  if (den == 0.0) throw std::domain_error("error_metric: reference is identically zero");
  return num / den;
}

ConvergenceReport convergence_study(const SplitProblem& problem, const SchemeSpec& scheme,
                                    const ReferenceSolution& reference, std::span<const int> m_list,
                                    const ConvergenceOptions& options) {
  scheme.validate();
  if (m_list.empty()) throw std::invalid_argument("convergence_study: empty m list");
  const std::size_t component = resolve_component(problem, options.component);
  const double horizon = options.horizon.value_or(problem.horizon);

  std::vector<int> ms(m_list.begin(), m_list.end());
  std::sort(ms.begin(), ms.end(), std::greater<>());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.back() < 0) throw std::invalid_argument("convergence_study: m must be non-negative");

  auto run_row = [&](int m) {
    ConvergenceRow row;
    row.m = m;
    row.h = std::ldexp(reference.h_ref, m);
    const Trajectory traj = integrate(problem, scheme, row.h, horizon, options.integrate);
    if (traj.overflowed()) return row;
    const Projection proj = project_cubic(traj.component(component), row.h, reference.nodes);
    row.dropped_nodes = proj.dropped_nodes;
    row.error = error_metric(proj.values, std::span<const double>(reference.values).first(proj.values.size()));
    return row;
  };

  ConvergenceReport report;
  report.scheme = scheme;
  report.problem = problem.name;
  report.h_ref = reference.h_ref;
  report.exact_reference = reference.exact;

  if (options.workers == 1) {
    for (int m : ms) report.rows.push_back(run_row(m));
  } else {
    std::vector<std::future<ConvergenceRow>> futures;
    for (int m : ms) futures.push_back(std::async(std::launch::async, run_row, m));
    for (auto& f : futures) report.rows.push_back(f.get());
  }

  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    auto& prev = report.rows[i - 1];
    auto& row = report.rows[i];
    if (prev.m == row.m + 1 && prev.error && row.error && *row.error > 0.0 && *prev.error > 0.0) {
      row.observed_order = std::log2(*prev.error / *row.error);
    }
  }
  return report;
}

ConvergenceReport convergence_study(const SplitProblem& problem, const SchemeSpec& scheme, double h_ref,
                                    std::span<const int> m_list, const ConvergenceOptions& options) {
  if (!(h_ref > 0.0)) throw std::invalid_argument("convergence_study: h_ref must be positive");
  const std::size_t component = resolve_component(problem, options.component);
  const double horizon = options.horizon.value_or(problem.horizon);

  if (options.prefer_exact && problem.exact) {
    return convergence_study(problem, scheme, exact_reference(problem, h_ref, horizon, component), m_list,
                             options);
  }

  const ReferenceSolution fine = rk4_reference(problem, h_ref, horizon, component);
  ConvergenceReport report = convergence_study(problem, scheme, fine, m_list, options);

  // The reference is trusted only if halving its resolution barely moves it.
  const ReferenceSolution coarse = rk4_reference(problem, 2.0 * h_ref, horizon, component);
  const Projection proj = project_cubic(coarse.values, coarse.h_ref, fine.nodes);
  report.reference_disagreement =
      error_metric(proj.values, std::span<const double>(fine.values).first(proj.values.size()));
  double largest = 0.0;
  for (const auto& row : report.rows) {
    if (row.error) largest = std::max(largest, *row.error);
  }
  report.reference_verified = *report.reference_disagreement < 0.01 * largest;
  return report;
}

bool finishes(const SplitProblem& problem, const SchemeSpec& scheme, double h, double horizon,
              const IntegrateOptions& options) {
  return !integrate(problem, scheme, h, horizon, options).overflowed();
}

CriticalDtReport critical_dt(const SplitProblem& problem, const SchemeSpec& scheme, double h_hi,
                             const CriticalDtOptions& options) {
  scheme.validate();
  if (!(h_hi > 0.0)) throw std::invalid_argument("critical_dt: h_hi must be positive");
  if (!(options.tol > 0.0)) throw std::invalid_argument("critical_dt: tol must be positive");
  const double horizon = options.horizon.value_or(problem.horizon);
  const double cap = options.cap.value_or(horizon / scheme.steps());
  auto ok = [&](double h) { return finishes(problem, scheme, h, horizon, options.integrate); };

  CriticalDtReport report;
  report.scheme = scheme;
  report.problem = problem.name;

  double hi = std::min(h_hi, cap);
  double lo = 0.0;
  double growth = 2.0;
  if (options.scan_from) {
    if (!(*options.scan_from > 0.0) || !(options.growth > 1.0)) {
      throw std::invalid_argument("critical_dt: scan_from must be positive and growth > 1");
    }
    hi = std::min(*options.scan_from, cap);
    growth = options.growth;
  }
  while (ok(hi)) {
    lo = hi;
    if (hi >= cap) {
      report.kind = CriticalDtKind::UnconditionallyStable;
      report.dt0 = report.stable_h = cap;
      return report;
    }
    hi = std::min(growth * hi, cap);
  }
  if (lo == 0.0) {
    lo = 0.5 * hi;
    int halvings = 0;
    while (!ok(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++halvings > 60) throw std::runtime_error("critical_dt: no finishing step found");
    }
  }
  while (hi - lo > options.tol * lo) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  report.kind = CriticalDtKind::Bracketed;
  report.dt0 = lo;
  report.stable_h = lo;
  report.overflow_h = hi;
  return report;
}

}  // namespace rushlarsen
