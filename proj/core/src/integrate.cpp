#include "rushlarsen/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rushlarsen {

void SplitProblem::rhs(double t, std::span<const double> y, std::span<double> dydt) const {
  std::vector<double> a(y.size()), b(y.size());
  split(t, y, a, b);
  for (std::size_t i = 0; i < y.size(); ++i) dydt[i] = a[i] * y[i] + b[i];
}

std::vector<double> Trajectory::component(std::size_t i) const {
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& state : y) out.push_back(state.at(i));
  return out;
}

std::size_t step_count(double h, double horizon) {
  return static_cast<std::size_t>(std::floor(horizon / h * (1.0 + 1e-12)));
}

bool exceeds_bound(const std::vector<double>& y, double bound) noexcept {
  for (double v : y) {
    if (!std::isfinite(v) || std::abs(v) > bound) return true;
  }
  return false;
}

namespace {

void run(Trajectory& traj, const SplitProblem& problem, const SchemeSpec& scheme, double h,
         std::size_t steps, const IntegrateOptions& options) {
  const int k = scheme.steps();
  const std::size_t dim = problem.dimension();
  auto evaluate = [&](double t, const std::vector<double>& y, std::vector<double>& a, std::vector<double>& b) {
    a.assign(dim, 0.0);
    b.assign(dim, 0.0);
    problem.evaluate(t, y, a, b);
    ++traj.evaluations;
  };
  auto counted_rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
    std::vector<double> a(dim), b(dim);
    problem.evaluate(t, y, a, b);
    ++traj.evaluations;
    for (std::size_t i = 0; i < dim; ++i) dydt[i] = a[i] * y[i] + b[i];
  };
  auto node_time = [h](std::size_t n) { return static_cast<double>(n) * h; };
  auto accept = [&](std::size_t n, std::vector<double> y) {
    const bool bad = exceeds_bound(y, options.blowup_bound);
    traj.t.push_back(node_time(n));
    traj.y.push_back(std::move(y));
    if (bad) traj.status = RunStatus::Overflow;
    return !bad;
  };

  if (scheme.family == Family::RungeKutta4) {
    if (!accept(0, problem.y0)) return;
    std::vector<double> a, b, k1(dim);
    for (std::size_t n = 0; n < steps; ++n) {
      const auto& y = traj.y.back();
      evaluate(node_time(n), y, a, b);
      for (std::size_t i = 0; i < dim; ++i) k1[i] = a[i] * y[i] + b[i];
      if (!accept(n + 1, rk4_step(counted_rhs, node_time(n), y, h, k1))) return;
    }
    return;
  }

  // RK4 bootstrap of y_1..y_{k-1}. The first-stage evaluation at each startup node is
  // kept as that node's (a, b) record unless the startup is being perturbed.
  std::vector<std::vector<double>> start{problem.y0};
  std::vector<std::vector<double>> start_a, start_b;
  {
    std::vector<double> a, b, k1(dim);
    evaluate(0.0, problem.y0, a, b);
    int substeps = options.startup_substeps;
    if (substeps <= 0) {
      double stiffness = 0.0;
      for (double ai : a) stiffness = std::max(stiffness, std::abs(ai) * h);
      substeps = 1;
      while (substeps < stiffness && substeps < (1 << 20)) substeps *= 2;
    }
    traj.startup_substeps = substeps;
    const double sub_h = h / substeps;

    for (int n = 0; n + 1 < k; ++n) {
      if (n > 0) evaluate(node_time(n), start.back(), a, b);
      std::vector<double> y = start.back();
      start_a.push_back(a);
      start_b.push_back(b);
      for (int s = 0; s < substeps; ++s) {
        const double t = node_time(n) + s * sub_h;
        if (s > 0) {
          std::vector<double> sa(dim), sb(dim);
          problem.evaluate(t, y, sa, sb);
          ++traj.evaluations;
          a.swap(sa);
          b.swap(sb);
        }
        for (std::size_t i = 0; i < dim; ++i) k1[i] = a[i] * y[i] + b[i];
        y = rk4_step(counted_rhs, t, y, sub_h, k1);
      }
      start.push_back(std::move(y));
      if (exceeds_bound(start.back(), options.blowup_bound)) break;
    }
  }

  const bool perturbed = options.startup_perturbation != 0.0;
  History<double> hist(static_cast<std::size_t>(k));
  for (std::size_t n = 0; n < start.size(); ++n) {
    std::vector<double> y = std::move(start[n]);
    if (perturbed) {
      for (double& v : y) v += options.startup_perturbation;
    }
    if (!accept(n, y)) return;
    std::vector<double> a, b;
    if (!perturbed && n < start_a.size()) {
      a = std::move(start_a[n]);
      b = std::move(start_b[n]);
    } else {
      evaluate(node_time(n), y, a, b);
    }
    hist.push(node_time(n), std::move(y), std::move(a), std::move(b));
  }

  for (std::size_t n = static_cast<std::size_t>(k - 1); n < steps; ++n) {
    std::vector<double> next = scheme.family == Family::RushLarsen ? rl_step(k, hist, h, scheme.constant_a)
                                                                  : eab_step(k, hist, h);
    if (!accept(n + 1, next)) return;
    if (n + 1 == steps) break;
    std::vector<double> a, b;
    evaluate(node_time(n + 1), next, a, b);
    hist.push(node_time(n + 1), std::move(next), std::move(a), std::move(b));
  }
}

}  // namespace

Trajectory integrate(const SplitProblem& problem, const SchemeSpec& scheme, double h, double horizon,
                     const IntegrateOptions& options) {
  scheme.validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("integrate: step h must be positive");
  const int k = scheme.steps();
  if (!(horizon >= k * h * (1.0 - 1e-12))) {
    throw std::invalid_argument("integrate: horizon " + std::to_string(horizon) + " shorter than " +
                                std::to_string(k) + " steps of " + std::to_string(h));
  }
  const std::size_t steps = step_count(h, horizon);

  Trajectory traj;
  traj.t.reserve(steps + 1);
  traj.y.reserve(steps + 1);
  try {
    run(traj, problem, scheme, h, steps, options);
  } catch (const std::domain_error&) {
    // phi or a rate function saw a non-finite argument: the state has already diverged.
    traj.status = RunStatus::Overflow;
  }
  return traj;
}

Trajectory integrate(const SplitProblem& problem, const SchemeSpec& scheme, double h,
                     const IntegrateOptions& options) {
  return integrate(problem, scheme, h, problem.horizon, options);
}

}  // namespace rushlarsen
