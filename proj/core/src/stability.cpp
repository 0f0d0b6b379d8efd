#include "rushlarsen/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace rushlarsen {

std::vector<Complex> RecurrenceMatrix::last_row() const {
  return {entries.end() - k, entries.end()};
}

std::vector<Complex> RecurrenceMatrix::apply(std::span<const Complex> history) const {
  if (history.size() != static_cast<std::size_t>(k)) throw std::invalid_argument("apply: history size != k");
  std::vector<Complex> out(k, Complex{0.0});
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) out[r] += (*this)(r, c) * history[c];
  }
  return out;
}

Complex test_equation_step(const SchemeSpec& scheme, double theta, Complex z, std::span<const Complex> history) {
  scheme.validate();
  if (scheme.family == Family::RungeKutta4) throw std::invalid_argument("RK4 has no multistep recurrence");
  const int k = scheme.order;
  if (history.size() != static_cast<std::size_t>(k)) throw std::invalid_argument("history size != k");
  // h = 1, so a_j h = theta z and b_j h = (1 - theta) z y_j.
  History<Complex> hist(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const Complex y = history[j];
    hist.push(static_cast<double>(j), {y}, {theta * z}, {(1.0 - theta) * z * y});
  }
  const auto next = scheme.family == Family::RushLarsen ? rl_step(k, hist, 1.0, scheme.constant_a)
                                                       : eab_step(k, hist, 1.0);
  return next[0];
}

RecurrenceMatrix probe_recurrence(const SchemeSpec& scheme, double theta, Complex z) {
  scheme.validate();
  if (scheme.family == Family::RungeKutta4) throw std::invalid_argument("RK4 has no multistep recurrence");
  const int k = scheme.order;
  RecurrenceMatrix m;
  m.k = k;
  m.entries.assign(static_cast<std::size_t>(k * k), Complex{0.0});
  for (int r = 0; r + 1 < k; ++r) m.entries[static_cast<std::size_t>(r * k + r + 1)] = 1.0;
  std::vector<Complex> unit(k, Complex{0.0});
  for (int c = 0; c < k; ++c) {
    std::fill(unit.begin(), unit.end(), Complex{0.0});
    unit[c] = 1.0;
    m.entries[static_cast<std::size_t>((k - 1) * k + c)] = test_equation_step(scheme, theta, z, unit);
  }
  return m;
}

double spectral_radius(const RecurrenceMatrix& m) {
  for (const auto& e : m.entries) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw std::domain_error("spectral_radius: non-finite matrix entry");
    }
  }
  const int k = m.k;
  if (k == 1) return std::abs(m.entries[0]);

  Eigen::MatrixXcd a(k, k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) a(r, c) = m(r, c);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::domain_error("spectral_radius: eigenvalue solver failed");

  // Characteristic polynomial of the companion form: p(x) = x^k - sum_c last[c] x^c.
  const auto last = m.last_row();
  auto poly = [&](Complex x, Complex& dp) {
    Complex p = 1.0;
    dp = 0.0;
    for (int c = k - 1; c >= 0; --c) {
      dp = dp * x + p;
      p = p * x - last[c];
    }
    return p;
  };

  double radius = 0.0;
  for (int i = 0; i < k; ++i) {
    Complex root = solver.eigenvalues()[i];
    Complex dp;
    double residual = std::abs(poly(root, dp));
    // Newton polish; kept only while it reduces the residual.
    for (int it = 0; it < 3 && residual > 0.0 && std::abs(dp) > 0.0; ++it) {
      const Complex candidate = root - poly(root, dp) / dp;
      Complex dc;
      const double r = std::abs(poly(candidate, dc));
      if (!(r < residual)) break;
      root = candidate;
      residual = r;
      poly(root, dp);
    }
    radius = std::max(radius, std::abs(root));
  }
  return radius;
}

double stability_radius(const SchemeSpec& scheme, double theta, Complex z) {
  return spectral_radius(probe_recurrence(scheme, theta, z));
}

double StabilityGrid::re(std::size_t i) const {
  if (n_re < 2) return rect.re_min;
  return rect.re_min + (rect.re_max - rect.re_min) * static_cast<double>(i) / static_cast<double>(n_re - 1);
}

double StabilityGrid::im(std::size_t j) const {
  if (n_im < 2) return rect.im_min;
  return rect.im_min + (rect.im_max - rect.im_min) * static_cast<double>(j) / static_cast<double>(n_im - 1);
}

StabilityGrid scan(const SchemeSpec& scheme, double theta, const Rect& rect, std::size_t n_re, std::size_t n_im,
                   unsigned workers) {
  if (n_re < 2 || n_im < 2) throw std::invalid_argument("scan: resolution must be at least 2 x 2");
  if (!(rect.re_max > rect.re_min) || !(rect.im_max > rect.im_min)) {
    throw std::invalid_argument("scan: empty rectangle");
  }
  StabilityGrid grid;
  grid.rect = rect;
  grid.n_re = n_re;
  grid.n_im = n_im;
  grid.rho.assign(n_re * n_im, 0.0);

  const std::size_t total = n_re * n_im;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t p = first; p < last; ++p) {
      const std::size_t i = p % n_re;
      const std::size_t j = p / n_re;
      try {
        grid.rho[p] = stability_radius(scheme, theta, Complex(grid.re(i), grid.im(j)));
      } catch (const std::domain_error&) {
        grid.rho[p] = std::numeric_limits<double>::infinity();  // overflowed recurrence
      }
    }
  };
  if (workers <= 1) {
    work(0, total);
    return grid;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t first = w * chunk;
      const std::size_t last = std::min(total, first + chunk);
      if (first >= last) break;
      pool.emplace_back(work, first, last);
    }
  }  // joined
  return grid;
}

CrossingResult real_axis_crossing(const SchemeSpec& scheme, double theta, double search_limit) {
  if (!(search_limit < 0.0)) throw std::invalid_argument("real_axis_crossing: search_limit must be negative");
  auto unstable = [&](double x) { return stability_radius(scheme, theta, Complex(x, 0.0)) > 1.0 + kUnitTolerance; };

  double stable_x = std::max(-1e-3, search_limit);
  if (unstable(stable_x)) return {CrossingKind::Degenerate, stable_x};

  double probe = stable_x;
  while (probe > search_limit) {
    probe = std::max(2.0 * probe, search_limit);
    if (unstable(probe)) {
      double lo = stable_x;  // stable, closer to 0
      double hi = probe;     // unstable
      while (std::abs(hi - lo) > 1e-4 * std::abs(lo)) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
      }
      return {CrossingKind::Crossing, 0.5 * (lo + hi)};
    }
    stable_x = probe;
  }
  return {CrossingKind::NoCrossing, search_limit};
}

}  // namespace rushlarsen
