#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rushlarsen/stability.hpp"

using namespace rushlarsen;

namespace {

const char* const kMultistep[] = {"RL2", "RL3", "RL4", "EAB2", "EAB3", "EAB4"};

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("theta = 1: the recurrence is multiplication by e^z") {
  for (const char* name : kMultistep) {
    const SchemeSpec s = SchemeSpec::parse(name);
    for (Complex z : {Complex(-0.3, 0.0), Complex(-2.0, 5.0), Complex(-40.0, -3.0)}) {
      const auto row = probe_recurrence(s, 1.0, z).last_row();
      for (int i = 0; i + 1 < s.order; ++i) CHECK(std::abs(row[i]) <= 1e-14);
      CHECK(close(row.back(), std::exp(z), 1e-13));
      CHECK(stability_radius(s, 1.0, z) == doctest::Approx(std::abs(std::exp(z))).epsilon(1e-10));
    }
  }
}

TEST_CASE("z = 0 has spectral radius one") {
  for (const char* name : kMultistep) {
    for (double theta : {0.0, 0.5, 1.0, 2.0}) {
      CHECK(stability_radius(SchemeSpec::parse(name), theta, Complex(0.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("theta = 0 recovers Adams-Bashforth") {
  const Complex z(-0.7, 0.4);
  auto rl2 = probe_recurrence(SchemeSpec::parse("RL2"), 0.0, z).last_row();
  CHECK(close(rl2[0], -z / 2.0, 1e-14));
  CHECK(close(rl2[1], 1.0 + 1.5 * z, 1e-14));

  auto rl3 = probe_recurrence(SchemeSpec::parse("RL3"), 0.0, z).last_row();
  CHECK(close(rl3[0], 5.0 * z / 12.0, 1e-14));
  CHECK(close(rl3[1], -16.0 * z / 12.0, 1e-14));
  CHECK(close(rl3[2], 1.0 + 23.0 * z / 12.0, 1e-14));

  // phi_j(0) = 1/j!, so EAB_k with a = 0 is also AB_k.
  for (int k = 2; k <= 4; ++k) {
    auto rl = probe_recurrence(SchemeSpec{Family::RushLarsen, k, false}, 0.0, z).last_row();
    auto eab = probe_recurrence(SchemeSpec{Family::ExponentialAdams, k, false}, 0.0, z).last_row();
    for (int i = 0; i < k; ++i) CHECK(close(eab[i], rl[i], 1e-14));
  }
  CHECK(stability_radius(SchemeSpec::parse("RL2"), 0.0, Complex(-1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("RL2 at theta = 0 matches the AB2 characteristic roots") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> re(-4.0, 1.0), im(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Complex z(re(rng), im(rng));
    CHECK(stability_radius(SchemeSpec::parse("RL2"), 0.0, z) == doctest::Approx(oracle::ab2_radius(z)).epsilon(1e-10));
  }
}

TEST_CASE("the recurrence matrix is a shifted companion matrix") {
  const RecurrenceMatrix m = probe_recurrence(SchemeSpec::parse("RL4"), 0.8, Complex(-3.0, 1.0));
  REQUIRE(m.k == 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(m(r, c) == Complex(c == r + 1 ? 1.0 : 0.0, 0.0));
  }
}

TEST_CASE("probing reproduces the step on arbitrary histories") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (const char* name : kMultistep) {
    const SchemeSpec s = SchemeSpec::parse(name);
    for (int trial = 0; trial < 20; ++trial) {
      const double theta = 1.1 * std::abs(g(rng)) / 2.0;
      const Complex z(-std::abs(5.0 * g(rng)), 5.0 * g(rng));
      std::vector<Complex> hist(s.order);
      for (auto& x : hist) x = Complex(g(rng), g(rng));
      const RecurrenceMatrix m = probe_recurrence(s, theta, z);
      const Complex direct = test_equation_step(s, theta, z, hist);
      const Complex via_matrix = m.apply(hist).back();
      CHECK(close(via_matrix, direct, 1e-13));
    }
  }
}

TEST_CASE("stability radius is symmetric under conjugation") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> re(-100.0, 0.0), im(-60.0, 60.0), th(0.0, 1.1);
  for (const char* name : kMultistep) {
    for (int i = 0; i < 50; ++i) {
      const Complex z(re(rng), im(rng));
      const double theta = th(rng);
      const double r1 = stability_radius(SchemeSpec::parse(name), theta, z);
      const double r2 = stability_radius(SchemeSpec::parse(name), theta, std::conj(z));
      CHECK(r1 == doctest::Approx(r2).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral radius of a known matrix") {
  RecurrenceMatrix m;
  m.k = 2;
  m.entries = {0.0, 1.0, 0.25, 0.0};  // roots +-1/2
  CHECK(spectral_radius(m) == doctest::Approx(0.5).epsilon(1e-14));
  m.entries = {0.0, 1.0, -1.0, 0.0};  // roots +-i
  CHECK(spectral_radius(m) == doctest::Approx(1.0).epsilon(1e-14));
  m.entries[2] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(spectral_radius(m), std::domain_error);
}

TEST_CASE("RK4 has no multistep recurrence") {
  CHECK_THROWS_AS(probe_recurrence(SchemeSpec::parse("RK4"), 0.5, Complex(-1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(scan(SchemeSpec::parse("RK4"), 0.5, Rect{-1, 0, 0, 1}, 3, 3, 1), std::invalid_argument);
}

TEST_CASE("scan: lattice layout") {
  const Rect r{-6.0, 1.0, 0.0, 8.0};
  const StabilityGrid g = scan(SchemeSpec::parse("RL2"), 0.5, r, 8, 5, 2);
  REQUIRE(g.rho.size() == 40);
  CHECK(g.re(0) == -6.0);
  CHECK(g.re(7) == 1.0);
  CHECK(g.im(0) == 0.0);
  CHECK(g.im(4) == 8.0);
  CHECK(g.index(3, 2) == 19);
  CHECK(g.rho[g.index(3, 2)] == stability_radius(SchemeSpec::parse("RL2"), 0.5, Complex(g.re(3), g.im(2))));

  const StabilityGrid tiny = scan(SchemeSpec::parse("RL3"), 0.0, r, 2, 2, 1);
  CHECK(tiny.rho.size() == 4);
  CHECK_THROWS_AS(scan(SchemeSpec::parse("RL3"), 0.0, r, 1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(scan(SchemeSpec::parse("RL3"), 0.0, Rect{1.0, 0.0, 0.0, 1.0}, 3, 3, 1), std::invalid_argument);
}

TEST_CASE("scan: output does not depend on the worker count") {
  const Rect r{-250.0, 0.0, 0.0, 140.0};
  const SchemeSpec s = SchemeSpec::parse("RL3");
  const StabilityGrid one = scan(s, 0.95, r, 41, 33, 1);
  const StabilityGrid many = scan(s, 0.95, r, 41, 33, 7);
  CHECK(one.rho == many.rho);
}

TEST_CASE("scan: theta = 1 is stable on the whole left half-plane") {
  const StabilityGrid g = scan(SchemeSpec::parse("EAB3"), 1.0, Rect{-50.0, -0.01, -30.0, 30.0}, 21, 21, 0);
  for (std::size_t j = 0; j < g.n_im; ++j) {
    for (std::size_t i = 0; i < g.n_re; ++i) CHECK(g.stable(i, j));
  }
}

TEST_CASE("RL2 at theta = 5/6 stays stable far up the imaginary direction") {
  const SchemeSpec s = SchemeSpec::parse("RL2");
  for (Complex z : {Complex(-1.0, 50.0), Complex(-5.0, 200.0), Complex(-40.0, 1000.0)}) {
    CHECK(stability_radius(s, 5.0 / 6.0, z) < 1.0);
  }
}

TEST_CASE("real-axis crossings") {
  auto x = [](const char* name, double theta) {
    const CrossingResult c = real_axis_crossing(SchemeSpec::parse(name), theta, -1e6);
    REQUIRE(c.kind == CrossingKind::Crossing);
    return c.x;
  };
  CHECK(x("RL2", 0.0) == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(x("RL3", 0.0) == doctest::Approx(-6.0 / 11.0).epsilon(1e-3));
  CHECK(x("RL4", 0.0) == doctest::Approx(-0.3).epsilon(1e-3));
  CHECK(x("EAB3", 0.0) == doctest::Approx(-6.0 / 11.0).epsilon(1e-3));
  CHECK(x("RL3", 0.85) == doctest::Approx(-14.12).epsilon(2e-3));
  CHECK(x("RL3", 1.05) == doctest::Approx(-229.7).epsilon(2e-3));
  CHECK(x("RL4", 1.05) == doctest::Approx(-85.57).epsilon(2e-3));
  // The bracket is resolved to 1e-4 relative: rho is within tolerance on the stable side.
  const double c = x("RL3", 0.9);
  CHECK(stability_radius(SchemeSpec::parse("RL3"), 0.9, Complex(c * (1 - 2e-4), 0.0)) <= 1.0 + kUnitTolerance);
  CHECK(stability_radius(SchemeSpec::parse("RL3"), 0.9, Complex(c * (1 + 2e-4), 0.0)) > 1.0 + kUnitTolerance);

  for (double theta : {2.0 / 3.0, 0.7, 5.0 / 6.0, 2.0}) {
    const CrossingResult r = real_axis_crossing(SchemeSpec::parse("RL2"), theta, -1e6);
    CHECK(r.kind == CrossingKind::NoCrossing);
    CHECK(r.x == -1e6);
  }
  CHECK_THROWS_AS(real_axis_crossing(SchemeSpec::parse("RL2"), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("consistent schemes are never unstable just left of the origin") {
  for (const char* name : kMultistep) {
    for (double theta : {-3.0, 0.0, 0.5, 1.0, 3.0, 50.0}) {
      CHECK(real_axis_crossing(SchemeSpec::parse(name), theta, -10.0).kind != CrossingKind::Degenerate);
    }
  }
}
