#include "doctest.h"

#include <cmath>
#include <random>

#include "gendir/param_map.hpp"
#include "gendir/sampling.hpp"
#include "gendir/sde_kernel.hpp"
#include "oracles.hpp"

using namespace gendir;

namespace {

SdeCoefficients table(double c11) {
  SdeCoefficients c{{0.1, 1.5}, {0.625, 0.4}, {0.0125, 0.3}, SquareMatrix<double>(1)};
  c.c(0, 0) = c11;
  return c;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("drift and diffusion at the origin") {
  SimplexPoint origin({0.0, 0.0});
  auto a = drift(table(0.0125), origin);
  CHECK(a[0] == 1.0 / 32);
  CHECK(a[1] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(diffusion_diag(table(0.0125), origin) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("K = 3 kernel equals the written-out expressions") {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 200; ++n) {
    auto c = distribution_to_sde(random_gen_dir_params(rng, 3, 0.3, 12.0), {0.2, 0.9, 1.7});
    auto y = random_interior_point(rng, 3, 1e-4);
    const double cs[3] = {c.c(0, 0), c.c(0, 1), c.c(1, 1)};
    auto ref = oracle::k3_kernel(c.b.data(), c.S.data(), c.kappa.data(), cs, y.data());
    auto a = drift(c, SimplexPoint(y));
    auto B = diffusion_diag(c, SimplexPoint(y));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(a[i] - ref.a[i]) <= 1e-13 * ref.a_scale[i]);
      CHECK(oracle::rel_diff(B[i], ref.B[i]) <= 1e-13);
    }
  }
}

TEST_CASE("diffusion near Y1 = 1 depends on the approach") {
  // B_11 = kappa_1 Y_1 R_2 / R_1 for K = 2: it vanishes only if R_2 / R_1 does.
  auto c = table(-0.25);
  for (double eta : {1e-2, 1e-4, 1e-6}) {
    const double vanishing = diffusion_diag(c, SimplexPoint({1 - eta, eta * (1 - eta)}))[0];
    CHECK(vanishing == doctest::Approx(0.0125 * (1 - eta) * eta).epsilon(1e-8));
    const double half = diffusion_diag(c, SimplexPoint({1 - eta, eta / 2}))[0];
    CHECK(half == doctest::Approx(0.0125 * (1 - eta) / 2).epsilon(1e-8));
  }
}

TEST_CASE("potential gradient") {
  CHECK(max_abs(potential_gradient(GenDirParams({1}, {1}), SimplexPoint({0.37}))) == 0.0);
  auto g = potential_gradient(GenDirParams({5, 2}, {5, 3}), SimplexPoint({0.3, 0.4}));
  CHECK(g[0] == doctest::Approx(20.0 / 3).epsilon(1e-14));
  CHECK_THROWS_AS(potential_gradient(GenDirParams({5, 2}, {5, 3}), SimplexPoint({0.0, 0.4})), GeometryError);
  CHECK_THROWS_AS(potential_gradient(GenDirParams({5, 2}, {5, 3}), SimplexPoint({0.6, 0.4})), GeometryError);
}

TEST_CASE("potential gradient against finite differences of the potential") {
  std::mt19937_64 rng(2);
  const double h = 1e-6;
  for (int n = 0; n < 100; ++n) {
    const std::size_t k = 1 + static_cast<std::size_t>(n % 5);
    auto p = random_gen_dir_params(rng, k, 0.5, 10.0);
    auto y = random_interior_point(rng, k, 0.02);
    auto g = potential_gradient(p, SimplexPoint(y));
    for (std::size_t j = 0; j < k; ++j) {
      auto up = y, down = y;
      up[j] += h;
      down[j] -= h;
      const double fd = (oracle::minus_phi(p.alpha(), p.gamma(), up) - oracle::minus_phi(p.alpha(), p.gamma(), down)) /
                        (2 * h);
      CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
    }
  }
}

TEST_CASE("diffusion derivative against finite differences") {
  std::mt19937_64 rng(4);
  const double h = 1e-6;
  for (int n = 0; n < 100; ++n) {
    const std::size_t k = 1 + static_cast<std::size_t>(n % 5);
    auto c = distribution_to_sde(random_gen_dir_params(rng, k, 0.5, 10.0), std::vector<double>(k, 0.7));
    auto y = random_interior_point(rng, k, 0.02);
    auto d = diffusion_diag_derivative(c, SimplexPoint(y));
    for (std::size_t j = 0; j < k; ++j) {
      auto up = y, down = y;
      up[j] += h;
      down[j] -= h;
      const double fd = (diffusion_diag(c, SimplexPoint(up))[j] - diffusion_diag(c, SimplexPoint(down))[j]) / (2 * h);
      CHECK(std::abs(fd - d[j]) <= 1e-6 * std::max(1.0, std::abs(d[j])));
    }
  }
}

TEST_CASE("potential residual vanishes for consistent coefficients") {
  std::mt19937_64 rng(8);
  SUBCASE("table case 1") {
    for (int n = 0; n < 100; ++n)
      CHECK(max_abs(potential_residual(table(0.0125), SimplexPoint(random_interior_point(rng, 2, 1e-3)))) <= 1e-8);
  }
  SUBCASE("random K = 3") {
    for (int n = 0; n < 100; ++n) {
      auto c = distribution_to_sde(random_gen_dir_params(rng, 3, 0.5, 10.0), {0.3, 1.2, 0.8});
      CHECK(max_abs(potential_residual(c, SimplexPoint(random_interior_point(rng, 3, 1e-3)))) <= 1e-8);
    }
  }
}

TEST_CASE("broken correspondence leaves a residual") {
  auto c = table(0.0125);
  const auto target = sde_to_distribution(c);
  c.c(0, 0) *= 1.1;
  auto r = potential_residual(c, target, SimplexPoint({0.3, 0.4}));
  CHECK(std::abs(r[0]) > 1e-3);
}

TEST_CASE("drift points inward on the coordinate faces") {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 1000; ++n) {
    const std::size_t k = 1 + static_cast<std::size_t>(n % 5);
    auto c = distribution_to_sde(random_gen_dir_params(rng, k, 0.3, 12.0), std::vector<double>(k, 0.5 + 0.01 * (n % 50)));
    auto y = random_interior_point(rng, k, 1e-3);
    const std::size_t face = static_cast<std::size_t>(n) % k;
    y[face] = 0.0;
    SimplexPoint p(y);
    CHECK(drift(c, p)[face] > 0.0);
    CHECK(diffusion_diag(c, p)[face] == 0.0);
  }
}

TEST_CASE("K = 1 reduces to the beta kernel") {
  SdeCoefficients c{{0.8}, {0.3}, {0.6}, {}};
  for (double y : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    CHECK(drift(c, SimplexPoint({y}))[0] == doctest::Approx(0.4 * (0.3 - y)).epsilon(1e-15));
    CHECK(diffusion_diag(c, SimplexPoint({y}))[0] == doctest::Approx(0.6 * y * (1 - y)).epsilon(1e-15));
  }
}

TEST_CASE("process rejects inconsistent coefficients") {
  auto c = table(0.0125);
  c.S[1] = 0.5;
  CHECK_THROWS_AS(GenDirProcess{c}, CoefficientError);
  GenDirProcess ok(table(-0.25));
  CHECK(ok.evaluable(std::vector<double>{0.3, 0.2}));
  CHECK(!ok.evaluable(std::vector<double>{1.0, 0.0}));
}
