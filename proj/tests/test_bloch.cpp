#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hcspec/bloch.hpp"
#include "hcspec/errors.hpp"

using namespace hcspec;
constexpr double pi = std::numbers::pi;

namespace {

const ContrastMedium cell(double a, double h = 2.0 / 1000) {
  Geometry1D g = a > 0 ? Geometry1D(-1.0, 1.0, {{-a, a}}) : Geometry1D(-1.0, 1.0);
  return ContrastMedium(g, 1.0, Dirichlet{}, h);
}

std::vector<std::vector<double>> grid(std::initializer_list<double> ks) {
  std::vector<std::vector<double>> out;
  for (double k : ks) out.push_back({k});
  return out;
}

std::vector<double> free_waves(double k, int count) {
  std::vector<double> v;
  for (int n = -count; n <= count; ++n) v.push_back((k + pi * n) * (k + pi * n));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

}  // namespace

TEST_CASE("empty cell gives free waves at every contrast") {
  auto bands = dispersion_sweep(cell(0.0), grid({0.3, 0.9, 1.5}), 4, {1.0, 1e-2, 0.0});
  for (std::size_t e = 0; e < bands.epsilons.size(); ++e)
    for (std::size_t j = 0; j < bands.k_grid.size(); ++j) {
      auto ref = free_waves(bands.k_grid[j][0], 4);
      for (int n = 0; n < 4; ++n) CHECK(std::abs(bands.lambda[e][j][n] - ref[n]) < 1e-10 * std::max(1.0, ref[n]));
    }
  // Bands touch at the zone edge, where the roots are double and the sign-change scan cannot
  // bracket them; stay just inside. Near k = 0 the excluded band leaves a slit of width ~4πk_min.
  auto touching = dispersion_sweep(cell(0.0), grid({1e-2, 0.5, 1.0, pi / 2 - 1e-3}), 4, {0.0});
  CHECK(gap_report(touching, 0.0, 0.2).empty());
}

TEST_CASE("limit dispersion of the a = 0.5 cell") {
  const double table[][5] = {{0.3, 0.178621034209389, 15.886852327786443, 40.16845427159344, 95.88664576573979},
                             {0.7, 0.9348250635863056, 13.808533376312667, 42.64842423345817, 93.37973833166029},
                             {1.1, 2.0828584958025065, 11.370498068904645, 45.42571407011355, 90.45233195976053},
                             {1.5, 2.935407090708646, 9.90951389133464, 46.90234120920487, 88.86645613584906}};
  auto bands = dispersion_sweep(cell(0.5), grid({0.3, 0.7, 1.1, 1.5}), 4, {0.0});
  for (int j = 0; j < 4; ++j)
    for (int n = 0; n < 4; ++n) CHECK(bands.lambda[0][j][n] == doctest::Approx(table[j][n + 1]).epsilon(1e-10));

  auto scan = dispersion_sweep(cell(0.5), grid({0.7, 1.5}), 4, {0.0}, BandSolver::fdm);
  CHECK(scan.lambda[0][0][0] == doctest::Approx(table[1][1]).epsilon(1e-3));
  CHECK(scan.lambda[0][1][3] == doctest::Approx(table[3][4]).epsilon(1e-3));
}

TEST_CASE("bands are even in k") {
  for (auto solver : {BandSolver::automatic, BandSolver::fdm}) {
    auto bands = dispersion_sweep(cell(0.5, 2.0 / 400), grid({0.4, -0.4, 1.2, -1.2}), 3, {1e-2, 0.0}, solver);
    for (std::size_t e = 0; e < 2; ++e)
      for (int j : {0, 2})
        for (int n = 0; n < 3; ++n)
          CHECK(std::abs(bands.lambda[e][j][n] - bands.lambda[e][j + 1][n]) <= 1e-10 * bands.lambda[e][j][n]);
  }
}

TEST_CASE("shift by pi leaves the bands unchanged") {
  auto bands = dispersion_sweep(cell(0.5), grid({0.6, 0.6 + pi}), 3, {1e-2, 0.0});
  for (int e = 0; e < 2; ++e)
    for (int n = 0; n < 3; ++n) CHECK(bands.lambda[e][0][n] == doctest::Approx(bands.lambda[e][1][n]).epsilon(1e-9));
}

TEST_CASE("small contrast bands sit near the limit curve") {
  auto bands = dispersion_sweep(cell(0.5, 2.0 / 2000), grid({1.0}), 2, {1e-3, 0.0}, BandSolver::fdm);
  for (int n = 0; n < 2; ++n) CHECK(bands.lambda[0][0][n] == doctest::Approx(bands.lambda[1][0][n]).epsilon(1e-2));
  auto exact = dispersion_sweep(cell(0.5), grid({1.0}), 2, {1e-3});
  for (int n = 0; n < 2; ++n)
    CHECK(bands.lambda[0][0][n] == doctest::Approx(exact.lambda[0][0][n]).epsilon(1e-4));
}

TEST_CASE("gap report") {
  auto bands = dispersion_sweep(cell(0.5), grid({0.1, 0.5, 0.9, 1.3, pi / 2}), 3, {0.0});
  auto gaps = gap_report(bands, 0.0);
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0].lo == doctest::Approx(2.96069553757986816889).epsilon(1e-9));
  CHECK(gaps[0].hi == doctest::Approx(pi * pi).epsilon(1e-9));
  auto single = dispersion_sweep(cell(0.5), grid({0.5}), 1, {0.0});
  CHECK(gap_report(single, 0.0).empty());
  CHECK_THROWS_AS(gap_report(bands, 0.5), ConfigError);
}

TEST_CASE("rejected inputs") {
  CHECK_THROWS_AS(dispersion_sweep(cell(0.5), grid({0.0}), 2, {0.0}), DomainError);
  CHECK_THROWS_AS(dispersion_sweep(cell(0.5), grid({pi + 5e-4}), 2, {0.0}), DomainError);
  CHECK_THROWS_AS(dispersion_sweep(cell(0.5), grid({0.5}), 0, {0.0}), ConfigError);
  CHECK_THROWS_AS(dispersion_sweep(cell(0.5), {{0.5, 0.5}}, 2, {0.0}), ConfigError);
}

TEST_CASE("2D cell bands") {
  auto g = Geometry2D::from_rectangles(0.0, 1.0, 0.0, 1.0, 0.05, {{0.3, 0.3, 0.7, 0.7}});
  ContrastMedium m(g, 1.0, Dirichlet{});
  auto bands = dispersion_sweep(m, {{0.8, 0.3}, {-0.8, -0.3}}, 3, {1e-2, 0.0});
  for (int e = 0; e < 2; ++e)
    for (int n = 0; n < 3; ++n) {
      CHECK(bands.lambda[e][0][n] > 0.0);
      // the limit pencil is a restriction of the ε > 0 form
      CHECK(bands.lambda[e][0][n] == doctest::Approx(bands.lambda[e][1][n]).epsilon(1e-9));
      CHECK(bands.lambda[0][0][n] <= bands.lambda[1][0][n] * (1 + 1e-9));
    }
}

TEST_CASE("band CSV layout") {
  auto bands = dispersion_sweep(cell(0.5), grid({0.5}), 2, {0.0});
  std::ostringstream os;
  write_bands_csv(os, bands);
  CHECK(os.str().rfind("k,epsilon,branch,lambda,omega\n0.5,0,1,", 0) == 0);
  std::ostringstream gs;
  write_gaps_csv(gs, {{0.0, 1.0, 2.0}});
  CHECK(gs.str() == "epsilon,gap_lo,gap_hi\n0,1,2\n");
}
