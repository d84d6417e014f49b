#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hcspec/errors.hpp"
#include "hcspec/studies.hpp"

using namespace hcspec;
constexpr double pi = std::numbers::pi;

namespace {

ContrastMedium slab(const BoundaryCondition& bc, double h = 2.0 / 4000) {
  return ContrastMedium(Geometry1D(-1.0, 1.0, {{-0.5, 0.5}}), 1.0, bc, h);
}

const std::vector<double> sweep{1e-2, 1e-3, 1e-4, 1e-5};

}  // namespace

TEST_CASE("affine fit") {
  auto [c0, c1, rms] = affine_fit({1.0, 2.0, 3.0}, {3.0, 5.0, 7.0});
  CHECK(c0 == doctest::Approx(1.0));
  CHECK(c1 == doctest::Approx(2.0));
  CHECK(rms < 1e-12);
  CHECK_THROWS_AS(affine_fit({1.0}, {1.0}), ConfigError);
}

TEST_CASE("Dirichlet slab extrapolates to the limit roots") {
  ConvergeOptions opt;
  opt.epsilons = sweep;
  opt.branch_count = 3;
  auto rep = run_converge(slab(Dirichlet{}), opt);
  CHECK(rep.pass);
  REQUIRE(rep.branches.size() == 3);
  CHECK(rep.branches[0].lambda0 == doctest::Approx(2.96069553757986816889).epsilon(1e-3));
  CHECK(rep.branches[0].limit_value.value() == doctest::Approx(2.96069553757986816889).epsilon(1e-9));
  for (const auto& b : rep.branches) {
    CHECK(!b.divergent);
    CHECK(b.flatness_ratio < 1.5);
    CHECK(b.slope != 0.0);
  }
}

TEST_CASE("homogeneous medium has no contrast dependence") {
  ConvergeOptions opt;
  opt.epsilons = sweep;
  opt.branch_count = 2;
  ContrastMedium m(Geometry1D(-1.0, 1.0), 1.0, Dirichlet{}, 2.0 / 1000);
  auto rep = run_converge(m, opt);
  for (const auto& b : rep.branches) CHECK(std::abs(b.slope) < 1e-9);
  CHECK(rep.branches[0].lambda0 == doctest::Approx(pi * pi / 4).epsilon(1e-5));
}

TEST_CASE("inclusion-dominated branches are excluded") {
  // A wide inclusion pushes low modes up as 1/ε once the exterior cannot host them.
  ContrastMedium m(Geometry1D(-1.0, 1.0, {{-0.95, 0.95}}), 1.0, Dirichlet{}, 2.0 / 400);
  ConvergeOptions opt;
  opt.epsilons = {1.0, 0.5, 0.25, 0.125};
  opt.branch_count = 4;
  auto rep = run_converge(m, opt);
  bool any = false;
  for (const auto& b : rep.branches) any = any || b.divergent;
  CHECK(any);
}

TEST_CASE("input validation") {
  ConvergeOptions opt;
  opt.epsilons = {1e-2, 1e-3, 1e-4};
  CHECK_THROWS_AS(run_converge(slab(Dirichlet{}), opt), ConfigError);
  opt.epsilons = {1e-2, 6e-3, 3e-3, 1.5e-3};
  CHECK_THROWS_AS(run_converge(slab(Dirichlet{}), opt), ConfigError);
  opt.epsilons = {1e-2, 1e-3, 2e-4, 1e-5};
  CHECK_THROWS_AS(run_converge(slab(Dirichlet{}), opt), ConfigError);
}

TEST_CASE("reference limit spectra") {
  auto d = reference_limit_spectrum(slab(Dirichlet{}), 50.0);
  REQUIRE(d.size() == 3);
  CHECK(d[2] == doctest::Approx(46.9394473197678733713).epsilon(1e-10));
  CHECK(d[1] == doctest::Approx(4 * pi * pi).epsilon(1e-12));
  ContrastMedium ball(RadialGeometry(0.5), 1.0, Dirichlet{}, 1.0 / 1000);
  CHECK(reference_limit_spectrum(ball, 20.0).at(0) == doctest::Approx(10.7107065793619022245).epsilon(1e-10));
  ContrastMedium nball(RadialGeometry(0.5), 1.0, Neumann{}, 1.0 / 1000);
  CHECK(!reference_limit_spectrum(nball, 60.0).empty());
}
