#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hcspec/errors.hpp"
#include "hcspec/limitspec.hpp"
#include "hcspec/radial3d.hpp"

using namespace hcspec;
constexpr double pi = std::numbers::pi;
constexpr double kSphereRoot = 10.7107065793619022245;

TEST_CASE("sphere limit roots") {
  auto sp = sphere_limit_spectrum(0.5, 200.0);
  REQUIRE(!sp.s2.empty());
  CHECK(sp.s2[0].lambda == doctest::Approx(kSphereRoot).epsilon(1e-12));
  CHECK(sp.s2[0].lambda > 3.2 * 3.2);
  CHECK(sp.s2[0].lambda < 3.464 * 3.464);
  CHECK(sp.s1.empty());
  for (const auto& m : sp.s2) {
    CHECK(m.residual < 1e-9);
    CHECK(m(0.5) == 1.0);
    CHECK(m(1.0) == doctest::Approx(0.0).scale(1.0));
  }
  CHECK(sphere_limit_spectrum(0.5, 5.0).s2.empty());
}

TEST_CASE("sphere mode solves the radial equation outside") {
  auto m = sphere_limit_spectrum(0.5, 20.0).s2.at(0);
  const double h = 1e-4;
  for (double r : {0.6, 0.75, 0.9}) {
    // -(1/r^2)(r^2 u')' = λu
    auto flux = [&](double x) { return x * x * (m(x + h / 2) - m(x - h / 2)) / h; };
    double lhs = -(flux(r + h / 2) - flux(r - h / 2)) / (h * r * r);
    CHECK(lhs == doctest::Approx(m.lambda * m(r)).epsilon(1e-5));
  }
  // Flux condition: 4πa² u'(a+) + λ (4/3)πa³ = 0.
  double du = (-3 * m(0.5) + 4 * m(0.5 + h) - m(0.5 + 2 * h)) / (2 * h);
  CHECK(std::abs(4 * pi * 0.25 * du + m.lambda * 4.0 / 3.0 * pi * 0.125) < 1e-6);
}

TEST_CASE("homogeneous ball reproduces (πn)^2") {
  auto opr = radial_operator(0.5, 1.0, 1000);
  auto sp = smallest_eigenpairs(opr, 3);
  for (int n = 1; n <= 3; ++n) CHECK(sp.eigenvalues[n - 1] == doctest::Approx(pi * pi * n * n).epsilon(1e-4));
}

TEST_CASE("radial operator is symmetric and positive") {
  auto opr = radial_operator(0.5, 0.01, 200);
  auto K = opr.matrix();
  CHECK(SparseMat<double>(K - SparseMat<double>(K.transpose())).norm() == 0.0);
  CHECK(count_below(opr, 0.0) == 0);
  CHECK_THROWS_AS(radial_operator(0.5, 0.0, 200), ConfigError);
  CHECK_THROWS_AS(radial_operator(0.333, 0.01, 200), ConfigError);
}

TEST_CASE("small contrast approaches the sphere root") {
  auto opr = radial_operator(0.5, 1e-3, 4000);
  double lam = smallest_eigenpairs(opr, 1).eigenvalues[0];
  CHECK(std::abs(lam - kSphereRoot) / kSphereRoot < 1e-2);
}

TEST_CASE("limit machinery on the radial operator") {
  auto opr = radial_operator_split(0.5, 0.0, 2000, Dirichlet{});
  auto spec = limit_spectrum(opr, 60.0);
  auto exact = sphere_limit_spectrum(0.5, 60.0).eigenvalues();
  REQUIRE(spec.pairs.size() == exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) {
    CHECK(spec.pairs[i].branch == LimitBranch::constant_trace);
    CHECK(spec.pairs[i].lambda == doctest::Approx(exact[i]).epsilon(1e-3));
  }
  CHECK(zero_flux_branch(opr, 60.0).accepted.empty());
  auto u = sample_on(opr, sphere_limit_spectrum(0.5, 20.0).s2[0]);
  auto v = spec.pairs[0].u / spec.pairs[0].c(0);
  CHECK((u - v).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("radial CSV") {
  std::ostringstream os;
  write_radial_csv(os, sphere_limit_spectrum(0.5, 20.0).s2[0], 4);
  CHECK(os.str().rfind("r,u\n0,1\n", 0) == 0);
}
