#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hcspec/errors.hpp"
#include "hcspec/limitspec.hpp"

using namespace hcspec;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

const Geometry1D symmetric(-1.0, 1.0, {{-0.5, 0.5}});

DiscreteOperator limit_op(const BoundaryCondition& bc, double h, Geometry1D g = symmetric) {
  return assemble_split(ContrastMedium(g, 0.0, bc, h));
}

std::vector<double> pencil_eigs(const LimitPencil<double>& p, int count) {
  EigenOptions eo;
  eo.count = count;
  auto r = smallest_pencil_eigs<double>(p.K, p.w, eo);
  return {r.values.data(), r.values.data() + r.values.size()};
}

}  // namespace

TEST_CASE("characteristic matrix is symmetric and counts agree with the reduced pencil") {
  auto opr = limit_op(Dirichlet{}, 0.01, Geometry1D(-1.0, 1.0, {{-0.6, -0.2}, {0.2, 0.6}}));
  auto T = characteristic_matrix<double>(opr, 7.3);
  CHECK((T - T.transpose()).cwiseAbs().maxCoeff() < 1e-10 * T.cwiseAbs().maxCoeff());
  auto p = limit_pencil(opr);
  for (double lam : {3.0, 20.0, 75.0}) {
    auto c = limit_count_below(opr, lam);
    CHECK(c.total == pencil_count_below<double>(p.K, p.w, lam));
  }
}

TEST_CASE("Dirichlet limit spectrum of the symmetric slab") {
  auto opr = limit_op(Dirichlet{}, 2.0 / 2000);
  auto spec = limit_spectrum(opr, 170.0);
  std::vector<double> s2, s1;
  for (const auto& p : spec.pairs) (p.branch == LimitBranch::constant_trace ? s2 : s1).push_back(p.lambda);
  REQUIRE(s2.size() == 3);
  const double frozen[] = {2.96069553757986816889, 46.9394473197678733713, 165.755231390281863242};
  for (int i = 0; i < 3; ++i) CHECK(s2[i] == doctest::Approx(frozen[i]).epsilon(1e-3));
  REQUIRE(s1.size() >= 1);
  CHECK(s1[0] == doctest::Approx(4 * pi * pi).epsilon(1e-3));
  CHECK(static_cast<int>(spec.pairs.size()) == spec.expected_count);
  // one exclusion per accepted zero-flux pair: the symmetric combination carries flux
  CHECK(spec.excluded.size() == s1.size());
  CHECK(spec.collisions.empty());

  auto ref = pencil_eigs(limit_pencil(opr), static_cast<int>(spec.pairs.size()));
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(spec.pairs[i].lambda == doctest::Approx(ref[i]).epsilon(1e-8));

  for (const auto& p : spec.pairs) {
    CHECK(p.pde_residual < 1e-10);
    CHECK(p.flux_residual < 1e-6 * std::max(1.0, p.lambda));
  }
  const auto& first = spec.pairs.front();
  CHECK(first.c.norm() == doctest::Approx(1.0));
  CHECK(first.c(0) > 0.0);
}

TEST_CASE("zero-flux branch accepts the antisymmetric exterior mode") {
  auto opr = limit_op(Dirichlet{}, 2.0 / 1000);
  auto zf = zero_flux_branch(opr, 50.0);
  REQUIRE(zf.accepted.size() == 1);
  REQUIRE(zf.excluded.size() == 1);
  const auto& u = zf.accepted[0].u;
  CHECK(zf.accepted[0].lambda == doctest::Approx(4 * pi * pi).epsilon(1e-3));
  CHECK(zf.accepted[0].flux_residual <= zf.tolerances[0]);
  CHECK(u.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  for (int d = 0; d < opr.size(); ++d)
    if (opr.inclusion[d] >= 0) CHECK(u(d) == 0.0);
}

TEST_CASE("Neumann limit spectrum") {
  auto opr = limit_op(Neumann{}, 2.0 / 2000);
  auto spec = limit_spectrum_neumann(opr, 260.0);
  std::vector<double> s2, s1;
  for (const auto& p : spec.pairs) (p.branch == LimitBranch::constant_trace ? s2 : s1).push_back(p.lambda);
  const double frozen[] = {16.4634334627780913494, 96.5573681217822271507, 254.636426201754746534};
  REQUIRE(s2.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(s2[i] == doctest::Approx(frozen[i]).epsilon(1e-3));
  REQUIRE(!s1.empty());
  CHECK(s1[0] == doctest::Approx(pi * pi).epsilon(1e-3));
  CHECK(static_cast<int>(spec.pairs.size()) == spec.expected_count);
  CHECK_THROWS_AS(limit_spectrum_neumann(limit_op(Dirichlet{}, 0.01), 10.0), ConfigError);
}

TEST_CASE("Bloch limit spectrum matches the transfer curve") {
  const double table[][5] = {{0.3, 0.178621034209389, 15.886852327786443, 40.16845427159344, 95.88664576573979},
                             {1.1, 2.0828584958025065, 11.370498068904645, 45.42571407011355, 90.45233195976053}};
  for (const auto& row : table) {
    auto opr = assemble_bloch_split(ContrastMedium(symmetric, 0.0, Bloch{{row[0]}}, 2.0 / 2000));
    auto spec = limit_spectrum(opr, 100.0);
    auto ev = spec.eigenvalues();
    REQUIRE(ev.size() == 4);
    for (int j = 0; j < 4; ++j) CHECK(ev[j] == doctest::Approx(row[j + 1]).epsilon(1e-3));
    CHECK(static_cast<int>(ev.size()) == spec.expected_count);
  }
}

TEST_CASE("exterior solve raises at a resonance") {
  auto opr = limit_op(Dirichlet{}, 0.01);
  auto zf = zero_flux_branch(opr, 50.0);
  REQUIRE(!zf.excluded.empty());
  Eigen::VectorXd c = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(exterior_helmholtz_solve<double>(opr, zf.excluded[0].lambda, c), PoleError);
  CHECK_THROWS_AS(characteristic_matrix<double>(opr, zf.excluded[0].lambda), PoleError);
}

TEST_CASE("non-aligned interfaces are rejected") {
  auto opr = assemble(ContrastMedium(Geometry1D(-1.0, 1.0, {{-0.5, 0.5031}}), 0.1, Dirichlet{}, 0.01));
  CHECK_THROWS_AS(limit_pencil(opr), ConfigError);
}

TEST_CASE("Neumann effective source problem") {
  auto opr = limit_op(Neumann{}, 2.0 / 1000);
  Eigen::VectorXd f = sample_split<double>(opr, [](double x, double) { return std::cos(pi * x); },
                                           [](double, double) { return 0.0; });
  f.array() -= opr.mass().dot(f) / opr.mass().sum();
  auto sol = solve_limit_neumann(opr, f);
  CHECK(sol.route_mismatch < 1e-10);
  CHECK(sol.flux_residual < 1e-10);
  CHECK(std::abs(opr.mass().dot(sol.u)) < 1e-10);
  for (int d = 0; d < opr.size(); ++d)
    if (opr.inclusion[d] == 0) CHECK(sol.u(d) == sol.c(0));
  Eigen::VectorXd bad = Eigen::VectorXd::Ones(opr.size());
  CHECK_THROWS_AS(solve_limit_neumann(opr, bad), SolvabilityError);
}

TEST_CASE("FD resolvent converges to the limit resolvent") {
  auto f_plus = [](double x, double) { return std::sin(3 * x) + 1.0; };
  auto f_minus = [](double x, double) { return x * x; };
  auto lim_op = limit_op(Dirichlet{}, 0.01);
  Eigen::VectorXd f = sample_split<double>(lim_op, f_plus, f_minus);
  cd z(1.0, 0.5);
  Eigen::VectorXcd lim = limit_resolvent_apply<double>(lim_op, z, f);
  std::vector<double> err;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    auto opr = assemble(ContrastMedium(symmetric, eps, Dirichlet{}, 0.01));
    Eigen::VectorXcd u = resolvent_apply<double>(opr, z, f);
    err.push_back(std::sqrt((opr.mass().cwiseProduct((u - lim).cwiseAbs2())).sum()));
  }
  CHECK(err[0] / err[1] == doctest::Approx(10.0).epsilon(0.3));
  CHECK(err[1] / err[2] == doctest::Approx(10.0).epsilon(0.3));
}

TEST_CASE("limit CSV layout") {
  auto opr = limit_op(Dirichlet{}, 0.01);
  auto scan = det_scan(opr, 10.0);
  std::ostringstream os;
  write_limit_csv(os, scan.pairs, 1);
  CHECK(os.str().rfind("branch,lambda,c_1,flux_residual,pde_residual\nconstant_trace,", 0) == 0);
}
