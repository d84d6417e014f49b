#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hcspec/dtn.hpp"
#include "hcspec/errors.hpp"

using namespace hcspec;
using cd = std::complex<double>;

namespace {

const Geometry1D symmetric(-1.0, 1.0, {{-0.5, 0.5}});

DiscreteOperator op1d(double eps, double h = 0.01, Geometry1D g = symmetric) {
  return assemble(ContrastMedium(g, eps, Dirichlet{}, h));
}

Geometry2D two_blobs() {
  return Geometry2D::from_rectangles(0.0, 2.0, 0.0, 1.0, 0.05, {{0.3, 0.25, 0.7, 0.75}, {1.2, 0.3, 1.6, 0.6}});
}

template <class S>
double rel(const Vec<S>& a, const Vec<S>& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace

TEST_CASE("1D interior DtN is the linear conductance") {
  auto sys = build_dtn(op1d(0.1));
  REQUIRE(sys.gamma.size() == 2);
  Eigen::Matrix2d expect;
  expect << 1.0, -1.0, -1.0, 1.0;
  CHECK((sys.N_minus - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(hermitian_defect(sys.N_plus) == 0.0);
  CHECK(hermitian_defect(sys.N_minus) == 0.0);
}

TEST_CASE("exterior constant a is exact on 1D grids") {
  for (auto [lo, hi] : {std::pair{-0.5, 0.5}, std::pair{-0.6, 0.2}}) {
    auto sys = build_dtn(op1d(0.1, 0.01, Geometry1D(-1.0, 1.0, {{lo, hi}})));
    CHECK(sys.a[0] == doctest::Approx(-(1.0 / (1.0 + lo) + 1.0 / (1.0 - hi))).epsilon(1e-12));
  }
}

TEST_CASE("2D DtN properties") {
  auto g = two_blobs();
  auto sys = build_dtn(assemble(ContrastMedium(g, 0.01, Dirichlet{})));
  CHECK(hermitian_defect(sys.N_plus) < 1e-12 * sys.N_plus.cwiseAbs().maxCoeff());
  CHECK(hermitian_defect(sys.N_minus) < 1e-12 * sys.N_minus.cwiseAbs().maxCoeff());
  for (int i = 0; i < 2; ++i) {
    CHECK(sys.a[i] < 0.0);
    // constants are in the kernel of N⁻
    Eigen::VectorXd r = sys.N_minus * sys.P.col(i);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-10 * sys.N_minus.cwiseAbs().maxCoeff());
  }
  // Q is μ-orthonormal and orthogonal to constants
  Eigen::MatrixXd G = sys.Q.transpose() * sys.mu.asDiagonal() * sys.Q;
  CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sys.P.transpose() * sys.mu.asDiagonal() * sys.Q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(sys.eps0 > 0.0);
  CHECK(std::isfinite(sys.eps0));
  // N11 is symmetric negative definite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.N11);
  CHECK(es.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("trace decomposition is an orthogonal projection") {
  auto sys = build_dtn(assemble(ContrastMedium(two_blobs(), 0.01, Dirichlet{})));
  Eigen::VectorXd phi = Eigen::VectorXd::LinSpaced(sys.gamma.size(), -1.0, 2.0).array().sin();
  auto t = decompose(sys, phi);
  CHECK((sys.P * t.constants + t.perp - phi).norm() < 1e-13);
  auto again = decompose(sys, t.perp);
  CHECK(again.constants.cwiseAbs().maxCoeff() < 1e-13);
  CHECK((again.perp - t.perp).norm() < 1e-13);
  CHECK((sys.Q * t.psi - t.perp).norm() < 1e-12);
  double cross = (sys.P * t.constants).dot(sys.mu.asDiagonal() * t.perp);
  CHECK(std::abs(cross) < 1e-12);
}

TEST_CASE("effective source problem in the symmetric cell") {
  auto op = op1d(0.1);
  auto sys = build_dtn(op);
  auto f = sample_split<double>(op, [](double, double) { return 0.0; }, [](double, double) { return 1.0; });
  auto t = solve_block_system(sys, 0.0, f);
  CHECK(t.constants(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.perp.norm() == 0.0);
  auto field = apply_Bhat(sys, 0.0, f);
  for (int d : op.inclusion_dofs(0)) CHECK(field.u(d) == field.trace.constants(0));
  for (int d : op.exterior_dofs()) {
    double x = op.location[d][0];
    CHECK(field.u(d) == doctest::Approx(0.25 * (1.0 - std::abs(x)) / 0.5).epsilon(1e-12));
  }
}

TEST_CASE("odd inclusion source has no constant response") {
  auto op = op1d(0.1);
  auto sys = build_dtn(op);
  auto f = sample_split<double>(op, [](double, double) { return 0.0; }, [](double x, double) { return x; });
  auto t = solve_block_system(sys, 0.0, f);
  CHECK(std::abs(t.constants(0)) < 1e-14);
}

TEST_CASE("zero source gives zero trace") {
  auto op = op1d(0.1);
  auto sys = build_dtn(op);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(op.size());
  for (double eps : {0.0, 1e-3, 0.5, -0.5 * sys.eps0})
    CHECK(solve_block_system(sys, eps, f).phi.norm() == 0.0);
}

TEST_CASE("B-hat equals the direct solve") {
  auto check = [](const DiscreteOperator& op) {
    auto sys = build_dtn(op);
    auto f = sample<double>(op, [](double x, double y) { return std::cos(2 * x) + std::sin(3 * y + x) + 0.5; });
    for (double eps : {1e-1, 1e-3}) {
      auto opr = op;
      opr.epsilon = eps;
      Eigen::VectorXd u = solve(opr, f);
      auto field = apply_Bhat(sys, eps, f);
      CHECK(rel(field.u, u) < 1e-10);
      Eigen::VectorXd tr(sys.gamma.size());
      for (std::size_t j = 0; j < sys.gamma.size(); ++j) tr(j) = u(sys.gamma[j]);
      CHECK(rel(field.trace.phi, tr) < 1e-10);
    }
  };
  check(op1d(0.1));
  check(op1d(0.1, 0.01, Geometry1D(-1.0, 1.0, {{-0.6, -0.2}, {0.2, 0.6}})));
  check(assemble(ContrastMedium(two_blobs(), 0.1, Dirichlet{})));
}

TEST_CASE("Bloch DtN identity") {
  auto op = assemble_bloch(ContrastMedium(symmetric, 0.01, Bloch{{0.7}}, 0.01));
  auto sys = build_dtn(op);
  CHECK(hermitian_defect(sys.N_plus) < 1e-12);
  CHECK(sys.a[0] < 0.0);
  auto f = sample<cd>(op, [](double x, double) { return cd(std::cos(x), 0.3 * x); });
  for (double eps : {1e-1, 1e-3}) {
    auto opr = op;
    opr.epsilon = eps;
    auto u = solve(opr, f);
    CHECK(rel(apply_Bhat(sys, eps, f).u, u) < 1e-10);
  }
}

TEST_CASE("negative epsilon within eps0 solves the interface equation") {
  auto op = assemble(ContrastMedium(two_blobs(), 0.1, Dirichlet{}));
  auto sys = build_dtn(op);
  auto f = sample<double>(op, [](double x, double y) { return x * y + 1.0; });
  double eps = -0.5 * sys.eps0;
  auto t = solve_block_system(sys, eps, f);
  Eigen::VectorXd r = m_plus(sys, f) - m_minus(sys, f);
  Eigen::VectorXd lhs = (sys.N_minus - eps * sys.N_plus) * t.phi;
  CHECK((lhs - eps * r).norm() <= 1e-10 * std::abs(eps) * r.norm());
  CHECK_THROWS_AS(solve_block_system(sys, -2.0 * sys.eps0, f), DomainError);
}

TEST_CASE("analyticity probe") {
  auto op = op1d(0.1, 0.02, Geometry1D(-1.0, 1.0, {{-0.6, 0.1}}));
  auto sys = build_dtn(op);
  auto f = sample<double>(op, [](double x, double) { return 1.0 + x; });
  std::vector<double> eps;
  for (double e = std::min(0.1, sys.eps0); eps.size() < 6; e *= 0.5) eps.push_back(e);
  auto r2 = analyticity_probe(sys, f, eps, 2);
  auto r3 = analyticity_probe(sys, f, eps, 3);
  CHECK(r3.residual < r2.residual);
  CHECK(r2.ratio < 1.0);
  CHECK(r3.ratio < 1.0);
  CHECK(r3.flatness_slope != 0.0);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.size());
  auto rz = analyticity_probe(sys, zero, eps, 2);
  CHECK(rz.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(analyticity_probe(sys, f, {0.1, 0.05}, 2), ConfigError);
}

TEST_CASE("rejected configurations") {
  CHECK_THROWS_AS(build_dtn(assemble(ContrastMedium(symmetric, 0.1, Neumann{}, 0.01))), ConfigError);
  CHECK_THROWS_AS(build_dtn(assemble(ContrastMedium(Geometry1D(-1.0, 1.0, {{-0.513, 0.5}}), 0.1, Dirichlet{}, 0.01))),
                  ConfigError);
}

TEST_CASE("dense CSV dump") {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, -1.0, -1.0, 0.5;
  std::ostringstream os;
  write_dense_csv<double>(os, A);
  CHECK(os.str() == "1,-1\n-1,0.5\n");
  Mat<cd> Z(1, 2);
  Z << cd(1.0, 2.0), cd(0.0, -1.0);
  std::ostringstream oz;
  write_dense_csv<cd>(oz, Z);
  CHECK(oz.str() == "1,0\n2,-1\n");
}
