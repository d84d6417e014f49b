#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hcspec/errors.hpp"
#include "hcspec/exact1d.hpp"

using namespace hcspec;
constexpr double pi = std::numbers::pi;

namespace {

// Reference roots computed to 30 digits with mpmath (findroot on the closed-form equations).
constexpr double kDirS2[] = {2.96069553757986816889, 46.9394473197678733713, 165.755231390281863242};
constexpr double kNeuS2[] = {16.4634334627780913494, 96.5573681217822271507, 254.636426201754746534};

const Geometry1D symmetric(-1.0, 1.0, {{-0.5, 0.5}});

// Derivative at x from the side dir = +1 (right) or -1 (left).
double one_sided_slope(const Eigenfunction1D& u, double x, double dir) {
  const double d = 1e-6;
  return dir * (std::real(u(x + dir * d)) - std::real(u(x))) / d;
}

}  // namespace

TEST_CASE("characteristic function values") {
  auto d = CharacteristicFunction::dirichlet_s2(symmetric);
  CHECK(eval_char(d, pi * pi) == doctest::Approx(-pi).epsilon(1e-12));

  auto n = CharacteristicFunction::neumann_s2(symmetric);
  CHECK(eval_char(n, pi * pi / 16) == doctest::Approx(2 * std::tan(pi / 8) + pi / 4).epsilon(1e-12));
  CHECK(eval_char(n, pi * pi / 4) == doctest::Approx(2.0 + pi / 2).epsilon(1e-12));

  for (double k : {0.2, 0.7, 1.3}) CHECK(std::abs(eval_char(CharacteristicFunction::bloch_limit(0.0, k), k * k)) < 1e-12);

  auto sph = CharacteristicFunction::sphere(0.5);
  CHECK(eval_char(sph, 1e-10) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("pole proximity is an error") {
  auto d = CharacteristicFunction::dirichlet_s2(symmetric);
  // cot(0.5 s) has a pole at s = 2 pi
  CHECK_THROWS_AS(eval_char(d, 4 * pi * pi), PoleError);
  CHECK_THROWS_AS(eval_char(d, -1.0), DomainError);
  for (double p : d.poles_s(20.0)) CHECK(std::abs(std::sin(0.5 * p)) < 1e-12);
}

TEST_CASE("homogeneous string") {
  Geometry1D plain(-1.0, 1.0);
  auto dir = transfer_spectrum_1d(plain, 1.0, Dirichlet{}, 40.0);
  REQUIRE(dir.modes.size() == 4);
  for (int n = 1; n <= 4; ++n) CHECK(dir.modes[n - 1].lambda == doctest::Approx(std::pow(pi * n / 2, 2)).epsilon(1e-12));
  auto neu = transfer_spectrum_1d(plain, 1.0, Neumann{}, 40.0);
  REQUIRE(neu.modes.size() == 4);
  for (int n = 1; n <= 4; ++n) CHECK(neu.modes[n - 1].lambda == doctest::Approx(std::pow(pi * n / 2, 2)).epsilon(1e-12));
  CHECK_THROWS_AS(transfer_spectrum_1d(plain, 1.0, Dirichlet{}, 0.0), ConfigError);
  CHECK_THROWS_AS(transfer_spectrum_1d(plain, 0.0, Dirichlet{}, 10.0), ConfigError);
}

TEST_CASE("free Bloch waves") {
  for (double k : {0.3, 1.0, 1.4}) {
    auto sp = transfer_spectrum_1d(Geometry1D(-1.0, 1.0), 1.0, Bloch{{k}}, 60.0);
    std::vector<double> expect;
    for (int n = -3; n <= 3; ++n) {
      double l = std::pow(k + pi * n, 2);
      if (l <= 60.0) expect.push_back(l);
    }
    std::sort(expect.begin(), expect.end());
    REQUIRE(sp.modes.size() == expect.size());
    for (std::size_t j = 0; j < expect.size(); ++j) CHECK(sp.modes[j].lambda == doctest::Approx(expect[j]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(transfer_spectrum_1d(Geometry1D(-1.0, 1.0), 1.0, Bloch{{pi}}, 10.0), DomainError);
}

TEST_CASE("small epsilon approaches the limit root linearly") {
  std::vector<double> gaps;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    auto sp = transfer_spectrum_1d(symmetric, eps, Dirichlet{}, 10.0);
    REQUIRE(!sp.modes.empty());
    gaps.push_back(sp.modes[0].lambda - kDirS2[0]);
  }
  CHECK(std::abs(gaps[1]) < 1e-2);
  CHECK(gaps[0] / gaps[1] == doctest::Approx(10.0).epsilon(0.1));
  CHECK(gaps[1] / gaps[2] == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("transfer eigenfunctions satisfy the interface conditions") {
  const double eps = 0.01;
  auto sp = transfer_spectrum_1d(symmetric, eps, Dirichlet{}, 200.0);
  for (const auto& m : sp.modes) {
    CHECK(m.u.sup_norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(m.u(-1.0)) < 1e-9);
    CHECK(std::abs(m.u(1.0)) < 1e-9);
    for (double x : {-0.5, 0.5}) {
      CHECK(std::abs(m.u(x - 1e-12) - m.u(x + 1e-12)) < 1e-8);
      // sigma u' continuous: u'_inside / eps = u'_outside
      double in = one_sided_slope(m.u, x, x < 0 ? 1.0 : -1.0);
      double out = one_sided_slope(m.u, x, x < 0 ? -1.0 : 1.0);
      CHECK(in / eps == doctest::Approx(out).epsilon(1e-3).scale(1.0));
    }
  }
}

TEST_CASE("limit spectrum of the symmetric Dirichlet cell") {
  auto bs = limit_spectrum_1d(symmetric, Dirichlet{}, 170.0);
  REQUIRE(bs.s2.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(bs.s2[j].lambda == doctest::Approx(kDirS2[j]).epsilon(1e-11));
  CHECK(bs.certificate.rational);
  CHECK(bs.certificate.p == 1);
  CHECK(bs.certificate.q == 1);
  REQUIRE(bs.s1.size() == 2);
  CHECK(bs.s1[0].lambda == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  CHECK(bs.s1[1].lambda == doctest::Approx(16 * pi * pi).epsilon(1e-14));
  CHECK_THROWS_AS(limit_spectrum_1d(symmetric, Dirichlet{}, -1.0), ConfigError);
}

TEST_CASE("limit spectrum of the symmetric Neumann cell") {
  auto bs = limit_spectrum_1d(symmetric, Neumann{}, 260.0);
  REQUIRE(bs.s2.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(bs.s2[j].lambda == doctest::Approx(kNeuS2[j]).epsilon(1e-11));
  REQUIRE(!bs.s1.empty());
  CHECK(bs.s1[0].lambda == doctest::Approx(pi * pi).epsilon(1e-14));
  for (double l : bs.all()) CHECK(l > 0.0);
}

TEST_CASE("irrational length ratio empties S1") {
  Geometry1D g(-1.0, 1.0, {{-1.0 + std::sqrt(2.0) / 2, 0.5}});
  auto bs = limit_spectrum_1d(g, Dirichlet{}, 400.0);
  CHECK(!bs.certificate.rational);
  CHECK(bs.s1.empty());
  CHECK(!bs.s2.empty());
}

TEST_CASE("limit eigenfunctions") {
  for (const BoundaryCondition& bc : {BoundaryCondition(Dirichlet{}), BoundaryCondition(Neumann{})}) {
    auto bs = limit_spectrum_1d(Geometry1D(-1.0, 1.0, {{-0.6, 0.2}}), bc, 300.0);
    const double a = -0.6, b = 0.2;
    for (const auto& m : bs.s2) {
      double c = std::real(m.u(0.5 * (a + b)));
      CHECK(c > 0.0);
      CHECK(m.u.sup_norm() == doctest::Approx(1.0).epsilon(1e-9));
      for (double x : {a + 1e-3, -0.3, b - 1e-3}) CHECK(std::real(m.u(x)) == doctest::Approx(c).epsilon(1e-12));
      // flux condition: u'(b+) - u'(a-) + lambda c |inclusion| = 0
      double flux = one_sided_slope(m.u, b, 1.0) - one_sided_slope(m.u, a, -1.0);
      CHECK(flux + m.lambda * c * (b - a) == doctest::Approx(0.0).scale(m.lambda) .epsilon(1e-4));
      CHECK(m.residual < 1e-9);
    }
  }
  auto bs = limit_spectrum_1d(symmetric, Dirichlet{}, 170.0);
  for (const auto& m : bs.s1) {
    for (double x : {-0.5, -0.2, 0.3, 0.5}) CHECK(std::abs(m.u(x)) < 1e-12);
    double flux = one_sided_slope(m.u, 0.5, 1.0) - one_sided_slope(m.u, -0.5, -1.0);
    CHECK(std::abs(flux) < 1e-4 * std::sqrt(m.lambda));
    CHECK(m.u.sup_norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("limit scan through the transfer matrix matches the closed forms") {
  auto sp = transfer_spectrum_limit_capable(symmetric, 0.0, Dirichlet{}, 170.0);
  auto bs = limit_spectrum_1d(symmetric, Dirichlet{}, 170.0);
  auto all = bs.all();
  REQUIRE(sp.modes.size() == all.size());
  for (std::size_t j = 0; j < all.size(); ++j) CHECK(sp.modes[j].lambda == doctest::Approx(all[j]).epsilon(1e-10));
}

TEST_CASE("rationality certificate") {
  auto c = rationality_certificate(0.75);
  CHECK(c.rational);
  CHECK(c.p == 3);
  CHECK(c.q == 4);
  CHECK(!rationality_certificate(pi).rational);
  CHECK(!rationality_certificate(std::sqrt(2.0)).rational);
  auto r = rationality_certificate(1.6 / 0.4);
  CHECK(r.rational);
  CHECK(r.p == 4);
  CHECK(r.q == 1);
}

TEST_CASE("Bloch limit curve") {
  // mpmath roots of cos(2 s (1 - a)) - a s sin(2 s (1 - a)) = cos 2k with a = 0.5
  const double table[5][5] = {
      {0.3, 0.178621034209389, 15.886852327786443, 40.16845427159344, 95.88664576573979},
      {0.7, 0.9348250635863056, 13.808533376312667, 42.64842423345817, 93.37973833166029},
      {1.0, 1.7834405362901666, 11.945392156825994, 44.79611813573756, 91.12354667562353},
      {1.1, 2.0828584958025065, 11.370498068904645, 45.42571407011355, 90.45233195976053},
      {1.5, 2.935407090708646, 9.90951389133464, 46.90234120920487, 88.86645613584906}};
  for (const auto& row : table) {
    auto pts = bloch_limit_curve(0.5, {row[0]}, 100.0);
    REQUIRE(pts.size() >= 4);
    for (int j = 0; j < 4; ++j) {
      CHECK(pts[j].branch == j + 1);
      CHECK(pts[j].lambda == doctest::Approx(row[j + 1]).epsilon(1e-10));
      CHECK(pts[j].omega == doctest::Approx(std::sqrt(pts[j].lambda)).epsilon(1e-15));
    }
    auto mirror = bloch_limit_curve(0.5, {-row[0]}, 100.0);
    REQUIRE(mirror.size() == pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) CHECK(std::abs(mirror[j].lambda - pts[j].lambda) <= 1e-10);
  }
  // zone edge: mpmath gives the first two roots as 2.96069553757986816889 and pi^2
  auto edge = bloch_limit_curve(0.5, {pi / 2}, 12.0);
  REQUIRE(edge.size() == 2);
  CHECK(edge[0].lambda == doctest::Approx(2.96069553757986816889).epsilon(1e-10));
  CHECK(edge[1].lambda == doctest::Approx(pi * pi).epsilon(1e-10));

  auto free = bloch_limit_curve(0.0, {0.4}, 50.0);
  std::vector<double> expect;
  for (int n = -3; n <= 3; ++n)
    if (std::pow(0.4 + pi * n, 2) <= 50.0) expect.push_back(std::pow(0.4 + pi * n, 2));
  std::sort(expect.begin(), expect.end());
  REQUIRE(free.size() == expect.size());
  for (std::size_t j = 0; j < expect.size(); ++j) CHECK(free[j].lambda == doctest::Approx(expect[j]).epsilon(1e-10));
  CHECK_THROWS_AS(bloch_limit_curve(0.5, {0.0}, 10.0), DomainError);
  CHECK_THROWS_AS(bloch_limit_curve(0.5, {pi + 1e-4}, 10.0), DomainError);
}

TEST_CASE("CSV emitters") {
  auto sp = transfer_spectrum_1d(symmetric, 0.1, Dirichlet{}, 20.0);
  std::ostringstream os;
  write_modes_csv(os, "eps", sp.modes);
  CHECK(os.str().rfind("branch,index,lambda,omega,residual\n", 0) == 0);
  std::ostringstream tr;
  write_trace_csv(tr, sp.modes[0].u, 10);
  CHECK(tr.str().rfind("x,u\n", 0) == 0);
  int lines = 0;
  for (char ch : tr.str()) lines += ch == '\n';
  CHECK(lines == 12);
}
