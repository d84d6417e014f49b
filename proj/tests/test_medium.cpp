#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hcspec/errors.hpp"
#include "hcspec/medium.hpp"

using namespace hcspec;
using nlohmann::json;

TEST_CASE("inclusion measures") {
  Geometry1D g(-1.0, 1.0, {{-0.5, 0.5}});
  CHECK(measure_inclusion(g, 0) == doctest::Approx(1.0));
  CHECK(measure_inclusion(RadialGeometry(0.5), 0) == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 0.125));
  // 10 x 10 block of cells with h = 0.1
  auto g2 = Geometry2D::from_rectangles(0.0, 2.0, 0.0, 2.0, 0.1, {{0.5, 0.5, 1.5, 1.5}});
  CHECK(g2.cell_count_of(0) == 100);
  CHECK(measure_inclusion(g2, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(measure_inclusion(g, 1), DomainError);
  CHECK_THROWS_AS(measure_inclusion(g, -1), DomainError);
}

TEST_CASE("coefficient field") {
  ContrastMedium m(Geometry1D(-1.0, 1.0, {{-0.5, 0.5}}), 0.01, Dirichlet{}, 0.01);
  CHECK(coefficient_at(m, 0.0) == doctest::Approx(100.0));
  CHECK(coefficient_at(m, 0.9) == 1.0);
  CHECK(coefficient_at(m.with_epsilon(1.0), 0.0) == 1.0);
  CHECK_THROWS_AS(coefficient_at(m, 1.5), DomainError);
  CHECK_THROWS_AS(coefficient_at(m.with_epsilon(0.0), 0.0), ConfigError);

  ContrastMedium r(RadialGeometry(0.5), 0.1, Dirichlet{}, 0.01);
  CHECK(coefficient_at(r, 0.25) == doctest::Approx(10.0));
  CHECK(coefficient_at(r, 0.75) == 1.0);
}

TEST_CASE("sigma takes exactly two values and jumps only at interfaces") {
  ContrastMedium m(Geometry1D(-1.0, 1.0, {{-0.6, -0.2}, {0.2, 0.6}}), 0.05, Dirichlet{}, 0.01);
  double prev = coefficient_at(m, -1.0);
  int jumps = 0;
  for (int j = 1; j <= 2000; ++j) {
    double x = -1.0 + j * 1e-3 + 1e-7;
    if (x > 1.0) break;
    double s = coefficient_at(m, x);
    CHECK((s == 1.0 || s == doctest::Approx(20.0)));
    if (s != prev) ++jumps;
    prev = s;
  }
  CHECK(jumps == 4);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(Geometry1D(-1.0, 1.0, {{-1.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(Geometry1D(-1.0, 1.0, {{0.0, 0.5}, {0.4, 0.6}}), ConfigError);
  CHECK_THROWS_AS(Geometry1D(-1.0, 1.0, {{0.5, 0.2}}), ConfigError);
  CHECK_THROWS_AS(RadialGeometry(1.0), ConfigError);
  CHECK_THROWS_AS(Geometry2D::from_rectangles(0.0, 1.0, 0.0, 1.0, 0.1, {{0.0, 0.3, 0.5, 0.6}}), ConfigError);
  // two blocks touching at a corner
  CHECK_THROWS_AS(Geometry2D::from_rectangles(0.0, 2.0, 0.0, 2.0, 0.1, {{0.3, 0.3, 1.0, 1.0}, {1.0, 1.0, 1.5, 1.5}}),
                  ConfigError);
  // disconnected label
  std::vector<int> labels(36, 0);
  labels[1 * 6 + 1] = 1;
  labels[4 * 6 + 4] = 1;
  CHECK_THROWS_AS(Geometry2D(0.0, 0.0, 0.1, 6, 6, labels), ConfigError);
}

TEST_CASE("interface bookkeeping is involutive") {
  auto g = Geometry2D::from_disks(0.0, 2.0, 0.0, 2.0, 0.05, {{0.6, 0.6, 0.3}, {1.4, 1.3, 0.35}});
  auto again = interface_edges_from_mask(g.nx(), g.ny(), g.labels(), g.inclusion_count());
  REQUIRE(again.size() == g.interface_edges().size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i] == g.interface_edges()[i]);
    CHECK(!again[i].empty());
    for (const auto& f : again[i]) {
      CHECK(g.labels()[f.inclusion_cell] == static_cast<int>(i) + 1);
      CHECK(g.labels()[f.exterior_cell] == 0);
    }
  }
}

TEST_CASE("periodic lattice distance") {
  CHECK(distance_to_periodic_lattice({1.0}, {2.0}) == doctest::Approx(1.0));
  CHECK(distance_to_periodic_lattice({std::numbers::pi}, {2.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(distance_to_periodic_lattice({0.3, 0.0}, {2.0, 2.0}) == doctest::Approx(0.3));
}

TEST_CASE("JSON round trip and schema") {
  json doc = {{"dim", 1}, {"domain", {-1.0, 1.0}}, {"inclusions", {{-0.5, 0.5}}}, {"h", 0.01},
              {"epsilon", 0.001}, {"bc", "dirichlet"}};
  auto m = medium_from_json(doc);
  CHECK(m.epsilon == 0.001);
  CHECK(m.grid_spacing() == 0.01);
  CHECK(medium_to_json(m) == medium_to_json(medium_from_json(medium_to_json(m))));

  json bl = {{"dim", 1}, {"domain", {-1.0, 1.0}}, {"inclusions", {{-0.5, 0.5}}}, {"h", 0.01},
             {"epsilon", 0.0}, {"bc", {{"bloch", 0.7}}}};
  auto mb = medium_from_json(bl);
  CHECK(std::get<Bloch>(mb.bc).k == std::vector<double>{0.7});

  json two = {{"dim", 2}, {"domain", {0.0, 2.0, 0.0, 2.0}}, {"inclusions", {{{"disk", {1.0, 1.0, 0.4}}}}},
              {"h", 0.1}, {"epsilon", 0.01}, {"bc", "neumann"}};
  auto m2 = medium_from_json(two);
  auto back = medium_from_json(medium_to_json(m2));
  CHECK(std::get<Geometry2D>(back.geometry).labels() == std::get<Geometry2D>(m2.geometry).labels());

  json rad = {{"dim", "radial"}, {"inclusions", {0.5}}, {"h", 0.01}, {"epsilon", 0.001}, {"bc", "dirichlet"}};
  CHECK(std::get<RadialGeometry>(medium_from_json(rad).geometry).a == 0.5);

  json bad = doc;
  bad["colour"] = "red";
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  bad = doc;
  bad["bc"] = "robin";
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  bad = doc;
  bad["epsilon"] = -1.0;
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  bad = bl;
  bad["bc"] = {{"bloch", {0.1, 0.2}}};
  CHECK_THROWS_AS(medium_from_json(bad), ConfigError);
  rad["bc"] = {{"bloch", 0.3}};
  CHECK_THROWS_AS(medium_from_json(rad), ConfigError);
}
