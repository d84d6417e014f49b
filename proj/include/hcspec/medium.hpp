#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace hcspec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Interval [x_lo, x_hi] with disjoint inclusion subintervals strictly inside it.
class Geometry1D {
 public:
  Geometry1D(double x_lo, double x_hi, std::vector<Interval> inclusions = {});

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double length() const { return x_hi_ - x_lo_; }
  const std::vector<Interval>& inclusions() const { return inclusions_; }
  int inclusion_count() const { return static_cast<int>(inclusions_.size()); }

  /// Index of the inclusion containing x (open interval), or -1.
  int inclusion_at(double x) const;

 private:
  double x_lo_;
  double x_hi_;
  std::vector<Interval> inclusions_;
};

/// A staircase face of Γ_i: the pair of cells it separates.
struct CellFace {
  int inclusion_cell = 0;
  int exterior_cell = 0;
  friend bool operator==(const CellFace&, const CellFace&) = default;
  friend auto operator<=>(const CellFace&, const CellFace&) = default;
};

/// Rectangle split into nx × ny square cells of side h. Cell label 0 is the matrix,
/// label i ≥ 1 belongs to inclusion i-1.
class Geometry2D {
 public:
  Geometry2D(double x_lo, double y_lo, double h, int nx, int ny, std::vector<int> labels);

  /// Rasterize axis-aligned rectangles {x0,y0,x1,y1}: a cell belongs to a rectangle
  /// when its centre lies inside.
  static Geometry2D from_rectangles(double x_lo, double x_hi, double y_lo, double y_hi, double h,
                                    const std::vector<std::vector<double>>& rects);
  /// Rasterize discs {cx, cy, r} the same way.
  static Geometry2D from_disks(double x_lo, double x_hi, double y_lo, double y_hi, double h,
                               const std::vector<std::vector<double>>& disks);

  double x_lo() const { return x_lo_; }
  double y_lo() const { return y_lo_; }
  double lx() const { return h_ * nx_; }
  double ly() const { return h_ * ny_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int inclusion_count() const { return inclusion_count_; }
  int cell(int ix, int iy) const { return iy * nx_ + ix; }
  int label(int ix, int iy) const { return labels_[cell(ix, iy)]; }
  const std::vector<int>& labels() const { return labels_; }
  int cell_count_of(int inclusion) const;
  const std::vector<std::vector<CellFace>>& interface_edges() const { return interface_edges_; }

 private:
  double x_lo_;
  double y_lo_;
  double h_;
  int nx_;
  int ny_;
  std::vector<int> labels_;
  int inclusion_count_ = 0;
  std::vector<std::vector<CellFace>> interface_edges_;
};

/// Staircase faces between inclusion cells and exterior cells, recomputed from the mask.
std::vector<std::vector<CellFace>> interface_edges_from_mask(int nx, int ny,
                                                             const std::vector<int>& labels,
                                                             int inclusion_count);

/// Ball r < 1 in R^3 with the concentric inclusion r < a.
struct RadialGeometry {
  double a = 0.5;
  explicit RadialGeometry(double radius);
};

struct Dirichlet {};
struct Neumann {};
/// Quasi-periodic closure u(x + L e_d) = exp(-i k_d L_d) u(x) on the cell.
struct Bloch {
  std::vector<double> k;
};
using BoundaryCondition = std::variant<Dirichlet, Neumann, Bloch>;

std::string to_string(const BoundaryCondition& bc);
bool is_dirichlet(const BoundaryCondition& bc);
bool is_neumann(const BoundaryCondition& bc);
bool is_bloch(const BoundaryCondition& bc);

using Geometry = std::variant<Geometry1D, Geometry2D, RadialGeometry>;

int inclusion_count(const Geometry& geom);

/// Geometry, contrast and outer closure. epsilon = 0 stands for the limit medium and is
/// only accepted by the limit solvers.
struct ContrastMedium {
  Geometry geometry;
  double epsilon = 1.0;
  BoundaryCondition bc = Dirichlet{};
  /// Grid spacing for 1D and radial discretizations (2D carries its own).
  std::optional<double> h;

  ContrastMedium(Geometry g, double eps, BoundaryCondition b, std::optional<double> spacing = {});
  ContrastMedium with_epsilon(double eps) const;
  double grid_spacing() const;
};

/// |Ω₋^i|: length in 1D, cell count·h² in 2D, (4/3)πa³ for the radial ball.
double measure_inclusion(const Geometry& geom, int i);

/// σ at a point: 1 on the matrix, 1/ε inside an inclusion.
double coefficient_at(const ContrastMedium& medium, double x);
double coefficient_at(const ContrastMedium& medium, double x, double y);

/// Distance (in k units) from the nearest wave vector at which the closure is periodic,
/// measured per axis; the largest component is returned.
double distance_to_periodic_lattice(const std::vector<double>& k, const std::vector<double>& period);

ContrastMedium medium_from_json(const nlohmann::json& doc);
nlohmann::json medium_to_json(const ContrastMedium& medium);

}  // namespace hcspec
