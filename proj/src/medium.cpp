#include "hcspec/medium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>

#include "hcspec/errors.hpp"

namespace hcspec {

using nlohmann::json;

Geometry1D::Geometry1D(double x_lo, double x_hi, std::vector<Interval> inclusions)
    : x_lo_(x_lo), x_hi_(x_hi), inclusions_(std::move(inclusions)) {
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_lo < x_hi))
    throw ConfigError("Geometry1D: need finite x_lo < x_hi");
  double prev = x_lo;
  for (const auto& iv : inclusions_) {
    if (!(iv.lo < iv.hi)) throw ConfigError("Geometry1D: inclusion with non-positive length");
    if (!(iv.lo > prev)) throw ConfigError("Geometry1D: inclusions must be ordered, disjoint and interior");
    prev = iv.hi;
  }
  if (!(prev < x_hi)) throw ConfigError("Geometry1D: inclusion touches the outer boundary");
}

int Geometry1D::inclusion_at(double x) const {
  for (int i = 0; i < inclusion_count(); ++i)
    if (x > inclusions_[i].lo && x < inclusions_[i].hi) return i;
  return -1;
}

std::vector<std::vector<CellFace>> interface_edges_from_mask(int nx, int ny,
                                                             const std::vector<int>& labels,
                                                             int inclusion_count) {
  std::vector<std::vector<CellFace>> edges(inclusion_count);
  auto visit = [&](int c0, int c1) {
    int l0 = labels[c0], l1 = labels[c1];
    if (l0 > 0 && l1 == 0) edges[l0 - 1].push_back({c0, c1});
    if (l1 > 0 && l0 == 0) edges[l1 - 1].push_back({c1, c0});
  };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int c = iy * nx + ix;
      if (ix + 1 < nx) visit(c, c + 1);
      if (iy + 1 < ny) visit(c, c + nx);
    }
  for (auto& e : edges) std::sort(e.begin(), e.end());
  return edges;
}

Geometry2D::Geometry2D(double x_lo, double y_lo, double h, int nx, int ny, std::vector<int> labels)
    : x_lo_(x_lo), y_lo_(y_lo), h_(h), nx_(nx), ny_(ny), labels_(std::move(labels)) {
  if (!(h > 0) || nx < 3 || ny < 3) throw ConfigError("Geometry2D: degenerate grid");
  if (static_cast<int>(labels_.size()) != nx * ny) throw ConfigError("Geometry2D: mask size mismatch");
  int max_label = 0;
  for (int l : labels_) {
    if (l < 0) throw ConfigError("Geometry2D: negative cell label");
    max_label = std::max(max_label, l);
  }
  inclusion_count_ = max_label;
  std::vector<int> counts(max_label + 1, 0);
  for (int l : labels_) ++counts[l];
  for (int i = 1; i <= max_label; ++i)
    if (counts[i] == 0) throw ConfigError("Geometry2D: inclusion labels must be contiguous from 1");

  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int l = label(ix, iy);
      if (l == 0) continue;
      if (ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1)
        throw ConfigError("Geometry2D: inclusion touches the outer boundary");
      // Distinct inclusions may not share a grid vertex.
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          int m = label(ix + dx, iy + dy);
          if (m != 0 && m != l) throw ConfigError("Geometry2D: inclusions share a vertex");
        }
    }

  // Each inclusion must be 4-connected.
  for (int i = 1; i <= max_label; ++i) {
    int start = static_cast<int>(std::find(labels_.begin(), labels_.end(), i) - labels_.begin());
    std::vector<char> seen(labels_.size(), 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    int reached = 0;
    while (!q.empty()) {
      int c = q.front();
      q.pop();
      ++reached;
      int ix = c % nx, iy = c / nx;
      const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& d : nb) {
        int jx = ix + d[0], jy = iy + d[1];
        if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
        int cc = cell(jx, jy);
        if (!seen[cc] && labels_[cc] == i) {
          seen[cc] = 1;
          q.push(cc);
        }
      }
    }
    if (reached != counts[i]) throw ConfigError("Geometry2D: inclusion " + std::to_string(i) + " is not connected");
  }
  interface_edges_ = interface_edges_from_mask(nx, ny, labels_, inclusion_count_);
}

int Geometry2D::cell_count_of(int inclusion) const {
  if (inclusion < 0 || inclusion >= inclusion_count_) throw DomainError("inclusion index out of range");
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), inclusion + 1));
}

namespace {

std::pair<int, int> grid_counts(double x_lo, double x_hi, double y_lo, double y_hi, double h) {
  if (!(h > 0) || !(x_lo < x_hi) || !(y_lo < y_hi)) throw ConfigError("2D domain: need x_lo < x_hi, y_lo < y_hi, h > 0");
  int nx = static_cast<int>(std::lround((x_hi - x_lo) / h));
  int ny = static_cast<int>(std::lround((y_hi - y_lo) / h));
  if (std::abs(nx * h - (x_hi - x_lo)) > 1e-9 * (x_hi - x_lo) || std::abs(ny * h - (y_hi - y_lo)) > 1e-9 * (y_hi - y_lo))
    throw ConfigError("2D domain: extents are not multiples of h");
  return {nx, ny};
}

template <class Inside>
Geometry2D rasterize(double x_lo, double x_hi, double y_lo, double y_hi, double h, std::size_t shapes, Inside inside) {
  auto [nx, ny] = grid_counts(x_lo, x_hi, y_lo, y_hi, h);
  std::vector<int> labels(static_cast<std::size_t>(nx) * ny, 0);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double xc = x_lo + (ix + 0.5) * h, yc = y_lo + (iy + 0.5) * h;
      for (std::size_t s = 0; s < shapes; ++s)
        if (inside(s, xc, yc)) {
          int& l = labels[iy * nx + ix];
          if (l != 0) throw ConfigError("2D inclusions overlap");
          l = static_cast<int>(s) + 1;
        }
    }
  return Geometry2D(x_lo, y_lo, h, nx, ny, std::move(labels));
}

}  // namespace

Geometry2D Geometry2D::from_rectangles(double x_lo, double x_hi, double y_lo, double y_hi, double h,
                                       const std::vector<std::vector<double>>& rects) {
  for (const auto& r : rects)
    if (r.size() != 4 || !(r[0] < r[2]) || !(r[1] < r[3])) throw ConfigError("rectangle needs [x0, y0, x1, y1]");
  return rasterize(x_lo, x_hi, y_lo, y_hi, h, rects.size(), [&](std::size_t s, double x, double y) {
    const auto& r = rects[s];
    return x > r[0] && x < r[2] && y > r[1] && y < r[3];
  });
}

Geometry2D Geometry2D::from_disks(double x_lo, double x_hi, double y_lo, double y_hi, double h,
                                  const std::vector<std::vector<double>>& disks) {
  for (const auto& d : disks)
    if (d.size() != 3 || !(d[2] > 0)) throw ConfigError("disk needs [cx, cy, r] with r > 0");
  return rasterize(x_lo, x_hi, y_lo, y_hi, h, disks.size(), [&](std::size_t s, double x, double y) {
    const auto& d = disks[s];
    return (x - d[0]) * (x - d[0]) + (y - d[1]) * (y - d[1]) < d[2] * d[2];
  });
}

RadialGeometry::RadialGeometry(double radius) : a(radius) {
  if (!(radius > 0.0 && radius < 1.0)) throw ConfigError("radial inclusion radius must lie in (0, 1)");
}

std::string to_string(const BoundaryCondition& bc) {
  if (std::holds_alternative<Dirichlet>(bc)) return "dirichlet";
  if (std::holds_alternative<Neumann>(bc)) return "neumann";
  return "bloch";
}
bool is_dirichlet(const BoundaryCondition& bc) { return std::holds_alternative<Dirichlet>(bc); }
bool is_neumann(const BoundaryCondition& bc) { return std::holds_alternative<Neumann>(bc); }
bool is_bloch(const BoundaryCondition& bc) { return std::holds_alternative<Bloch>(bc); }

int inclusion_count(const Geometry& geom) {
  return std::visit(
      [](const auto& g) -> int {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, RadialGeometry>)
          return 1;
        else
          return g.inclusion_count();
      },
      geom);
}

ContrastMedium::ContrastMedium(Geometry g, double eps, BoundaryCondition b, std::optional<double> spacing)
    : geometry(std::move(g)), epsilon(eps), bc(std::move(b)), h(spacing) {
  if (!std::isfinite(eps) || eps < 0.0) throw ConfigError("epsilon must be finite and >= 0");
  if (h && !(*h > 0.0)) throw ConfigError("grid spacing h must be positive");
  if (auto* bl = std::get_if<Bloch>(&bc)) {
    std::size_t dim = std::holds_alternative<Geometry2D>(geometry) ? 2 : 1;
    if (std::holds_alternative<RadialGeometry>(geometry)) throw ConfigError("Bloch closure is not defined for the radial geometry");
    if (bl->k.size() != dim) throw ConfigError("Bloch vector dimension does not match the geometry");
  }
}

ContrastMedium ContrastMedium::with_epsilon(double eps) const {
  ContrastMedium m = *this;
  if (!std::isfinite(eps) || eps < 0.0) throw ConfigError("epsilon must be finite and >= 0");
  m.epsilon = eps;
  return m;
}

double ContrastMedium::grid_spacing() const {
  if (const auto* g2 = std::get_if<Geometry2D>(&geometry)) return g2->h();
  if (!h) throw ConfigError("medium has no grid spacing h");
  return *h;
}

double measure_inclusion(const Geometry& geom, int i) {
  if (i < 0 || i >= inclusion_count(geom)) throw DomainError("inclusion index out of range");
  if (const auto* g1 = std::get_if<Geometry1D>(&geom)) return g1->inclusions()[i].length();
  if (const auto* g2 = std::get_if<Geometry2D>(&geom)) return g2->cell_count_of(i) * g2->h() * g2->h();
  double a = std::get<RadialGeometry>(geom).a;
  return 4.0 / 3.0 * std::numbers::pi * a * a * a;
}

double coefficient_at(const ContrastMedium& medium, double x) {
  if (!(medium.epsilon > 0)) throw ConfigError("coefficient_at needs epsilon > 0");
  if (const auto* g1 = std::get_if<Geometry1D>(&medium.geometry)) {
    if (x < g1->x_lo() || x > g1->x_hi()) throw DomainError("location outside the domain");
    return g1->inclusion_at(x) >= 0 ? 1.0 / medium.epsilon : 1.0;
  }
  if (const auto* rg = std::get_if<RadialGeometry>(&medium.geometry)) {
    if (x < 0.0 || x > 1.0) throw DomainError("radius outside [0, 1]");
    return x < rg->a ? 1.0 / medium.epsilon : 1.0;
  }
  throw ConfigError("coefficient_at(x) needs a 1D or radial geometry");
}

double coefficient_at(const ContrastMedium& medium, double x, double y) {
  if (!(medium.epsilon > 0)) throw ConfigError("coefficient_at needs epsilon > 0");
  const auto* g2 = std::get_if<Geometry2D>(&medium.geometry);
  if (!g2) throw ConfigError("coefficient_at(x, y) needs a 2D geometry");
  double tx = (x - g2->x_lo()) / g2->h(), ty = (y - g2->y_lo()) / g2->h();
  if (tx < 0 || ty < 0 || tx > g2->nx() || ty > g2->ny()) throw DomainError("location outside the domain");
  int ix = std::min(static_cast<int>(tx), g2->nx() - 1), iy = std::min(static_cast<int>(ty), g2->ny() - 1);
  return g2->label(ix, iy) > 0 ? 1.0 / medium.epsilon : 1.0;
}

double distance_to_periodic_lattice(const std::vector<double>& k, const std::vector<double>& period) {
  if (k.size() != period.size()) throw ConfigError("Bloch vector and period sizes differ");
  double worst = 0.0;
  for (std::size_t d = 0; d < k.size(); ++d) {
    double g = 2.0 * std::numbers::pi / period[d];
    double r = std::remainder(k[d], g);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + it.key() + "'");
  }
}

std::vector<double> number_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(what + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

BoundaryCondition parse_bc(const json& v) {
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "dirichlet") return Dirichlet{};
    if (s == "neumann") return Neumann{};
    throw ConfigError("bc: unknown kind '" + s + "'");
  }
  if (v.is_object()) {
    reject_unknown(v, {"bloch"}, "bc");
    if (!v.contains("bloch")) throw ConfigError("bc: expected {\"bloch\": k}");
    const auto& k = v.at("bloch");
    if (k.is_number()) return Bloch{{k.get<double>()}};
    return Bloch{number_list(k, "bc.bloch")};
  }
  throw ConfigError("bc: expected \"dirichlet\", \"neumann\" or {\"bloch\": k}");
}

}  // namespace

ContrastMedium medium_from_json(const json& doc) {
  reject_unknown(doc, {"dim", "domain", "inclusions", "mask", "h", "epsilon", "bc"}, "medium");
  for (const char* key : {"dim", "epsilon", "bc"})
    if (!doc.contains(key)) throw ConfigError(std::string("medium: missing field '") + key + "'");
  const auto& dim = doc.at("dim");
  if (!doc.at("epsilon").is_number()) throw ConfigError("medium.epsilon: expected a number");
  double eps = doc.at("epsilon").get<double>();
  BoundaryCondition bc = parse_bc(doc.at("bc"));
  std::optional<double> h;
  if (doc.contains("h")) {
    if (!doc.at("h").is_number()) throw ConfigError("medium.h: expected a number");
    h = doc.at("h").get<double>();
  }
  json incl = doc.value("inclusions", json::array());
  if (!incl.is_array()) throw ConfigError("medium.inclusions: expected an array");

  if (dim.is_string()) {
    if (dim.get<std::string>() != "radial") throw ConfigError("medium.dim: expected 1, 2 or \"radial\"");
    if (doc.contains("domain")) {
      auto d = number_list(doc.at("domain"), "medium.domain");
      if (d.size() != 2 || d[0] != 0.0 || d[1] != 1.0) throw ConfigError("radial domain is fixed to [0, 1]");
    }
    double a = 0.5;
    if (incl.size() == 1 && incl[0].is_number())
      a = incl[0].get<double>();
    else
      throw ConfigError("radial inclusions: expected [a]");
    return ContrastMedium(RadialGeometry(a), eps, bc, h);
  }
  if (!dim.is_number_integer()) throw ConfigError("medium.dim: expected 1, 2 or \"radial\"");
  if (!doc.contains("domain")) throw ConfigError("medium: missing field 'domain'");
  auto domain = number_list(doc.at("domain"), "medium.domain");
  int d = dim.get<int>();
  if (d == 1) {
    if (domain.size() != 2) throw ConfigError("1D domain: expected [x_lo, x_hi]");
    std::vector<Interval> ivs;
    for (const auto& iv : incl) {
      auto v = number_list(iv, "medium.inclusions");
      if (v.size() != 2) throw ConfigError("1D inclusion: expected [a, b]");
      ivs.push_back({v[0], v[1]});
    }
    return ContrastMedium(Geometry1D(domain[0], domain[1], ivs), eps, bc, h);
  }
  if (d == 2) {
    if (domain.size() != 4) throw ConfigError("2D domain: expected [x_lo, x_hi, y_lo, y_hi]");
    if (!h) throw ConfigError("2D medium needs h");
    if (doc.contains("mask")) {
      if (!incl.empty()) throw ConfigError("2D medium: give either 'mask' or 'inclusions'");
      auto [nx, ny] = grid_counts(domain[0], domain[1], domain[2], domain[3], *h);
      std::vector<int> labels;
      for (const auto& l : doc.at("mask")) {
        if (!l.is_number_integer()) throw ConfigError("medium.mask: expected integer labels");
        labels.push_back(l.get<int>());
      }
      return ContrastMedium(Geometry2D(domain[0], domain[2], *h, nx, ny, std::move(labels)), eps, bc, h);
    }
    std::vector<std::vector<double>> shapes;
    std::vector<char> is_rect;
    for (const auto& s : incl) {
      reject_unknown(s, {"rect", "disk"}, "2D inclusion");
      if (s.size() != 1) throw ConfigError("2D inclusion: exactly one of 'rect' or 'disk'");
      bool rect = s.contains("rect");
      auto p = number_list(rect ? s.at("rect") : s.at("disk"), rect ? "rect" : "disk");
      if (rect && (p.size() != 4 || !(p[0] < p[2]) || !(p[1] < p[3])))
        throw ConfigError("rectangle needs [x0, y0, x1, y1]");
      if (!rect && (p.size() != 3 || !(p[2] > 0))) throw ConfigError("disk needs [cx, cy, r] with r > 0");
      shapes.push_back(std::move(p));
      is_rect.push_back(rect);
    }
    auto geom = rasterize(domain[0], domain[1], domain[2], domain[3], *h, shapes.size(),
                          [&](std::size_t s, double x, double y) {
                            const auto& p = shapes[s];
                            if (is_rect[s]) return x > p[0] && x < p[2] && y > p[1] && y < p[3];
                            return (x - p[0]) * (x - p[0]) + (y - p[1]) * (y - p[1]) < p[2] * p[2];
                          });
    return ContrastMedium(std::move(geom), eps, bc, h);
  }
  throw ConfigError("medium.dim: expected 1, 2 or \"radial\"");
}

json medium_to_json(const ContrastMedium& medium) {
  json out;
  out["epsilon"] = medium.epsilon;
  if (const auto* b = std::get_if<Bloch>(&medium.bc)) {
    out["bc"] = {{"bloch", b->k.size() == 1 ? json(b->k[0]) : json(b->k)}};
  } else {
    out["bc"] = to_string(medium.bc);
  }
  if (medium.h) out["h"] = *medium.h;
  if (const auto* g1 = std::get_if<Geometry1D>(&medium.geometry)) {
    out["dim"] = 1;
    out["domain"] = {g1->x_lo(), g1->x_hi()};
    out["inclusions"] = json::array();
    for (const auto& iv : g1->inclusions()) out["inclusions"].push_back({iv.lo, iv.hi});
  } else if (const auto* g2 = std::get_if<Geometry2D>(&medium.geometry)) {
    out["dim"] = 2;
    out["domain"] = {g2->x_lo(), g2->x_lo() + g2->lx(), g2->y_lo(), g2->y_lo() + g2->ly()};
    out["h"] = g2->h();
    out["mask"] = g2->labels();
  } else {
    out["dim"] = "radial";
    out["inclusions"] = {std::get<RadialGeometry>(medium.geometry).a};
  }
  return out;
}

}  // namespace hcspec
