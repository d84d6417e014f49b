#include "hcspec/fdm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <set>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "hcspec/errors.hpp"

namespace hcspec {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

template <class Scalar>
Scalar conj_if(Scalar x) {
  if constexpr (std::is_same_v<Scalar, double>)
    return x;
  else
    return std::conj(x);
}

/// A grid node mapped to a dof (or eliminated, dof = -1) with a Bloch phase factor.
template <class Scalar>
struct NodeRef {
  int dof = -1;
  Scalar phase = Scalar(1.0);
};

template <class Scalar>
struct Builder {
  int n = 0;
  std::vector<Eigen::Triplet<Scalar>> kp, km, kc;
  Eigen::VectorXd wp, wm;
  std::vector<std::set<int>> labels;

  explicit Builder(int size) : n(size), wp(Eigen::VectorXd::Zero(size)), wm(Eigen::VectorXd::Zero(size)), labels(size) {}

  /// Edge energy c |phase_p u_p - phase_q u_q|^2; target 0 = k_plus, 1 = k_minus, 2 = k_cross.
  void edge(const NodeRef<Scalar>& p, const NodeRef<Scalar>& q, double c, int target) {
    auto& t = target == 0 ? kp : (target == 1 ? km : kc);
    if (p.dof >= 0) t.emplace_back(p.dof, p.dof, Scalar(c));
    if (q.dof >= 0) t.emplace_back(q.dof, q.dof, Scalar(c));
    if (p.dof >= 0 && q.dof >= 0) {
      Scalar pq = -c * conj_if(p.phase) * q.phase;
      t.emplace_back(p.dof, q.dof, pq);
      t.emplace_back(q.dof, p.dof, conj_if(pq));
    }
  }

  void mass(const NodeRef<Scalar>& p, double w_out, double w_in, int label) {
    if (p.dof < 0) return;
    wp(p.dof) += w_out;
    wm(p.dof) += w_in;
    labels[p.dof].insert(label);
  }

  DiscreteOperatorT<Scalar> finish(int m) {
    DiscreteOperatorT<Scalar> op;
    op.k_plus.resize(n, n);
    op.k_minus.resize(n, n);
    op.k_cross.resize(n, n);
    op.k_plus.setFromTriplets(kp.begin(), kp.end());
    op.k_minus.setFromTriplets(km.begin(), km.end());
    op.k_cross.setFromTriplets(kc.begin(), kc.end());
    op.w_plus = wp;
    op.w_minus = wm;
    op.kind.resize(n);
    op.inclusion.assign(n, -1);
    op.trace_measure = Eigen::VectorXd::Zero(n);
    op.inclusion_count = m;
    op.inclusion_measure.assign(m, 0.0);
    for (int i = 0; i < n; ++i) {
      const auto& ls = labels[i];
      int incl = 0;
      for (int l : ls)
        if (l > 0) {
          if (incl != 0 && incl != l) throw ConfigError("a grid node touches two inclusions");
          incl = l;
        }
      if (incl == 0) {
        op.kind[i] = DofKind::exterior;
      } else {
        op.inclusion[i] = incl - 1;
        op.kind[i] = ls.count(0) ? DofKind::interface : DofKind::interior;
        op.inclusion_measure[incl - 1] += wm(i);
      }
    }
    return op;
  }
};

std::size_t hash_geometry(const ContrastMedium& medium) {
  auto doc = medium_to_json(medium.with_epsilon(1.0));
  return std::hash<std::string>{}(doc.dump());
}

template <class Scalar>
DiscreteOperatorT<Scalar> assemble_1d(const ContrastMedium& medium, const Geometry1D& g) {
  double L = g.length();
  int n = static_cast<int>(std::lround(L / medium.grid_spacing()));
  if (n < 4) throw ConfigError("1D grid needs at least 4 cells");
  double h = L / n;
  const double eps = medium.epsilon;
  const bool bloch = is_bloch(medium.bc), dir = is_dirichlet(medium.bc);

  std::vector<NodeRef<Scalar>> node(n + 1);
  int ndof = bloch ? n : (dir ? n - 1 : n + 1);
  std::vector<double> xdof(ndof);
  for (int j = 0; j <= n; ++j) {
    if (bloch) {
      node[j].dof = j % n;
      if (j == n) {
        if constexpr (std::is_same_v<Scalar, cd>)
          node[j].phase = std::exp(cd(0.0, -std::get<Bloch>(medium.bc).k[0] * L));
      }
    } else if (dir) {
      node[j].dof = (j == 0 || j == n) ? -1 : j - 1;
    } else {
      node[j].dof = j;
    }
    if (node[j].dof >= 0 && (!bloch || j < n)) xdof[node[j].dof] = g.x_lo() + j * h;
  }

  bool aligned = true;
  for (const auto& iv : g.inclusions()) {
    for (double x : {iv.lo, iv.hi}) {
      double t = (x - g.x_lo()) / h;
      if (std::abs(t - std::round(t)) > 1e-8) aligned = false;
    }
    if (iv.length() < h) throw ConfigError("inclusion shorter than one grid cell");
  }
  if (!aligned && !(eps > 0)) throw ConfigError("off-grid interfaces need epsilon > 0");

  auto overlap = [&](double lo, double hi, int& which) {
    double best = 0.0;
    which = -1;
    for (int i = 0; i < g.inclusion_count(); ++i) {
      double o = std::max(0.0, std::min(hi, g.inclusions()[i].hi) - std::max(lo, g.inclusions()[i].lo));
      if (o > best) {
        best = o;
        which = i;
      }
    }
    return best / (hi - lo);
  };

  Builder<Scalar> b(ndof);
  for (int j = 0; j < n; ++j) {
    double x0 = g.x_lo() + j * h, x1 = x0 + h;
    int which = -1;
    double frac = aligned ? (g.inclusion_at(0.5 * (x0 + x1)) >= 0 ? 1.0 : 0.0) : overlap(x0, x1, which);
    if (aligned) which = g.inclusion_at(0.5 * (x0 + x1));
    int label = frac > 0.5 ? which + 1 : 0;
    if (frac == 0.0) {
      b.edge(node[j], node[j + 1], 1.0 / h, 0);
    } else if (frac == 1.0) {
      b.edge(node[j], node[j + 1], 1.0 / h, 1);
    } else {
      // Interface strictly inside the cell: harmonic average of the two coefficients.
      const auto& iv = g.inclusions()[which];
      double cut = (iv.lo > x0 && iv.lo < x1) ? iv.lo : iv.hi;
      double theta = (cut - x0) / h;
      double s_left = g.inclusion_at(0.5 * (x0 + cut)) >= 0 ? 1.0 / eps : 1.0;
      double s_right = g.inclusion_at(0.5 * (cut + x1)) >= 0 ? 1.0 / eps : 1.0;
      b.edge(node[j], node[j + 1], interface_edge_weight(s_left, s_right, theta) / h, 2);
    }
    int dummy;
    double fl = aligned ? frac : overlap(x0, x0 + 0.5 * h, dummy);
    double fr = aligned ? frac : overlap(x0 + 0.5 * h, x1, dummy);
    b.mass(node[j], (1 - fl) * 0.5 * h, fl * 0.5 * h, label);
    b.mass(node[j + 1], (1 - fr) * 0.5 * h, fr * 0.5 * h, label);
  }
  auto op = b.finish(g.inclusion_count());
  op.dim = 1;
  op.h = h;
  op.diameter = L;
  op.interface_aligned = aligned;
  op.location.resize(ndof);
  for (int i = 0; i < ndof; ++i) {
    op.location[i] = {xdof[i], 0.0};
    if (op.kind[i] == DofKind::interface) op.trace_measure(i) = 1.0;
  }
  return op;
}

template <class Scalar>
DiscreteOperatorT<Scalar> assemble_2d(const ContrastMedium& medium, const Geometry2D& g) {
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  const bool bloch = is_bloch(medium.bc), dir = is_dirichlet(medium.bc);
  Scalar px(1.0), py(1.0);
  if constexpr (std::is_same_v<Scalar, cd>) {
    if (bloch) {
      const auto& k = std::get<Bloch>(medium.bc).k;
      px = std::exp(cd(0.0, -k[0] * g.lx()));
      py = std::exp(cd(0.0, -k[1] * g.ly()));
    }
  }
  auto ref = [&](int ix, int iy) {
    NodeRef<Scalar> r;
    if (bloch) {
      if (ix == nx) r.phase *= px;
      if (iy == ny) r.phase *= py;
      r.dof = (iy % ny) * nx + (ix % nx);
    } else if (dir) {
      r.dof = (ix == 0 || iy == 0 || ix == nx || iy == ny) ? -1 : (iy - 1) * (nx - 1) + (ix - 1);
    } else {
      r.dof = iy * (nx + 1) + ix;
    }
    return r;
  };
  int ndof = bloch ? nx * ny : (dir ? (nx - 1) * (ny - 1) : (nx + 1) * (ny + 1));
  Builder<Scalar> b(ndof);
  std::vector<std::array<double, 2>> loc(ndof);
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix) {
      auto r = ref(ix, iy);
      if (r.dof >= 0 && (!bloch || (ix < nx && iy < ny))) loc[r.dof] = {g.x_lo() + ix * h, g.y_lo() + iy * h};
    }
  for (int cy = 0; cy < ny; ++cy)
    for (int cx = 0; cx < nx; ++cx) {
      int label = g.label(cx, cy);
      int target = label > 0 ? 1 : 0;
      auto v00 = ref(cx, cy), v10 = ref(cx + 1, cy), v01 = ref(cx, cy + 1), v11 = ref(cx + 1, cy + 1);
      b.edge(v00, v10, 0.5, target);
      b.edge(v01, v11, 0.5, target);
      b.edge(v00, v01, 0.5, target);
      b.edge(v10, v11, 0.5, target);
      double q = 0.25 * h * h;
      for (const auto& v : {v00, v10, v01, v11}) b.mass(v, label > 0 ? 0.0 : q, label > 0 ? q : 0.0, label);
    }
  auto op = b.finish(g.inclusion_count());
  op.dim = 2;
  op.h = h;
  op.diameter = std::hypot(g.lx(), g.ly());
  op.location = loc;
  for (int i = 0; i < ndof; ++i)
    if (op.kind[i] == DofKind::interface) op.trace_measure(i) = h;
  return op;
}

template <class Scalar>
DiscreteOperatorT<Scalar> assemble_any(const ContrastMedium& medium) {
  DiscreteOperatorT<Scalar> op;
  if (const auto* g1 = std::get_if<Geometry1D>(&medium.geometry)) {
    op = assemble_1d<Scalar>(medium, *g1);
  } else if (const auto* g2 = std::get_if<Geometry2D>(&medium.geometry)) {
    op = assemble_2d<Scalar>(medium, *g2);
  } else {
    throw ConfigError("use the radial operator for the radial geometry");
  }
  op.bc = medium.bc;
  op.epsilon = medium.epsilon;
  op.geometry_hash = hash_geometry(medium);
  return op;
}

void check_bloch(const ContrastMedium& medium) {
  const auto& k = std::get<Bloch>(medium.bc).k;
  std::vector<double> period;
  if (const auto* g1 = std::get_if<Geometry1D>(&medium.geometry)) period = {g1->length()};
  if (const auto* g2 = std::get_if<Geometry2D>(&medium.geometry)) period = {g2->lx(), g2->ly()};
  if (distance_to_periodic_lattice(k, period) < 1e-3)
    throw DomainError("Bloch vector within delta_k of an integer (periodic) wave vector");
}

}  // namespace

double interface_edge_weight(double sigma_left, double sigma_right, double theta) {
  if (!(sigma_left > 0 && sigma_right > 0) || theta < 0 || theta > 1) throw ConfigError("invalid edge coefficients");
  return 1.0 / (theta / sigma_left + (1.0 - theta) / sigma_right);
}

template <class Scalar>
typename DiscreteOperatorT<Scalar>::Sparse DiscreteOperatorT<Scalar>::matrix_at(double eps) const {
  if (!(eps > 0)) throw ConfigError("the assembled matrix needs epsilon > 0");
  if (k_cross.nonZeros() > 0 && eps != epsilon)
    throw ConfigError("off-grid interface edges were assembled for a different epsilon");
  Sparse K = k_plus + (1.0 / eps) * k_minus + k_cross;
  return K;
}

template <class Scalar>
typename DiscreteOperatorT<Scalar>::Sparse DiscreteOperatorT<Scalar>::matrix() const {
  return matrix_at(epsilon);
}

template <class Scalar>
std::vector<int> DiscreteOperatorT<Scalar>::interface_dofs(int i) const {
  if (i < 0 || i >= inclusion_count) throw DomainError("inclusion index out of range");
  std::vector<int> out;
  for (int d = 0; d < size(); ++d)
    if (inclusion[d] == i && kind[d] == DofKind::interface) out.push_back(d);
  return out;
}

template <class Scalar>
std::vector<int> DiscreteOperatorT<Scalar>::interior_dofs(int i) const {
  if (i < 0 || i >= inclusion_count) throw DomainError("inclusion index out of range");
  std::vector<int> out;
  for (int d = 0; d < size(); ++d)
    if (inclusion[d] == i && kind[d] == DofKind::interior) out.push_back(d);
  return out;
}

template <class Scalar>
std::vector<int> DiscreteOperatorT<Scalar>::inclusion_dofs(int i) const {
  if (i < 0 || i >= inclusion_count) throw DomainError("inclusion index out of range");
  std::vector<int> out;
  for (int d = 0; d < size(); ++d)
    if (inclusion[d] == i) out.push_back(d);
  return out;
}

template <class Scalar>
std::vector<int> DiscreteOperatorT<Scalar>::exterior_dofs() const {
  std::vector<int> out;
  for (int d = 0; d < size(); ++d)
    if (kind[d] == DofKind::exterior) out.push_back(d);
  return out;
}

template struct DiscreteOperatorT<double>;
template struct DiscreteOperatorT<cd>;

DiscreteOperator assemble_split(const ContrastMedium& medium) {
  if (is_bloch(medium.bc)) throw ConfigError("Bloch closure needs assemble_bloch");
  return assemble_any<double>(medium);
}

BlochOperator assemble_bloch_split(const ContrastMedium& medium) {
  if (!is_bloch(medium.bc)) throw ConfigError("assemble_bloch needs a Bloch closure");
  check_bloch(medium);
  return assemble_any<cd>(medium);
}

DiscreteOperator assemble(const ContrastMedium& medium) {
  if (!(medium.epsilon > 0)) throw ConfigError("assembly needs epsilon > 0");
  return assemble_split(medium);
}

BlochOperator assemble_bloch(const ContrastMedium& medium) {
  if (!(medium.epsilon > 0)) throw ConfigError("assembly needs epsilon > 0");
  return assemble_bloch_split(medium);
}

DiscreteOperator radial_operator_split(double a, double epsilon, int n, const BoundaryCondition& bc) {
  RadialGeometry geom(a);
  if (n < 4) throw ConfigError("radial grid needs at least 4 cells");
  if (epsilon < 0) throw ConfigError("epsilon must be >= 0");
  if (is_bloch(bc)) throw ConfigError("radial operator supports Dirichlet or Neumann at r = 1");
  double h = 1.0 / n;
  double t = a / h;
  if (std::abs(t - std::round(t)) > 1e-8) throw ConfigError("radial grid must place a node at r = a");
  bool dir = is_dirichlet(bc);
  int ndof = dir ? n : n + 1;
  std::vector<NodeRef<double>> node(n + 1);
  for (int j = 0; j <= n; ++j) node[j].dof = (dir && j == n) ? -1 : j;
  Builder<double> b(ndof);
  auto shell = [](double r0, double r1) { return 4.0 / 3.0 * kPi * (r1 * r1 * r1 - r0 * r0 * r0); };
  for (int j = 0; j < n; ++j) {
    double r0 = j * h, r1 = r0 + h, rm = r0 + 0.5 * h;
    bool inside = rm < a;
    b.edge(node[j], node[j + 1], 4.0 * kPi * rm * rm / h, inside ? 1 : 0);
    double wl = shell(r0, rm), wr = shell(rm, r1);
    b.mass(node[j], inside ? 0.0 : wl, inside ? wl : 0.0, inside ? 1 : 0);
    b.mass(node[j + 1], inside ? 0.0 : wr, inside ? wr : 0.0, inside ? 1 : 0);
  }
  auto op = b.finish(1);
  op.dim = 3;
  op.h = h;
  op.diameter = 2.0;
  op.bc = bc;
  op.epsilon = epsilon;
  op.location.resize(ndof);
  for (int j = 0; j < ndof; ++j) {
    op.location[j] = {j * h, 0.0};
    if (op.kind[j] == DofKind::interface) op.trace_measure(j) = 4.0 * kPi * a * a;
  }
  op.geometry_hash = std::hash<std::string>{}("radial:" + std::to_string(a) + ":" + std::to_string(n) + ":" + to_string(bc));
  return op;
}

template <class Scalar>
SpectrumResultT<Scalar> smallest_eigenpairs(const DiscreteOperatorT<Scalar>& opr, int count) {
  EigenOptions opt;
  opt.count = count;
  bool neu = is_neumann(opr.bc);
  opt.deflate_constants = neu;
  opt.shift = neu ? -1.0 / (opr.diameter * opr.diameter) : 0.0;
  auto K = opr.matrix();
  Eigen::VectorXd w = opr.mass();
  auto res = smallest_pencil_eigs<Scalar>(K, w, opt);
  SpectrumResultT<Scalar> out;
  out.eigenvectors = res.vectors;
  out.iterations = res.iterations;
  out.epsilon = opr.epsilon;
  out.geometry_hash = opr.geometry_hash;
  for (int j = 0; j < res.values.size(); ++j) {
    out.eigenvalues.push_back(res.values(j));
    out.residuals.push_back(res.residuals(j));
  }
  if (neu) out.zero_mode = Vec<Scalar>::Constant(opr.size(), Scalar(1.0 / std::sqrt(w.sum())));
  return out;
}

template <class Scalar>
int count_below(const DiscreteOperatorT<Scalar>& opr, double lambda) {
  return pencil_count_below<Scalar>(opr.matrix(), opr.mass(), lambda);
}

template <class Scalar>
Vec<Scalar> solve(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& f, double* residual) {
  if (f.size() != opr.size()) throw ConfigError("source size does not match the operator");
  auto K = opr.matrix();
  Eigen::VectorXd w = opr.mass();
  Vec<Scalar> rhs = w.cast<Scalar>().asDiagonal() * f;
  Vec<Scalar> u;
  if (is_neumann(opr.bc)) {
    double scale = (w.array() * f.array().abs()).sum();
    if (std::abs(rhs.sum()) > 1e-12 * std::max(scale, 1e-300))
      throw SolvabilityError("Neumann source must have zero mesh mean");
    const int n = opr.size();
    std::vector<Eigen::Triplet<Scalar>> trip;
    for (int k = 0; k < K.outerSize(); ++k)
      for (typename SparseMat<Scalar>::InnerIterator it(K, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < n; ++i) {
      trip.emplace_back(i, n, Scalar(w(i)));
      trip.emplace_back(n, i, Scalar(w(i)));
    }
    SparseMat<Scalar> B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SparseMat<Scalar>> lu(B);
    if (lu.info() != Eigen::Success) throw SolverError("bordered Neumann system factorization failed");
    Vec<Scalar> r(n + 1);
    r.head(n) = rhs;
    r(n) = Scalar(0.0);
    Vec<Scalar> sol = lu.solve(r);
    u = sol.head(n);
  } else {
    Eigen::SimplicialLDLT<SparseMat<Scalar>, Eigen::Lower> ldlt(K);
    if (ldlt.info() != Eigen::Success) throw SolverError("factorization failed");
    u = ldlt.solve(rhs);
  }
  if (residual) {
    double denom = inf_norm(K) * u.norm() + rhs.norm();
    *residual = denom > 0 ? (K * u - rhs).norm() / denom : 0.0;
  }
  return u;
}

template <class Scalar>
Eigen::VectorXcd resolvent_apply(const DiscreteOperatorT<Scalar>& opr, std::complex<double> z, const Vec<Scalar>& f) {
  if (f.size() != opr.size()) throw ConfigError("source size does not match the operator");
  SparseMat<cd> K = opr.matrix().template cast<cd>();
  Eigen::VectorXd w = opr.mass();
  for (int i = 0; i < opr.size(); ++i) K.coeffRef(i, i) -= z * w(i);
  K.makeCompressed();
  Eigen::SparseLU<SparseMat<cd>> lu(K);
  if (lu.info() != Eigen::Success) throw SolverError("resolvent factorization failed (z is an eigenvalue?)");
  Eigen::VectorXcd rhs = w.cast<cd>().asDiagonal() * f.template cast<cd>();
  return lu.solve(rhs);
}

template <class Scalar>
Scalar flux_on_interface(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& u, int i, const Vec<Scalar>* f) {
  if (i < 0 || i >= opr.inclusion_count) throw DomainError("inclusion index out of range");
  if (!opr.interface_aligned) throw ConfigError("flux needs grid-aligned interfaces");
  if (u.size() != opr.size()) throw ConfigError("grid function size does not match the operator");
  Vec<Scalar> ku = opr.k_plus * u;
  Scalar flux(0.0);
  for (int d : opr.interface_dofs(i)) {
    flux -= ku(d);
    if (f) flux += opr.w_plus(d) * (*f)(d);
  }
  return flux;
}

template <class Scalar>
double inclusion_flatness(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& u, int i) {
  auto dofs = opr.inclusion_dofs(i);
  Eigen::VectorXd w = opr.mass();
  Scalar mean(0.0);
  double wt = 0.0;
  for (int d : dofs) {
    mean += w(d) * u(d);
    wt += w(d);
  }
  mean /= wt;
  double sup = 0.0;
  for (int d : dofs) sup = std::max(sup, std::abs(u(d) - mean));
  return sup;
}

template <class Scalar>
double mass_norm(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& u) {
  Eigen::VectorXd w = opr.mass();
  return std::sqrt((w.array() * u.array().abs2()).sum());
}

void write_spectrum_csv(std::ostream& os, const std::vector<double>& lambdas, const std::vector<double>& residuals) {
  os << "j,lambda,residual\n";
  os.precision(17);
  for (std::size_t j = 0; j < lambdas.size(); ++j)
    os << j + 1 << ',' << lambdas[j] << ',' << (j < residuals.size() ? residuals[j] : 0.0) << '\n';
}

template <class Scalar>
void write_matrix_triplets(std::ostream& os, const SparseMat<Scalar>& K) {
  os.precision(17);
  for (int k = 0; k < K.outerSize(); ++k)
    for (typename SparseMat<Scalar>::InnerIterator it(K, k); it; ++it) {
      if constexpr (std::is_same_v<Scalar, double>)
        os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
      else
        os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
}

#define HCSPEC_INSTANTIATE(S)                                                                           \
  template SpectrumResultT<S> smallest_eigenpairs<S>(const DiscreteOperatorT<S>&, int);                 \
  template int count_below<S>(const DiscreteOperatorT<S>&, double);                                     \
  template Vec<S> solve<S>(const DiscreteOperatorT<S>&, const Vec<S>&, double*);                        \
  template Eigen::VectorXcd resolvent_apply<S>(const DiscreteOperatorT<S>&, cd, const Vec<S>&);         \
  template S flux_on_interface<S>(const DiscreteOperatorT<S>&, const Vec<S>&, int, const Vec<S>*);      \
  template double inclusion_flatness<S>(const DiscreteOperatorT<S>&, const Vec<S>&, int);               \
  template double mass_norm<S>(const DiscreteOperatorT<S>&, const Vec<S>&);                             \
  template void write_matrix_triplets<S>(std::ostream&, const SparseMat<S>&);

HCSPEC_INSTANTIATE(double)
HCSPEC_INSTANTIATE(cd)

#undef HCSPEC_INSTANTIATE

}  // namespace hcspec
