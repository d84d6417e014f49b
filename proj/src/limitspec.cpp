#include "hcspec/limitspec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <Eigen/SVD>

#include "hcspec/errors.hpp"

namespace hcspec {

namespace {

using cd = std::complex<double>;

template <class Scalar>
SparseMat<Scalar> extract(const SparseMat<Scalar>& K, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> rmap(K.rows(), -1), cmap(K.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) rmap[rows[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < cols.size(); ++j) cmap[cols[j]] = static_cast<int>(j);
  std::vector<Eigen::Triplet<Scalar>> t;
  for (int k = 0; k < K.outerSize(); ++k)
    for (typename SparseMat<Scalar>::InnerIterator it(K, k); it; ++it) {
      int r = rmap[it.row()], c = cmap[it.col()];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SparseMat<Scalar> S(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

template <class Scalar>
void require_limit_ready(const DiscreteOperatorT<Scalar>& opr) {
  if (!opr.interface_aligned || opr.k_cross.nonZeros() > 0)
    throw ConfigError("limit solvers need grid-aligned interfaces");
  if (opr.inclusion_count < 1) throw ConfigError("limit solvers need at least one inclusion");
}

/// K₊ - λW₊ restricted to the exterior dofs, factorized, plus the exterior-Γ coupling.
template <class Scalar>
struct ExteriorBlock {
  std::vector<int> E, G;
  std::vector<int> owner;
  SparseMat<Scalar> A_EE, A_EG;
  Eigen::SimplicialLDLT<SparseMat<Scalar>, Eigen::Lower> ldlt;
  bool singular = false;  ///< near-singular: solves are refused

  ExteriorBlock(const DiscreteOperatorT<Scalar>& opr, double lambda) {
    E = opr.exterior_dofs();
    for (int i = 0; i < opr.inclusion_count; ++i)
      for (int d : opr.interface_dofs(i)) {
        G.push_back(d);
        owner.push_back(i);
      }
    SparseMat<Scalar> A = opr.k_plus;
    for (int d = 0; d < opr.size(); ++d)
      if (opr.w_plus(d) != 0.0) A.coeffRef(d, d) -= Scalar(lambda * opr.w_plus(d));
    A.makeCompressed();
    A_EE = extract(A, E, E);
    A_EG = extract(A, E, G);
    if (E.empty()) return;
    ldlt.compute(A_EE);
    if (ldlt.info() != Eigen::Success) {
      singular = true;
      return;
    }
    Eigen::VectorXd D = ldlt.vectorD().real();
    double dmax = D.cwiseAbs().maxCoeff();
    for (int i = 0; i < D.size(); ++i) {
      if (std::abs(D(i)) <= 1e-12 * dmax) singular = true;
    }
  }
};

/// Exterior solves for the unit constants on each Γ_j; columns are full grid functions.
template <class Scalar>
Mat<Scalar> unit_solves(const DiscreteOperatorT<Scalar>& opr, const ExteriorBlock<Scalar>& ext) {
  const int m = opr.inclusion_count;
  Mat<Scalar> U = Mat<Scalar>::Zero(opr.size(), m);
  for (int d = 0; d < opr.size(); ++d)
    if (opr.inclusion[d] >= 0) U(d, opr.inclusion[d]) = Scalar(1.0);
  if (ext.E.empty()) return U;
  Mat<Scalar> B(ext.G.size(), m);
  B.setZero();
  for (std::size_t j = 0; j < ext.G.size(); ++j) B(j, ext.owner[j]) = Scalar(1.0);
  Mat<Scalar> rhs = -(ext.A_EG * B);
  Mat<Scalar> X = ext.ldlt.solve(rhs);
  for (std::size_t r = 0; r < ext.E.size(); ++r) U.row(ext.E[r]) = X.row(r);
  return U;
}

template <class Scalar>
Mat<Scalar> t_matrix(const DiscreteOperatorT<Scalar>& opr, double lambda, const ExteriorBlock<Scalar>& ext) {
  const int m = opr.inclusion_count;
  Mat<Scalar> U = unit_solves(opr, ext);
  Mat<Scalar> T(m, m);
  for (int j = 0; j < m; ++j) T.col(j) = limit_fluxes<Scalar>(opr, lambda, Vec<Scalar>(U.col(j)));
  for (int i = 0; i < m; ++i) T(i, i) += Scalar(lambda * opr.inclusion_measure[i]);
  return T;
}

template <class Scalar>
void gauge_constants(Vec<Scalar>& c) {
  c.normalize();
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c(i)) > 1e-12) {
      Scalar ph = c(i) / std::abs(c(i));
      if constexpr (std::is_same_v<Scalar, double>)
        c *= ph;
      else
        c *= std::conj(ph);
      return;
    }
}

template <class Scalar>
void gauge_field(Vec<Scalar>& u) {
  double sup = u.cwiseAbs().maxCoeff();
  if (sup == 0.0) return;
  u /= sup;
  for (int i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) >= 0.5) {
      Scalar ph = u(i) / std::abs(u(i));
      if constexpr (std::is_same_v<Scalar, double>)
        u *= ph;
      else
        u *= std::conj(ph);
      return;
    }
}

template <class Scalar>
double pde_residual(const DiscreteOperatorT<Scalar>& opr, double lambda, const Vec<Scalar>& u) {
  Vec<Scalar> r = opr.k_plus * u - Scalar(lambda) * (opr.w_plus.template cast<Scalar>().asDiagonal() * u);
  double worst = 0.0;
  for (int d = 0; d < opr.size(); ++d)
    if (opr.kind[d] == DofKind::exterior) worst = std::max(worst, std::abs(r(d)));
  double scale = inf_norm(opr.k_plus) * u.cwiseAbs().maxCoeff();
  return scale > 0 ? worst / scale : worst;
}

template <class Scalar>
LimitEigenpairT<Scalar> complete_pair(const DiscreteOperatorT<Scalar>& opr, double lambda, Vec<Scalar> c,
                                      LimitBranch branch, const Vec<Scalar>* field = nullptr) {
  LimitEigenpairT<Scalar> p;
  p.lambda = lambda;
  p.branch = branch;
  if (branch == LimitBranch::constant_trace) {
    gauge_constants(c);
    p.c = c;
    p.u = exterior_helmholtz_solve(opr, lambda, c);
  } else {
    p.c = Vec<Scalar>::Zero(opr.inclusion_count);
    p.u = *field;
  }
  Vec<Scalar> F = limit_fluxes(opr, lambda, p.u);
  double fr = 0.0;
  for (int i = 0; i < opr.inclusion_count; ++i)
    fr = std::max(fr, std::abs(F(i) + Scalar(lambda * opr.inclusion_measure[i]) * p.c(i)));
  p.flux_residual = fr;
  p.pde_residual = pde_residual(opr, lambda, p.u);
  return p;
}

}  // namespace

std::string to_string(LimitBranch b) { return b == LimitBranch::constant_trace ? "constant_trace" : "zero_flux"; }

template <class Scalar>
Vec<Scalar> exterior_helmholtz_solve(const DiscreteOperatorT<Scalar>& opr, double lambda, const Vec<Scalar>& c) {
  require_limit_ready(opr);
  if (c.size() != opr.inclusion_count) throw ConfigError("constants vector size does not match the inclusion count");
  ExteriorBlock<Scalar> ext(opr, lambda);
  if (ext.singular) throw PoleError("lambda is an exterior Dirichlet eigenvalue", lambda);
  Vec<Scalar> u = Vec<Scalar>::Zero(opr.size());
  Vec<Scalar> uG(ext.G.size());
  for (std::size_t j = 0; j < ext.G.size(); ++j) uG(j) = c(ext.owner[j]);
  for (int d = 0; d < opr.size(); ++d)
    if (opr.inclusion[d] >= 0) u(d) = c(opr.inclusion[d]);
  if (!ext.E.empty()) {
    Vec<Scalar> uE = ext.ldlt.solve(Vec<Scalar>(-(ext.A_EG * uG)));
    for (std::size_t r = 0; r < ext.E.size(); ++r) u(ext.E[r]) = uE(r);
  }
  return u;
}

template <class Scalar>
Vec<Scalar> limit_fluxes(const DiscreteOperatorT<Scalar>& opr, double lambda, const Vec<Scalar>& u) {
  if (u.size() != opr.size()) throw ConfigError("grid function size does not match the operator");
  Vec<Scalar> ku = opr.k_plus * u;
  Vec<Scalar> F = Vec<Scalar>::Zero(opr.inclusion_count);
  for (int d = 0; d < opr.size(); ++d)
    if (opr.kind[d] == DofKind::interface) F(opr.inclusion[d]) += -ku(d) + Scalar(lambda * opr.w_plus(d)) * u(d);
  return F;
}

template <class Scalar>
Mat<Scalar> characteristic_matrix(const DiscreteOperatorT<Scalar>& opr, double lambda) {
  require_limit_ready(opr);
  ExteriorBlock<Scalar> ext(opr, lambda);
  if (ext.singular) throw PoleError("T(lambda) has a pole at an exterior Dirichlet eigenvalue", lambda);
  return t_matrix(opr, lambda, ext);
}

template <class Scalar>
double det_T(const DiscreteOperatorT<Scalar>& opr, double lambda) {
  return std::real(characteristic_matrix(opr, lambda).determinant());
}

template <class Scalar>
LimitCount limit_count_below(const DiscreteOperatorT<Scalar>& opr, double lambda) {
  require_limit_ready(opr);
  auto p = limit_pencil(opr);
  auto E = opr.exterior_dofs();
  LimitCount out;
  out.total = pencil_count_below<Scalar>(p.K, p.w, lambda);
  if (!E.empty()) {
    Eigen::VectorXd w(E.size());
    for (std::size_t i = 0; i < E.size(); ++i) w(i) = opr.w_plus(E[i]);
    out.exterior = pencil_count_below<Scalar>(extract(opr.k_plus, E, E), w, lambda);
  }
  return out;
}

template <class Scalar>
DetScanResult<Scalar> det_scan(const DiscreteOperatorT<Scalar>& opr, double lambda_max, const DetScanOptions& opt) {
  require_limit_ready(opr);
  if (!(lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  double lo = opt.lambda_lo;
  if (lo == 0.0 && is_neumann(opr.bc)) lo = 1e-8 * std::max(1.0, lambda_max);
  if (!(lo < lambda_max)) throw ConfigError("scan range is empty");
  double step = opt.scan_step > 0 ? opt.scan_step : (lambda_max - lo) / 64.0;

  struct Event {
    double a, b;
    LimitCount ca, cb;
  };
  std::vector<Event> events;
  std::function<void(double, double, LimitCount, LimitCount)> refine = [&](double a, double b, LimitCount ca,
                                                                          LimitCount cb) {
    if (ca.total == cb.total && ca.exterior == cb.exterior) return;
    if (b - a <= opt.tol_root * std::max(1.0, b)) {
      events.push_back({a, b, ca, cb});
      return;
    }
    double mid = 0.5 * (a + b);
    LimitCount cm = limit_count_below(opr, mid);
    refine(a, mid, ca, cm);
    refine(mid, b, cm, cb);
  };
  double a = lo;
  LimitCount ca = limit_count_below(opr, a);
  while (a < lambda_max) {
    double b = std::min(lambda_max, a + step);
    LimitCount cb = limit_count_below(opr, b);
    refine(a, b, ca, cb);
    a = b;
    ca = cb;
  }

  DetScanResult<Scalar> out;
  for (const auto& ev : events) {
    int dn = ev.cb.total - ev.ca.total, de = ev.cb.exterior - ev.ca.exterior;
    double lam = 0.5 * (ev.a + ev.b);
    if (de > 0) {
      out.poles.push_back(lam);
      if (dn > de) out.collisions.push_back(lam);
      continue;
    }
    if (dn <= 0) continue;
    Mat<Scalar> T = characteristic_matrix(opr, lam);
    Mat<Scalar> H = 0.5 * (T + T.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(H);
    std::vector<int> order(H.rows());
    for (int i = 0; i < H.rows(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::abs(es.eigenvalues()(x)) < std::abs(es.eigenvalues()(y)); });
    for (int k = 0; k < dn; ++k)
      out.pairs.push_back(complete_pair(opr, lam, Vec<Scalar>(es.eigenvectors().col(order[k])), LimitBranch::constant_trace));
    if (dn > 1) out.clusters.push_back({lam, lam});
  }
  for (std::size_t i = 1; i < out.pairs.size(); ++i)
    if (out.pairs[i].lambda - out.pairs[i - 1].lambda < 1e-6 && out.pairs[i].lambda != out.pairs[i - 1].lambda)
      out.clusters.push_back({out.pairs[i - 1].lambda, out.pairs[i].lambda});
  return out;
}

template <class Scalar>
ZeroFluxResult<Scalar> zero_flux_branch(const DiscreteOperatorT<Scalar>& opr, double lambda_max) {
  require_limit_ready(opr);
  if (!(lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  ZeroFluxResult<Scalar> out;
  auto E = opr.exterior_dofs();
  if (E.empty()) return out;
  SparseMat<Scalar> K = extract(opr.k_plus, E, E);
  Eigen::VectorXd w(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) w(i) = opr.w_plus(E[i]);
  int count = pencil_count_below<Scalar>(K, w, lambda_max);
  if (count == 0) return out;
  EigenOptions eo;
  eo.count = count;
  auto eig = smallest_pencil_eigs<Scalar>(K, w, eo);

  const int m = opr.inclusion_count;
  auto lift = [&](const Vec<Scalar>& v) {
    Vec<Scalar> u = Vec<Scalar>::Zero(opr.size());
    for (std::size_t i = 0; i < E.size(); ++i) u(E[i]) = v(i);
    return u;
  };
  int start = 0;
  while (start < count) {
    int end = start + 1;
    while (end < count && eig.values(end) - eig.values(end - 1) <= 1e-8 * std::max(1.0, eig.values(end))) ++end;
    const int d = end - start;
    double lam = eig.values.segment(start, d).mean();
    Mat<Scalar> U(opr.size(), d);
    double sup = 0.0;
    for (int j = 0; j < d; ++j) {
      U.col(j) = lift(Vec<Scalar>(eig.vectors.col(start + j)));
      sup = std::max(sup, U.col(j).cwiseAbs().maxCoeff());
    }
    Mat<Scalar> Phi(m, d);
    for (int j = 0; j < d; ++j) Phi.col(j) = limit_fluxes<Scalar>(opr, lam, Vec<Scalar>(U.col(j)));
    double tol = 1e-4 * opr.h * std::sqrt(lam) * sup;
    out.tolerances.push_back(tol);
    Eigen::JacobiSVD<Mat<Scalar>> svd(Phi, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol) ++rank;
    for (int j = 0; j < d; ++j) {
      Vec<Scalar> u = U * svd.matrixV().col(j);
      gauge_field(u);
      auto pair = complete_pair(opr, lam, Vec<Scalar>(), LimitBranch::zero_flux, &u);
      (j < rank ? out.excluded : out.accepted).push_back(std::move(pair));
    }
    start = end;
  }
  return out;
}

template <class Scalar>
std::vector<double> LimitSpectrumT<Scalar>::eigenvalues() const {
  std::vector<double> out;
  for (const auto& p : pairs) out.push_back(p.lambda);
  return out;
}

template <class Scalar>
LimitSpectrumT<Scalar> limit_spectrum(const DiscreteOperatorT<Scalar>& opr, double lambda_max, const DetScanOptions& opt) {
  DetScanOptions o = opt;
  if (o.lambda_lo == 0.0 && is_neumann(opr.bc)) o.lambda_lo = 1e-8 * std::max(1.0, lambda_max);
  auto scan = det_scan(opr, lambda_max, o);
  auto zf = zero_flux_branch(opr, lambda_max);
  LimitSpectrumT<Scalar> out;
  out.pairs = scan.pairs;
  for (auto& p : zf.accepted)
    if (p.lambda > o.lambda_lo) out.pairs.push_back(p);
  std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  out.excluded = zf.excluded;
  out.poles = scan.poles;
  out.collisions = scan.collisions;
  out.clusters = scan.clusters;
  out.expected_count = limit_count_below(opr, lambda_max).total - limit_count_below(opr, o.lambda_lo).total;
  return out;
}

LimitSpectrum limit_spectrum_neumann(const DiscreteOperator& opr, double lambda_max, const DetScanOptions& opt) {
  if (!is_neumann(opr.bc)) throw ConfigError("limit_spectrum_neumann needs a Neumann outer closure");
  auto out = limit_spectrum(opr, lambda_max, opt);
  std::erase_if(out.pairs, [](const LimitEigenpair& p) { return !(p.lambda > 0); });
  return out;
}

template <class Scalar>
Vec<Scalar> LimitPencil<Scalar>::expand(const Vec<Scalar>& x) const {
  Vec<Scalar> u(reduced.size());
  for (std::size_t d = 0; d < reduced.size(); ++d) u(d) = x(reduced[d]);
  return u;
}

template <class Scalar>
LimitPencil<Scalar> limit_pencil(const DiscreteOperatorT<Scalar>& opr) {
  require_limit_ready(opr);
  LimitPencil<Scalar> p;
  p.reduced.assign(opr.size(), -1);
  int next = 0;
  for (int d = 0; d < opr.size(); ++d)
    if (opr.kind[d] == DofKind::exterior) p.reduced[d] = next++;
  p.exterior_count = next;
  for (int d = 0; d < opr.size(); ++d)
    if (opr.inclusion[d] >= 0) p.reduced[d] = next + opr.inclusion[d];
  const int n = next + opr.inclusion_count;
  std::vector<Eigen::Triplet<Scalar>> t;
  for (int k = 0; k < opr.k_plus.outerSize(); ++k)
    for (typename SparseMat<Scalar>::InnerIterator it(opr.k_plus, k); it; ++it)
      t.emplace_back(p.reduced[it.row()], p.reduced[it.col()], it.value());
  p.K.resize(n, n);
  p.K.setFromTriplets(t.begin(), t.end());
  p.w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = opr.mass();
  for (int d = 0; d < opr.size(); ++d) p.w(p.reduced[d]) += w(d);
  return p;
}

template <class Scalar>
Eigen::VectorXcd limit_resolvent_apply(const DiscreteOperatorT<Scalar>& opr, std::complex<double> z,
                                       const Vec<Scalar>& f) {
  if (f.size() != opr.size()) throw ConfigError("source size does not match the operator");
  auto p = limit_pencil(opr);
  SparseMat<cd> A = p.K.template cast<cd>();
  for (int i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= z * p.w(i);
  A.makeCompressed();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(A.rows());
  Eigen::VectorXd w = opr.mass();
  for (int d = 0; d < opr.size(); ++d) b(p.reduced[d]) += w(d) * cd(f(d));
  Eigen::SparseLU<SparseMat<cd>> lu(A);
  if (lu.info() != Eigen::Success) throw SolverError("limit resolvent factorization failed (z is a limit eigenvalue?)");
  Eigen::VectorXcd x = lu.solve(b);
  Eigen::VectorXcd u(opr.size());
  for (int d = 0; d < opr.size(); ++d) u(d) = x(p.reduced[d]);
  return u;
}

NeumannLimitSolution solve_limit_neumann(const DiscreteOperator& opr, const Eigen::VectorXd& f) {
  require_limit_ready(opr);
  if (!is_neumann(opr.bc)) throw ConfigError("solve_limit_neumann needs a Neumann outer closure");
  if (f.size() != opr.size()) throw ConfigError("source size does not match the operator");
  Eigen::VectorXd w = opr.mass();
  double total = w.dot(f), scale = (w.array() * f.array().abs()).sum();
  if (std::abs(total) > 1e-12 * std::max(scale, 1e-300)) throw SolvabilityError("Neumann source must have zero mesh mean");

  // Constrained route: bordered system on the reduced space with the mean-zero constraint.
  auto p = limit_pencil(opr);
  const int n = static_cast<int>(p.K.rows());
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < p.K.outerSize(); ++k)
    for (SparseMat<double>::InnerIterator it(p.K, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, n, p.w(i));
    t.emplace_back(n, i, p.w(i));
  }
  SparseMat<double> B(n + 1, n + 1);
  B.setFromTriplets(t.begin(), t.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (int d = 0; d < opr.size(); ++d) rhs(p.reduced[d]) += w(d) * f(d);
  Eigen::SparseLU<SparseMat<double>> lu(B);
  if (lu.info() != Eigen::Success) throw SolverError("Neumann limit system factorization failed");
  Eigen::VectorXd x = lu.solve(rhs);

  NeumannLimitSolution out;
  out.u = p.expand(Eigen::VectorXd(x.head(n)));
  out.c = x.segment(p.exterior_count, opr.inclusion_count);

  if (opr.inclusion_count == 1) {
    // Two-step route: zero constant first, then the shift to zero mesh mean.
    ExteriorBlock<double> ext(opr, 0.0);
    if (ext.singular) throw SolverError("exterior block is singular");
    Eigen::VectorXd bE(ext.E.size());
    for (std::size_t i = 0; i < ext.E.size(); ++i) bE(i) = opr.w_plus(ext.E[i]) * f(ext.E[i]);
    Eigen::VectorXd uE = ext.ldlt.solve(bE);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(opr.size());
    for (std::size_t i = 0; i < ext.E.size(); ++i) u(ext.E[i]) = uE(i);
    u.array() -= w.dot(u) / w.sum();
    out.route_mismatch = (u - out.u).cwiseAbs().maxCoeff();
  }

  Eigen::VectorXd F = limit_fluxes<double>(opr, 0.0, out.u);
  double source = 0.0;
  for (int d = 0; d < opr.size(); ++d) source += opr.w_plus(d) * f(d);
  Eigen::VectorXd wf = opr.w_plus.cwiseProduct(f);
  for (int d = 0; d < opr.size(); ++d)
    if (opr.kind[d] == DofKind::interface) F(opr.inclusion[d]) += wf(d);
  out.flux_residual = std::abs(F.sum() - source);
  return out;
}

template <class Scalar>
void write_limit_csv(std::ostream& os, const std::vector<LimitEigenpairT<Scalar>>& pairs, int m, bool header) {
  os.precision(17);
  if (header) {
    os << "branch,lambda";
    for (int i = 1; i <= m; ++i) os << ",c_" << i;
    os << ",flux_residual,pde_residual\n";
  }
  for (const auto& p : pairs) {
    os << to_string(p.branch) << ',' << p.lambda;
    for (int i = 0; i < m; ++i) os << ',' << (i < p.c.size() ? std::real(p.c(i)) : 0.0);
    os << ',' << p.flux_residual << ',' << p.pde_residual << '\n';
  }
}

#define HCSPEC_INSTANTIATE(S)                                                                                   \
  template Vec<S> exterior_helmholtz_solve<S>(const DiscreteOperatorT<S>&, double, const Vec<S>&);              \
  template Vec<S> limit_fluxes<S>(const DiscreteOperatorT<S>&, double, const Vec<S>&);                          \
  template Mat<S> characteristic_matrix<S>(const DiscreteOperatorT<S>&, double);                                \
  template double det_T<S>(const DiscreteOperatorT<S>&, double);                                                \
  template LimitCount limit_count_below<S>(const DiscreteOperatorT<S>&, double);                                \
  template DetScanResult<S> det_scan<S>(const DiscreteOperatorT<S>&, double, const DetScanOptions&);             \
  template ZeroFluxResult<S> zero_flux_branch<S>(const DiscreteOperatorT<S>&, double);                          \
  template struct LimitSpectrumT<S>;                                                                            \
  template LimitSpectrumT<S> limit_spectrum<S>(const DiscreteOperatorT<S>&, double, const DetScanOptions&);     \
  template struct LimitPencil<S>;                                                                               \
  template LimitPencil<S> limit_pencil<S>(const DiscreteOperatorT<S>&);                                         \
  template Eigen::VectorXcd limit_resolvent_apply<S>(const DiscreteOperatorT<S>&, cd, const Vec<S>&);           \
  template void write_limit_csv<S>(std::ostream&, const std::vector<LimitEigenpairT<S>>&, int, bool);

HCSPEC_INSTANTIATE(double)
HCSPEC_INSTANTIATE(cd)

#undef HCSPEC_INSTANTIATE

}  // namespace hcspec
