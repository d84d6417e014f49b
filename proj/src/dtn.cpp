#include "hcspec/dtn.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <Eigen/LU>
#include <Eigen/QR>

#include "hcspec/errors.hpp"
#include "hcspec/parallel.hpp"

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
Vec<Scalar> gather(const Vec<Scalar>& v, const std::vector<int>& idx) {
  Vec<Scalar> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

template <class Scalar>
Vec<Scalar> gather_weighted(const Vec<Scalar>& f, const Eigen::VectorXd& w, const std::vector<int>& idx) {
  Vec<Scalar> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = w(idx[i]) * f(idx[i]);
  return out;
}

template <class Scalar>
auto factor(const SparseMat<Scalar>& A, const char* what) {
  auto solver = std::make_shared<Eigen::SimplicialLDLT<SparseMat<Scalar>, Eigen::Lower>>();
  if (A.rows() == 0) return solver;
  solver->compute(A);
  if (solver->info() != Eigen::Success || (solver->vectorD().real().array() <= 0).any())
    throw SolverError(std::string("DtN: ") + what + " block is not positive definite");
  return solver;
}

/// Schur complement K_GG - K_GX K_XX^{-1} K_XG, one column per Γ dof.
template <class Scalar>
Mat<Scalar> schur(const SparseMat<Scalar>& K_GG, const SparseMat<Scalar>& K_XG,
                  const Eigen::SimplicialLDLT<SparseMat<Scalar>, Eigen::Lower>& solver) {
  const int g = static_cast<int>(K_GG.rows());
  Mat<Scalar> S = Mat<Scalar>(K_GG);
  if (K_XG.rows() == 0) return S;
  Mat<Scalar> X(K_XG.rows(), g);
  parallel_for(g, [&](int j) { X.col(j) = solver.solve(Vec<Scalar>(K_XG.col(j))); });
  S -= Mat<Scalar>(K_XG.adjoint()) * X;
  return 0.5 * (S + S.adjoint());
}

template <class Scalar>
double spectral_norm_estimate(const Mat<Scalar>& B) {
  if (B.size() == 0) return 0.0;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec<Scalar> v(B.cols());
  for (int i = 0; i < v.size(); ++i) v(i) = Scalar(u(rng));
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Vec<Scalar> w = B.adjoint() * (B * v);
    double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    double next = std::sqrt(nrm);
    v = w / nrm;
    if (std::abs(next - est) <= 1e-12 * next) return next;
    est = next;
  }
  return est;
}

}  // namespace

template <class Scalar>
DtNSystem<Scalar> build_dtn(const DiscreteOperatorT<Scalar>& opr) {
  if (is_neumann(opr.bc))
    throw ConfigError("DtN system needs a Dirichlet or Bloch outer closure; use the Neumann limit solver");
  if (!opr.interface_aligned || opr.k_cross.nonZeros() > 0)
    throw ConfigError("DtN system needs grid-aligned interfaces");
  if (opr.inclusion_count < 1) throw ConfigError("DtN system needs at least one inclusion");

  DtNSystem<Scalar> sys;
  sys.op = std::make_shared<const DiscreteOperatorT<Scalar>>(opr);
  const int m = opr.inclusion_count;
  for (int i = 0; i < m; ++i) {
    auto g = opr.interface_dofs(i);
    if (g.empty()) throw ConfigError("inclusion without interface dofs");
    for (int d : g) {
      sys.gamma.push_back(d);
      sys.owner.push_back(i);
    }
    auto in = opr.interior_dofs(i);
    sys.interior.insert(sys.interior.end(), in.begin(), in.end());
  }
  sys.exterior = opr.exterior_dofs();
  const int ng = static_cast<int>(sys.gamma.size());
  sys.mu.resize(ng);
  for (int j = 0; j < ng; ++j) sys.mu(j) = opr.trace_measure(sys.gamma[j]);

  sys.Kp_EE = extract(opr.k_plus, sys.exterior, sys.exterior);
  sys.Kp_EG = extract(opr.k_plus, sys.exterior, sys.gamma);
  sys.Km_II = extract(opr.k_minus, sys.interior, sys.interior);
  sys.Km_IG = extract(opr.k_minus, sys.interior, sys.gamma);
  sys.ext_solver = factor(sys.Kp_EE, "exterior");
  sys.int_solver = factor(sys.Km_II, "interior");
  sys.N_plus = -schur(extract(opr.k_plus, sys.gamma, sys.gamma), sys.Kp_EG, *sys.ext_solver);
  sys.N_minus = schur(extract(opr.k_minus, sys.gamma, sys.gamma), sys.Km_IG, *sys.int_solver);

  sys.P = Eigen::MatrixXd::Zero(ng, m);
  for (int j = 0; j < ng; ++j) sys.P(j, sys.owner[j]) = 1.0;
  sys.Q = Eigen::MatrixXd::Zero(ng, ng - m);
  int col = 0, start = 0;
  for (int i = 0; i < m; ++i) {
    int len = 0;
    while (start + len < ng && sys.owner[start + len] == i) ++len;
    Eigen::VectorXd s = sys.mu.segment(start, len).cwiseSqrt();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(s);
    Eigen::MatrixXd H = qr.householderQ() * Eigen::MatrixXd::Identity(len, len);
    for (int c = 1; c < len; ++c, ++col)
      sys.Q.block(start, col, len, 1) = H.col(c).cwiseQuotient(s);
    start += len;
  }

  Mat<Scalar> P = sys.P.template cast<Scalar>(), Q = sys.Q.template cast<Scalar>();
  sys.N11 = P.adjoint() * sys.N_plus * P;
  sys.N12 = P.adjoint() * sys.N_plus * Q;
  sys.N21 = Q.adjoint() * sys.N_plus * P;
  sys.N22_plus = Q.adjoint() * sys.N_plus * Q;
  sys.N22_minus = Q.adjoint() * sys.N_minus * Q;
  for (int i = 0; i < m; ++i) sys.a.push_back(std::real(sys.N11(i, i)));

  if (ng == m) {
    sys.eps0 = std::numeric_limits<double>::infinity();
  } else {
    Mat<Scalar> B = sys.N22_minus.partialPivLu().solve(sys.N22_plus);
    double nrm = spectral_norm_estimate(B);
    sys.eps0 = nrm > 0 ? 0.5 / nrm : std::numeric_limits<double>::infinity();
  }
  return sys;
}

template <class Scalar>
TraceFunction<Scalar> decompose(const DtNSystem<Scalar>& sys, const Vec<Scalar>& phi) {
  if (phi.size() != static_cast<int>(sys.gamma.size())) throw ConfigError("trace size does not match Γ");
  const int m = sys.inclusion_count();
  TraceFunction<Scalar> t;
  t.phi = phi;
  t.constants = Vec<Scalar>::Zero(m);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < phi.size(); ++j) {
    t.constants(sys.owner[j]) += sys.mu(j) * phi(j);
    total(sys.owner[j]) += sys.mu(j);
  }
  for (int i = 0; i < m; ++i) t.constants(i) /= total(i);
  t.perp = phi - sys.P.template cast<Scalar>() * t.constants;
  t.psi = sys.Q.transpose().template cast<Scalar>() * (sys.mu.template cast<Scalar>().asDiagonal() * t.perp);
  return t;
}

template <class Scalar>
Vec<Scalar> m_plus(const DtNSystem<Scalar>& sys, const Vec<Scalar>& f) {
  const auto& op = *sys.op;
  if (f.size() != op.size()) throw ConfigError("source size does not match the operator");
  Vec<Scalar> out = gather_weighted(f, op.w_plus, sys.gamma);
  if (!sys.exterior.empty()) {
    Vec<Scalar> uE = sys.ext_solver->solve(gather_weighted(f, op.w_plus, sys.exterior));
    out -= sys.Kp_EG.adjoint() * uE;
  }
  return out;
}

template <class Scalar>
Vec<Scalar> m_minus(const DtNSystem<Scalar>& sys, const Vec<Scalar>& f) {
  const auto& op = *sys.op;
  if (f.size() != op.size()) throw ConfigError("source size does not match the operator");
  Vec<Scalar> out = gather_weighted(f, op.w_minus, sys.gamma);
  if (!sys.interior.empty()) {
    Vec<Scalar> uI = sys.int_solver->solve(gather_weighted(f, op.w_minus, sys.interior));
    out -= sys.Km_IG.adjoint() * uI;
  }
  return -out;
}

template <class Scalar>
TraceFunction<Scalar> solve_block_system(const DtNSystem<Scalar>& sys, double eps, const Vec<Scalar>& f) {
  if (!std::isfinite(eps)) throw ConfigError("epsilon must be finite");
  if (eps < 0 && -eps > sys.eps0)
    throw DomainError("negative epsilon outside the admissible range |eps| <= eps0 = " + std::to_string(sys.eps0));
  const int m = sys.inclusion_count();
  const int k = static_cast<int>(sys.Q.cols());
  Mat<Scalar> P = sys.P.template cast<Scalar>(), Q = sys.Q.template cast<Scalar>();
  Vec<Scalar> r = m_plus(sys, f) - m_minus(sys, f);
  Vec<Scalar> r1 = P.adjoint() * r, r2 = Q.adjoint() * r;

  Mat<Scalar> R = sys.N11;
  Vec<Scalar> rhs = -r1;
  Mat<Scalar> HN21;
  Vec<Scalar> Hr2;
  Eigen::PartialPivLU<Mat<Scalar>> H;
  if (k > 0 && eps != 0.0) {
    H.compute(sys.N22_minus - Scalar(eps) * sys.N22_plus);
    HN21 = H.solve(sys.N21);
    Hr2 = H.solve(r2);
    R += Scalar(eps) * sys.N12 * HN21;
    rhs -= Scalar(eps) * sys.N12 * Hr2;
  }
  Eigen::FullPivLU<Mat<Scalar>> lu(R);
  double scale = R.cwiseAbs().maxCoeff();
  if (lu.rank() < m || lu.rcond() < 1e-14) {
    Scalar det = R.determinant();
    throw SolverError("reduced constants system is singular (det = " + std::to_string(std::abs(det)) +
                      ", scale " + std::to_string(scale) + ")");
  }
  TraceFunction<Scalar> t;
  t.constants = lu.solve(rhs);
  t.psi = Vec<Scalar>::Zero(k);
  if (k > 0 && eps != 0.0) t.psi = Scalar(eps) * (HN21 * t.constants + Hr2);
  t.perp = Q * t.psi;
  t.phi = P * t.constants + t.perp;
  return t;
}

template <class Scalar>
BhatField<Scalar> apply_Bhat(const DtNSystem<Scalar>& sys, double eps, const Vec<Scalar>& f) {
  const auto& op = *sys.op;
  BhatField<Scalar> out;
  out.trace = solve_block_system(sys, eps, f);
  const auto& phi = out.trace.phi;
  out.u = Vec<Scalar>::Zero(op.size());
  for (std::size_t j = 0; j < sys.gamma.size(); ++j) out.u(sys.gamma[j]) = phi(j);
  if (!sys.exterior.empty()) {
    Vec<Scalar> uE = sys.ext_solver->solve(gather_weighted(f, op.w_plus, sys.exterior) - sys.Kp_EG * phi);
    for (std::size_t j = 0; j < sys.exterior.size(); ++j) out.u(sys.exterior[j]) = uE(j);
  }
  if (!sys.interior.empty()) {
    if (eps == 0.0) {
      for (int d : sys.interior) out.u(d) = out.trace.constants(op.inclusion[d]);
    } else {
      Vec<Scalar> uI =
          sys.int_solver->solve(Scalar(eps) * gather_weighted(f, op.w_minus, sys.interior) - sys.Km_IG * phi);
      for (std::size_t j = 0; j < sys.interior.size(); ++j) out.u(sys.interior[j]) = uI(j);
    }
  }
  out.u_plus = out.u;
  out.u_minus = out.u;
  for (int d = 0; d < op.size(); ++d) {
    if (op.kind[d] == DofKind::interior) out.u_plus(d) = Scalar(0.0);
    if (op.kind[d] == DofKind::exterior) out.u_minus(d) = Scalar(0.0);
  }
  return out;
}

template <class Scalar>
AnalyticityReport analyticity_probe(const DtNSystem<Scalar>& sys, const Vec<Scalar>& f, const std::vector<double>& eps,
                                    int degree) {
  if (degree < 1) throw ConfigError("analyticity probe needs degree >= 1");
  if (static_cast<int>(eps.size()) < degree + 2) throw ConfigError("analyticity probe needs at least degree + 2 points");
  double emax = 0.0;
  for (double e : eps) {
    if (!(e > 0) || e > sys.eps0) throw ConfigError("analyticity probe needs epsilon in (0, eps0]");
    emax = std::max(emax, e);
  }
  constexpr bool complex = !std::is_same_v<Scalar, double>;
  const int ng = static_cast<int>(sys.gamma.size());
  const int cols = complex ? 2 * ng : ng;
  const int n = static_cast<int>(eps.size());
  Eigen::MatrixXd Y(n, cols);
  AnalyticityReport rep;
  rep.degree = degree;
  rep.eps = eps;
  rep.flatness.resize(n);
  for (int s = 0; s < n; ++s) {
    auto field = apply_Bhat(sys, eps[s], f);
    Y.row(s).head(ng) = field.trace.phi.real().transpose();
    if constexpr (complex) Y.row(s).tail(ng) = field.trace.phi.imag().transpose();
    double flat = 0.0;
    for (int d = 0; d < sys.op->size(); ++d)
      if (sys.op->inclusion[d] >= 0) flat = std::max(flat, std::abs(field.u(d) - field.trace.constants(sys.op->inclusion[d])));
    rep.flatness(s) = flat;
  }
  auto fit = [&](int deg, Eigen::MatrixXd* coef) {
    Eigen::MatrixXd V(n, deg + 1);
    for (int s = 0; s < n; ++s)
      for (int j = 0; j <= deg; ++j) V(s, j) = std::pow(eps[s] / emax, j);
    Eigen::MatrixXd C = V.colPivHouseholderQr().solve(Y);
    if (coef) {
      *coef = C;
      for (int j = 0; j <= deg; ++j) coef->row(j) /= std::pow(emax, j);
    }
    return (V * C - Y).cwiseAbs().maxCoeff();
  };
  rep.residual = fit(degree, &rep.coefficients);
  rep.residual_lower = fit(degree - 1, nullptr);
  rep.ratio = rep.residual_lower > 0 ? rep.residual / rep.residual_lower : 0.0;
  Eigen::MatrixXd V(n, 2);
  for (int s = 0; s < n; ++s) V.row(s) << 1.0, eps[s];
  rep.flatness_slope = V.colPivHouseholderQr().solve(rep.flatness)(1);
  return rep;
}

template <class Scalar>
double hermitian_defect(const Mat<Scalar>& A) {
  if (A.size() == 0) return 0.0;
  return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

template <class Scalar>
void write_dense_csv(std::ostream& os, const Mat<Scalar>& A) {
  os.precision(17);
  auto emit = [&](auto&& M) {
    for (int i = 0; i < M.rows(); ++i) {
      for (int j = 0; j < M.cols(); ++j) os << (j ? "," : "") << M(i, j);
      os << '\n';
    }
  };
  emit(A.real());
  if constexpr (!std::is_same_v<Scalar, double>) emit(A.imag());
}

#define HCSPEC_INSTANTIATE(S)                                                                                    \
  template DtNSystem<S> build_dtn<S>(const DiscreteOperatorT<S>&);                                               \
  template TraceFunction<S> decompose<S>(const DtNSystem<S>&, const Vec<S>&);                                    \
  template Vec<S> m_plus<S>(const DtNSystem<S>&, const Vec<S>&);                                                 \
  template Vec<S> m_minus<S>(const DtNSystem<S>&, const Vec<S>&);                                                \
  template TraceFunction<S> solve_block_system<S>(const DtNSystem<S>&, double, const Vec<S>&);                   \
  template BhatField<S> apply_Bhat<S>(const DtNSystem<S>&, double, const Vec<S>&);                               \
  template AnalyticityReport analyticity_probe<S>(const DtNSystem<S>&, const Vec<S>&, const std::vector<double>&, \
                                                  int);                                                          \
  template double hermitian_defect<S>(const Mat<S>&);                                                            \
  template void write_dense_csv<S>(std::ostream&, const Mat<S>&);

HCSPEC_INSTANTIATE(double)
HCSPEC_INSTANTIATE(cd)

#undef HCSPEC_INSTANTIATE

}  // namespace hcspec
