#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/SparseCholesky>

#include "hcspec/fdm.hpp"

namespace hcspec {

/// Trace on Γ = union of Γ_i, split into per-inclusion constants and a zero-mean remainder.
template <class Scalar>
struct TraceFunction {
  Vec<Scalar> phi;        ///< values on the Γ dofs, in DtNSystem::gamma order
  Vec<Scalar> constants;  ///< φ^c, one entry per inclusion
  Vec<Scalar> perp;       ///< φ^⊥ as Γ values; μ-weighted mean zero on each Γ_i
  Vec<Scalar> psi;        ///< φ^⊥ in the Q basis
};

/// Discrete Dirichlet-to-Neumann data of a split operator. Every interface map is an
/// integrated flux: entry j is the flux through the piece of Γ carried by dof j, with
/// the normal pointing out of the inclusions.
template <class Scalar>
struct DtNSystem {
  std::shared_ptr<const DiscreteOperatorT<Scalar>> op;
  std::vector<int> gamma;  ///< Γ dofs ordered by inclusion
  std::vector<int> owner;  ///< inclusion of each Γ dof
  std::vector<int> exterior;
  std::vector<int> interior;
  Eigen::VectorXd mu;  ///< trace measure per Γ dof

  Mat<Scalar> N_plus;   ///< exterior DtN: -Schur complement of k_plus onto Γ
  Mat<Scalar> N_minus;  ///< interior DtN at unit coefficient: Schur complement of k_minus onto Γ

  Eigen::MatrixXd P;  ///< indicator columns of Γ_i
  Eigen::MatrixXd Q;  ///< μ-orthonormal basis of the zero-mean traces
  Mat<Scalar> N11, N12, N21, N22_plus, N22_minus;
  std::vector<double> a;  ///< diagonal of N11: flux of the unit-constant exterior extension
  double eps0 = 0.0;      ///< admissible |ε| for negative ε; +inf when S^⊥ is trivial

  SparseMat<Scalar> Kp_EE, Kp_EG, Km_II, Km_IG;
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMat<Scalar>, Eigen::Lower>> ext_solver;
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMat<Scalar>, Eigen::Lower>> int_solver;

  int inclusion_count() const { return static_cast<int>(P.cols()); }
};

/// Builds the DtN system; the operator's epsilon is ignored. Needs a Dirichlet or Bloch
/// outer closure and grid-aligned interfaces.
template <class Scalar>
DtNSystem<Scalar> build_dtn(const DiscreteOperatorT<Scalar>& opr);

/// Projection of a Γ trace onto constants ⊕ zero-mean parts (orthogonal in the μ pairing).
template <class Scalar>
TraceFunction<Scalar> decompose(const DtNSystem<Scalar>& sys, const Vec<Scalar>& phi);

/// Integrated flux of the exterior solve with zero trace and source f (M⁺f₊), per Γ dof.
template <class Scalar>
Vec<Scalar> m_plus(const DtNSystem<Scalar>& sys, const Vec<Scalar>& f);
/// Outward flux of the unit-coefficient interior solve with zero trace and source f (M⁻f₋).
template <class Scalar>
Vec<Scalar> m_minus(const DtNSystem<Scalar>& sys, const Vec<Scalar>& f);

/// Solves (N⁻ - ε N⁺) φ = ε (M⁺f₊ - M⁻f₋) by eliminating φ^⊥ first and then solving the
/// m × m system for φ^c. ε ≥ 0 is always admissible; ε < 0 needs |ε| ≤ eps0.
template <class Scalar>
TraceFunction<Scalar> solve_block_system(const DtNSystem<Scalar>& sys, double eps, const Vec<Scalar>& f);

template <class Scalar>
struct BhatField {
  Vec<Scalar> u;        ///< full grid function
  Vec<Scalar> u_plus;   ///< exterior and Γ values, zero on interior dofs
  Vec<Scalar> u_minus;  ///< inclusion values (Γ and interior), zero on exterior dofs
  TraceFunction<Scalar> trace;
};

/// B̂_ε f: interior and exterior Dirichlet solves with the trace from solve_block_system.
/// At ε = 0 the inclusion values equal the constants c₀ exactly.
template <class Scalar>
BhatField<Scalar> apply_Bhat(const DtNSystem<Scalar>& sys, double eps, const Vec<Scalar>& f);

struct AnalyticityReport {
  int degree = 0;
  std::vector<double> eps;
  double residual = 0.0;        ///< max least-squares residual at `degree`
  double residual_lower = 0.0;  ///< same at degree - 1
  double ratio = 0.0;           ///< residual / residual_lower (0 when both vanish)
  Eigen::MatrixXd coefficients; ///< (degree+1) x |Γ| power-series coefficients of Re φ
  Eigen::VectorXd flatness;     ///< sup over inclusion dofs of |u⁻ - φ^c| per ε
  double flatness_slope = 0.0;  ///< least-squares slope of flatness against ε
};

/// Polynomial fits of φ(ε) over a sweep, as evidence of analytic dependence on ε.
template <class Scalar>
AnalyticityReport analyticity_probe(const DtNSystem<Scalar>& sys, const Vec<Scalar>& f, const std::vector<double>& eps,
                                    int degree);

/// Max |A - A^H| over the entries.
template <class Scalar>
double hermitian_defect(const Mat<Scalar>& A);

/// Dense matrix as CSV rows (real part, then imaginary part for complex data).
template <class Scalar>
void write_dense_csv(std::ostream& os, const Mat<Scalar>& A);

}  // namespace hcspec
