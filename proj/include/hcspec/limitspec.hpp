#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hcspec/fdm.hpp"

namespace hcspec {

enum class LimitBranch { constant_trace, zero_flux };

std::string to_string(LimitBranch b);

/// Limit eigenvalue with its inclusion constants and exterior field. The field is stored
/// on the whole grid with inclusion dofs set to c_i.
template <class Scalar>
struct LimitEigenpairT {
  double lambda = 0.0;
  Vec<Scalar> c;
  Vec<Scalar> u;
  LimitBranch branch = LimitBranch::constant_trace;
  double flux_residual = 0.0;  ///< max_i |F_i(u) + λ c_i |Ω₋^i||
  double pde_residual = 0.0;   ///< exterior rows of (K₊ - λW₊)u, relative to ||K₊|| ||u||
};

using LimitEigenpair = LimitEigenpairT<double>;

/// Exterior Helmholtz solve: (K₊ - λW₊)u = 0 on exterior dofs with u = c_i on Γ_i and
/// the operator's outer closure. Throws PoleError at an exterior resonance.
template <class Scalar>
Vec<Scalar> exterior_helmholtz_solve(const DiscreteOperatorT<Scalar>& opr, double lambda, const Vec<Scalar>& c);

/// Integrated flux F_i(u) = Σ_{Γ_i} (-(K₊u) + λ W₊ u), normal out of the inclusions.
template <class Scalar>
Vec<Scalar> limit_fluxes(const DiscreteOperatorT<Scalar>& opr, double lambda, const Vec<Scalar>& u);

/// T(λ)_ij = F_i(u^(j)) + δ_ij λ |Ω₋^i| with u^(j) the exterior solve for c = e_j.
template <class Scalar>
Mat<Scalar> characteristic_matrix(const DiscreteOperatorT<Scalar>& opr, double lambda);

template <class Scalar>
double det_T(const DiscreteOperatorT<Scalar>& opr, double lambda);

struct LimitCount {
  int exterior = 0;  ///< exterior Dirichlet eigenvalues below λ (poles of T)
  int total = 0;     ///< limit eigenvalues below λ
};

/// Exact count of discrete limit eigenvalues below λ, from the inertia of the reduced
/// pencil. It equals the exterior inertia plus the number of positive eigenvalues of T(λ).
template <class Scalar>
LimitCount limit_count_below(const DiscreteOperatorT<Scalar>& opr, double lambda);

struct DetScanOptions {
  double scan_step = 0.0;   ///< 0 picks λ_max / 64
  double tol_root = 1e-10;  ///< final bracket width, relative to max(1, λ)
  double lambda_lo = 0.0;   ///< scan starts just above this value
};

template <class Scalar>
struct DetScanResult {
  std::vector<LimitEigenpairT<Scalar>> pairs;    ///< constant-trace branch
  std::vector<double> poles;                     ///< exterior resonances met by the scan
  std::vector<double> collisions;                ///< roots on a pole, left unclassified
  std::vector<std::pair<double, double>> clusters;
};

/// Constant-trace limit eigenpairs in (lambda_lo, λ_max] by bisection on the exact count.
template <class Scalar>
DetScanResult<Scalar> det_scan(const DiscreteOperatorT<Scalar>& opr, double lambda_max, const DetScanOptions& opt = {});

template <class Scalar>
struct ZeroFluxResult {
  std::vector<LimitEigenpairT<Scalar>> accepted;
  std::vector<LimitEigenpairT<Scalar>> excluded;  ///< exterior eigenpairs with nonzero flux
  std::vector<double> tolerances;                 ///< tol_flux used for each cluster
};

/// Exterior Dirichlet eigenpairs up to λ_max whose interface fluxes vanish.
/// tol_flux = 1e-4 h sqrt(λ) ||v||_inf.
template <class Scalar>
ZeroFluxResult<Scalar> zero_flux_branch(const DiscreteOperatorT<Scalar>& opr, double lambda_max);

template <class Scalar>
struct LimitSpectrumT {
  std::vector<LimitEigenpairT<Scalar>> pairs;  ///< both branches, ascending
  std::vector<LimitEigenpairT<Scalar>> excluded;
  std::vector<double> poles;
  std::vector<double> collisions;
  std::vector<std::pair<double, double>> clusters;
  int expected_count = 0;  ///< limit_count_below at λ_max, minus the Neumann constant mode
  std::vector<double> eigenvalues() const;
};

using LimitSpectrum = LimitSpectrumT<double>;

/// det_scan and zero_flux_branch merged, checked against the exact count.
template <class Scalar>
LimitSpectrumT<Scalar> limit_spectrum(const DiscreteOperatorT<Scalar>& opr, double lambda_max,
                                      const DetScanOptions& opt = {});

/// Positive limit spectrum for a Neumann outer closure (the constant mode is skipped).
LimitSpectrum limit_spectrum_neumann(const DiscreteOperator& opr, double lambda_max, const DetScanOptions& opt = {});

/// The ε → 0 pencil restricted to grid functions constant on each inclusion: R^T K₊ R and
/// the diagonal R^T W R. reduced[d] is the reduced index of dof d.
template <class Scalar>
struct LimitPencil {
  SparseMat<Scalar> K;
  Eigen::VectorXd w;
  std::vector<int> reduced;
  int exterior_count = 0;
  Vec<Scalar> expand(const Vec<Scalar>& x) const;
};

template <class Scalar>
LimitPencil<Scalar> limit_pencil(const DiscreteOperatorT<Scalar>& opr);

/// R_z f = R (R^T (K₊ - zW) R)^{-1} R^T W f.
template <class Scalar>
Eigen::VectorXcd limit_resolvent_apply(const DiscreteOperatorT<Scalar>& opr, std::complex<double> z,
                                       const Vec<Scalar>& f);

struct NeumannLimitSolution {
  Eigen::VectorXd u;         ///< full grid field, equal to c_i on inclusion i
  Eigen::VectorXd c;         ///< inclusion constants
  double route_mismatch = 0.0;  ///< max difference of the two solution routes (single inclusion)
  double flux_residual = 0.0;   ///< |F(u) - Σ_{Ω₊} w₊ f| over all inclusions
};

/// Effective ε = 0 source problem with a Neumann outer closure. The returned field has
/// zero mesh mean. Throws SolvabilityError when Σ W f ≠ 0.
NeumannLimitSolution solve_limit_neumann(const DiscreteOperator& opr, const Eigen::VectorXd& f);

/// CSV rows `branch,lambda,c_1..c_m,flux_residual,pde_residual`.
template <class Scalar>
void write_limit_csv(std::ostream& os, const std::vector<LimitEigenpairT<Scalar>>& pairs, int m, bool header = true);

}  // namespace hcspec
