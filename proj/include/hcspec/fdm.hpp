#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hcspec/eigensolver.hpp"
#include "hcspec/medium.hpp"

namespace hcspec {

enum class DofKind { exterior, interface, interior };

/// Vertex-centred finite-volume discretization of -div(sigma grad) as the pencil K u = lambda W u.
/// The stiffness is kept split so that every epsilon shares one assembly:
/// K = k_plus + k_minus / epsilon + k_cross, with k_minus built at unit coefficient and
/// k_cross holding harmonic-averaged edges that straddle an off-grid interface.
template <class Scalar>
struct DiscreteOperatorT {
  using Sparse = SparseMat<Scalar>;
  using Vector = Vec<Scalar>;

  int dim = 1;  ///< 1, 2, or 3 (radial)
  Sparse k_plus;
  Sparse k_minus;
  Sparse k_cross;
  Eigen::VectorXd w_plus;
  Eigen::VectorXd w_minus;
  std::vector<DofKind> kind;
  std::vector<int> inclusion;             ///< owning inclusion, -1 for matrix dofs
  Eigen::VectorXd trace_measure;          ///< interface measure per Γ dof, 0 elsewhere
  std::vector<std::array<double, 2>> location;
  std::vector<double> inclusion_measure;  ///< discrete |Ω₋^i| = sum of w_minus
  int inclusion_count = 0;
  BoundaryCondition bc = Dirichlet{};
  double epsilon = 1.0;
  double h = 0.0;
  double diameter = 1.0;
  bool interface_aligned = true;
  std::size_t geometry_hash = 0;

  int size() const { return static_cast<int>(kind.size()); }
  /// Assembled stiffness at the stored epsilon (> 0).
  Sparse matrix() const;
  Sparse matrix_at(double eps) const;
  Eigen::VectorXd mass() const { return w_plus + w_minus; }
  std::vector<int> interface_dofs(int i) const;
  std::vector<int> interior_dofs(int i) const;
  /// Γ_i and interior dofs together.
  std::vector<int> inclusion_dofs(int i) const;
  std::vector<int> exterior_dofs() const;
};

using DiscreteOperator = DiscreteOperatorT<double>;
using BlochOperator = DiscreteOperatorT<std::complex<double>>;

/// Real operator for Dirichlet or Neumann closures; needs epsilon > 0.
DiscreteOperator assemble(const ContrastMedium& medium);
/// Phase-twisted operator for a Bloch closure; needs epsilon > 0.
BlochOperator assemble_bloch(const ContrastMedium& medium);
/// Same assembly with epsilon = 0 accepted: only the split parts are meaningful.
DiscreteOperator assemble_split(const ContrastMedium& medium);
BlochOperator assemble_bloch_split(const ContrastMedium& medium);

/// Radial operator of -(1/r^2)(r^2 sigma u')' on [0, 1], inclusion r < a, n cells.
DiscreteOperator radial_operator_split(double a, double epsilon, int n, const BoundaryCondition& bc);

/// Conductance of an edge cut by an interface at fraction theta from the left end.
double interface_edge_weight(double sigma_left, double sigma_right, double theta = 0.5);

template <class Scalar>
struct SpectrumResultT {
  std::vector<double> eigenvalues;
  Mat<Scalar> eigenvectors;  ///< W-orthonormal columns
  std::vector<double> residuals;
  int iterations = 0;
  double epsilon = 0.0;
  std::size_t geometry_hash = 0;
  std::optional<Vec<Scalar>> zero_mode;  ///< Neumann constant mode, W-normalized
};

using SpectrumResult = SpectrumResultT<double>;
using BlochSpectrum = SpectrumResultT<std::complex<double>>;

template <class Scalar>
SpectrumResultT<Scalar> smallest_eigenpairs(const DiscreteOperatorT<Scalar>& opr, int count);

template <class Scalar>
int count_below(const DiscreteOperatorT<Scalar>& opr, double lambda);

/// u with A u = f, where A = W^{-1} K. Neumann requires a zero-mean f and returns the
/// zero-mean solution. The optional residual is the backward error of the solve.
template <class Scalar>
Vec<Scalar> solve(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& f, double* residual = nullptr);

/// (A - z)^{-1} f.
template <class Scalar>
Eigen::VectorXcd resolvent_apply(const DiscreteOperatorT<Scalar>& opr, std::complex<double> z, const Vec<Scalar>& f);

/// Integrated exterior flux over Γ_i, normal out of the inclusion:
/// sum over Γ_i of -(k_plus u) + w_plus f. With f = 0 this is the plain one-sided flux.
template <class Scalar>
Scalar flux_on_interface(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& u, int i,
                         const Vec<Scalar>* f = nullptr);

/// sup over inclusion dofs of |u - mean(u)| with the w-weighted mean.
template <class Scalar>
double inclusion_flatness(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& u, int i);

/// Sum of w |u|^2, square-rooted.
template <class Scalar>
double mass_norm(const DiscreteOperatorT<Scalar>& opr, const Vec<Scalar>& u);

/// Samples a function of position onto the dofs.
template <class Scalar, class F>
Vec<Scalar> sample(const DiscreteOperatorT<Scalar>& opr, F&& fn) {
  Vec<Scalar> v(opr.size());
  for (int i = 0; i < opr.size(); ++i) v(i) = fn(opr.location[i][0], opr.location[i][1]);
  return v;
}

/// Samples a source given separately on the matrix (fp) and the inclusions (fm). A Γ dof
/// carries both parts of the lumped mass, so its value is the mass-weighted blend.
template <class Scalar, class Fp, class Fm>
Vec<Scalar> sample_split(const DiscreteOperatorT<Scalar>& opr, Fp&& fp, Fm&& fm) {
  Vec<Scalar> v(opr.size());
  for (int i = 0; i < opr.size(); ++i) {
    double x = opr.location[i][0], y = opr.location[i][1];
    double wp = opr.w_plus(i), wm = opr.w_minus(i);
    Scalar acc(0.0);
    if (wp > 0) acc += wp * Scalar(fp(x, y));
    if (wm > 0) acc += wm * Scalar(fm(x, y));
    v(i) = acc / (wp + wm);
  }
  return v;
}

void write_spectrum_csv(std::ostream& os, const std::vector<double>& lambdas, const std::vector<double>& residuals);
template <class Scalar>
void write_matrix_triplets(std::ostream& os, const SparseMat<Scalar>& K);

}  // namespace hcspec
