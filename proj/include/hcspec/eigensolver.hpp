#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hcspec {

template <class Scalar>
using SparseMat = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

struct EigenOptions {
  int count = 1;
  double shift = 0.0;            ///< K - shift W must be positive definite
  double tol = 1e-8;             ///< inverse-iteration residual, relative
  int max_iterations = 500;
  bool deflate_constants = false;
  unsigned seed = 12345;
  int dense_threshold = 400;     ///< dense solver below this dimension
};

/// Eigenpairs of the pencil K v = lambda W v with W diagonal positive; vectors W-orthonormal.
template <class Scalar>
struct EigenResult {
  Eigen::VectorXd values;
  Mat<Scalar> vectors;
  Eigen::VectorXd residuals;  ///< backward errors ||K v - lambda W v|| / ((||K|| + |lambda| ||W||) ||v||)
  int iterations = 0;
};

/// The `count` smallest eigenpairs above the shift by shift-invert block subspace iteration
/// with Rayleigh-Ritz. With deflate_constants the constant vector is projected out.
template <class Scalar>
EigenResult<Scalar> smallest_pencil_eigs(const SparseMat<Scalar>& K, const Eigen::VectorXd& w, const EigenOptions& opt);

/// Number of eigenvalues of the pencil below lambda, from the LDL^T inertia of K - lambda W.
template <class Scalar>
int pencil_count_below(const SparseMat<Scalar>& K, const Eigen::VectorXd& w, double lambda);

/// Backward error of an eigenpair.
template <class Scalar>
double pencil_backward_error(const SparseMat<Scalar>& K, const Eigen::VectorXd& w, double lambda, const Vec<Scalar>& v);

/// Max absolute row sum.
template <class Scalar>
double inf_norm(const SparseMat<Scalar>& K);

}  // namespace hcspec
