#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hcspec/fdm.hpp"
#include "hcspec/limitspec.hpp"

namespace hcspec {

/// Real operator for any real closure and geometry (radial media use n = round(1/h) cells).
/// epsilon = 0 yields the split operator for the limit solvers.
DiscreteOperator discretize(const ContrastMedium& medium);

/// Limit spectrum in (0, lambda_max] from the most exact source available: closed forms and
/// transfer matrices in 1D, the sphere equation for the radial Dirichlet ball, otherwise the
/// limit pencil scan.
std::vector<double> reference_limit_spectrum(const ContrastMedium& medium, double lambda_max);

struct ConvergeOptions {
  std::vector<double> epsilons;  ///< geometric, ratio <= 1/2, at least 4 values
  int branch_count = 3;
  double growth_threshold = 1.5;  ///< λ(ε_{i+1}) / λ(ε_i) above this marks a divergent branch
  double grid_tolerance = 1e-3;   ///< relative floor of the pass band
  std::optional<std::vector<double>> limit_values;  ///< overrides reference_limit_spectrum
};

struct BranchReport {
  int branch = 0;  ///< 1-based
  std::vector<double> epsilons;
  std::vector<double> lambdas;
  bool divergent = false;
  double growth = 0.0;  ///< largest consecutive ratio
  bool ordering_swap = false;
  double lambda0 = 0.0;       ///< affine extrapolation
  double slope = 0.0;
  double fit_residual = 0.0;  ///< RMS misfit of the affine fit
  double fit_relative = 0.0;  ///< fit_residual / max |slope ε|
  std::optional<double> limit_value;
  double error = 0.0;  ///< |λ0 - limit| / limit
  bool pass = false;
  std::vector<double> flatness;  ///< sup |u - mean| / ε per ε, sup-normalized eigenvector
  double flatness_ratio = 0.0;   ///< max / min of the constants above
};

struct ConvergenceReport {
  std::vector<BranchReport> branches;
  bool pass = false;  ///< every bounded branch passed
};

/// Affine ε-extrapolation of the lowest eigenvalues against the limit spectrum.
ConvergenceReport run_converge(const ContrastMedium& medium, const ConvergeOptions& opt);

/// Least-squares fit y = c0 + c1 x; returns {c0, c1, rms residual}.
std::array<double, 3> affine_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hcspec
