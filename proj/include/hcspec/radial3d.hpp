#pragma once

#include <iosfwd>
#include <vector>

#include "hcspec/fdm.hpp"

namespace hcspec {

/// Spherically symmetric limit eigenfunction: 1 for r <= a, a sin(s(1-r)) / (r sin(s(1-a))) outside.
struct SphereMode {
  double a = 0.5;
  double lambda = 0.0;
  double residual = 0.0;  ///< |F(lambda)| of the sphere equation
  double operator()(double r) const;
  /// n + 1 equispaced samples (r, u) on [0, 1].
  std::vector<std::pair<double, double>> sample(int n) const;
};

struct SphereLimitSpectrum {
  std::vector<SphereMode> s2;
  std::vector<SphereMode> s1;  ///< always empty in the radial sector
  std::vector<std::pair<double, double>> clusters;
  std::vector<double> eigenvalues() const;
};

/// Roots in (0, lambda_max] of a sqrt(λ) cot(sqrt(λ)(1-a)) = λa²/3 - 1.
SphereLimitSpectrum sphere_limit_spectrum(double a, double lambda_max);

/// Radial finite-volume operator on n cells for epsilon > 0; Dirichlet or Neumann at r = 1.
DiscreteOperator radial_operator(double a, double epsilon, int n, const BoundaryCondition& bc = Dirichlet{});

/// Grid function of a sphere mode on the radial operator's dofs.
Eigen::VectorXd sample_on(const DiscreteOperator& opr, const SphereMode& mode);

void write_radial_csv(std::ostream& os, const SphereMode& mode, int samples);

}  // namespace hcspec
