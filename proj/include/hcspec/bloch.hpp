#pragma once

#include <iosfwd>
#include <vector>

#include "hcspec/exact1d.hpp"
#include "hcspec/medium.hpp"

namespace hcspec {

enum class BandSolver {
  automatic,  ///< 1D: transfer matrices (and the closed-form limit curve on the symmetric cell); 2D: fdm + limitspec
  fdm,        ///< finite differences for ε > 0 and the limit pencil scan for ε = 0, in any dimension
};

struct BandCrossing {
  int eps_index = 0;
  int k_index = 0;
  int branch = 0;  ///< 1-based lower branch of the near-touching pair
};

/// λ[e][j][n]: branch n + 1 at Bloch vector k_grid[j] and contrast epsilons[e].
struct BandStructure {
  std::vector<std::vector<double>> k_grid;
  std::vector<double> epsilons;
  int branch_count = 0;
  std::vector<std::vector<std::vector<double>>> lambda;
  std::vector<BandCrossing> crossings;
  std::vector<DispersionPoint> points() const;
};

struct BandGap {
  double epsilon = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Band structure of the medium's periodic cell (its own boundary condition is ignored).
/// ε = 0 entries are computed by the limit solvers.
BandStructure dispersion_sweep(const ContrastMedium& medium, const std::vector<std::vector<double>>& k_grid,
                               int branch_count, const std::vector<double>& epsilons,
                               BandSolver solver = BandSolver::automatic);

/// Intervals (max_k λ_n, min_k λ_{n+1}) that are open, at the given ε. Gaps narrower than
/// min_width are dropped: a grid that must avoid k = 0 leaves artificial slits there.
std::vector<BandGap> gap_report(const BandStructure& bands, double epsilon, double min_width = 0.0);

/// Rows `k,epsilon,branch,lambda,omega`; a 2D k is written as `kx;ky`.
void write_bands_csv(std::ostream& os, const BandStructure& bands, bool header = true);
/// Rows `epsilon,gap_lo,gap_hi`.
void write_gaps_csv(std::ostream& os, const std::vector<BandGap>& gaps, bool header = true);

}  // namespace hcspec
