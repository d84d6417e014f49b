#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "hcspec/medium.hpp"

namespace hcspec {

/// One homogeneous piece of a 1D eigenfunction: with t = x - x0,
/// u = A cos(kappa t) + B sin(kappa t), or u = A + B t when kappa = 0.
struct SegmentWave {
  double x0 = 0.0;
  double x1 = 0.0;
  double kappa = 0.0;
  std::complex<double> A{0.0};
  std::complex<double> B{0.0};

  std::complex<double> operator()(double x) const;
  /// Exact max of |u| over [x0, x1] and the point where it is attained.
  std::pair<double, double> sup() const;
};

class Eigenfunction1D {
 public:
  Eigenfunction1D() = default;
  explicit Eigenfunction1D(std::vector<SegmentWave> segments) : segments_(std::move(segments)) {}

  std::complex<double> operator()(double x) const;
  const std::vector<SegmentWave>& segments() const { return segments_; }
  double sup_norm() const;
  /// Point where |u| attains its maximum.
  double argmax() const;
  void scale(std::complex<double> factor);
  /// n + 1 equispaced samples over the whole interval.
  std::vector<std::pair<double, std::complex<double>>> sample(int n) const;
  /// Values at grid points (real part).
  Eigen::VectorXd at(const std::vector<double>& xs) const;

 private:
  std::vector<SegmentWave> segments_;
};

struct ExactMode {
  double lambda = 0.0;
  double residual = 0.0;
  Eigenfunction1D u;
};

/// Roots of an exact characteristic function with the verification data of the scan.
struct ExactSpectrum {
  std::vector<ExactMode> modes;
  double epsilon = 0.0;
  BoundaryCondition bc = Dirichlet{};
  double lambda_max = 0.0;
  int expected_count = 0;  ///< eigenvalues in (0, lambda_max] predicted by the zero count
  int halvings = 0;        ///< scan-step halvings needed to reach the predicted count
  std::vector<std::pair<int, int>> clusters;
  std::vector<double> eigenvalues() const;
};

enum class CharKind { dirichlet_s2, neumann_s2, bloch, sphere, transfer };

/// Characteristic function F with F(lambda) = 0 exactly on the eigenvalues it describes.
struct CharacteristicFunction {
  CharKind kind = CharKind::dirichlet_s2;
  // Single-inclusion data: exterior lengths either side and inclusion length.
  double L1 = 0.0, L2 = 0.0, ell = 0.0;
  // Bloch cell: exterior length, inclusion length, cell period and wave number.
  double L_ext = 0.0, period = 2.0, k = 0.0;
  // Sphere radius.
  double a = 0.0;
  // Transfer-matrix data.
  Geometry1D geometry{-1.0, 1.0};
  double epsilon = 1.0;
  BoundaryCondition bc = Dirichlet{};

  static CharacteristicFunction dirichlet_s2(const Geometry1D& g);
  static CharacteristicFunction neumann_s2(const Geometry1D& g);
  /// Limit Bloch relation on the cell [-1, 1] with inclusion |x| < a.
  static CharacteristicFunction bloch_limit(double a, double k);
  static CharacteristicFunction sphere(double a);
  static CharacteristicFunction transfer(const Geometry1D& g, double epsilon, const BoundaryCondition& bc);

  /// Poles in the variable s = sqrt(lambda), up to s_max.
  std::vector<double> poles_s(double s_max) const;
  /// Evaluation in s = sqrt(lambda); no pole check.
  double value_s(double s) const;
};

constexpr double kTolPole = 1e-8;

/// F(lambda); throws PoleError within kTolPole (in sqrt(lambda) units) of a pole.
double eval_char(const CharacteristicFunction& cf, double lambda);

/// Total 2x2 transfer matrix of (u, sigma u') across the geometry at s = sqrt(lambda).
/// epsilon = 0 gives the limit medium with the inclusions collapsed to point masses.
Eigen::Matrix2d transfer_matrix(const Geometry1D& g, double epsilon, double s);

/// Exact number of eigenvalues below lambda (Neumann includes the zero eigenvalue).
/// Dirichlet and Neumann from the oscillation count; Bloch from the count on the
/// Dirichlet cell problem plus the sign of the dispersion function.
int exact_count_below(const Geometry1D& g, double epsilon, const BoundaryCondition& bc, double lambda);

struct TransferOptions {
  double scan_step = 0.0;  ///< step in s; 0 picks pi / (16 * sum of optical lengths)
  int max_halvings = 12;
};

/// Eigenvalues in (0, lambda_max] of the piecewise-constant operator via transfer matrices.
ExactSpectrum transfer_spectrum_1d(const Geometry1D& g, double epsilon, const BoundaryCondition& bc,
                                   double lambda_max, const TransferOptions& opt = {});

/// Same scan with epsilon >= 0 allowed (epsilon = 0 gives the exact 1D limit spectrum).
ExactSpectrum transfer_spectrum_limit_capable(const Geometry1D& g, double epsilon, const BoundaryCondition& bc,
                                              double lambda_max, const TransferOptions& opt = {});

/// Continued-fraction test that x = p/q with q bounded.
struct RationalityCertificate {
  bool rational = false;
  long long p = 0;
  long long q = 0;
  double residual = 0.0;  ///< |x - p/q| of the best convergent examined
};

RationalityCertificate rationality_certificate(double x, long long q_max = 1000000, double tol = 1e-12);

struct BranchedSpectrum {
  std::vector<ExactMode> s1;
  std::vector<ExactMode> s2;
  RationalityCertificate certificate;
  BoundaryCondition bc = Dirichlet{};
  std::vector<std::pair<double, double>> clusters;  ///< (lambda_i, lambda_j) closer than 1e-6
  std::vector<double> all() const;
};

/// Exact limit spectrum of a single inclusion with Dirichlet or Neumann outer condition.
BranchedSpectrum limit_spectrum_1d(const Geometry1D& g, const BoundaryCondition& bc, double lambda_max);

struct DispersionPoint {
  std::vector<double> k;
  int branch = 0;  ///< 1-based
  double lambda = 0.0;
  double omega = 0.0;
  double epsilon = 0.0;
};

constexpr double kBlochDeltaK = 1e-3;

/// Limit dispersion on the cell [-1, 1] with inclusion |x| < a (a = 0: no inclusion).
std::vector<DispersionPoint> bloch_limit_curve(double a, const std::vector<double>& k_grid, double lambda_max);

void write_modes_csv(std::ostream& os, const std::string& branch, const std::vector<ExactMode>& modes,
                     bool header = true);
void write_trace_csv(std::ostream& os, const Eigenfunction1D& u, int samples);

}  // namespace hcspec
