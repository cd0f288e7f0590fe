#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "seqgibbs/calibration.hpp"
#include "seqgibbs/gibbs.hpp"
#include "seqgibbs/pca.hpp"
#include "seqgibbs/synthetic.hpp"

namespace seqgibbs {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double half_width() const { return 0.5 * (hi - lo); }
};

/// Equal-tailed interval from draws via type-1 sample quantiles at
/// alpha/2 and 1 - alpha/2.
Interval equal_tailed_interval(std::vector<double> draws, double alpha);

double antipodal_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Calibration hooks for the mean/variance model; stage estimates are
/// the sample mean and the sequential (population) variance.
SequentialCalibrationModel make_meanvar_calibration_model(const Eigen::VectorXd& data);

/// Calibration hooks for the sequential Bingham PCA posterior of the
/// given data (centered covariance); metric is the antipodal geodesic.
SequentialCalibrationModel make_pca_calibration_model(const Eigen::MatrixXd& X, int J);

struct GridProbe {
  double eta = 0.0;
  double sigma2_coverage = 0.0;
};

struct MeanVarCoverageOptions {
  std::string generator = "gaussian";  // gaussian | t5 | skew_normal | gumbel
  std::string method = "sequential_gibbs";  // or joint_gibbs
  int n = 1000;
  int replicates = 500;
  double alpha = 0.05;
  CalibrationConfig calibration;
  MhConfig mh;
  double joint_eta = 0.0;  // 0 = tune on the sigma2-coverage grid
  int tune_replicates = 200;
  int grid_points_per_decade = 40;
  double grid_eta_min = 1e-3;
  double grid_eta_max = 1e3;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct MeanVarCoverageResult {
  CoverageReport report;
  double joint_eta = 0.0;           // selected (joint method only)
  std::vector<GridProbe> probes;    // grid points actually evaluated
};

MeanVarCoverageResult run_meanvar_coverage(const MeanVarCoverageOptions& options);

struct PcaCoverageOptions {
  std::string generator = "mvn_diag";  // mvn_diag | mvt5_diag
  std::string method = "sequential_gibbs";  // or bootstrap
  int n = 100;
  int p = 25;
  int components = 5;
  int replicates = 200;
  double alpha = 0.05;
  CalibrationConfig calibration;
  std::uint64_t seed = 0;
  int threads = 1;
};

CoverageReport run_pca_coverage(const PcaCoverageOptions& options);

struct Prop1Options {
  int n = 20000;
  int p = 10;
  int components = 5;
  int draws = 10000;
  double eta = 1.0;
  std::uint64_t seed = 0;
};

struct Prop1Result {
  Eigen::VectorXd lambda_hat;       // realized spectrum the targets use
  std::vector<BvmReport> stages;    // per-component diagnostic
  double max_cross_correlation = 0.0;
};

/// Gaussian-limit check: per-draw tau-mapped chart coordinates of each
/// component against the inverse-eigengap covariance targets, plus
/// cross-component correlations.
Prop1Result run_prop1_check(const Prop1Options& options);

struct PcaFitOptions {
  int components = 5;
  bool center = true;
  bool scale = true;
  CalibrationConfig calibration;
  int sample_draws = 0;   // 0 -> calibration.posterior_draws
  int score_draws = 100;  // frames used for the posterior score table
  std::uint64_t seed = 0;
};

struct PcaFitResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd frame;  // fitted components, p x J
  SequentialCalibrationResult calibration;
  std::vector<double> credible_radii;  // at the calibrated etas
  Eigen::MatrixXd sample_frames;       // draws x (p*J), column-major frames
  Eigen::MatrixXd scores;              // (score_draws*n) x (J+2): draw, row, z_1..z_J
};

PcaFitResult run_pca_fit(const Eigen::MatrixXd& X, const PcaFitOptions& options);

struct PcrFitOptions {
  int components = 5;
  bool center = true;
  bool scale = true;
  CalibrationConfig calibration;
  PcrPriors priors;
  int sample_draws = 0;  // 0 -> calibration.posterior_draws
  std::uint64_t seed = 0;
};

struct PcrFitResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd frame;
  SequentialCalibrationResult calibration;
  PcrDraws draws;
  std::vector<Interval> coefficient_intervals;
  Eigen::VectorXd coefficient_means;
  Interval sigma2_interval;
};

PcrFitResult run_pcr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                         const PcrFitOptions& options);

/// Indices of one representative row per k-means cluster of the
/// response (seed-controlled Lloyd iterations, capped).
std::vector<int> kmeans_representatives(const Eigen::VectorXd& response, int k,
                                        int max_iters, RngStream& rng);

}  // namespace seqgibbs
