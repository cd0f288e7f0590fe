#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "seqgibbs/rng.hpp"
#include "seqgibbs/synthetic.hpp"

namespace seqgibbs {

/// Bootstrap-matching calibration settings.
struct CalibrationConfig {
  double alpha = 0.05;
  int bootstrap_replicates = 2000;  // B
  int posterior_draws = 4000;       // M per radius evaluation
  double eta0 = 1.0;
  enum class StepSchedule { kConstant, kInvT, kInvT2 };
  StepSchedule schedule = StepSchedule::kConstant;
  double step_size = 1.0;
  int max_iters = 50;
  double rel_tol = 0.01;
  double eta_rel_tol = 0.01;
  double eta_min = 1e-8;
  double eta_max = 1e8;
  /// Driver heuristic: seed eta0 per stage from one reduced-draw radius
  /// evaluation using the 1/sqrt(eta) scaling of Gaussian-limit radii.
  bool pilot_eta0 = true;

  void validate() const;
  double step_at(int t) const;  // epsilon_t, t zero-based
};

enum class TerminationReason { kRadiusTol, kEtaTol, kMaxIters, kBoundary };

std::string to_string(TerminationReason reason);

struct CalibrationIterate {
  int t = 0;
  double eta = 0.0;
  double credible_radius = 0.0;
  double relative_error = 0.0;  // signed (r - target)/target
};

struct CalibrationTrace {
  std::vector<CalibrationIterate> iterations;
  TerminationReason reason = TerminationReason::kMaxIters;
  double eta_final = 0.0;
  bool boundary_hit = false;
};

/// Type-1 empirical quantile: the ceil((1-alpha) N)-th order statistic,
/// clamped to [1, N]. Shared by every radius computation so radii are
/// bit-reproducible.
double radius_from_distances(std::vector<double> distances, double alpha);

struct BootstrapRadiusResult {
  double radius = 0.0;
  std::vector<double> distances;
};

/// Row-resamples X with replacement B times; d_b is the metric distance
/// between the full-data estimate and the replicate estimate. Returns
/// the (1-alpha) order statistic of {d_b}.
BootstrapRadiusResult bootstrap_radius(
    const std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>& estimator,
    const Eigen::MatrixXd& X, int B, double alpha,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& metric,
    RngStream& rng);

/// Same resampling pass shared by all stages of a sequential model: one
/// set of B replicates, per-stage distances and radii.
std::vector<BootstrapRadiusResult> bootstrap_radii_shared(
    const std::function<std::vector<Eigen::VectorXd>(const Eigen::MatrixXd&)>& estimate_all,
    const Eigen::MatrixXd& X, int B, double alpha,
    const std::function<double(int stage, const Eigen::VectorXd&, const Eigen::VectorXd&)>& metric,
    RngStream& rng);

/// (1-alpha) empirical quantile of metric(draw, center) over `count`
/// posterior draws at precision eta.
double credible_radius(
    const std::function<std::vector<Eigen::VectorXd>(double eta, int count, RngStream&)>& sampler,
    double eta, int count, const Eigen::VectorXd& center, double alpha,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& metric,
    RngStream& rng);

struct StochasticApproxResult {
  double eta = 0.0;
  CalibrationTrace trace;
};

/// Iterates eta_{t+1} = eta_t exp(delta_t / eps_t) with
/// delta_t = {r(eta_t) - target}/target until the relative radius error
/// or the relative eta change drops below tolerance, or max_iters is
/// reached. Each iteration evaluates radius_fn with a fresh
/// iteration-derived substream. Eta is kept inside
/// [eta_min, eta_max]; hitting the boundary terminates with a flag
/// rather than silently continuing.
StochasticApproxResult stochastic_approximation(
    const std::function<double(double eta, RngStream&)>& radius_fn,
    double target_radius, const CalibrationConfig& config, RngStream& rng);

/// Sequential model hooks for calibration. `estimate` returns the
/// sequential loss minimizers for all stages of one dataset;
/// `draw_stage` produces `count` draws of stage j (0-based) from the
/// posterior with hyperparameters etas[0..j]; `metric` is the distance
/// used for both bootstrap and credible radii (alignment included).
struct SequentialCalibrationModel {
  int num_stages = 0;
  std::function<std::vector<Eigen::VectorXd>(const Eigen::MatrixXd&)> estimate;
  std::function<std::vector<Eigen::VectorXd>(const std::vector<double>& etas,
                                             int stage, int count, RngStream&)>
      draw_stage;
  std::function<double(int stage, const Eigen::VectorXd&, const Eigen::VectorXd&)> metric;
};

struct SequentialCalibrationResult {
  std::vector<double> etas;
  std::vector<double> bootstrap_radii;
  std::vector<CalibrationTrace> traces;
};

/// Bootstrap radii for all stages once (shared replicates), then tunes
/// eta_j stage by stage with eta_{<j} frozen at their calibrated values.
SequentialCalibrationResult calibrate_sequential(
    const SequentialCalibrationModel& model, const Eigen::MatrixXd& X,
    const CalibrationConfig& config, RngStream& rng);

struct CoverageOutcome {
  std::vector<std::uint8_t> covered;  // one flag per tracked parameter
  std::vector<double> radii;
};

struct ParameterCoverage {
  std::string name;
  double coverage = 0.0;
  double std_error = 0.0;  // sqrt(c (1-c) / R)
  double mean_radius = 0.0;
  int replicates = 0;
};

struct CoverageReport {
  std::vector<ParameterCoverage> parameters;
  std::string generator;
  std::string method;
  int n = 0;
  int p = 0;
  int replicates = 0;
  std::uint64_t seed = 0;
};

/// Runs `method` on `replicates` independently generated datasets, each
/// with an RngStream derived from (master_seed, replicate), and
/// aggregates empirical coverage with Monte Carlo standard errors.
/// Replicates run in parallel; results are independent of the thread
/// count. A replicate failure aborts with its index and seed.
CoverageReport coverage_experiment(
    const std::function<SyntheticData(RngStream&)>& generator,
    const std::function<CoverageOutcome(const SyntheticData&, RngStream&)>& method,
    const std::vector<std::string>& parameter_names, int replicates,
    std::uint64_t master_seed, int threads);

}  // namespace seqgibbs
