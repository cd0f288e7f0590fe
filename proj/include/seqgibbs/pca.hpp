#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "seqgibbs/geometry.hpp"
#include "seqgibbs/rng.hpp"
#include "seqgibbs/sampling.hpp"

namespace seqgibbs {

/// Full eigendecomposition with values sorted descending and each
/// eigenvector's sign fixed by the largest-magnitude-entry convention.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenSystem eigensystem(const Eigen::MatrixXd& symmetric);

struct ColumnStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;  // population standard deviations
};

struct CovarianceResult {
  Eigen::MatrixXd sigma;  // X'X/n after the requested preprocessing
  ColumnStats stats;
};

/// Empirical covariance X'X/n with optional column centering and unit
/// (population) variance scaling. Errors on a zero-variance column when
/// scaling is requested.
CovarianceResult empirical_covariance(const Eigen::MatrixXd& X, bool center,
                                      bool scale);

struct FittedComponents {
  Eigen::MatrixXd frame;        // p x J, sign-fixed
  Eigen::VectorXd eigenvalues;  // all p, descending
};

/// Sequentially fits J components: at stage j, the leading eigenvector
/// of N_{<j}' Sigma N_{<j} mapped back through the null space basis.
/// Refuses spectra whose top J+1 eigenvalues are not separated beyond
/// gap_tol_factor * lambda_1.
FittedComponents fit_components(const Eigen::MatrixXd& sigma_hat, int J,
                                double gap_tol_factor = 1e-10);

/// Top-J eigenvector frame from a single eigendecomposition; equals
/// fit_components(...).frame and is used on resampling hot paths.
Eigen::MatrixXd leading_eigenvectors(const Eigen::MatrixXd& sigma_hat, int J);

/// Sequential Bingham posterior over the first J components: at stage j
/// the conditional of w_j given v_{<j} is Bingham with concentration
/// n eta_j N_{<j}' Sigma N_{<j}. Immutable and shareable across threads;
/// each draw owns its RngStream.
class SequentialBinghamPosterior {
 public:
  SequentialBinghamPosterior(Eigen::MatrixXd sigma_hat, int n,
                             std::vector<double> etas);

  const Eigen::MatrixXd& sigma_hat() const { return sigma_hat_; }
  int n() const { return n_; }
  const std::vector<double>& etas() const { return etas_; }
  int stages() const { return static_cast<int>(etas_.size()); }
  Eigen::Index dim() const { return sigma_hat_.rows(); }

  /// Per-stage byproducts of one joint draw, used by the Gaussian-limit
  /// diagnostics: hemisphere-chart coordinates of each sampled w_j and
  /// of the conditional minimizer given the realized prefix.
  struct Detailed {
    Eigen::MatrixXd frame;
    std::vector<Eigen::VectorXd> chart_coords;
    std::vector<Eigen::VectorXd> minimizer_chart_coords;
  };

  Eigen::MatrixXd sample_raw(RngStream& rng, int up_to_stage = -1) const;
  Detailed sample_detailed(RngStream& rng) const;

 private:
  Eigen::MatrixXd sigma_hat_;
  int n_ = 0;
  std::vector<double> etas_;
  std::shared_ptr<const BinghamSampler> stage1_;  // concentration is fixed
};

/// Algorithm-1 draw: stage-wise Bingham sampling through null space
/// bases, each w_j sign-flipped so its first coordinate is nonnegative.
OrthonormalFrame sample_components(const SequentialBinghamPosterior& posterior,
                                   RngStream& rng);

/// Limiting covariance of the stage-`comp` (0-based) chart coordinates:
/// (2 eta)^{-1} diag{ 1/(lambda_comp - lambda_i) : i > comp }.
Eigen::MatrixXd prop1_limit_covariance(const Eigen::VectorXd& lambdas, int comp,
                                       double eta);

Eigen::MatrixXd posterior_scores(const Eigen::MatrixXd& X,
                                 const OrthonormalFrame& V);

struct PcrPriors {
  double prior_scale = 1.0;  // beta | sigma2 ~ N(0, sigma2 prior_scale^2 I)
  double ig_shape = 1.0;     // 1/sigma2 ~ Gamma(ig_shape, ig_rate)
  double ig_rate = 1.0;
  void validate() const;
};

/// Normal-inverse-gamma conditional for (beta, sigma2) given components.
struct PcrPosterior {
  Eigen::MatrixXd V;
  Eigen::VectorXd beta_mean;
  Eigen::MatrixXd beta_precision;       // Z'Z + I/prior_scale^2
  Eigen::MatrixXd beta_precision_chol;  // lower factor
  double ig_shape = 0.0;
  double ig_rate = 0.0;
};

PcrPosterior pcr_condition(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                           const Eigen::MatrixXd& V, const PcrPriors& priors);

struct PcrDraws {
  std::vector<Eigen::MatrixXd> frames;
  Eigen::MatrixXd beta;     // n_draws x J
  Eigen::VectorXd sigma2;   // n_draws
};

/// Joint draws of (V, beta, sigma2): V from the sequential Bingham
/// posterior, then (sigma2, beta) exactly from the conjugate conditional.
PcrDraws pcr_joint_sample(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                          const SequentialBinghamPosterior& posterior,
                          const PcrPriors& priors, int n_draws, RngStream& rng);

}  // namespace seqgibbs
