#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "seqgibbs/rng.hpp"
#include "seqgibbs/sampling.hpp"

namespace seqgibbs {

/// One stage of a sequential Gibbs model. The conditional sampler draws
/// theta_j given the realized prefix theta_{<j}; the loss and minimizer
/// hooks are optional and used only by diagnostics. Data enters through
/// the closures.
struct SequentialStage {
  Eigen::Index dim = 1;
  std::function<Eigen::VectorXd(const std::vector<Eigen::VectorXd>& prefix,
                                RngStream& rng)>
      conditional_sampler;
  std::function<double(const Eigen::VectorXd& theta,
                       const std::vector<Eigen::VectorXd>& prefix)>
      loss;
  std::function<Eigen::VectorXd(const std::vector<Eigen::VectorXd>& prefix)>
      minimizer;
};

/// Ordered stages plus their precision hyperparameters. The joint law is
/// the product of the per-stage conditionals, executed in input order.
struct SequentialModel {
  std::vector<SequentialStage> stages;
  std::vector<double> etas;
  void validate() const;
  Eigen::Index total_dim() const;
};

/// Draws n_draws joint samples; each row is the concatenation of the
/// stage draws theta_1, ..., theta_J in stage order. Every stage must
/// provide an exact conditional sampler; models without one are refused
/// (running a naive within-Gibbs MH chain instead would target a
/// weighted version of the posterior).
Eigen::MatrixXd sequential_sample(const SequentialModel& model, int n_draws,
                                  RngStream& rng);

struct MeanVarDraws {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma2;
};

/// Exact sequential sampler for the mean/variance model:
///   mu     ~ N(sample mean, 1/(n eta_mu))
///   sigma2 ~ N_(0,inf)( (1/n) sum (x_i - mu)^2, 1/(n eta_var) )
MeanVarDraws meanvar_sequential_sample(const Eigen::VectorXd& data,
                                       double eta_mu, double eta_var,
                                       int n_draws, RngStream& rng);

/// Combined-loss Gibbs posterior density for (mu, sigma2):
///   exp( -(eta/2) sum [ (x_i-mu)^2 + {sigma2-(x_i-mu)^2}^2 ] ),
/// evaluated in O(1) from the first four power sums of the data.
class MeanVarJointDensity {
 public:
  MeanVarJointDensity(const Eigen::VectorXd& data, double eta);
  double operator()(double mu, double sigma2) const;
  double n() const { return n_; }

 private:
  double n_, s1_, s2_, s3_, s4_, eta_;
};

/// Adaptive MH chain for the combined-loss posterior with proposals
/// mu' ~ N(mu, step^2) and sigma2' ~ N_+(sigma2, step^2) (the truncated
/// proposal carries its Hastings correction). Chain columns: mu, sigma2.
MhResult meanvar_joint_mh(const Eigen::VectorXd& data, double eta,
                          const MhConfig& config, RngStream& rng);

/// Centered/scaled posterior covariance versus a Gaussian-limit target.
struct BvmReport {
  Eigen::MatrixXd empirical_cov;
  Eigen::MatrixXd target_cov;
  double max_relative_error = 0.0;
  int n = 0;
  int draws = 0;
};

/// Maps chart samples through tau(s) = sqrt(n) (s - minimizer), forms
/// their empirical covariance, and compares entrywise against
/// target_cov: relatively where |target| exceeds `floor`, absolutely
/// elsewhere.
BvmReport bvm_diagnostic(const Eigen::MatrixXd& chart_samples,
                         const Eigen::VectorXd& minimizer, int n,
                         const Eigen::MatrixXd& target_cov,
                         double floor = 1e-6);

}  // namespace seqgibbs
