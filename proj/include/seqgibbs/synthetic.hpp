#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "seqgibbs/rng.hpp"

namespace seqgibbs {

/// Names: gaussian, t5, skew_normal, gumbel (univariate, p ignored);
/// mvn_diag, mvt5_diag (rows from a diagonal-covariance spectrum).
struct GeneratorSpec {
  std::string name = "gaussian";
  int n = 0;
  int p = 1;
};

struct SyntheticData {
  Eigen::MatrixXd X;
  std::vector<std::string> truth_names;
  std::vector<Eigen::VectorXd> truths;
  Eigen::VectorXd spectrum;  // multivariate generators only
};

bool generator_is_univariate(const std::string& name);

/// Eigenvalue spectrum with head (10, 9, 8, 7, 6) explaining 90% of the
/// total variance and a linearly spaced descending tail rescaled to the
/// remaining 10%. Requires p >= 6.
Eigen::VectorXd table2_spectrum(int p);

/// Draws a dataset and returns it with the analytic truth of every
/// tracked parameter (mean/variance for univariate generators, leading
/// eigenvectors for the multivariate ones).
SyntheticData generate_synthetic(const GeneratorSpec& spec, RngStream& rng);

}  // namespace seqgibbs
