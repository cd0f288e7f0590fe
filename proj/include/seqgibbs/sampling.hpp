#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "seqgibbs/geometry.hpp"
#include "seqgibbs/rng.hpp"

namespace seqgibbs {

/// Symmetric concentration matrix of a Bingham density exp(w'Aw) on the
/// sphere. Validated to be symmetric within 1e-10.
struct BinghamParams {
  Eigen::MatrixXd concentration;
  explicit BinghamParams(Eigen::MatrixXd A);
};

/// Exact rejection sampler for the Bingham distribution with an angular
/// central Gaussian envelope.
///
/// Construction eigendecomposes A = Q L Q', shifts to the canonical form
/// exp(-w' Lt w) with Lt = (l_max I - L) >= 0 (a shift by c I leaves the
/// distribution unchanged), and solves sum_i 1/(b + 2 lt_i) = 1 for the
/// envelope parameter b by bisection on (0, p]. Draws cost O(p) per
/// attempt plus one O(p^2) rotation; the decomposition is reused across
/// attempts and draws.
class BinghamSampler {
 public:
  explicit BinghamSampler(const BinghamParams& params,
                          std::uint64_t max_attempts = 10'000'000);
  /// Symmetrizes A as (A + A')/2 before decomposing.
  explicit BinghamSampler(const Eigen::MatrixXd& A,
                          std::uint64_t max_attempts = 10'000'000);

  /// One exact draw; `attempts` (if given) accumulates the number of
  /// envelope proposals consumed.
  Eigen::VectorXd draw_raw(RngStream& rng, std::uint64_t* attempts = nullptr) const;
  UnitVector draw(RngStream& rng) const;

  double envelope_b() const { return b_; }

 private:
  Eigen::MatrixXd rotation_;      // Q, columns = eigenvectors of A
  Eigen::VectorXd omega_;         // 1 + (2/b) lt_i, rotated-envelope weights
  Eigen::VectorXd inv_sqrt_omega_;
  double b_ = 0.0;
  double log_bound_ = 0.0;        // log of the envelope constant at t* = p/b
  std::uint64_t max_attempts_ = 0;
};

/// One exact draw from the density exp(w'Aw) on S^{p-1}.
UnitVector sample_bingham(const BinghamParams& params, RngStream& rng);

/// Angular central Gaussian: z ~ N(0, inverse_covariance^{-1}), returns
/// z/||z||. Errors on non-positive-definite input.
UnitVector sample_acg(const Eigen::MatrixXd& inverse_covariance, RngStream& rng);

/// Exact draw from N(mean, sd^2) conditioned to (0, inf), by inverse CDF
/// with a complementary-error-function formulation in the deep tail.
double sample_truncated_normal_positive(double mean, double sd, RngStream& rng);

/// Adaptive random-walk Metropolis-Hastings settings. During burn-in the
/// scalar proposal step is multiplied or divided by adapt_factor whenever
/// the acceptance rate over the last adapt_every proposals leaves
/// [window_low, window_high]; adaptation freezes after burn-in.
struct MhConfig {
  double initial_step = 1.0;
  double window_low = 0.25;
  double window_high = 0.50;
  int adapt_every = 100;
  int burn_in = 2000;
  int n_samples = 4000;
  int thin = 1;
  double adapt_factor = 1.5;
  void validate() const;
};

struct MhResult {
  Eigen::MatrixXd chain;             // n_samples x dim, post burn-in
  double acceptance_rate = 0.0;      // post burn-in proposals
  double final_step = 0.0;
  std::vector<double> window_rates;  // per-window rates seen during burn-in
};

MhResult adaptive_mh(const std::function<double(const Eigen::VectorXd&)>& log_density,
                     const Eigen::VectorXd& initial, const MhConfig& config,
                     RngStream& rng);

}  // namespace seqgibbs
