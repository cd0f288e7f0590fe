#include "seqgibbs/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqgibbs/errors.hpp"

namespace seqgibbs {

namespace {

inline double normal_lower(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

}  // namespace

void SequentialModel::validate() const {
  if (stages.empty())
    throw std::invalid_argument("SequentialModel: need at least one stage");
  if (etas.size() != stages.size())
    throw std::invalid_argument("SequentialModel: one eta per stage required");
  for (double e : etas)
    if (!(e > 0.0))
      throw std::invalid_argument("SequentialModel: etas must be positive");
  for (const auto& stage : stages)
    if (stage.dim < 1)
      throw std::invalid_argument("SequentialModel: stage dimension must be >= 1");
}

Eigen::Index SequentialModel::total_dim() const {
  Eigen::Index d = 0;
  for (const auto& stage : stages) d += stage.dim;
  return d;
}

Eigen::MatrixXd sequential_sample(const SequentialModel& model, int n_draws,
                                  RngStream& rng) {
  model.validate();
  if (n_draws < 0)
    throw std::invalid_argument("sequential_sample: n_draws must be >= 0");
  for (std::size_t j = 0; j < model.stages.size(); ++j) {
    if (!model.stages[j].conditional_sampler)
      throw std::invalid_argument(
          "sequential_sample: stage " + std::to_string(j + 1) +
          " lacks an exact conditional sampler (unsupported model)");
  }
  const Eigen::Index total = model.total_dim();
  Eigen::MatrixXd draws(n_draws, total);
  std::vector<Eigen::VectorXd> prefix;
  prefix.reserve(model.stages.size());
  for (int d = 0; d < n_draws; ++d) {
    prefix.clear();
    Eigen::Index offset = 0;
    for (const auto& stage : model.stages) {
      Eigen::VectorXd theta = stage.conditional_sampler(prefix, rng);
      if (theta.size() != stage.dim)
        throw NumericalError("sequential_sample: stage sampler returned wrong dimension");
      draws.row(d).segment(offset, stage.dim) = theta;
      offset += stage.dim;
      prefix.push_back(std::move(theta));
    }
  }
  return draws;
}

MeanVarDraws meanvar_sequential_sample(const Eigen::VectorXd& data,
                                       double eta_mu, double eta_var,
                                       int n_draws, RngStream& rng) {
  const Eigen::Index n = data.size();
  if (n < 2) throw std::invalid_argument("meanvar_sequential_sample: need n >= 2");
  if (!(eta_mu > 0.0) || !(eta_var > 0.0))
    throw std::invalid_argument("meanvar_sequential_sample: etas must be positive");
  if (n_draws < 0)
    throw std::invalid_argument("meanvar_sequential_sample: n_draws must be >= 0");
  const double nd = static_cast<double>(n);
  const double mean = data.mean();
  const double m2 = data.squaredNorm() / nd;
  const double mu_sd = 1.0 / std::sqrt(nd * eta_mu);
  const double var_sd = 1.0 / std::sqrt(nd * eta_var);
  MeanVarDraws out;
  out.mu.resize(n_draws);
  out.sigma2.resize(n_draws);
  for (int d = 0; d < n_draws; ++d) {
    const double mu = mean + mu_sd * rng.normal();
    const double s2 = m2 - 2.0 * mu * mean + mu * mu;  // (1/n) sum (x_i - mu)^2
    out.mu(d) = mu;
    out.sigma2(d) = sample_truncated_normal_positive(s2, var_sd, rng);
  }
  return out;
}

MeanVarJointDensity::MeanVarJointDensity(const Eigen::VectorXd& data, double eta)
    : eta_(eta) {
  if (data.size() < 2)
    throw std::invalid_argument("MeanVarJointDensity: need n >= 2");
  if (!data.allFinite())
    throw std::invalid_argument("MeanVarJointDensity: data must be finite");
  if (!(eta > 0.0))
    throw std::invalid_argument("MeanVarJointDensity: eta must be positive");
  n_ = static_cast<double>(data.size());
  s1_ = data.sum();
  s2_ = data.array().square().sum();
  s3_ = data.array().cube().sum();
  s4_ = data.array().square().square().sum();
}

double MeanVarJointDensity::operator()(double mu, double sigma2) const {
  if (!(sigma2 > 0.0)) return -std::numeric_limits<double>::infinity();
  const double a = s2_ - 2.0 * mu * s1_ + n_ * mu * mu;  // sum (x_i - mu)^2
  const double b = s4_ - 4.0 * mu * s3_ + 6.0 * mu * mu * s2_ -
                   4.0 * mu * mu * mu * s1_ + n_ * mu * mu * mu * mu;
  const double quartic = n_ * sigma2 * sigma2 - 2.0 * sigma2 * a + b;
  return -0.5 * eta_ * (a + quartic);
}

MhResult meanvar_joint_mh(const Eigen::VectorXd& data, double eta,
                          const MhConfig& config, RngStream& rng) {
  config.validate();
  const MeanVarJointDensity logd(data, eta);
  const double nd = logd.n();
  const double mean = data.mean();
  double mu = mean;
  double sigma2 = std::max((data.array() - mean).square().sum() / nd, 1e-12);
  double lp = logd(mu, sigma2);

  MhResult result;
  double step = config.initial_step;

  auto try_move = [&](double current_step) -> bool {
    const double mu_new = mu + current_step * rng.normal();
    const double s2_new =
        sample_truncated_normal_positive(sigma2, current_step, rng);
    const double lp_new = logd(mu_new, s2_new);
    if (std::isnan(lp_new))
      throw NumericalError("meanvar_joint_mh: NaN log density");
    // Hastings correction for the positive-truncated sigma2 proposal.
    const double correction = std::log(normal_lower(sigma2 / current_step)) -
                              std::log(normal_lower(s2_new / current_step));
    if (std::log(rng.uniform01()) < lp_new - lp + correction) {
      mu = mu_new;
      sigma2 = s2_new;
      lp = lp_new;
      return true;
    }
    return false;
  };

  int window_accepts = 0;
  int window_count = 0;
  for (int i = 0; i < config.burn_in; ++i) {
    if (try_move(step)) ++window_accepts;
    if (++window_count == config.adapt_every) {
      const double rate = static_cast<double>(window_accepts) / window_count;
      result.window_rates.push_back(rate);
      if (rate > config.window_high)
        step *= config.adapt_factor;
      else if (rate < config.window_low)
        step /= config.adapt_factor;
      window_accepts = 0;
      window_count = 0;
    }
  }

  result.chain.resize(config.n_samples, 2);
  long accepted = 0;
  long proposals = 0;
  for (int s = 0; s < config.n_samples; ++s) {
    for (int k = 0; k < config.thin; ++k) {
      if (try_move(step)) ++accepted;
      ++proposals;
    }
    result.chain(s, 0) = mu;
    result.chain(s, 1) = sigma2;
  }
  result.acceptance_rate =
      proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  result.final_step = step;
  return result;
}

BvmReport bvm_diagnostic(const Eigen::MatrixXd& chart_samples,
                         const Eigen::VectorXd& minimizer, int n,
                         const Eigen::MatrixXd& target_cov, double floor) {
  const Eigen::Index m = chart_samples.rows();
  const Eigen::Index d = chart_samples.cols();
  if (m < 2) throw std::invalid_argument("bvm_diagnostic: need at least 2 samples");
  if (minimizer.size() != d)
    throw std::invalid_argument("bvm_diagnostic: minimizer dimension mismatch");
  if (target_cov.rows() != d || target_cov.cols() != d)
    throw std::invalid_argument("bvm_diagnostic: target covariance shape mismatch");
  if (n < 1) throw std::invalid_argument("bvm_diagnostic: n must be >= 1");

  const double scale = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd tau = scale * (chart_samples.rowwise() - minimizer.transpose());
  const Eigen::RowVectorXd tau_mean = tau.colwise().mean();
  tau.rowwise() -= tau_mean;
  BvmReport report;
  report.empirical_cov = (tau.transpose() * tau) / static_cast<double>(m - 1);
  report.target_cov = target_cov;
  report.n = n;
  report.draws = static_cast<int>(m);
  double worst = 0.0;
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const double t = target_cov(r, c);
      const double e = report.empirical_cov(r, c);
      const double err =
          std::abs(t) > floor ? std::abs(e - t) / std::abs(t) : std::abs(e - t);
      worst = std::max(worst, err);
    }
  }
  report.max_relative_error = worst;
  return report;
}

}  // namespace seqgibbs
