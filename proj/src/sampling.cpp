#include "seqgibbs/sampling.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqgibbs/errors.hpp"

namespace seqgibbs {

namespace {

constexpr double kSymmetryTol = 1e-10;

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

// Upper tail probability Q(x) = P(Z > x), stable for all x.
inline double normal_upper_tail(double x) {
  return 0.5 * std::erfc(x * 0.7071067811865475244);
}

// Solves sum_i 1/(b + 2 lt_i) = 1 on (0, p] by bisection.
double solve_envelope_b(const Eigen::VectorXd& lambda_tilde) {
  const double p = static_cast<double>(lambda_tilde.size());
  auto g = [&](double b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda_tilde.size(); ++i)
      s += 1.0 / (b + 2.0 * lambda_tilde(i));
    return s - 1.0;
  };
  double lo = 0.0;
  double hi = p;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BinghamParams::BinghamParams(Eigen::MatrixXd A) : concentration(std::move(A)) {
  if (concentration.rows() != concentration.cols() || concentration.rows() < 2)
    throw std::invalid_argument("BinghamParams: concentration must be square, p >= 2");
  const double asym =
      (concentration - concentration.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol)
    throw std::invalid_argument("BinghamParams: concentration not symmetric within tolerance");
}

BinghamSampler::BinghamSampler(const BinghamParams& params,
                               std::uint64_t max_attempts)
    : max_attempts_(max_attempts) {
  // Guard accumulated asymmetry even for validated inputs.
  const Eigen::MatrixXd sym =
      0.5 * (params.concentration + params.concentration.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success)
    throw NumericalError("BinghamSampler: eigendecomposition failed");
  rotation_ = eig.eigenvectors();
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double lmax = values(values.size() - 1);
  const Eigen::Index p = values.size();
  Eigen::VectorXd lambda_tilde = (lmax - values.array()).max(0.0);
  b_ = solve_envelope_b(lambda_tilde);
  omega_ = 1.0 + (2.0 / b_) * lambda_tilde.array();
  inv_sqrt_omega_ = omega_.array().rsqrt();
  const double pd = static_cast<double>(p);
  log_bound_ = 0.5 * (b_ - pd) + 0.5 * pd * std::log(pd / b_);
}

BinghamSampler::BinghamSampler(const Eigen::MatrixXd& A,
                               std::uint64_t max_attempts)
    : BinghamSampler(BinghamParams(0.5 * (A + A.transpose())), max_attempts) {}

Eigen::VectorXd BinghamSampler::draw_raw(RngStream& rng,
                                         std::uint64_t* attempts) const {
  const Eigen::Index p = omega_.size();
  Eigen::VectorXd y(p);
  for (std::uint64_t attempt = 1; attempt <= max_attempts_; ++attempt) {
    for (Eigen::Index i = 0; i < p; ++i)
      y(i) = rng.normal() * inv_sqrt_omega_(i);
    y /= y.norm();
    double t = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) t += omega_(i) * y(i) * y(i);
    const double log_ratio = -0.5 * b_ * (t - 1.0) +
                             0.5 * static_cast<double>(p) * std::log(t) -
                             log_bound_;
    if (std::log(rng.uniform01()) < log_ratio) {
      if (attempts) *attempts += attempt;
      return rotation_ * y;
    }
  }
  throw NumericalError("BinghamSampler: rejection attempt cap exceeded (pathological concentration)");
}

UnitVector BinghamSampler::draw(RngStream& rng) const {
  Eigen::VectorXd w = draw_raw(rng);
  w /= w.norm();
  return UnitVector(std::move(w));
}

UnitVector sample_bingham(const BinghamParams& params, RngStream& rng) {
  return BinghamSampler(params).draw(rng);
}

UnitVector sample_acg(const Eigen::MatrixXd& inverse_covariance, RngStream& rng) {
  if (inverse_covariance.rows() != inverse_covariance.cols() ||
      inverse_covariance.rows() < 2)
    throw std::invalid_argument("sample_acg: matrix must be square, p >= 2");
  Eigen::LLT<Eigen::MatrixXd> llt(inverse_covariance);
  if (llt.info() != Eigen::Success)
    throw NumericalError("sample_acg: matrix not positive definite");
  const Eigen::Index p = inverse_covariance.rows();
  Eigen::VectorXd eps(p);
  for (Eigen::Index i = 0; i < p; ++i) eps(i) = rng.normal();
  // cov(z) = (L L')^{-1} for z = L'^{-1} eps
  Eigen::VectorXd z = llt.matrixU().solve(eps);
  z /= z.norm();
  return UnitVector(std::move(z));
}

double sample_truncated_normal_positive(double mean, double sd, RngStream& rng) {
  if (!(sd > 0.0))
    throw std::invalid_argument("sample_truncated_normal_positive: sd must be positive");
  if (!std::isfinite(mean))
    throw std::invalid_argument("sample_truncated_normal_positive: mean must be finite");
  const double alpha = -mean / sd;  // standardized truncation point
  const double u = rng.uniform01();
  double z;
  if (mean / sd >= -5.0) {
    const double phi_alpha = 1.0 - normal_upper_tail(alpha);
    const double prob = phi_alpha + u * (1.0 - phi_alpha);
    z = boost::math::quantile(kStdNormal, prob);
  } else {
    const double q_alpha = normal_upper_tail(alpha);
    if (q_alpha > 0.0) {
      z = boost::math::quantile(boost::math::complement(kStdNormal, (1.0 - u) * q_alpha));
    } else {
      // erfc underflow (mean/sd < -37.5): exponential tail approximation
      // Z - alpha | Z > alpha ~ Exp(alpha).
      z = alpha - std::log1p(-u) / alpha;
    }
  }
  const double x = mean + sd * z;
  return x > 0.0 ? x : std::numeric_limits<double>::min();
}

void MhConfig::validate() const {
  if (!(initial_step > 0.0))
    throw std::invalid_argument("MhConfig: initial_step must be positive");
  if (!(0.0 < window_low && window_low < window_high && window_high < 1.0))
    throw std::invalid_argument("MhConfig: need 0 < window_low < window_high < 1");
  if (adapt_every < 1 || burn_in < 0 || n_samples < 0 || thin < 1)
    throw std::invalid_argument("MhConfig: invalid counts");
  if (!(adapt_factor > 1.0))
    throw std::invalid_argument("MhConfig: adapt_factor must exceed 1");
}

MhResult adaptive_mh(const std::function<double(const Eigen::VectorXd&)>& log_density,
                     const Eigen::VectorXd& initial, const MhConfig& config,
                     RngStream& rng) {
  config.validate();
  if (!initial.allFinite())
    throw std::invalid_argument("adaptive_mh: initial state not finite");
  const Eigen::Index dim = initial.size();
  Eigen::VectorXd x = initial;
  double lp = log_density(x);
  if (std::isnan(lp)) throw NumericalError("adaptive_mh: log density NaN at a visited state");
  if (!std::isfinite(lp))
    throw std::invalid_argument("adaptive_mh: log density not finite at initial state");

  MhResult result;
  double step = config.initial_step;
  Eigen::VectorXd proposal(dim);

  auto try_move = [&](double current_step) -> bool {
    for (Eigen::Index i = 0; i < dim; ++i)
      proposal(i) = x(i) + current_step * rng.normal();
    const double lp_new = log_density(proposal);
    if (std::isnan(lp_new))
      throw NumericalError("adaptive_mh: log density NaN at a proposed state");
    if (std::log(rng.uniform01()) < lp_new - lp) {
      x = proposal;
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

  result.chain.resize(config.n_samples, dim);
  long accepted = 0;
  long proposals = 0;
  for (int s = 0; s < config.n_samples; ++s) {
    for (int k = 0; k < config.thin; ++k) {
      if (try_move(step)) ++accepted;
      ++proposals;
    }
    result.chain.row(s) = x;
  }
  result.acceptance_rate =
      proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  result.final_step = step;
  return result;
}

}  // namespace seqgibbs
