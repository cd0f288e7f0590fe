#include "seqgibbs/pca.hpp"

#include <cmath>
#include <stdexcept>

#include "seqgibbs/errors.hpp"

namespace seqgibbs {

namespace {

void check_square_symmetric(const Eigen::MatrixXd& M, const char* who) {
  if (M.rows() != M.cols() || M.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric within tolerance");
}

// Leading eigenvector with the largest-magnitude-entry sign convention.
Eigen::VectorXd leading_eigvec(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed");
  Eigen::VectorXd w = eig.eigenvectors().col(sym.rows() - 1);  // ascending order
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  if (w(imax) < 0.0) w = -w;
  return w;
}

}  // namespace

EigenSystem eigensystem(const Eigen::MatrixXd& symmetric) {
  check_square_symmetric(symmetric, "eigensystem");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigensystem: decomposition failed");
  const Eigen::Index p = symmetric.rows();
  EigenSystem out;
  out.values.resize(p);
  out.vectors.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {  // flip ascending -> descending
    out.values(i) = eig.eigenvalues()(p - 1 - i);
    out.vectors.col(i) = eig.eigenvectors().col(p - 1 - i);
  }
  detail::fix_column_signs(out.vectors);
  return out;
}

CovarianceResult empirical_covariance(const Eigen::MatrixXd& X, bool center,
                                      bool scale) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n < 2) throw std::invalid_argument("empirical_covariance: need n >= 2");
  CovarianceResult out;
  out.stats.mean = X.colwise().mean();
  Eigen::MatrixXd W = X;
  if (center) W.rowwise() -= out.stats.mean.transpose();
  const Eigen::MatrixXd centered =
      center ? W : Eigen::MatrixXd(X.rowwise() - out.stats.mean.transpose());
  out.stats.sd =
      (centered.array().square().colwise().sum() / static_cast<double>(n))
          .sqrt();
  if (scale) {
    for (Eigen::Index c = 0; c < p; ++c) {
      if (out.stats.sd(c) <= 0.0)
        throw NumericalError("empirical_covariance: zero-variance column " +
                             std::to_string(c) + " cannot be scaled");
      W.col(c) /= out.stats.sd(c);
    }
  }
  out.sigma.noalias() = W.transpose() * W / static_cast<double>(n);
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose());
  return out;
}

FittedComponents fit_components(const Eigen::MatrixXd& sigma_hat, int J,
                                double gap_tol_factor) {
  check_square_symmetric(sigma_hat, "fit_components");
  const Eigen::Index p = sigma_hat.rows();
  if (J < 1 || J >= p)
    throw std::invalid_argument("fit_components: need 1 <= J < p");

  const EigenSystem es = eigensystem(sigma_hat);
  const double gap_tol = gap_tol_factor * std::abs(es.values(0));
  for (int j = 0; j < J; ++j) {
    if (es.values(j) - es.values(j + 1) <= gap_tol)
      throw NumericalError("fit_components: eigengap below tolerance at component " +
                           std::to_string(j + 1) + " (non-identifiable)");
  }

  FittedComponents out;
  out.eigenvalues = es.values;
  out.frame.resize(p, J);
  for (int j = 0; j < J; ++j) {
    const Eigen::MatrixXd N = detail::nullspace(out.frame.leftCols(j));
    const Eigen::MatrixXd deflated = N.transpose() * sigma_hat * N;
    out.frame.col(j) = N * leading_eigvec(deflated);
  }
  detail::fix_column_signs(out.frame);
  return out;
}

Eigen::MatrixXd leading_eigenvectors(const Eigen::MatrixXd& sigma_hat, int J) {
  const Eigen::Index p = sigma_hat.rows();
  if (J < 1 || J > p)
    throw std::invalid_argument("leading_eigenvectors: need 1 <= J <= p");
  const EigenSystem es = eigensystem(sigma_hat);
  return es.vectors.leftCols(J);
}

SequentialBinghamPosterior::SequentialBinghamPosterior(Eigen::MatrixXd sigma_hat,
                                                       int n,
                                                       std::vector<double> etas)
    : sigma_hat_(std::move(sigma_hat)), n_(n), etas_(std::move(etas)) {
  check_square_symmetric(sigma_hat_, "SequentialBinghamPosterior");
  if (n_ < 1)
    throw std::invalid_argument("SequentialBinghamPosterior: n must be >= 1");
  if (etas_.empty() || static_cast<Eigen::Index>(etas_.size()) >= sigma_hat_.rows())
    throw std::invalid_argument("SequentialBinghamPosterior: need 1 <= J < p");
  for (double e : etas_)
    if (!(e > 0.0))
      throw std::invalid_argument("SequentialBinghamPosterior: etas must be positive");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma_hat_,
                                                           Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-8 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff()))
    throw std::invalid_argument("SequentialBinghamPosterior: sigma_hat must be positive semidefinite");
  stage1_ = std::make_shared<const BinghamSampler>(
      Eigen::MatrixXd(static_cast<double>(n_) * etas_[0] * sigma_hat_));
}

Eigen::MatrixXd SequentialBinghamPosterior::sample_raw(RngStream& rng,
                                                       int up_to_stage) const {
  const int J = up_to_stage < 0 ? stages() : up_to_stage;
  const Eigen::Index p = dim();
  Eigen::MatrixXd V(p, J);
  for (int j = 0; j < J; ++j) {
    Eigen::VectorXd w;
    if (j == 0) {
      w = stage1_->draw_raw(rng);
      if (w(0) < 0.0) w = -w;
      V.col(0) = w;
    } else {
      const Eigen::MatrixXd N = detail::nullspace(V.leftCols(j));
      const Eigen::MatrixXd concentration =
          static_cast<double>(n_) * etas_[static_cast<std::size_t>(j)] *
          (N.transpose() * sigma_hat_ * N);
      BinghamSampler sampler(concentration);
      w = sampler.draw_raw(rng);
      if (w(0) < 0.0) w = -w;
      V.col(j).noalias() = N * w;
    }
  }
  return V;
}

SequentialBinghamPosterior::Detailed SequentialBinghamPosterior::sample_detailed(
    RngStream& rng) const {
  const int J = stages();
  const Eigen::Index p = dim();
  Detailed out;
  out.frame.resize(p, J);
  out.chart_coords.reserve(static_cast<std::size_t>(J));
  out.minimizer_chart_coords.reserve(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    const Eigen::MatrixXd N = detail::nullspace(out.frame.leftCols(j));
    const Eigen::MatrixXd deflated = N.transpose() * sigma_hat_ * N;
    Eigen::VectorXd w;
    if (j == 0) {
      w = stage1_->draw_raw(rng);
    } else {
      BinghamSampler sampler(
          Eigen::MatrixXd(static_cast<double>(n_) * etas_[static_cast<std::size_t>(j)] * deflated));
      w = sampler.draw_raw(rng);
    }
    if (w(0) < 0.0) w = -w;
    Eigen::VectorXd w_hat = leading_eigvec(deflated);
    if (w_hat(0) < 0.0) w_hat = -w_hat;  // same hemisphere chart as w
    out.chart_coords.push_back(w.tail(w.size() - 1));
    out.minimizer_chart_coords.push_back(w_hat.tail(w_hat.size() - 1));
    out.frame.col(j).noalias() = N * w;
  }
  return out;
}

OrthonormalFrame sample_components(const SequentialBinghamPosterior& posterior,
                                   RngStream& rng) {
  return OrthonormalFrame(posterior.sample_raw(rng));
}

Eigen::MatrixXd prop1_limit_covariance(const Eigen::VectorXd& lambdas, int comp,
                                       double eta) {
  const Eigen::Index p = lambdas.size();
  if (comp < 0 || comp >= p - 1)
    throw std::invalid_argument("prop1_limit_covariance: component index out of range");
  if (!(eta > 0.0))
    throw std::invalid_argument("prop1_limit_covariance: eta must be positive");
  for (Eigen::Index i = 1; i < p; ++i)
    if (!(lambdas(i - 1) > lambdas(i)))
      throw std::invalid_argument("prop1_limit_covariance: eigenvalues must be strictly descending");
  const Eigen::Index d = p - 1 - comp;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double gap = lambdas(comp) - lambdas(comp + 1 + i);
    if (!(gap > 0.0))
      throw std::invalid_argument("prop1_limit_covariance: nonpositive eigengap");
    cov(i, i) = 1.0 / (2.0 * eta * gap);
  }
  return cov;
}

Eigen::MatrixXd posterior_scores(const Eigen::MatrixXd& X,
                                 const OrthonormalFrame& V) {
  if (X.cols() != V.rows())
    throw std::invalid_argument("posterior_scores: shape mismatch");
  return X * V.columns();
}

void PcrPriors::validate() const {
  if (!(prior_scale > 0.0) || !(ig_shape > 0.0) || !(ig_rate > 0.0))
    throw std::invalid_argument("PcrPriors: all parameters must be positive");
}

PcrPosterior pcr_condition(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                           const Eigen::MatrixXd& V, const PcrPriors& priors) {
  priors.validate();
  if (X.rows() != Y.size())
    throw std::invalid_argument("pcr_condition: X and Y row counts differ");
  if (X.cols() != V.rows())
    throw std::invalid_argument("pcr_condition: X and V shapes incompatible");
  const Eigen::Index n = X.rows();
  const Eigen::Index J = V.cols();
  const Eigen::MatrixXd Z = X * V;
  PcrPosterior out;
  out.V = V;
  out.beta_precision =
      Z.transpose() * Z +
      Eigen::MatrixXd::Identity(J, J) / (priors.prior_scale * priors.prior_scale);
  Eigen::LLT<Eigen::MatrixXd> llt(out.beta_precision);
  if (llt.info() != Eigen::Success)
    throw NumericalError("pcr_condition: precision not positive definite");
  out.beta_precision_chol = llt.matrixL();
  out.beta_mean = llt.solve(Z.transpose() * Y);
  out.ig_shape = priors.ig_shape + 0.5 * static_cast<double>(n);
  out.ig_rate =
      priors.ig_rate +
      0.5 * (Y.squaredNorm() -
             out.beta_mean.dot(out.beta_precision * out.beta_mean));
  return out;
}

PcrDraws pcr_joint_sample(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                          const SequentialBinghamPosterior& posterior,
                          const PcrPriors& priors, int n_draws, RngStream& rng) {
  priors.validate();
  if (n_draws < 0)
    throw std::invalid_argument("pcr_joint_sample: n_draws must be >= 0");
  const int J = posterior.stages();
  PcrDraws out;
  out.frames.reserve(static_cast<std::size_t>(n_draws));
  out.beta.resize(n_draws, J);
  out.sigma2.resize(n_draws);
  Eigen::VectorXd eps(J);
  for (int d = 0; d < n_draws; ++d) {
    Eigen::MatrixXd V = posterior.sample_raw(rng);
    const PcrPosterior cond = pcr_condition(X, Y, V, priors);
    const double precision_draw = rng.gamma(cond.ig_shape) / cond.ig_rate;
    const double sigma2 = 1.0 / precision_draw;
    for (int k = 0; k < J; ++k) eps(k) = rng.normal();
    // beta | sigma2 ~ N(mean, sigma2 P^{-1}); P = L L'
    Eigen::VectorXd beta =
        cond.beta_mean + std::sqrt(sigma2) * cond.beta_precision_chol.transpose()
                                                 .triangularView<Eigen::Upper>()
                                                 .solve(eps);
    out.beta.row(d) = beta;
    out.sigma2(d) = sigma2;
    out.frames.push_back(std::move(V));
  }
  return out;
}

}  // namespace seqgibbs
