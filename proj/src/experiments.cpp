#include "seqgibbs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "seqgibbs/csv.hpp"
#include "seqgibbs/errors.hpp"
#include "seqgibbs/parallel.hpp"
#include "seqgibbs/report.hpp"

namespace seqgibbs {

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v(0) = x;
  return v;
}

std::size_t quantile_index(double q, std::size_t n) {
  auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(idx, 1, n);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0 && hi > lo) || per_decade < 1)
    throw std::invalid_argument("log_grid: invalid bounds");
  const int points =
      static_cast<int>(std::round(std::log10(hi / lo) * per_decade)) + 1;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] =
        lo * std::pow(10.0, static_cast<double>(i) / per_decade);
  return grid;
}

Eigen::MatrixXd preprocess(const Eigen::MatrixXd& X, bool center, bool scale) {
  const CovarianceResult cov = empirical_covariance(X, center, scale);
  Eigen::MatrixXd W = X;
  if (center) W.rowwise() -= cov.stats.mean.transpose();
  if (scale)
    for (Eigen::Index c = 0; c < W.cols(); ++c) W.col(c) /= cov.stats.sd(c);
  return W;
}

}  // namespace

Interval equal_tailed_interval(std::vector<double> draws, double alpha) {
  if (draws.empty())
    throw std::invalid_argument("equal_tailed_interval: empty draws");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("equal_tailed_interval: alpha must be in (0, 1)");
  std::sort(draws.begin(), draws.end());
  const std::size_t lo = quantile_index(0.5 * alpha, draws.size());
  const std::size_t hi = quantile_index(1.0 - 0.5 * alpha, draws.size());
  return {draws[lo - 1], draws[hi - 1]};
}

double antipodal_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return detail::geodesic(a, b, true);
}

SequentialCalibrationModel make_meanvar_calibration_model(const Eigen::VectorXd& data) {
  if (data.size() < 2)
    throw std::invalid_argument("make_meanvar_calibration_model: need n >= 2");
  const double n = static_cast<double>(data.size());
  const double mean = data.mean();
  const double m2 = data.squaredNorm() / n;

  SequentialCalibrationModel model;
  model.num_stages = 2;
  model.estimate = [](const Eigen::MatrixXd& X) {
    const double m = X.col(0).mean();
    const double v = (X.col(0).array() - m).square().mean();
    return std::vector<Eigen::VectorXd>{vec1(m), vec1(v)};
  };
  model.draw_stage = [n, mean, m2](const std::vector<double>& etas, int stage,
                                   int count, RngStream& rng) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    const double mu_sd = 1.0 / std::sqrt(n * etas[0]);
    if (stage == 0) {
      for (int i = 0; i < count; ++i) out.push_back(vec1(mean + mu_sd * rng.normal()));
    } else {
      const double var_sd = 1.0 / std::sqrt(n * etas[1]);
      for (int i = 0; i < count; ++i) {
        const double mu = mean + mu_sd * rng.normal();
        const double s2 = m2 - 2.0 * mu * mean + mu * mu;
        out.push_back(vec1(sample_truncated_normal_positive(s2, var_sd, rng)));
      }
    }
    return out;
  };
  model.metric = [](int, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::abs(a(0) - b(0));
  };
  return model;
}

SequentialCalibrationModel make_pca_calibration_model(const Eigen::MatrixXd& X, int J) {
  const CovarianceResult cov = empirical_covariance(X, true, false);
  const Eigen::MatrixXd sigma = cov.sigma;
  const int n = static_cast<int>(X.rows());

  SequentialCalibrationModel model;
  model.num_stages = J;
  model.estimate = [J](const Eigen::MatrixXd& Xb) {
    const CovarianceResult covb = empirical_covariance(Xb, true, false);
    const Eigen::MatrixXd V = leading_eigenvectors(covb.sigma, J);
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) out.push_back(V.col(j));
    return out;
  };
  model.draw_stage = [sigma, n](const std::vector<double>& etas, int stage,
                                int count, RngStream& rng) {
    const SequentialBinghamPosterior posterior(sigma, n, etas);
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      out.push_back(posterior.sample_raw(rng, stage + 1).col(stage));
    return out;
  };
  model.metric = [](int, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return antipodal_distance(a, b);
  };
  return model;
}

namespace {

double tune_joint_eta(const MeanVarCoverageOptions& options,
                      std::vector<GridProbe>& probes) {
  const std::vector<double> grid = log_grid(
      options.grid_eta_min, options.grid_eta_max, options.grid_points_per_decade);
  const GeneratorSpec gspec{options.generator, options.n, 1};
  const double target = 1.0 - options.alpha;
  std::map<int, double> evaluated;

  auto sigma2_coverage_at = [&](int gi) {
    if (auto it = evaluated.find(gi); it != evaluated.end()) return it->second;
    const double eta = grid[static_cast<std::size_t>(gi)];
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(options.tune_replicates), 0);
    parallel_for(options.tune_replicates, options.threads, [&](int r) {
      // Tuning replicate streams live in their own id range; the data
      // stream does not depend on the probe, so probes share datasets.
      RngStream root(options.seed, (1ULL << 32) + static_cast<std::uint64_t>(r));
      RngStream gen_rng = root.substream(1);
      const SyntheticData data = generate_synthetic(gspec, gen_rng);
      MhConfig mh = options.mh;
      mh.initial_step = 1.0 / std::sqrt(static_cast<double>(options.n) * eta);
      RngStream chain_rng = root.substream(2);
      const MhResult res = meanvar_joint_mh(data.X.col(0), eta, mh, chain_rng);
      std::vector<double> s2(res.chain.col(1).data(),
                             res.chain.col(1).data() + res.chain.rows());
      const Interval interval = equal_tailed_interval(std::move(s2), options.alpha);
      covered[static_cast<std::size_t>(r)] =
          interval.contains(data.truths[1](0)) ? 1 : 0;
    });
    double c = 0.0;
    for (auto v : covered) c += v;
    c /= static_cast<double>(options.tune_replicates);
    evaluated[gi] = c;
    probes.push_back({eta, c});
    log_info("joint eta probe " + format_double(eta) + " -> sigma2 coverage " +
             std::to_string(c));
    return c;
  };

  // Sigma2 coverage is decreasing in eta (narrower intervals), so the
  // log-spaced grid can be searched by bisection instead of exhaustively.
  int lo = 0;
  int hi = static_cast<int>(grid.size()) - 1;
  const double cov_lo = sigma2_coverage_at(lo);
  if (cov_lo < target) {
    log_warn("joint eta grid: coverage below target at the lower grid edge");
    return grid[static_cast<std::size_t>(lo)];
  }
  const double cov_hi = sigma2_coverage_at(hi);
  if (cov_hi >= target) {
    log_warn("joint eta grid: coverage above target at the upper grid edge");
    return grid[static_cast<std::size_t>(hi)];
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (sigma2_coverage_at(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  const double err_lo = std::abs(evaluated[lo] - target);
  const double err_hi = std::abs(evaluated[hi] - target);
  return err_lo <= err_hi ? grid[static_cast<std::size_t>(lo)]
                          : grid[static_cast<std::size_t>(hi)];
}

}  // namespace

MeanVarCoverageResult run_meanvar_coverage(const MeanVarCoverageOptions& options) {
  if (!generator_is_univariate(options.generator))
    throw std::invalid_argument("run_meanvar_coverage: univariate generator required");
  if (options.method != "sequential_gibbs" && options.method != "joint_gibbs")
    throw std::invalid_argument("run_meanvar_coverage: unknown method '" + options.method + "'");

  const GeneratorSpec gspec{options.generator, options.n, 1};
  auto generator_fn = [gspec](RngStream& rng) { return generate_synthetic(gspec, rng); };
  const std::vector<std::string> names{"mu", "sigma2"};

  MeanVarCoverageResult result;
  std::function<CoverageOutcome(const SyntheticData&, RngStream&)> method_fn;

  if (options.method == "sequential_gibbs") {
    method_fn = [&options](const SyntheticData& data, RngStream& rng) {
      const SequentialCalibrationModel model =
          make_meanvar_calibration_model(data.X.col(0));
      RngStream calib_rng = rng.substream(1);
      const SequentialCalibrationResult cal =
          calibrate_sequential(model, data.X, options.calibration, calib_rng);
      RngStream draw_rng = rng.substream(2);
      const MeanVarDraws draws = meanvar_sequential_sample(
          data.X.col(0), cal.etas[0], cal.etas[1],
          options.calibration.posterior_draws, draw_rng);
      const Interval imu = equal_tailed_interval(
          {draws.mu.data(), draws.mu.data() + draws.mu.size()}, options.alpha);
      const Interval is2 = equal_tailed_interval(
          {draws.sigma2.data(), draws.sigma2.data() + draws.sigma2.size()},
          options.alpha);
      CoverageOutcome out;
      out.covered = {static_cast<std::uint8_t>(imu.contains(data.truths[0](0))),
                     static_cast<std::uint8_t>(is2.contains(data.truths[1](0)))};
      out.radii = {imu.half_width(), is2.half_width()};
      return out;
    };
  } else {
    result.joint_eta = options.joint_eta > 0.0
                           ? options.joint_eta
                           : tune_joint_eta(options, result.probes);
    const double eta = result.joint_eta;
    method_fn = [&options, eta](const SyntheticData& data, RngStream& rng) {
      MhConfig mh = options.mh;
      mh.initial_step = 1.0 / std::sqrt(static_cast<double>(options.n) * eta);
      const MhResult res = meanvar_joint_mh(data.X.col(0), eta, mh, rng);
      const Interval imu = equal_tailed_interval(
          {res.chain.col(0).data(), res.chain.col(0).data() + res.chain.rows()},
          options.alpha);
      const Interval is2 = equal_tailed_interval(
          {res.chain.col(1).data(), res.chain.col(1).data() + res.chain.rows()},
          options.alpha);
      CoverageOutcome out;
      out.covered = {static_cast<std::uint8_t>(imu.contains(data.truths[0](0))),
                     static_cast<std::uint8_t>(is2.contains(data.truths[1](0)))};
      out.radii = {imu.half_width(), is2.half_width()};
      return out;
    };
  }

  result.report = coverage_experiment(generator_fn, method_fn, names,
                                      options.replicates, options.seed,
                                      options.threads);
  result.report.generator = options.generator;
  result.report.method = options.method;
  result.report.n = options.n;
  result.report.p = 1;
  return result;
}

CoverageReport run_pca_coverage(const PcaCoverageOptions& options) {
  if (options.generator != "mvn_diag" && options.generator != "mvt5_diag")
    throw std::invalid_argument("run_pca_coverage: multivariate generator required");
  if (options.method != "sequential_gibbs" && options.method != "bootstrap")
    throw std::invalid_argument("run_pca_coverage: unknown method '" + options.method + "'");
  const int J = options.components;
  if (J < 1 || J > std::min(5, options.p - 1))
    throw std::invalid_argument("run_pca_coverage: components out of the tracked range");

  const GeneratorSpec gspec{options.generator, options.n, options.p};
  auto generator_fn = [gspec](RngStream& rng) { return generate_synthetic(gspec, rng); };
  std::vector<std::string> names;
  for (int j = 0; j < J; ++j) names.push_back("v" + std::to_string(j + 1));

  std::function<CoverageOutcome(const SyntheticData&, RngStream&)> method_fn;
  if (options.method == "sequential_gibbs") {
    method_fn = [&options, J](const SyntheticData& data, RngStream& rng) {
      const SequentialCalibrationModel model = make_pca_calibration_model(data.X, J);
      RngStream calib_rng = rng.substream(1);
      const SequentialCalibrationResult cal =
          calibrate_sequential(model, data.X, options.calibration, calib_rng);
      const CovarianceResult cov = empirical_covariance(data.X, true, false);
      const Eigen::MatrixXd fitted = leading_eigenvectors(cov.sigma, J);
      const SequentialBinghamPosterior posterior(cov.sigma,
                                                 static_cast<int>(data.X.rows()),
                                                 cal.etas);
      RngStream draw_rng = rng.substream(2);
      const int M = options.calibration.posterior_draws;
      std::vector<std::vector<double>> distances(
          static_cast<std::size_t>(J),
          std::vector<double>());
      for (auto& d : distances) d.reserve(static_cast<std::size_t>(M));
      for (int m = 0; m < M; ++m) {
        const Eigen::MatrixXd V = posterior.sample_raw(draw_rng);
        for (int j = 0; j < J; ++j)
          distances[static_cast<std::size_t>(j)].push_back(
              antipodal_distance(V.col(j), fitted.col(j)));
      }
      CoverageOutcome out;
      for (int j = 0; j < J; ++j) {
        const double radius = radius_from_distances(
            std::move(distances[static_cast<std::size_t>(j)]), options.alpha);
        const double truth_dist =
            antipodal_distance(data.truths[static_cast<std::size_t>(j)], fitted.col(j));
        out.covered.push_back(truth_dist <= radius ? 1 : 0);
        out.radii.push_back(radius);
      }
      return out;
    };
  } else {
    method_fn = [&options, J](const SyntheticData& data, RngStream& rng) {
      const SequentialCalibrationModel model = make_pca_calibration_model(data.X, J);
      const std::vector<Eigen::VectorXd> centers = model.estimate(data.X);
      RngStream boot_rng = rng.substream(1);
      const std::vector<BootstrapRadiusResult> radii = bootstrap_radii_shared(
          model.estimate, data.X, options.calibration.bootstrap_replicates,
          options.alpha, model.metric, boot_rng);
      CoverageOutcome out;
      for (int j = 0; j < J; ++j) {
        const double truth_dist = antipodal_distance(
            data.truths[static_cast<std::size_t>(j)], centers[static_cast<std::size_t>(j)]);
        out.covered.push_back(truth_dist <= radii[static_cast<std::size_t>(j)].radius ? 1 : 0);
        out.radii.push_back(radii[static_cast<std::size_t>(j)].radius);
      }
      return out;
    };
  }

  CoverageReport report = coverage_experiment(generator_fn, method_fn, names,
                                              options.replicates, options.seed,
                                              options.threads);
  report.generator = options.generator;
  report.method = options.method;
  report.n = options.n;
  report.p = options.p;
  return report;
}

Prop1Result run_prop1_check(const Prop1Options& options) {
  if (options.components < 1 || options.components >= options.p)
    throw std::invalid_argument("run_prop1_check: need 1 <= components < p");
  const GeneratorSpec gspec{"mvn_diag", options.n, options.p};
  RngStream root(options.seed, 0);
  RngStream gen_rng = root.substream(1);
  const SyntheticData data = generate_synthetic(gspec, gen_rng);
  const CovarianceResult cov = empirical_covariance(data.X, true, false);
  const EigenSystem es = eigensystem(cov.sigma);

  const int J = options.components;
  const std::vector<double> etas(static_cast<std::size_t>(J), options.eta);
  const SequentialBinghamPosterior posterior(cov.sigma, options.n, etas);

  std::vector<Eigen::MatrixXd> centered(static_cast<std::size_t>(J));
  Eigen::Index total_dim = 0;
  for (int j = 0; j < J; ++j) {
    centered[static_cast<std::size_t>(j)].resize(options.draws, options.p - 1 - j);
    total_dim += options.p - 1 - j;
  }
  Eigen::MatrixXd stacked(options.draws, total_dim);

  RngStream draw_rng = root.substream(2);
  const double scale = std::sqrt(static_cast<double>(options.n));
  for (int m = 0; m < options.draws; ++m) {
    const auto detail = posterior.sample_detailed(draw_rng);
    Eigen::Index offset = 0;
    for (int j = 0; j < J; ++j) {
      const Eigen::VectorXd tau =
          scale * (detail.chart_coords[static_cast<std::size_t>(j)] -
                   detail.minimizer_chart_coords[static_cast<std::size_t>(j)]);
      centered[static_cast<std::size_t>(j)].row(m) = tau;
      stacked.row(m).segment(offset, tau.size()) = tau;
      offset += tau.size();
    }
  }

  Prop1Result result;
  result.lambda_hat = es.values;
  for (int j = 0; j < J; ++j) {
    const Eigen::MatrixXd target = prop1_limit_covariance(es.values, j, options.eta);
    // Samples are already tau-mapped per draw (the conditional minimizer
    // moves with the sampled prefix), so the diagnostic centers at zero
    // with unit scale.
    result.stages.push_back(bvm_diagnostic(centered[static_cast<std::size_t>(j)],
                                           Eigen::VectorXd::Zero(target.rows()), 1,
                                           target));
  }

  // Cross-component correlations from the stacked draws.
  Eigen::MatrixXd Z = stacked;
  Z.rowwise() -= stacked.colwise().mean();
  const Eigen::MatrixXd covT =
      (Z.transpose() * Z) / static_cast<double>(options.draws - 1);
  double max_corr = 0.0;
  Eigen::Index row_start = 0;
  for (int a = 0; a < J; ++a) {
    const Eigen::Index da = options.p - 1 - a;
    Eigen::Index col_start = row_start + da;
    for (int b = a + 1; b < J; ++b) {
      const Eigen::Index db = options.p - 1 - b;
      for (Eigen::Index r = 0; r < da; ++r) {
        for (Eigen::Index c = 0; c < db; ++c) {
          const double denom = std::sqrt(covT(row_start + r, row_start + r) *
                                         covT(col_start + c, col_start + c));
          if (denom > 0.0)
            max_corr = std::max(max_corr,
                                std::abs(covT(row_start + r, col_start + c)) / denom);
        }
      }
      col_start += db;
    }
    row_start += da;
  }
  result.max_cross_correlation = max_corr;
  return result;
}

PcaFitResult run_pca_fit(const Eigen::MatrixXd& X, const PcaFitOptions& options) {
  const int J = options.components;
  const Eigen::MatrixXd W = preprocess(X, options.center, options.scale);
  const CovarianceResult cov = empirical_covariance(W, false, false);
  const FittedComponents fit = fit_components(cov.sigma, J);

  SequentialCalibrationModel model;
  {
    const bool center = options.center;
    const bool scale = options.scale;
    model.num_stages = J;
    model.estimate = [J, center, scale](const Eigen::MatrixXd& Xb) {
      const CovarianceResult covb = empirical_covariance(Xb, center, scale);
      const Eigen::MatrixXd V = leading_eigenvectors(covb.sigma, J);
      std::vector<Eigen::VectorXd> out;
      for (int j = 0; j < J; ++j) out.push_back(V.col(j));
      return out;
    };
    const Eigen::MatrixXd sigma = cov.sigma;
    const int n = static_cast<int>(X.rows());
    model.draw_stage = [sigma, n](const std::vector<double>& etas, int stage,
                                  int count, RngStream& rng) {
      const SequentialBinghamPosterior posterior(sigma, n, etas);
      std::vector<Eigen::VectorXd> out;
      out.reserve(static_cast<std::size_t>(count));
      for (int i = 0; i < count; ++i)
        out.push_back(posterior.sample_raw(rng, stage + 1).col(stage));
      return out;
    };
    model.metric = [](int, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return antipodal_distance(a, b);
    };
  }

  RngStream root(options.seed, 0);
  RngStream calib_rng = root.substream(1);
  PcaFitResult result;
  result.eigenvalues = fit.eigenvalues;
  result.frame = fit.frame;
  result.calibration = calibrate_sequential(model, X, options.calibration, calib_rng);

  // Fresh credible radii at the calibrated etas (paired with the
  // bootstrap radii in the report).
  RngStream radius_rng = root.substream(2);
  for (int j = 0; j < J; ++j) {
    std::vector<double> etas_j(result.calibration.etas.begin(),
                               result.calibration.etas.begin() + j + 1);
    RngStream stage_rng = radius_rng.substream(static_cast<std::uint64_t>(j));
    const std::vector<Eigen::VectorXd> draws = model.draw_stage(
        etas_j, j, options.calibration.posterior_draws, stage_rng);
    std::vector<double> distances;
    distances.reserve(draws.size());
    for (const auto& d : draws)
      distances.push_back(antipodal_distance(d, fit.frame.col(j)));
    result.credible_radii.push_back(
        radius_from_distances(std::move(distances), options.calibration.alpha));
  }

  const int draws = options.sample_draws > 0 ? options.sample_draws
                                             : options.calibration.posterior_draws;
  const SequentialBinghamPosterior posterior(cov.sigma, static_cast<int>(X.rows()),
                                             result.calibration.etas);
  RngStream sample_rng = root.substream(3);
  const Eigen::Index p = X.cols();
  result.sample_frames.resize(draws, p * J);
  const int score_draws = std::min(options.score_draws, draws);
  result.scores.resize(static_cast<Eigen::Index>(score_draws) * W.rows(), J + 2);
  for (int m = 0; m < draws; ++m) {
    const Eigen::MatrixXd V = posterior.sample_raw(sample_rng);
    for (int j = 0; j < J; ++j)
      result.sample_frames.row(m).segment(static_cast<Eigen::Index>(j) * p, p) =
          V.col(j);
    if (m < score_draws) {
      const Eigen::MatrixXd Z = W * V;
      for (Eigen::Index i = 0; i < W.rows(); ++i) {
        const Eigen::Index row = static_cast<Eigen::Index>(m) * W.rows() + i;
        result.scores(row, 0) = m;
        result.scores(row, 1) = static_cast<double>(i);
        result.scores.row(row).tail(J) = Z.row(i);
      }
    }
  }
  return result;
}

PcrFitResult run_pcr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                         const PcrFitOptions& options) {
  if (X.rows() != Y.size())
    throw std::invalid_argument("run_pcr_fit: X and Y row counts differ");
  const int J = options.components;
  const Eigen::MatrixXd W = preprocess(X, options.center, options.scale);
  const Eigen::VectorXd Yc = Y.array() - Y.mean();
  const CovarianceResult cov = empirical_covariance(W, false, false);
  const FittedComponents fit = fit_components(cov.sigma, J);

  PcaFitOptions pca_options;
  pca_options.components = J;
  pca_options.center = options.center;
  pca_options.scale = options.scale;
  pca_options.calibration = options.calibration;
  pca_options.sample_draws = 1;  // frames drawn separately below
  pca_options.score_draws = 0;
  pca_options.seed = options.seed;
  const PcaFitResult pca = run_pca_fit(X, pca_options);

  PcrFitResult result;
  result.eigenvalues = fit.eigenvalues;
  result.frame = fit.frame;
  result.calibration = pca.calibration;

  const int draws = options.sample_draws > 0 ? options.sample_draws
                                             : options.calibration.posterior_draws;
  const SequentialBinghamPosterior posterior(cov.sigma, static_cast<int>(X.rows()),
                                             result.calibration.etas);
  RngStream root(options.seed, 0);
  RngStream draw_rng = root.substream(4);
  result.draws = pcr_joint_sample(W, Yc, posterior, options.priors, draws, draw_rng);

  result.coefficient_means = result.draws.beta.colwise().mean();
  for (int j = 0; j < J; ++j) {
    std::vector<double> col(result.draws.beta.col(j).data(),
                            result.draws.beta.col(j).data() + draws);
    result.coefficient_intervals.push_back(
        equal_tailed_interval(std::move(col), options.calibration.alpha));
  }
  std::vector<double> s2(result.draws.sigma2.data(),
                         result.draws.sigma2.data() + draws);
  result.sigma2_interval = equal_tailed_interval(std::move(s2), options.calibration.alpha);
  return result;
}

std::vector<int> kmeans_representatives(const Eigen::VectorXd& response, int k,
                                        int max_iters, RngStream& rng) {
  const int n = static_cast<int>(response.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("kmeans_representatives: need 1 <= k <= n");

  // Seed-controlled init: k distinct indices by partial Fisher-Yates.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<int>(
        rng.uniform_below(static_cast<std::uint64_t>(n - i))) + i;
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<double> centers(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) centers[static_cast<std::size_t>(c)] = response(order[static_cast<std::size_t>(c)]);

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::abs(response(i) - centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = std::abs(response(i) - centers[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      sums[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])] += response(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        centers[static_cast<std::size_t>(c)] =
            sums[static_cast<std::size_t>(c)] / counts[static_cast<std::size_t>(c)];
    if (!changed) break;
  }

  std::vector<int> reps;
  for (int c = 0; c < k; ++c) {
    int best = -1;
    double best_d = 0.0;
    for (int i = 0; i < n; ++i) {
      if (assign[static_cast<std::size_t>(i)] != c) continue;
      const double d = std::abs(response(i) - centers[static_cast<std::size_t>(c)]);
      if (best < 0 || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    if (best >= 0) reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

}  // namespace seqgibbs
