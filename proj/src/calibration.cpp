#include "seqgibbs/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqgibbs/errors.hpp"
#include "seqgibbs/parallel.hpp"

namespace seqgibbs {

void CalibrationConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("CalibrationConfig: alpha must be in (0, 1)");
  if (bootstrap_replicates < 1 || posterior_draws < 1 || max_iters < 1)
    throw std::invalid_argument("CalibrationConfig: counts must be >= 1");
  if (!(eta0 > 0.0) || !(step_size > 0.0))
    throw std::invalid_argument("CalibrationConfig: eta0 and step_size must be positive");
  if (!(rel_tol > 0.0) || !(eta_rel_tol > 0.0))
    throw std::invalid_argument("CalibrationConfig: tolerances must be positive");
  if (!(0.0 < eta_min && eta_min < eta_max))
    throw std::invalid_argument("CalibrationConfig: need 0 < eta_min < eta_max");
}

double CalibrationConfig::step_at(int t) const {
  switch (schedule) {
    case StepSchedule::kInvT:
      return step_size / static_cast<double>(t + 1);
    case StepSchedule::kInvT2:
      return step_size / (static_cast<double>(t + 1) * static_cast<double>(t + 1));
    case StepSchedule::kConstant:
    default:
      return step_size;
  }
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kRadiusTol: return "radius_tol";
    case TerminationReason::kEtaTol: return "eta_tol";
    case TerminationReason::kBoundary: return "boundary";
    case TerminationReason::kMaxIters:
    default: return "max_iters";
  }
}

double radius_from_distances(std::vector<double> distances, double alpha) {
  if (distances.empty())
    throw std::invalid_argument("radius_from_distances: empty distance list");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("radius_from_distances: alpha must be in (0, 1)");
  const auto n = static_cast<double>(distances.size());
  // Guard the ceil against 0.95*N landing epsilon above the integer.
  auto idx = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
  idx = std::clamp<std::size_t>(idx, 1, distances.size());
  std::nth_element(distances.begin(), distances.begin() + (idx - 1), distances.end());
  return distances[idx - 1];
}

BootstrapRadiusResult bootstrap_radius(
    const std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>& estimator,
    const Eigen::MatrixXd& X, int B, double alpha,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& metric,
    RngStream& rng) {
  auto estimate_all = [&](const Eigen::MatrixXd& data) {
    return std::vector<Eigen::VectorXd>{estimator(data)};
  };
  auto stage_metric = [&](int, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return metric(a, b);
  };
  return bootstrap_radii_shared(estimate_all, X, B, alpha, stage_metric, rng)[0];
}

std::vector<BootstrapRadiusResult> bootstrap_radii_shared(
    const std::function<std::vector<Eigen::VectorXd>(const Eigen::MatrixXd&)>& estimate_all,
    const Eigen::MatrixXd& X, int B, double alpha,
    const std::function<double(int stage, const Eigen::VectorXd&, const Eigen::VectorXd&)>& metric,
    RngStream& rng) {
  if (B < 1) throw std::invalid_argument("bootstrap: B must be >= 1");
  const Eigen::Index n = X.rows();
  if (n < 1) throw std::invalid_argument("bootstrap: empty data");

  const std::vector<Eigen::VectorXd> full = estimate_all(X);
  const auto stages = full.size();
  std::vector<BootstrapRadiusResult> out(stages);
  for (auto& r : out) r.distances.reserve(static_cast<std::size_t>(B));

  Eigen::MatrixXd resampled(n, X.cols());
  for (int b = 0; b < B; ++b) {
    for (Eigen::Index i = 0; i < n; ++i)
      resampled.row(i) = X.row(static_cast<Eigen::Index>(
          rng.uniform_below(static_cast<std::uint64_t>(n))));
    std::vector<Eigen::VectorXd> est;
    try {
      est = estimate_all(resampled);
    } catch (const std::exception& e) {
      throw NumericalError("bootstrap replicate " + std::to_string(b) +
                           " failed: " + e.what());
    }
    if (est.size() != stages)
      throw NumericalError("bootstrap: estimator returned wrong stage count");
    for (std::size_t j = 0; j < stages; ++j)
      out[j].distances.push_back(metric(static_cast<int>(j), full[j], est[j]));
  }
  for (auto& r : out) r.radius = radius_from_distances(r.distances, alpha);
  return out;
}

double credible_radius(
    const std::function<std::vector<Eigen::VectorXd>(double eta, int count, RngStream&)>& sampler,
    double eta, int count, const Eigen::VectorXd& center, double alpha,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& metric,
    RngStream& rng) {
  if (count < 1) throw std::invalid_argument("credible_radius: count must be >= 1");
  std::vector<Eigen::VectorXd> draws;
  try {
    draws = sampler(eta, count, rng);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("credible_radius: sampler failed: ") + e.what());
  }
  if (draws.size() != static_cast<std::size_t>(count))
    throw NumericalError("credible_radius: sampler returned wrong draw count");
  std::vector<double> distances;
  distances.reserve(draws.size());
  for (const auto& d : draws) distances.push_back(metric(d, center));
  return radius_from_distances(std::move(distances), alpha);
}

StochasticApproxResult stochastic_approximation(
    const std::function<double(double eta, RngStream&)>& radius_fn,
    double target_radius, const CalibrationConfig& config, RngStream& rng) {
  config.validate();
  if (!(target_radius > 0.0))
    throw std::invalid_argument("stochastic_approximation: target radius must be positive");

  StochasticApproxResult out;
  double eta = std::clamp(config.eta0, config.eta_min, config.eta_max);
  for (int t = 0; t < config.max_iters; ++t) {
    RngStream iter_rng = rng.substream(static_cast<std::uint64_t>(t));
    const double r = radius_fn(eta, iter_rng);
    if (std::isnan(r) || !(r > 0.0))
      throw NumericalError("stochastic_approximation: radius_fn returned a nonpositive or NaN radius");
    const double delta = (r - target_radius) / target_radius;
    out.trace.iterations.push_back({t, eta, r, delta});
    if (std::abs(delta) < config.rel_tol) {
      out.trace.reason = TerminationReason::kRadiusTol;
      out.eta = eta;
      out.trace.eta_final = eta;
      return out;
    }
    const double eta_next = eta * std::exp(delta / config.step_at(t));
    if (eta_next < config.eta_min || eta_next > config.eta_max) {
      out.trace.boundary_hit = true;
      out.trace.reason = TerminationReason::kBoundary;
      out.eta = std::clamp(eta_next, config.eta_min, config.eta_max);
      out.trace.eta_final = out.eta;
      return out;
    }
    if (std::abs(eta_next - eta) / eta < config.eta_rel_tol) {
      out.trace.reason = TerminationReason::kEtaTol;
      out.eta = eta_next;
      out.trace.eta_final = eta_next;
      return out;
    }
    eta = eta_next;
  }
  out.trace.reason = TerminationReason::kMaxIters;
  out.eta = eta;
  out.trace.eta_final = eta;
  return out;
}

SequentialCalibrationResult calibrate_sequential(
    const SequentialCalibrationModel& model, const Eigen::MatrixXd& X,
    const CalibrationConfig& config, RngStream& rng) {
  config.validate();
  if (model.num_stages < 1)
    throw std::invalid_argument("calibrate_sequential: need at least one stage");
  if (!model.estimate || !model.draw_stage || !model.metric)
    throw std::invalid_argument("calibrate_sequential: incomplete model");

  const std::vector<Eigen::VectorXd> centers = model.estimate(X);
  if (centers.size() != static_cast<std::size_t>(model.num_stages))
    throw NumericalError("calibrate_sequential: estimator stage count mismatch");

  RngStream boot_rng = rng.substream(0);
  const std::vector<BootstrapRadiusResult> boot = bootstrap_radii_shared(
      model.estimate, X, config.bootstrap_replicates, config.alpha, model.metric,
      boot_rng);

  SequentialCalibrationResult out;
  for (const auto& b : boot) out.bootstrap_radii.push_back(b.radius);

  for (int j = 0; j < model.num_stages; ++j) {
    const double target = out.bootstrap_radii[static_cast<std::size_t>(j)];
    const Eigen::VectorXd& center = centers[static_cast<std::size_t>(j)];
    auto radius_fn = [&](double eta, RngStream& r) {
      std::vector<double> etas_try = out.etas;
      etas_try.push_back(eta);
      std::vector<Eigen::VectorXd> draws =
          model.draw_stage(etas_try, j, config.posterior_draws, r);
      std::vector<double> distances;
      distances.reserve(draws.size());
      for (const auto& d : draws)
        distances.push_back(model.metric(j, d, center));
      return radius_from_distances(std::move(distances), config.alpha);
    };

    CalibrationConfig stage_config = config;
    RngStream stage_rng = rng.substream(static_cast<std::uint64_t>(j) + 1);
    if (config.pilot_eta0) {
      // Seed eta0 by bracketing the radius/target crossing with
      // reduced-draw evaluations (geometric walk, then bisection in log
      // eta). The radius is decreasing in eta but its log-log slope can
      // be nearly flat when the stage spread is prefix-dominated, which
      // makes the stochastic approximation crawl from a poor start; the
      // bracket puts it inside polishing range. When the crossing does
      // not exist inside [eta_min, eta_max] the walk stops at the
      // relevant edge and the approximation reports the boundary.
      const int pilot_draws = std::max(200, config.posterior_draws / 4);
      RngStream pilot_rng = stage_rng.substream(0x706C74);
      std::uint64_t tag = 0;
      auto pilot_radius = [&](double eta) {
        std::vector<double> etas_try = out.etas;
        etas_try.push_back(eta);
        RngStream r = pilot_rng.substream(tag++);
        const std::vector<Eigen::VectorXd> draws =
            model.draw_stage(etas_try, j, pilot_draws, r);
        std::vector<double> distances;
        distances.reserve(draws.size());
        for (const auto& d : draws)
          distances.push_back(model.metric(j, d, center));
        return radius_from_distances(std::move(distances), config.alpha);
      };
      constexpr double kWalkFactor = 16.0;
      constexpr int kMaxWalk = 8;
      double eta = std::clamp(stage_config.eta0, config.eta_min, config.eta_max);
      double r = pilot_radius(eta);
      double eta_wide = 0.0;    // r > target side (small eta)
      double eta_narrow = 0.0;  // r < target side (large eta)
      if (r > target) {
        eta_wide = eta;
        for (int s = 0; s < kMaxWalk && eta < config.eta_max; ++s) {
          eta = std::min(eta * kWalkFactor, config.eta_max);
          r = pilot_radius(eta);
          if (r <= target) {
            eta_narrow = eta;
            break;
          }
          eta_wide = eta;
        }
      } else {
        eta_narrow = eta;
        for (int s = 0; s < kMaxWalk && eta > config.eta_min; ++s) {
          eta = std::max(eta / kWalkFactor, config.eta_min);
          r = pilot_radius(eta);
          if (r > target) {
            eta_wide = eta;
            break;
          }
          eta_narrow = eta;
        }
      }
      if (eta_wide > 0.0 && eta_narrow > 0.0) {
        for (int s = 0; s < 3; ++s) {
          const double mid = std::sqrt(eta_wide * eta_narrow);
          if (pilot_radius(mid) > target)
            eta_wide = mid;
          else
            eta_narrow = mid;
        }
        stage_config.eta0 = std::sqrt(eta_wide * eta_narrow);
      } else {
        stage_config.eta0 = eta;  // crossing outside the eta range
      }
    }
    StochasticApproxResult sa =
        stochastic_approximation(radius_fn, target, stage_config, stage_rng);
    out.etas.push_back(sa.eta);
    out.traces.push_back(std::move(sa.trace));
  }
  return out;
}

CoverageReport coverage_experiment(
    const std::function<SyntheticData(RngStream&)>& generator,
    const std::function<CoverageOutcome(const SyntheticData&, RngStream&)>& method,
    const std::vector<std::string>& parameter_names, int replicates,
    std::uint64_t master_seed, int threads) {
  if (replicates < 1)
    throw std::invalid_argument("coverage_experiment: replicates must be >= 1");
  if (parameter_names.empty())
    throw std::invalid_argument("coverage_experiment: no tracked parameters");

  const std::size_t k = parameter_names.size();
  std::vector<CoverageOutcome> outcomes(static_cast<std::size_t>(replicates));
  parallel_for(replicates, threads, [&](int r) {
    RngStream root(master_seed, static_cast<std::uint64_t>(r));
    try {
      RngStream gen_rng = root.substream(1);
      const SyntheticData data = generator(gen_rng);
      RngStream method_rng = root.substream(2);
      CoverageOutcome outcome = method(data, method_rng);
      if (outcome.covered.size() != k || outcome.radii.size() != k)
        throw NumericalError("method outcome size mismatch");
      outcomes[static_cast<std::size_t>(r)] = std::move(outcome);
    } catch (const std::exception& e) {
      throw NumericalError("coverage replicate " + std::to_string(r) + " (seed " +
                           std::to_string(master_seed) + ", stream " +
                           std::to_string(r) + ") failed: " + e.what());
    }
  });

  CoverageReport report;
  report.replicates = replicates;
  report.seed = master_seed;
  const double R = static_cast<double>(replicates);
  for (std::size_t j = 0; j < k; ++j) {
    long hits = 0;
    double radius_sum = 0.0;
    for (const auto& o : outcomes) {
      hits += o.covered[j] ? 1 : 0;
      radius_sum += o.radii[j];
    }
    ParameterCoverage pc;
    pc.name = parameter_names[j];
    pc.coverage = static_cast<double>(hits) / R;
    pc.std_error = std::sqrt(pc.coverage * (1.0 - pc.coverage) / R);
    pc.mean_radius = radius_sum / R;
    pc.replicates = replicates;
    report.parameters.push_back(std::move(pc));
  }
  return report;
}

}  // namespace seqgibbs
