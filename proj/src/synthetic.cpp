#include "seqgibbs/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace seqgibbs {

namespace {

constexpr double kEulerMascheroni = 0.5772156649015329;
constexpr double kPi = 3.141592653589793238462643383279;

double draw_gumbel(RngStream& rng) { return -std::log(-std::log(rng.uniform01())); }

double draw_t5(RngStream& rng) {
  const double z = rng.normal();
  double chi2 = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double g = rng.normal();
    chi2 += g * g;
  }
  return z / std::sqrt(chi2 / 5.0);
}

double draw_skew_normal_shape1(RngStream& rng) {
  // Z = delta |Z1| + sqrt(1 - delta^2) Z2 with delta = 1/sqrt(2).
  const double delta = 1.0 / std::sqrt(2.0);
  return delta * std::abs(rng.normal()) +
         std::sqrt(1.0 - delta * delta) * rng.normal();
}

Eigen::VectorXd scalar_truth(double v) {
  Eigen::VectorXd x(1);
  x(0) = v;
  return x;
}

}  // namespace

bool generator_is_univariate(const std::string& name) {
  return name == "gaussian" || name == "t5" || name == "skew_normal" ||
         name == "gumbel";
}

Eigen::VectorXd table2_spectrum(int p) {
  if (p < 6)
    throw std::invalid_argument("table2_spectrum: need p >= 6 for the (10,...,6) head");
  Eigen::VectorXd lambda(p);
  for (int i = 0; i < 5; ++i) lambda(i) = 10.0 - i;
  const int tail = p - 5;
  double raw_sum = 0.0;
  for (int i = 0; i < tail; ++i) raw_sum += static_cast<double>(tail - i);
  const double head_sum = 40.0;                 // 90% of the total variance
  const double tail_target = head_sum / 9.0;    // remaining 10%
  const double c = tail_target / raw_sum;
  for (int i = 0; i < tail; ++i) lambda(5 + i) = c * static_cast<double>(tail - i);
  return lambda;
}

SyntheticData generate_synthetic(const GeneratorSpec& spec, RngStream& rng) {
  if (spec.n < 1) throw std::invalid_argument("generate_synthetic: n must be >= 1");
  SyntheticData out;

  if (generator_is_univariate(spec.name)) {
    out.X.resize(spec.n, 1);
    double mean = 0.0;
    double var = 1.0;
    if (spec.name == "gaussian") {
      for (int i = 0; i < spec.n; ++i) out.X(i, 0) = rng.normal();
    } else if (spec.name == "t5") {
      for (int i = 0; i < spec.n; ++i) out.X(i, 0) = draw_t5(rng);
      var = 5.0 / 3.0;
    } else if (spec.name == "skew_normal") {
      for (int i = 0; i < spec.n; ++i) out.X(i, 0) = draw_skew_normal_shape1(rng);
      mean = std::sqrt(1.0 / kPi);
      var = 1.0 - 2.0 / (2.0 * kPi);  // 1 - 2 delta^2 / pi with delta^2 = 1/2
    } else {  // gumbel
      for (int i = 0; i < spec.n; ++i) out.X(i, 0) = draw_gumbel(rng);
      mean = kEulerMascheroni;
      var = kPi * kPi / 6.0;
    }
    out.truth_names = {"mu", "sigma2"};
    out.truths = {scalar_truth(mean), scalar_truth(var)};
    return out;
  }

  if (spec.name != "mvn_diag" && spec.name != "mvt5_diag")
    throw std::invalid_argument("generate_synthetic: unknown generator '" + spec.name + "'");

  const Eigen::VectorXd lambda = table2_spectrum(spec.p);
  out.spectrum = lambda;
  out.X.resize(spec.n, spec.p);
  if (spec.name == "mvn_diag") {
    const Eigen::VectorXd root = lambda.array().sqrt();
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.p; ++j) out.X(i, j) = root(j) * rng.normal();
  } else {
    // Multivariate t5 scaled so cov = Lambda: base Gaussian scale (3/5)Lambda,
    // one chi-square mixing variable per row.
    const Eigen::VectorXd root = (0.6 * lambda.array()).sqrt();
    for (int i = 0; i < spec.n; ++i) {
      double chi2 = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double g = rng.normal();
        chi2 += g * g;
      }
      const double mix = 1.0 / std::sqrt(chi2 / 5.0);
      for (int j = 0; j < spec.p; ++j)
        out.X(i, j) = mix * root(j) * rng.normal();
    }
  }
  const int tracked = std::min(5, spec.p - 1);
  for (int j = 0; j < tracked; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.p);
    e(j) = 1.0;
    out.truth_names.push_back("v" + std::to_string(j + 1));
    out.truths.push_back(std::move(e));
  }
  return out;
}

}  // namespace seqgibbs
