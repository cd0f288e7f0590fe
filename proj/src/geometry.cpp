#include "seqgibbs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqgibbs/errors.hpp"

namespace seqgibbs {

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2)
    throw std::invalid_argument("UnitVector: dimension must be >= 2");
  if (std::abs(coords_.norm() - 1.0) > kUnitNormTol)
    throw std::invalid_argument("UnitVector: norm deviates from 1 beyond tolerance");
}

OrthonormalFrame::OrthonormalFrame(Eigen::MatrixXd columns)
    : columns_(std::move(columns)) {
  const Eigen::Index p = columns_.rows();
  const Eigen::Index k = columns_.cols();
  if (p < 1 || k > p)
    throw std::invalid_argument("OrthonormalFrame: need p >= k >= 0");
  if (k > 0) {
    const Eigen::MatrixXd gram = columns_.transpose() * columns_;
    const double err =
        (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (err > kOrthonormalTol)
      throw std::invalid_argument("OrthonormalFrame: columns not orthonormal within tolerance");
  }
}

OrthonormalFrame OrthonormalFrame::empty(Eigen::Index p) {
  if (p < 1) throw std::invalid_argument("OrthonormalFrame: p must be >= 1");
  OrthonormalFrame f;
  f.columns_ = Eigen::MatrixXd(p, 0);
  return f;
}

ChartPoint::ChartPoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1)
    throw std::invalid_argument("ChartPoint: dimension must be >= 1");
  if (coords_.norm() >= 1.0)
    throw std::invalid_argument("ChartPoint: norm must be < 1");
}

namespace detail {

double geodesic(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                bool antipodal) {
  double dot = u.dot(v);
  if (antipodal) dot = std::abs(dot);
  dot = std::clamp(dot, -1.0, 1.0);
  return std::acos(dot);
}

void fix_column_signs(Eigen::MatrixXd& M) {
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      const double a = std::abs(M(r, c));
      if (a > best) {
        best = a;
        imax = r;
      }
    }
    if (M(imax, c) < 0.0) M.col(c) = -M.col(c);
  }
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& V) {
  const Eigen::Index p = V.rows();
  const Eigen::Index j = V.cols();
  if (j == 0) return Eigen::MatrixXd::Identity(p, p);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
  // Trailing p-j columns of Q, formed by applying the reflectors to the
  // corresponding identity block instead of materializing all of Q.
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(p, p - j);
  N.bottomRows(p - j).setIdentity();
  N.applyOnTheLeft(qr.householderQ());
  fix_column_signs(N);
  return N;
}

}  // namespace detail

double geodesic_distance(const UnitVector& u, const UnitVector& v,
                         bool antipodal) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("geodesic_distance: dimension mismatch");
  return detail::geodesic(u.coords(), v.coords(), antipodal);
}

ChartPoint chart_forward(const UnitVector& w) {
  if (!(w.coords()(0) > 0.0))
    throw std::invalid_argument("chart_forward: point outside the open hemisphere chart (w1 <= 0)");
  return ChartPoint(w.coords().tail(w.dim() - 1));
}

UnitVector chart_inverse(const ChartPoint& u) {
  const double sq = u.coords().squaredNorm();
  Eigen::VectorXd w(u.dim() + 1);
  w(0) = std::sqrt(std::max(0.0, 1.0 - sq));
  w.tail(u.dim()) = u.coords();
  return UnitVector(std::move(w));
}

OrthonormalFrame null_space_basis(const OrthonormalFrame& V) {
  if (V.cols() >= V.rows())
    throw std::invalid_argument("null_space_basis: frame must have fewer columns than rows");
  return OrthonormalFrame(detail::nullspace(V.columns()));
}

OrthonormalFrame procrustes_align(const OrthonormalFrame& sample,
                                  const OrthonormalFrame& reference) {
  if (sample.rows() != reference.rows() || sample.cols() != reference.cols())
    throw std::invalid_argument("procrustes_align: shape mismatch");
  const Eigen::MatrixXd cross = sample.columns().transpose() * reference.columns();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) < 1e-12 * std::max(1.0, sv(0)))
    throw NumericalError("procrustes_align: degenerate alignment (rank-deficient cross product)");
  const Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
  return OrthonormalFrame(sample.columns() * rotation);
}

OrthonormalFrame sequential_embed(const std::vector<UnitVector>& ws) {
  if (ws.empty()) throw std::invalid_argument("sequential_embed: no inputs");
  const Eigen::Index p = ws[0].dim();
  for (std::size_t j = 0; j < ws.size(); ++j) {
    if (ws[j].dim() != p - static_cast<Eigen::Index>(j))
      throw std::invalid_argument("sequential_embed: dimensions must descend by one");
  }
  Eigen::MatrixXd V(p, static_cast<Eigen::Index>(ws.size()));
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const Eigen::MatrixXd N = detail::nullspace(V.leftCols(static_cast<Eigen::Index>(j)));
    V.col(static_cast<Eigen::Index>(j)) = N * ws[j].coords();
  }
  return OrthonormalFrame(std::move(V));
}

}  // namespace seqgibbs
