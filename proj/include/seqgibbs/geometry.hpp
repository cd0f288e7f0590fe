#pragma once

#include <Eigen/Dense>
#include <vector>

namespace seqgibbs {

inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kOrthonormalTol = 1e-8;

/// Point on a sphere S^{d-1}, d >= 2. Validated on construction.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

 private:
  Eigen::VectorXd coords_;
};

/// p x k matrix with orthonormal columns (element of the Stiefel
/// manifold when k >= 1; k = 0 is the empty frame).
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(Eigen::MatrixXd columns);
  static OrthonormalFrame empty(Eigen::Index p);
  const Eigen::MatrixXd& columns() const { return columns_; }
  Eigen::Index rows() const { return columns_.rows(); }
  Eigen::Index cols() const { return columns_.cols(); }

 private:
  OrthonormalFrame() = default;
  Eigen::MatrixXd columns_;
};

/// Image of a unit vector under the open-hemisphere chart; ||coords|| < 1.
class ChartPoint {
 public:
  explicit ChartPoint(Eigen::VectorXd coords);
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

 private:
  Eigen::VectorXd coords_;
};

/// Arc-length distance arccos(u.v), clamped against round-off. With
/// `antipodal` the sign ambiguity u ~ -u is quotiented out and the range
/// shrinks to [0, pi/2].
double geodesic_distance(const UnitVector& u, const UnitVector& v,
                         bool antipodal = false);

/// Hemisphere chart: drops the first coordinate. Requires w_1 > 0.
ChartPoint chart_forward(const UnitVector& w);

/// Inverse chart: prepends sqrt(1 - ||u||^2).
UnitVector chart_inverse(const ChartPoint& u);

/// Orthonormal basis N (p x (p-j)) of the orthogonal complement of the
/// span of V (p x j), built from the Householder QR of V. Column signs
/// are fixed so the largest-magnitude entry of each column is positive
/// (ties broken by lowest index), making the result reproducible.
OrthonormalFrame null_space_basis(const OrthonormalFrame& V);

/// Right-rotates `sample` by the orthogonal k x k matrix minimizing the
/// Frobenius distance to `reference` (orthogonal Procrustes, via the SVD
/// of sample^T reference).
OrthonormalFrame procrustes_align(const OrthonormalFrame& sample,
                                  const OrthonormalFrame& reference);

/// Embeds sphere coordinates w_1, ..., w_J (dims p, p-1, ..., p-J+1)
/// into a p x J orthonormal frame: v_j = N_{<j} w_j with N_{<j} the null
/// space basis of the previously embedded columns.
OrthonormalFrame sequential_embed(const std::vector<UnitVector>& ws);

namespace detail {

// Unvalidated kernels shared with the samplers' hot paths.

double geodesic(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                bool antipodal);

// Largest-magnitude-entry-positive sign convention, applied per column.
void fix_column_signs(Eigen::MatrixXd& M);

// Null space of the columns of V inside R^p; V may have zero columns.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& V);

}  // namespace detail

}  // namespace seqgibbs
