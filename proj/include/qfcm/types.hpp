#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qfcm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::size_t;

/// Index permutation of [0, n); position p holds the element ranked p-th.
using Permutation = std::vector<Index>;

/// n points in R^d (one per row) together with an enclosing radius R.
class Dataset {
 public:
  Dataset() = default;
  /// Radius defaults to the maximum point norm; an explicit radius smaller
  /// than that norm is rejected.
  explicit Dataset(Matrix points, double radius = -1.0);

  const Matrix& points() const noexcept { return points_; }
  Index n() const noexcept { return static_cast<Index>(points_.rows()); }
  Index d() const noexcept { return static_cast<Index>(points_.cols()); }
  double radius() const noexcept { return radius_; }
  auto point(Index i) const { return points_.row(static_cast<Eigen::Index>(i)); }

 private:
  Matrix points_;
  double radius_ = 0.0;
};

/// A pair (centers, memberships): centers is k x d, memberships is n x k.
struct Clustering {
  Matrix centers;
  Matrix memberships;
  bool consistent = false;

  Index k() const noexcept { return static_cast<Index>(centers.rows()); }
  Index n() const noexcept { return static_cast<Index>(memberships.rows()); }
};

/// Parameters shared by the query solvers.
struct SolverConfig {
  double alpha = 2.0;
  Index m = 1000;
  Index r = 100;
  double eta = 0.1;
  double eta1 = 0.1;
  double eta2 = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 1;
  /// Clamp final memberships to [0, 1] and rescale rows (off by default so
  /// that the renormalisation step is reported exactly as computed).
  bool clamp_output = false;

  /// Throws ConfigError on any out-of-range value.
  void validate() const;
};

/// Throws ConfigError unless alpha > 1.
void validate_alpha(double alpha);

/// Throws ShapeError unless memberships rows lie on the simplex (within tol)
/// and every entry is in [-tol, 1 + tol].
void validate_memberships(const Matrix& memberships, double tol = 1e-9);

}  // namespace qfcm
