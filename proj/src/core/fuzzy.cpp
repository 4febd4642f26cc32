#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfcm {

namespace {

constexpr double kCoincidence = 1e-12;

void check_centers(const Dataset& data, const Matrix& centers) {
  if (centers.rows() < 1) throw ShapeError("at least one center is required");
  if (static_cast<Index>(centers.cols()) != data.d()) {
    throw ShapeError("center dimension " + std::to_string(centers.cols()) +
                     " does not match data dimension " + std::to_string(data.d()));
  }
}

void check_memberships(const Dataset& data, const Matrix& memberships) {
  if (static_cast<Index>(memberships.rows()) != data.n()) {
    throw ShapeError("membership rows " + std::to_string(memberships.rows()) +
                     " do not match n = " + std::to_string(data.n()));
  }
  if (memberships.cols() < 1) throw ShapeError("membership matrix has no columns");
}

}  // namespace

Dataset::Dataset(Matrix points, double radius) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw ShapeError("a dataset needs n >= 1 points of dimension d >= 1");
  }
  if (!points_.allFinite()) throw ShapeError("dataset contains non-finite coordinates");
  const double max_norm = points_.rowwise().norm().maxCoeff();
  if (radius < 0.0) {
    radius_ = max_norm;
  } else {
    if (radius < max_norm * (1.0 - 1e-12)) {
      throw ConfigError("radius " + std::to_string(radius) +
                        " is smaller than the largest point norm " + std::to_string(max_norm));
    }
    radius_ = radius;
  }
}

void validate_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw ConfigError("fuzzifier alpha must be a finite value > 1 (got " + std::to_string(alpha) +
                      ")");
  }
}

void SolverConfig::validate() const {
  validate_alpha(alpha);
  if (m < 1) throw ConfigError("m must be positive");
  if (r < 1) throw ConfigError("r must be positive");
  auto in_unit = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(name) + " must lie in (0, 1], got " + std::to_string(v));
    }
  };
  in_unit(eta, "eta");
  in_unit(eta1, "eta1");
  in_unit(eta2, "eta2");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (eta2 > eta1) throw ConfigError("eta2 must not exceed eta1");
}

void validate_memberships(const Matrix& memberships, double tol) {
  for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
    const double s = memberships.row(i).sum();
    if (std::abs(s - 1.0) > tol) {
      throw ShapeError("membership row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
    if (memberships.row(i).minCoeff() < -tol || memberships.row(i).maxCoeff() > 1.0 + tol) {
      throw ShapeError("membership row " + std::to_string(i) + " has entries outside [0, 1]");
    }
  }
}

double fuzzy_objective(const Dataset& data, const Matrix& centers, const Matrix& memberships,
                       double alpha) {
  check_centers(data, centers);
  check_memberships(data, memberships);
  if (memberships.cols() != centers.rows()) {
    throw ShapeError("membership columns do not match the number of centers");
  }
  const Matrix& x = data.points();
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      const double u = memberships(i, j);
      if (u == 0.0) continue;
      total += std::pow(u, alpha) * (x.row(i) - centers.row(j)).squaredNorm();
    }
  }
  return total;
}

double fuzzy_objective(const Dataset& data, const Clustering& clustering, double alpha) {
  return fuzzy_objective(data, clustering.centers, clustering.memberships, alpha);
}

Matrix update_memberships(const Dataset& data, const Matrix& centers, double alpha) {
  validate_alpha(alpha);
  check_centers(data, centers);
  const Matrix& x = data.points();
  const Eigen::Index n = x.rows();
  const Eigen::Index k = centers.rows();
  const double exponent = 1.0 / (alpha - 1.0);

  Matrix u(n, k);
  Vector sq(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sq(j) = (x.row(i) - centers.row(j)).squaredNorm();

    Eigen::Index coincident = 0;
    for (Eigen::Index j = 0; j < k; ++j) coincident += sq(j) < kCoincidence * kCoincidence;
    if (coincident > 0) {
      for (Eigen::Index j = 0; j < k; ++j) {
        u(i, j) = sq(j) < kCoincidence * kCoincidence ? 1.0 / static_cast<double>(coincident) : 0.0;
      }
      continue;
    }
    // (d_min / d_j)^(2 / (alpha - 1)) lies in (0, 1]; normalising gives the
    // closed-form memberships without overflow.
    const double dmin = sq.minCoeff();
    double total = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      u(i, j) = std::pow(dmin / sq(j), exponent);
      total += u(i, j);
    }
    u.row(i) /= total;
  }
  return u;
}

Matrix update_centers(const Dataset& data, const Matrix& memberships, double alpha) {
  check_memberships(data, memberships);
  const Matrix& x = data.points();
  const Eigen::Index k = memberships.cols();
  Matrix centers = Matrix::Zero(k, x.cols());
  for (Eigen::Index j = 0; j < k; ++j) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double u = memberships(i, j);
      if (u <= 0.0) continue;
      const double w = std::pow(u, alpha);
      mass += w;
      centers.row(j) += w * x.row(i);
    }
    if (!(mass > 0.0)) {
      throw DegenerateError("cluster " + std::to_string(j) + " has zero membership mass",
                            static_cast<Index>(j));
    }
    centers.row(j) /= mass;
  }
  return centers;
}

double beta_of(const Matrix& memberships) {
  if (memberships.rows() < 1 || memberships.cols() < 1) {
    throw ShapeError("beta needs a non-empty membership matrix");
  }
  const double k = static_cast<double>(memberships.cols());
  const double n = static_cast<double>(memberships.rows());
  return k / n * memberships.colwise().sum().minCoeff();
}

}  // namespace qfcm
