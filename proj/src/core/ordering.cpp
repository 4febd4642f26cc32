#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qfcm {

Permutation sort_by_distance(const Dataset& data, const Eigen::Ref<const Vector>& v) {
  if (static_cast<Index>(v.size()) != data.d()) {
    throw ShapeError("reference vector dimension does not match the data");
  }
  const Matrix& x = data.points();
  std::vector<double> sq(data.n());
  for (Index i = 0; i < data.n(); ++i) {
    sq[i] = (x.row(static_cast<Eigen::Index>(i)) - v.transpose()).squaredNorm();
  }
  Permutation order(data.n());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return sq[a] < sq[b]; });
  return order;
}

double gamma_of(const Dataset& data, const Matrix& centers) {
  if (static_cast<Index>(centers.cols()) != data.d()) {
    throw ShapeError("center dimension does not match the data");
  }
  const Index n = data.n();
  if (n == 1) return std::numeric_limits<double>::infinity();

  const Matrix& x = data.points();
  double gamma = std::numeric_limits<double>::infinity();
  std::vector<double> sq(n);
  for (Eigen::Index j = 0; j < centers.rows(); ++j) {
    for (Index i = 0; i < n; ++i) {
      sq[i] = (x.row(static_cast<Eigen::Index>(i)) - centers.row(j)).squaredNorm();
    }
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        const double gap = std::abs(sq[b] - sq[a]);
        if (gap == 0.0) return 0.0;
        const double sep =
            (x.row(static_cast<Eigen::Index>(b)) - x.row(static_cast<Eigen::Index>(a))).norm();
        if (sep == 0.0) return 0.0;
        gamma = std::min(gamma, gap / (2.0 * sep));
      }
    }
  }
  return gamma;
}

ConsistencyReport is_consistent_center_based(const Dataset& data, const Clustering& clustering,
                                             double alpha, double tol) {
  ConsistencyReport report;
  const Matrix& u = clustering.memberships;
  if (static_cast<Index>(u.cols()) != clustering.k()) {
    throw ShapeError("center count does not match membership columns");
  }

  try {
    const Matrix expected = update_centers(data, u, alpha);
    report.max_center_deviation =
        (expected - clustering.centers).rowwise().norm().maxCoeff();
  } catch (const DegenerateError&) {
    report.max_center_deviation = std::numeric_limits<double>::infinity();
  }
  if (!(report.max_center_deviation <= tol)) report.consistent = false;

  for (Index j = 0; j < clustering.k(); ++j) {
    const Vector c = clustering.centers.row(static_cast<Eigen::Index>(j)).transpose();
    const Permutation order = sort_by_distance(data, c);
    const auto col = static_cast<Eigen::Index>(j);
    // Any later element exceeding the running maximum of earlier ones is a
    // violation; report it against the earlier element that holds that maximum.
    Index best = order.front();
    for (Index p = 1; p < order.size(); ++p) {
      const Index cur = order[p];
      if (u(static_cast<Eigen::Index>(cur), col) >
          u(static_cast<Eigen::Index>(best), col) + tol) {
        report.consistent = false;
        report.violations.push_back({best, cur, j});
      }
      if (u(static_cast<Eigen::Index>(cur), col) < u(static_cast<Eigen::Index>(best), col)) {
        best = cur;
      }
    }
  }
  return report;
}

}  // namespace qfcm
