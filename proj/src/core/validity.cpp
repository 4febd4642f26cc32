#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qfcm {

namespace {

double min_separation_sq(const Matrix& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < centers.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < centers.rows(); ++b) {
      best = std::min(best, (centers.row(a) - centers.row(b)).squaredNorm());
    }
  }
  return best;
}

}  // namespace

double xie_beni(const Dataset& data, const Clustering& clustering, double alpha) {
  if (clustering.k() < 2) throw ConfigError("the Xie-Beni index needs k >= 2");
  const double sep = min_separation_sq(clustering.centers);
  if (!(sep > 0.0)) throw DegenerateError("two centers coincide", 0);
  const double j = fuzzy_objective(data, clustering, alpha);
  return j / (static_cast<double>(data.n()) * static_cast<double>(clustering.k()) * sep);
}

double xie_beni_perturbation_bound(const Dataset& data, const Clustering& clustering,
                                   double alpha, double eps1, double eps2) {
  if (eps1 < 0.0 || eps2 < 0.0) throw ConfigError("perturbation sizes must be nonnegative");
  const double n = static_cast<double>(data.n());
  const double k = static_cast<double>(clustering.k());
  const double r = data.radius();
  const double xb = xie_beni(data, clustering, alpha);
  const double j = fuzzy_objective(data, clustering, alpha);
  const double sep = min_separation_sq(clustering.centers);

  // Center shift: | |x - mu'|^2 - |x - mu|^2 | <= 4 R eps1 + eps1^2 per point,
  // and the U^alpha weights of a row sum to at most 1.
  const double center_term = n * (4.0 * r * eps1 + eps1 * eps1);
  // Membership shift: |u'^alpha - u^alpha| <= alpha (1 + eps2)^(alpha - 1) eps2
  // (mean value theorem on [0, 1 + eps2]); distances are bounded by 2R and
  // 2R + eps1 before and after the center shift.
  const double membership_term = 2.0 * n * k * alpha * std::pow(1.0 + eps2, alpha - 1.0) *
                                 eps2 * (r * r + (r + eps1) * (r + eps1));
  const double j_hi = j + center_term + membership_term;
  const double j_lo = std::max(0.0, j - center_term - membership_term);

  // |mu_a - mu_b| moves by at most 2 eps1 and both lie within R of the origin.
  const double sep_shift = 8.0 * r * eps1 + 4.0 * eps1 * eps1;
  const double sep_lo = sep - sep_shift;
  const double sep_hi = sep + sep_shift;
  if (!(sep_lo > 0.0)) return std::numeric_limits<double>::infinity();

  const double upper = j_hi / (n * k * sep_lo) - xb;
  const double lower = xb - j_lo / (n * k * sep_hi);
  return std::max(upper, lower);
}

}  // namespace qfcm
