#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"

#include <algorithm>

namespace qfcm {

Clustering build_target(const Dataset& data, const TargetOptions& options, const Labels* labels) {
  validate_alpha(options.alpha);
  const double tol = kDefaultTol * std::max(1.0, data.radius());
  Clustering target;

  if (options.mode == TargetMode::kLloyd) {
    LloydResult fit;
    if (options.init_centers) {
      fit = lloyd_fuzzy(data, *options.init_centers, options.alpha, options.lloyd);
    } else {
      if (options.k < 1) throw ConfigError("lloyd target mode needs k");
      fit = lloyd_fuzzy(data, options.k, options.alpha, options.seed, options.lloyd);
    }
    target = std::move(fit.clustering);
  } else {
    if (labels == nullptr) throw ConfigError("hard-label target mode needs labels");
    if (labels->size() != data.n()) throw ShapeError("label count does not match the data");
    const Index k = options.k > 0 ? options.k : *std::max_element(labels->begin(), labels->end()) + 1;
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(data.n()), static_cast<Eigen::Index>(k));
    for (Index i = 0; i < data.n(); ++i) {
      if ((*labels)[i] >= k) throw ConfigError("label exceeds the cluster count");
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((*labels)[i])) = 1.0;
    }
    target.memberships = std::move(u);
    target.centers = update_centers(data, target.memberships, options.alpha);
  }
  target.consistent = is_consistent_center_based(data, target, options.alpha, tol).consistent;
  return target;
}

}  // namespace qfcm
