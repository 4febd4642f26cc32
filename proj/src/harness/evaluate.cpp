#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"

#include <algorithm>

namespace qfcm {

double argmax_accuracy(const Matrix& memberships, const Labels& labels) {
  if (labels.size() != static_cast<Index>(memberships.rows())) {
    throw ShapeError("label count does not match the membership rows");
  }
  if (labels.empty()) return 0.0;
  Index hits = 0;
  for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < memberships.cols(); ++j) {
      if (memberships(i, j) > memberships(i, best)) best = j;
    }
    hits += static_cast<Index>(best) == labels[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

EvalReport evaluate(const Clustering& target, const Clustering& estimate, const Labels* labels,
                    const QueryCounts& queries) {
  if (target.k() != estimate.k()) throw ShapeError("target and estimate have different k");
  if (target.centers.cols() != estimate.centers.cols()) {
    throw ShapeError("target and estimate centers have different dimensions");
  }
  const auto k = static_cast<Eigen::Index>(target.k());
  Matrix cost(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      cost(a, b) = (target.centers.row(a) - estimate.centers.row(b)).norm();
    }
  }

  EvalReport report;
  report.queries = queries;
  report.matching = hungarian(cost);
  for (Eigen::Index j = 0; j < k; ++j) {
    report.center_error =
        std::max(report.center_error, cost(j, static_cast<Eigen::Index>(report.matching[j])));
  }

  const bool have_memberships = estimate.memberships.size() > 0;
  Matrix aligned;
  if (have_memberships) {
    if (estimate.memberships.rows() != target.memberships.rows()) {
      throw ShapeError("target and estimate have different n");
    }
    aligned.resize(estimate.memberships.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
      aligned.col(j) = estimate.memberships.col(static_cast<Eigen::Index>(report.matching[j]));
    }
    report.membership_error = (target.memberships - aligned).cwiseAbs().maxCoeff();
  }
  if (labels && have_memberships) {
    report.argmax_accuracy = argmax_accuracy(estimate.memberships, *labels);
    report.matched_accuracy = argmax_accuracy(aligned, *labels);
  }
  return report;
}

}  // namespace qfcm
