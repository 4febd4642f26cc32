#include "qfcm/errors.hpp"
#include "qfcm/reduction.hpp"

#include <cmath>

namespace qfcm {

void MomentTensor::set_symmetric(Index p, Index q, Index s, double v) {
  const Index perms[6][3] = {{p, q, s}, {p, s, q}, {q, p, s}, {q, s, p}, {s, p, q}, {s, q, p}};
  for (const auto& t : perms) entries_[(t[0] * a_ + t[1]) * a_ + t[2]] = v;
}

Matrix MomentTensor::slice(const Vector& w) const {
  if (static_cast<Index>(w.size()) != a_) throw ShapeError("slice weights have the wrong size");
  const auto a = static_cast<Eigen::Index>(a_);
  Matrix out = Matrix::Zero(a, a);
  for (Index p = 0; p < a_; ++p) {
    for (Index q = 0; q < a_; ++q) {
      double v = 0.0;
      for (Index s = 0; s < a_; ++s) v += w(static_cast<Eigen::Index>(s)) * (*this)(p, q, s);
      out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = v;
    }
  }
  return out;
}

double MomentTensor::frobenius_norm() const {
  double total = 0.0;
  for (double v : entries_) total += v * v;
  return std::sqrt(total);
}

MomentTensor MomentTensor::from_factors(const Matrix& factors) {
  const auto a = static_cast<Index>(factors.rows());
  MomentTensor t(a);
  for (Index p = 0; p < a; ++p) {
    for (Index q = 0; q < a; ++q) {
      for (Index s = 0; s < a; ++s) {
        double v = 0.0;
        for (Eigen::Index r = 0; r < factors.cols(); ++r) {
          v += factors(static_cast<Eigen::Index>(p), r) * factors(static_cast<Eigen::Index>(q), r) *
               factors(static_cast<Eigen::Index>(s), r);
        }
        t.entries_[(p * a + q) * a + s] = v;
      }
    }
  }
  return t;
}

MomentTensor build_moment_tensor(SimilarityOracle& oracle, const std::vector<Index>& anchors) {
  if (!oracle.supports_repeated_triplets()) {
    throw CapabilityError(
        "the moment tensor needs repeated-index triplet queries, which this oracle does not "
        "answer; enable allow_repeated_triplets");
  }
  const Index a = anchors.size();
  MomentTensor t(a);
  for (Index p = 0; p < a; ++p) {
    for (Index q = p; q < a; ++q) {
      for (Index s = q; s < a; ++s) {
        t.set_symmetric(p, q, s, oracle.triplet(anchors[p], anchors[q], anchors[s], true));
      }
    }
  }
  return t;
}

}  // namespace qfcm
