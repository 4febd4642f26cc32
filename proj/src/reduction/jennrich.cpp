#include "qfcm/errors.hpp"
#include "qfcm/reduction.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qfcm {

namespace {

constexpr Index kMaxRetries = 5;
constexpr double kGap = 1e-8;
constexpr double kNonneg = 1e-6;

Vector random_unit(Index a, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(a));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return v / v.norm();
}

Index numerical_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-10 * sv(0);
  return rank;
}

}  // namespace

JennrichResult jennrich_decompose(const MomentTensor& tensor, Index rank, Rng& rng) {
  const Index a = tensor.dim();
  if (rank < 1 || rank > a) {
    throw ConfigError("tensor rank must lie in [1, " + std::to_string(a) + "]");
  }
  const double norm = tensor.frobenius_norm();
  std::string last_failure = "no attempt made";
  bool decomposition_failure = false;

  for (Index attempt = 1; attempt <= kMaxRetries + 1; ++attempt) {
    const Vector wa = random_unit(a, rng);
    const Vector wb = random_unit(a, rng);
    const Matrix t1 = tensor.slice(wa);
    const Matrix t2 = tensor.slice(wb);
    if (numerical_rank(t1) < rank || numerical_rank(t2) < rank) {
      last_failure = "slice rank below " + std::to_string(rank);
      decomposition_failure = false;
      continue;
    }

    const Matrix pinv = Eigen::CompleteOrthogonalDecomposition<Matrix>(t2).pseudoInverse();
    Eigen::EigenSolver<Matrix> eig(t1 * pinv);
    if (eig.info() != Eigen::Success) {
      last_failure = "eigendecomposition did not converge";
      continue;
    }
    const Eigen::VectorXcd values = eig.eigenvalues();
    std::vector<Index> idx(a);
    std::iota(idx.begin(), idx.end(), Index{0});
    std::sort(idx.begin(), idx.end(), [&](Index x, Index y) {
      return std::abs(values(static_cast<Eigen::Index>(x))) >
             std::abs(values(static_cast<Eigen::Index>(y)));
    });
    const double scale = std::max(1.0, std::abs(values(static_cast<Eigen::Index>(idx[0]))));

    bool well_posed = true;
    for (Index r = 0; r < rank && well_posed; ++r) {
      const auto lr = values(static_cast<Eigen::Index>(idx[r]));
      if (std::abs(lr.imag()) > kGap * scale) well_posed = false;
      const Index upto = std::min(a, rank + 1);
      for (Index s = r + 1; s < upto && well_posed; ++s) {
        if (std::abs(lr - values(static_cast<Eigen::Index>(idx[s]))) < kGap * scale) {
          well_posed = false;
        }
      }
    }
    if (!well_posed) {
      last_failure = "complex or nearly equal eigenvalues";
      decomposition_failure = false;
      continue;
    }

    Matrix v(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(rank));
    for (Index r = 0; r < rank; ++r) {
      Vector col = eig.eigenvectors().col(static_cast<Eigen::Index>(idx[r])).real();
      v.col(static_cast<Eigen::Index>(r)) = col / col.norm();
    }

    // Least-squares weights c with Sum_r c_r v_r^{x3} ~ A.
    const auto cells = static_cast<Eigen::Index>(a * a * a);
    Matrix design(cells, static_cast<Eigen::Index>(rank));
    for (Index r = 0; r < rank; ++r) {
      const MomentTensor unit = MomentTensor::from_factors(v.col(static_cast<Eigen::Index>(r)));
      design.col(static_cast<Eigen::Index>(r)) =
          Eigen::Map<const Vector>(unit.entries().data(), cells);
    }
    const Vector target = Eigen::Map<const Vector>(tensor.entries().data(), cells);
    const Vector c = design.colPivHouseholderQr().solve(target);

    Matrix z = v;
    bool nonneg = true;
    for (Index r = 0; r < rank; ++r) {
      auto col = z.col(static_cast<Eigen::Index>(r));
      col *= std::cbrt(c(static_cast<Eigen::Index>(r)));
      if (col.minCoeff() < -kNonneg) nonneg = false;
      col = col.cwiseMax(0.0);
    }
    if (!nonneg) {
      last_failure = "recovered factor has a negative entry";
      decomposition_failure = true;
      continue;
    }

    const MomentTensor rebuilt = MomentTensor::from_factors(z);
    double diff = 0.0;
    for (std::size_t e = 0; e < rebuilt.entries().size(); ++e) {
      const double d = rebuilt.entries()[e] - tensor.entries()[e];
      diff += d * d;
    }
    diff = std::sqrt(diff);
    if (diff > 1e-6 * norm) {
      last_failure = "reconstruction residual " + std::to_string(diff) + " exceeds 1e-6 |A|";
      decomposition_failure = true;
      continue;
    }
    return {z, diff, attempt};
  }

  const std::string msg =
      "Jennrich decomposition failed after " + std::to_string(kMaxRetries) + " retries: " +
      last_failure;
  if (decomposition_failure) throw DecompositionError(msg);
  throw ConditioningError(msg);
}

}  // namespace qfcm
