#include "qfcm/errors.hpp"
#include "qfcm/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qfcm {

namespace {

constexpr double kZero = 1e-12;
constexpr double kRowTol = 1e-6;

}  // namespace

AnchorSet make_anchor_set(std::vector<Index> indices, Matrix basis, bool is_pure) {
  if (basis.rows() != static_cast<Eigen::Index>(indices.size()) || basis.rows() != basis.cols()) {
    throw ShapeError("anchor basis must be square with one row per anchor");
  }
  AnchorSet set;
  set.indices = std::move(indices);
  set.is_pure = is_pure;
  if (is_pure) {
    set.condition = 1.0;
  } else {
    Eigen::JacobiSVD<Matrix> svd(basis);
    const Vector sv = svd.singularValues();
    const double lo = sv(sv.size() - 1);
    set.condition = lo > 0.0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
    if (!(set.condition <= 1e12)) {
      throw ConditioningError("anchor basis is singular (condition number " +
                              std::to_string(set.condition) + ")");
    }
  }
  set.basis = std::move(basis);
  return set;
}

std::optional<AnchorSet> find_pure_anchors(SimilarityOracle& oracle,
                                           const std::vector<Index>& candidates, Index k) {
  const Index c = candidates.size();
  if (k < 1) throw ConfigError("k must be positive");
  if (c < k) return std::nullopt;

  Matrix sim = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
  for (Index a = 0; a < c; ++a) {
    for (Index b = a + 1; b < c; ++b) {
      const double v = oracle.pair(candidates[a], candidates[b]);
      sim(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      sim(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
  }
  auto zero = [&](Index a, Index b) {
    return std::abs(sim(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) <= kZero;
  };

  // A candidate outside the clique whose similarities to it sum to one.
  auto confirmed = [&](const std::vector<Index>& clique) {
    for (Index other = 0; other < c; ++other) {
      if (std::find(clique.begin(), clique.end(), other) != clique.end()) continue;
      double total = 0.0;
      for (Index a : clique) {
        total += sim(static_cast<Eigen::Index>(other), static_cast<Eigen::Index>(a));
      }
      return std::abs(total - 1.0) <= 1e-9;
    }
    return true;
  };

  std::vector<Index> clique;
  std::function<bool(Index)> extend = [&](Index from) -> bool {
    if (clique.size() == k) return confirmed(clique);
    for (Index cand = from; cand + (k - clique.size()) <= c; ++cand) {
      bool ok = true;
      for (Index a : clique) ok = ok && zero(a, cand);
      if (!ok) continue;
      clique.push_back(cand);
      if (extend(cand + 1)) return true;
      clique.pop_back();
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;

  std::vector<Index> indices;
  for (Index a : clique) indices.push_back(candidates[a]);
  return make_anchor_set(std::move(indices),
                         Matrix::Identity(static_cast<Eigen::Index>(k),
                                          static_cast<Eigen::Index>(k)),
                         true);
}

Vector membership_from_pairwise(SimilarityOracle& oracle, const AnchorSet& anchors, Index i,
                                bool* adjusted) {
  if (adjusted) *adjusted = false;
  const auto k = static_cast<Eigen::Index>(anchors.indices.size());
  for (Eigen::Index t = 0; t < k; ++t) {
    if (anchors.indices[static_cast<std::size_t>(t)] == i) {
      return anchors.basis.row(t).transpose();
    }
  }
  Vector s(k);
  for (Eigen::Index t = 0; t < k; ++t) {
    s(t) = oracle.pair(i, anchors.indices[static_cast<std::size_t>(t)]);
  }
  // <U_i, V_t> = Sum_c V_tc w_c, i.e. basis * w = s.
  Vector w = anchors.is_pure ? s : Vector(anchors.basis.fullPivLu().solve(s));
  const bool out_of_range = w.minCoeff() < -kRowTol || w.maxCoeff() > 1.0 + kRowTol;
  if (out_of_range || std::abs(w.sum() - 1.0) > kRowTol) {
    w = w.cwiseMax(0.0).cwiseMin(1.0);
    const double total = w.sum();
    if (total > 0.0) {
      w /= total;
    } else {
      w.setConstant(1.0 / static_cast<double>(k));
    }
    if (adjusted) *adjusted = true;
  }
  return w;
}

}  // namespace qfcm
