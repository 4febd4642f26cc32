#include "support.hpp"

#include "qfcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qfcm::testing {

Dataset random_dataset(Index n, Index d, double scale, Rng& rng) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(i, c) = unif(rng);
  }
  return Dataset(std::move(x));
}

Matrix random_memberships(Index n, Index k, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  Matrix u(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) u(i, j) = unif(rng);
    u.row(i) /= u.row(i).sum();
  }
  return u;
}

namespace {

std::optional<ConsistentInstance> try_consistent(Index n, Index k, Index d, double alpha,
                                                 Rng& rng) {
  const double min_sep = 30.0;
  std::uniform_real_distribution<double> box(-25.0 * static_cast<double>(k),
                                             25.0 * static_cast<double>(k));
  std::normal_distribution<double> jitter(0.0, 0.5);

  Matrix blob(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (Index c = 0; c < k; ++c) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) return std::nullopt;
      for (Index t = 0; t < d; ++t) blob(c, t) = box(rng);
      bool ok = true;
      for (Index o = 0; o < c; ++o) ok = ok && (blob.row(c) - blob.row(o)).norm() >= min_sep;
      if (ok) break;
    }
  }

  std::vector<Index> sizes(k, n / k);
  for (Index r = 0; r < n % k; ++r) ++sizes[r];
  std::shuffle(sizes.begin(), sizes.end(), rng);

  std::uniform_real_distribution<double> level(0.2, 1.0);
  const double a = level(rng) * (k > 1 ? 0.4 / static_cast<double>(k - 1) : 0.0);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  Index row = 0;
  for (Index c = 0; c < k; ++c) {
    for (Index s = 0; s < sizes[c]; ++s, ++row) {
      const auto i = static_cast<Eigen::Index>(row);
      for (Index t = 0; t < d; ++t) x(i, t) = blob(c, t) + jitter(rng);
      double rest = 0.0;
      for (Index j = 0; j < k; ++j) {
        if (j == c) continue;
        const double dist = (blob.row(c) - blob.row(j)).norm();
        u(i, j) = a * (min_sep / dist) * (min_sep / dist);
        rest += u(i, j);
      }
      u(i, c) = 1.0 - rest;
    }
  }

  ConsistentInstance out;
  out.alpha = alpha;
  out.data = Dataset(std::move(x));
  out.target.memberships = std::move(u);
  out.target.centers = update_centers(out.data, out.target.memberships, alpha);
  const double tol = kDefaultTol * std::max(1.0, out.data.radius());
  if (!is_consistent_center_based(out.data, out.target, alpha, tol).consistent) {
    return std::nullopt;
  }
  out.target.consistent = true;
  out.gamma = gamma_of(out.data, out.target.centers);
  if (!(out.gamma > 0.0) || !std::isfinite(out.gamma)) return std::nullopt;
  return out;
}

}  // namespace

ConsistentInstance consistent_instance(Index n, Index k, Index d, double alpha, Rng& rng) {
  if (n < 2 || k < 1 || n < k) throw ConfigError("consistent_instance needs n >= max(2, k)");
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (auto inst = try_consistent(n, k, d, alpha, rng)) return std::move(*inst);
  }
  throw DegenerateError("could not build a consistent instance", 0);
}

Matrix perturb_centers(const Matrix& centers, double radius, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out = centers;
  for (Eigen::Index j = 0; j < centers.rows(); ++j) {
    Vector dir(centers.cols());
    for (Eigen::Index t = 0; t < dir.size(); ++t) dir(t) = normal(rng);
    out.row(j) += radius * dir.normalized().transpose();
  }
  return out;
}

Clustering monotone_column(Index n, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unif(rng) < 0.2 ? std::round(unif(rng) * 4.0) / 4.0 : unif(rng);
  std::sort(v.begin(), v.end(), std::greater<>());
  Clustering c;
  c.memberships = Matrix(static_cast<Eigen::Index>(n), 1);
  for (Index i = 0; i < n; ++i) c.memberships(static_cast<Eigen::Index>(i), 0) = v[i];
  c.centers = Matrix::Zero(1, 1);
  return c;
}

double naive_objective(const Dataset& data, const Matrix& centers, const Matrix& u, double alpha) {
  double total = 0.0;
  for (Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      double sq = 0.0;
      for (Index t = 0; t < data.d(); ++t) {
        const double diff = data.points()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) -
                            centers(j, static_cast<Eigen::Index>(t));
        sq += diff * diff;
      }
      total += std::pow(u(static_cast<Eigen::Index>(i), j), alpha) * sq;
    }
  }
  return total;
}

double brute_force_assignment(const Matrix& cost) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Eigen::Index r = 0; r < cost.rows(); ++r) c += cost(r, perm[static_cast<std::size_t>(r)]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Matrix simplex_rows(Index n, Index k, bool pure_prefix, Rng& rng) {
  Matrix u = random_memberships(n, k, rng);
  if (pure_prefix) {
    for (Index t = 0; t < k && t < n; ++t) {
      u.row(static_cast<Eigen::Index>(t)).setZero();
      u(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t)) = 1.0;
    }
  }
  return u;
}

double matched_column_error(const Matrix& truth, const Matrix& found, std::vector<Index>* sigma) {
  std::vector<Index> pick;
  std::vector<bool> used(static_cast<std::size_t>(truth.cols()), false);
  bool bijective = found.cols() == truth.cols();
  double worst = 0.0;
  for (Eigen::Index r = 0; r < found.cols(); ++r) {
    Eigen::Index best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < truth.cols(); ++t) {
      const double d = (truth.col(t) - found.col(r)).norm();
      if (d < dist) {
        dist = d;
        best = t;
      }
    }
    if (used[static_cast<std::size_t>(best)]) bijective = false;
    used[static_cast<std::size_t>(best)] = true;
    pick.push_back(static_cast<Index>(best));
    worst = std::max(worst, (truth.col(best) - found.col(r)).cwiseAbs().maxCoeff());
  }
  if (sigma) *sigma = pick;
  return bijective ? worst : std::numeric_limits<double>::infinity();
}

Clustering bare_target(const Matrix& u) {
  Clustering c;
  c.memberships = u;
  c.centers = Matrix::Zero(u.cols(), 1);
  return c;
}

}  // namespace qfcm::testing
