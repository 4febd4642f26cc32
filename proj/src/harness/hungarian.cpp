#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"

#include <limits>

namespace qfcm {

// O(k^3) shortest augmenting path with row/column potentials.
std::vector<Index> hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw ShapeError("assignment needs a square cost matrix");
  const auto n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    p[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = p[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(static_cast<Eigen::Index>(r0 - 1), static_cast<Eigen::Index>(c - 1)) -
                           u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[p[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (p[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      p[col0] = p[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<Index> assignment(n);
  for (std::size_t c = 1; c <= n; ++c) assignment[p[c] - 1] = c - 1;
  return assignment;
}

}  // namespace qfcm
