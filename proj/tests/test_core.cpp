#include "support.hpp"

#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace qfcm;

namespace {

Dataset line(std::initializer_list<double> xs) {
  Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return Dataset(m);
}

Matrix rows(std::initializer_list<std::initializer_list<double>> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()),
           static_cast<Eigen::Index>(values.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : values) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("radius defaults to the largest norm and rejects smaller values") {
    const Matrix pts = rows({{3, 4}, {1, 0}});
    CHECK(Dataset(pts).radius() == doctest::Approx(5.0));
    CHECK(Dataset(pts, 7.0).radius() == 7.0);
    CHECK_THROWS_AS(Dataset(pts, 4.0), ConfigError);
  }

  TEST_CASE("non-finite coordinates are rejected") {
    Matrix pts = rows({{1, 2}});
    pts(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Dataset{pts}, ShapeError);
  }

  TEST_CASE("alpha must exceed one") {
    CHECK_THROWS_AS(validate_alpha(1.0), ConfigError);
    CHECK_THROWS_AS(validate_alpha(0.5), ConfigError);
    CHECK_NOTHROW(validate_alpha(1.0001));
  }

  TEST_CASE("solver configuration ranges") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.eta = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SolverConfig{};
    c.delta = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SolverConfig{};
    c.eta1 = 0.05;
    c.eta2 = 0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("membership validation") {
    CHECK_NOTHROW(validate_memberships(rows({{0.25, 0.75}, {1, 0}})));
    CHECK_THROWS_AS(validate_memberships(rows({{0.5, 0.6}})), ShapeError);
    CHECK_THROWS_AS(validate_memberships(rows({{1.5, -0.5}})), ShapeError);
  }
}

TEST_SUITE("objective") {
  TEST_CASE("zero when every point sits on its own center") {
    const Dataset x(rows({{0, 0}, {5, 5}}));
    Clustering c{rows({{0, 0}, {5, 5}}), rows({{1, 0}, {0, 1}}), false};
    CHECK(fuzzy_objective(x, c, 2.0) == 0.0);
  }

  TEST_CASE("single point single cluster") {
    const Dataset x(rows({{1, 2}}));
    Clustering c{rows({{4, 6}}), rows({{1}}), false};
    CHECK(fuzzy_objective(x, c, 3.0) == doctest::Approx(25.0));
  }

  TEST_CASE("matches a naive double loop") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
      const Dataset x = testing::random_dataset(5, 3, 4.0, rng);
      const Matrix centers = testing::random_dataset(2, 3, 4.0, rng).points();
      const Matrix u = testing::random_memberships(5, 2, rng);
      const double want = testing::naive_objective(x, centers, u, 2.0);
      CHECK(std::abs(fuzzy_objective(x, centers, u, 2.0) - want) <= 1e-12 * want);
    }
  }
}

TEST_SUITE("membership update") {
  TEST_CASE("equidistant point splits evenly") {
    const Dataset x(rows({{0, 0}}));
    const Matrix u = update_memberships(x, rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), 2.5);
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(u(0, j) == doctest::Approx(0.25));
  }

  TEST_CASE("point on a center gets a unit row") {
    const Dataset x(rows({{2, 2}}));
    const Matrix u = update_memberships(x, rows({{0, 0}, {2, 2}, {5, 1}}), 2.0);
    CHECK(u(0, 0) == 0.0);
    CHECK(u(0, 1) == 1.0);
    CHECK(u(0, 2) == 0.0);
  }

  TEST_CASE("point on two coincident centers splits between them") {
    const Dataset x(rows({{1, 1}}));
    const Matrix u = update_memberships(x, rows({{1, 1}, {1, 1}, {3, 3}}), 2.0);
    CHECK(u(0, 0) == doctest::Approx(0.5));
    CHECK(u(0, 1) == doctest::Approx(0.5));
    CHECK(u(0, 2) == 0.0);
  }

  TEST_CASE("distances 1 and 2 with alpha 2 give 0.8 and 0.2") {
    const Dataset x = line({0.0});
    const Matrix u = update_memberships(x, rows({{1}, {-2}}), 2.0);
    CHECK(u(0, 0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(u(0, 1) == doctest::Approx(0.2).epsilon(1e-14));
  }

  TEST_CASE("rows sum to one") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
      const Dataset x = testing::random_dataset(40, 4, 1e3, rng);
      const Matrix centers = testing::random_dataset(5, 4, 1e3, rng).points();
      const Matrix u = update_memberships(x, centers, 1.1 + 3.0 * (rep % 5) / 4.0);
      CHECK((u.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
      CHECK(u.minCoeff() >= 0.0);
    }
  }

  TEST_CASE("membership falls as the own distance grows with the others fixed") {
    Rng rng(8);
    std::uniform_real_distribution<double> unif(0.1, 10.0);
    for (int rep = 0; rep < 200; ++rep) {
      // Points equidistant from center 1 and 2 but at growing distance from 0.
      const double other = unif(rng);
      Matrix centers = rows({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
      centers.row(1) << 0, 0, other;
      centers.row(2) << 0, 0, -other;
      const Matrix pts = rows({{0.5, 0, 0}, {1.5, 0, 0}, {3, 0, 0}, {6, 0, 0}});
      const Matrix u = update_memberships(Dataset(pts), centers, 2.0);
      for (Eigen::Index i = 1; i < 4; ++i) CHECK(u(i, 0) <= u(i - 1, 0));
    }
  }

  TEST_CASE("membership can rise with distance when the other center recedes faster") {
    // Centers at 0 and 10: x = 3 is closer to center 0 than x = -4, yet has a
    // smaller membership in it (49/58 against 49/53).
    const Dataset x = line({3.0, -4.0});
    const Matrix centers = rows({{0}, {10}});
    const Matrix u = update_memberships(x, centers, 2.0);
    CHECK(u(0, 0) == doctest::Approx(49.0 / 58.0));
    CHECK(u(1, 0) == doctest::Approx(49.0 / 53.0));
    CHECK(u(1, 0) > u(0, 0));
  }
}

TEST_SUITE("center update") {
  TEST_CASE("one-hot memberships give plain means") {
    const Dataset x(rows({{0, 0}, {2, 0}, {10, 10}, {12, 14}}));
    const Matrix c = update_centers(x, rows({{1, 0}, {1, 0}, {0, 1}, {0, 1}}), 2.0);
    CHECK(c(0, 0) == doctest::Approx(1.0));
    CHECK(c(0, 1) == doctest::Approx(0.0));
    CHECK(c(1, 0) == doctest::Approx(11.0));
    CHECK(c(1, 1) == doctest::Approx(12.0));
  }

  TEST_CASE("single point is every massive center") {
    const Dataset x(rows({{3, -1}}));
    const Matrix c = update_centers(x, rows({{0.3, 0.7}}), 2.0);
    CHECK(c(0, 0) == doctest::Approx(3.0));
    CHECK(c(1, 1) == doctest::Approx(-1.0));
  }

  TEST_CASE("weights are memberships raised to alpha") {
    // Column (1, 0.5, 0) with alpha 2: weights (1, 0.25, 0).
    const Dataset x = line({1.0, 6.0, 100.0});
    const Matrix c = update_centers(x, rows({{1, 0}, {0.5, 0.5}, {0, 1}}), 2.0);
    CHECK(c(0, 0) == doctest::Approx((1.0 * 1.0 + 0.25 * 6.0) / 1.25));
  }

  TEST_CASE("empty column names the cluster") {
    const Dataset x = line({1.0, 2.0});
    try {
      update_centers(x, rows({{1, 0, 0}, {0, 0, 1}}), 2.0);
      FAIL("expected DegenerateError");
    } catch (const DegenerateError& e) {
      CHECK(e.cluster() == 1);
    }
  }
}

TEST_SUITE("lloyd") {
  TEST_CASE("fixed point input stays put") {
    Rng rng(5);
    const Dataset x = testing::random_dataset(30, 2, 5.0, rng);
    const LloydResult first = lloyd_fuzzy(x, 3, 2.0, 9);
    const LloydResult again = lloyd_fuzzy(x, first.clustering.centers, 2.0);
    CHECK(again.iterations == 1);
    CHECK((again.clustering.centers - first.clustering.centers).cwiseAbs().maxCoeff() <= 1e-9);
  }

  TEST_CASE("two symmetric pairs converge to pair midpoints") {
    const Dataset x(rows({{-11, 0}, {-9, 0}, {9, 0}, {11, 0}}));
    const LloydResult fit = lloyd_fuzzy(x, rows({{-3, 1}, {4, -1}}), 2.0);
    const Matrix& c = fit.clustering.centers;
    const Eigen::Index left = c(0, 0) < c(1, 0) ? 0 : 1;
    CHECK(std::abs(c(left, 0) + 10.0) <= 0.05);
    CHECK(std::abs(c(left, 1)) <= 1e-6);
    CHECK(c(left, 0) == doctest::Approx(-c(1 - left, 0)).epsilon(1e-6));
  }

  TEST_CASE("objective trace never increases") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
      const Dataset x = testing::random_dataset(60, 3, 10.0, rng);
      const LloydResult fit = lloyd_fuzzy(x, 2 + rep % 4, 1.5 + (rep % 3) * 0.5, rep);
      for (std::size_t t = 1; t < fit.objective_trace.size(); ++t) {
        CHECK(fit.objective_trace[t] <=
              fit.objective_trace[t - 1] * (1.0 + 1e-9) + 1e-300);
      }
    }
  }

  TEST_CASE("converged centers are the weighted means of the memberships") {
    Rng rng(23);
    for (int rep = 0; rep < 10; ++rep) {
      const Dataset x = testing::random_dataset(80, 2, 10.0, rng);
      const LloydResult fit = lloyd_fuzzy(x, 3, 2.0, rep);
      const ConsistencyReport rep_ = is_consistent_center_based(
          x, fit.clustering, 2.0, 1e-9 * std::max(1.0, x.radius()));
      CHECK(rep_.max_center_deviation <= 1e-9 * std::max(1.0, x.radius()));
    }
  }

  TEST_CASE("coincident starting centers are reseeded") {
    const Dataset x(rows({{0, 0}, {0, 1}, {9, 9}, {9, 10}}));
    const LloydResult fit = lloyd_fuzzy(x, rows({{9, 9}, {9, 9}}), 2.0);
    CHECK(fit.clustering.memberships.colwise().sum().minCoeff() > 0.0);
  }

  TEST_CASE("rejects k above n") {
    const Dataset x = line({0.0, 1.0});
    CHECK_THROWS_AS(lloyd_fuzzy(x, 3, 2.0, 1), ConfigError);
  }
}

TEST_SUITE("validity") {
  TEST_CASE("perfect hard clustering scores zero") {
    const Dataset x(rows({{0, 0}, {4, 0}}));
    Clustering c{rows({{0, 0}, {4, 0}}), rows({{1, 0}, {0, 1}}), false};
    CHECK(xie_beni(x, c, 2.0) == 0.0);
  }

  TEST_CASE("unit separation with objective 2n scores one") {
    // Two one-hot points each sqrt(2) from its center: J = 4 = 2n.
    const Dataset x = line({-std::sqrt(2.0), 1.0 + std::sqrt(2.0)});
    Clustering c{rows({{0}, {1}}), rows({{1, 0}, {0, 1}}), false};
    CHECK(xie_beni(x, c, 2.0) == doctest::Approx(1.0));
  }

  TEST_CASE("coincident centers and k = 1 are rejected") {
    const Dataset x = line({0.0, 1.0});
    Clustering same{rows({{0.5}, {0.5}}), rows({{0.5, 0.5}, {0.5, 0.5}}), false};
    CHECK_THROWS_AS(xie_beni(x, same, 2.0), DegenerateError);
    Clustering one{rows({{0.5}}), rows({{1}, {1}}), false};
    CHECK_THROWS_AS(xie_beni(x, one, 2.0), ConfigError);
  }

  TEST_CASE("perturbation bound holds on random perturbations") {
    Rng rng(29);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
      const auto inst = testing::consistent_instance(60, 3, 2, 2.0, rng);
      const double eps1 = 0.5;
      const double eps2 = 0.02;
      Clustering hat = inst.target;
      hat.centers = testing::perturb_centers(inst.target.centers, eps1, rng);
      for (Eigen::Index i = 0; i < hat.memberships.rows(); ++i) {
        for (Eigen::Index j = 0; j < hat.memberships.cols(); ++j) {
          hat.memberships(i, j) =
              std::clamp(hat.memberships(i, j) + eps2 * unif(rng), 0.0, 1.0);
        }
      }
      const double gap =
          std::abs(xie_beni(inst.data, inst.target, 2.0) - xie_beni(inst.data, hat, 2.0));
      CHECK(gap <= xie_beni_perturbation_bound(inst.data, inst.target, 2.0, eps1, eps2));
    }
  }

  TEST_CASE("bound is infinite once centers may collide") {
    const Dataset x = line({0.0, 1.0});
    Clustering c{rows({{0}, {1}}), rows({{1, 0}, {0, 1}}), false};
    CHECK(std::isinf(xie_beni_perturbation_bound(x, c, 2.0, 0.6, 0.0)));
  }
}

TEST_SUITE("beta") {
  TEST_CASE("uniform memberships give one") {
    CHECK(beta_of(Matrix::Constant(12, 4, 0.25)) == doctest::Approx(1.0));
  }

  TEST_CASE("matches a naive column scan and never exceeds one") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
      const Index n = 5 + rep;
      const Index k = 1 + rep % 6;
      const Matrix u = testing::random_memberships(n, k, rng);
      double smallest = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < k; ++j) {
        double s = 0.0;
        for (Index i = 0; i < n; ++i) s += u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        smallest = std::min(smallest, s);
      }
      const double want = static_cast<double>(k) / static_cast<double>(n) * smallest;
      CHECK(beta_of(u) == doctest::Approx(want).epsilon(1e-12));
      CHECK(beta_of(u) <= 1.0 + 1e-12);
    }
  }
}

TEST_SUITE("ordering") {
  TEST_CASE("nearest point first and collinear order") {
    const Dataset x = line({5.0, -1.0, 0.0, 2.5});
    const Permutation p = sort_by_distance(x, x.point(2).transpose());
    CHECK(p == Permutation{2, 1, 3, 0});
  }

  TEST_CASE("ties keep index order") {
    const Dataset x = line({1.0, -1.0, 1.0, 3.0});
    Vector o(1);
    o << 0.0;
    CHECK(sort_by_distance(x, o) == Permutation{0, 1, 2, 3});
  }

  TEST_CASE("matches a naive sort") {
    Rng rng(37);
    for (int rep = 0; rep < 20; ++rep) {
      const Dataset x = testing::random_dataset(100, 3, 1.0, rng);
      const Vector v = testing::random_dataset(1, 3, 1.0, rng).points().row(0).transpose();
      Permutation want(100);
      std::iota(want.begin(), want.end(), Index{0});
      std::sort(want.begin(), want.end(), [&](Index a, Index b) {
        const double da = (x.point(a).transpose() - v).norm();
        const double db = (x.point(b).transpose() - v).norm();
        return da < db || (da == db && a < b);
      });
      CHECK(sort_by_distance(x, v) == want);
    }
  }
}

TEST_SUITE("gamma") {
  TEST_CASE("two points on a line through the center") {
    // Distances 1 and 3: (9 - 1) / (2 * 2) = 2.
    const Dataset x = line({1.0, 3.0});
    CHECK(gamma_of(x, rows({{0}})) == doctest::Approx(2.0));
  }

  TEST_CASE("sentinels") {
    CHECK(std::isinf(gamma_of(line({4.0}), rows({{0}}))));
    CHECK(gamma_of(line({1.0, 1.0, 3.0}), rows({{0}})) == 0.0);
  }

  TEST_CASE("orderings survive inside gamma and break just outside") {
    Rng rng(41);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
      const Dataset x = testing::random_dataset(12, 2, 5.0, rng);
      const Matrix centers = testing::random_dataset(2, 2, 5.0, rng).points();
      const double g = gamma_of(x, centers);
      REQUIRE(g > 0.0);
      bool broke = false;
      for (Eigen::Index j = 0; j < centers.rows(); ++j) {
        const Vector mu = centers.row(j).transpose();
        const Permutation base = sort_by_distance(x, mu);
        for (int s = 0; s < 1000; ++s) {
          Vector dir(2);
          dir << normal(rng), normal(rng);
          dir.normalize();
          CHECK(sort_by_distance(x, mu + 0.999 * g * dir) == base);
        }
      }
      // The binding pair breaks along the direction of its difference vector;
      // sample densely until some direction crosses it.
      for (int s = 0; s < 200000 && !broke; ++s) {
        const Eigen::Index j = s % centers.rows();
        const Vector mu = centers.row(j).transpose();
        Vector dir(2);
        dir << normal(rng), normal(rng);
        dir.normalize();
        broke = sort_by_distance(x, mu + 1.001 * g * dir) != sort_by_distance(x, mu);
      }
      CHECK(broke);
    }
  }
}

TEST_SUITE("consistency") {
  TEST_CASE("generated blockwise targets pass") {
    Rng rng(43);
    for (int rep = 0; rep < 10; ++rep) {
      const auto inst = testing::consistent_instance(50, 1 + rep % 4, 3, 2.0, rng);
      CHECK(is_consistent_center_based(inst.data, inst.target, 2.0, 1e-9 * inst.data.radius())
                .consistent);
    }
  }

  TEST_CASE("a swapped pair is reported") {
    Rng rng(47);
    auto inst = testing::consistent_instance(40, 2, 2, 2.0, rng);
    const double tol = 1e-9 * inst.data.radius();
    REQUIRE(is_consistent_center_based(inst.data, inst.target, 2.0, tol).consistent);
    Eigen::Index near = 0, far = 0;
    inst.target.memberships.col(0).maxCoeff(&near);
    inst.target.memberships.col(0).minCoeff(&far);
    inst.target.memberships.row(near).swap(inst.target.memberships.row(far));
    inst.target.centers = update_centers(inst.data, inst.target.memberships, 2.0);
    const ConsistencyReport r = is_consistent_center_based(inst.data, inst.target, 2.0, tol);
    CHECK_FALSE(r.consistent);
    bool named = false;
    for (const auto& v : r.violations) {
      named = named || v.closer == static_cast<Index>(near) || v.farther == static_cast<Index>(far);
    }
    CHECK(named);
  }

  TEST_CASE("centers off the weighted means are reported") {
    const Dataset x = line({0.0, 1.0});
    Clustering c{rows({{0.3}}), rows({{1}, {1}}), false};
    const ConsistencyReport r = is_consistent_center_based(x, c, 2.0);
    CHECK_FALSE(r.consistent);
    CHECK(r.max_center_deviation == doctest::Approx(0.2));
  }

  TEST_CASE("lloyd fixed points on points outside the centers are not monotone") {
    // Points beyond a center on the far side have larger memberships than
    // points between the centers.
    const Dataset x = line({-4.0, -3.0, -2.0, 2.0, 3.0, 4.0});
    const LloydResult fit = lloyd_fuzzy(x, rows({{-1}, {1}}), 2.0);
    const ConsistencyReport r =
        is_consistent_center_based(x, fit.clustering, 2.0, 1e-9 * x.radius());
    CHECK(r.max_center_deviation <= 1e-9 * x.radius());
    CHECK_FALSE(r.violations.empty());
  }

  TEST_CASE("grid-searched global optimum of a tiny instance") {
    // n = 4, k = 2, alpha = 2; grid over U in steps of 1/40 with optimal
    // centers, refined by alternation. The optimum satisfies the center
    // condition but is not monotone in distance.
    const Dataset x = line({-3.0, -2.0, 2.0, 3.5});
    const int grid = 40;
    double best = std::numeric_limits<double>::infinity();
    Matrix best_u;
    for (int a = 0; a <= grid; ++a)
      for (int b = 0; b <= grid; ++b)
        for (int c = 0; c <= grid; ++c)
          for (int d = 0; d <= grid; ++d) {
            Matrix u(4, 2);
            u.col(0) << a, b, c, d;
            u.col(0) /= grid;
            u.col(1) = Vector::Ones(4) - u.col(0);
            if (u.col(0).sum() == 0.0 || u.col(1).sum() == 0.0) continue;
            const double j = fuzzy_objective(x, update_centers(x, u, 2.0), u, 2.0);
            if (j < best) {
              best = j;
              best_u = u;
            }
          }
    const LloydResult fit = lloyd_fuzzy(x, update_centers(x, best_u, 2.0), 2.0);
    CHECK(fuzzy_objective(x, fit.clustering, 2.0) <= best + 1e-12);
    CHECK((fit.clustering.memberships - best_u).cwiseAbs().maxCoeff() <= 1.0 / grid);
    const ConsistencyReport r =
        is_consistent_center_based(x, fit.clustering, 2.0, 1e-9 * x.radius());
    CHECK(r.max_center_deviation <= 1e-9 * x.radius());
    CHECK_FALSE(r.violations.empty());
  }
}
