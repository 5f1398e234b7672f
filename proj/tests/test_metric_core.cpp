#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "codim1/metric_core.hpp"
#include "test_helpers.hpp"

using namespace codim1;

TEST_CASE("frobenius norm: stated examples") {
  // 2x2 identity between Euclidean metrics
  CHECK(frobenius_norm(LinearMapSample::euclidean(Mat::Identity(2, 2))) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // 1 -> 1 with source metric (4): orthonormal basis v = 1/2, |T(1/2)| = 1/2
  Mat g(1, 1);
  g << 4.0;
  LinearMapSample t(Mat::Ones(1, 1), ConstMetric(g), ConstMetric::euclidean(1));
  CHECK(frobenius_norm(t) == doctest::Approx(0.5).epsilon(1e-12));

  // zero map
  CHECK(frobenius_norm(LinearMapSample::euclidean(Mat::Zero(3, 2))) == 0.0);
}

TEST_CASE("frobenius norm is basis independent") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const int s = 1 + trial % 3, n = s + trial % 2;
    const ConstMetric g(oracles::random_spd(rng, s));
    const ConstMetric h(oracles::random_spd(rng, n));
    const LinearMapSample t(random_mat(rng, n, s), g, h);

    // sum formula over a random g-orthonormal basis built by Gram-Schmidt
    const Mat basis = gram_schmidt(random_mat(rng, s, s) + 3.0 * Mat::Identity(s, s), g.entries());
    REQUIRE(basis.cols() == s);
    double acc = 0.0;
    for (int i = 0; i < s; ++i) {
      const Vec w = t.coeff * basis.col(i);
      acc += w.dot(h.entries() * w);
    }
    CHECK(std::sqrt(acc) == doctest::Approx(frobenius_norm(t)).epsilon(1e-10));
  }
}

TEST_CASE("metric distance") {
  const ConstMetric a(Mat::Identity(2, 2));
  CHECK(metric_distance(a, a) == 0.0);

  Mat one(1, 1), two(1, 1);
  one << 1.0;
  two << 2.0;
  CHECK(metric_distance(ConstMetric(one), ConstMetric(two)) == doctest::Approx(1.0));

  Mat d(2, 2);
  d << 1.0, 0.0, 0.0, 1.25;
  CHECK(metric_distance(a, ConstMetric(d)) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(metric_distance(a, ConstMetric(one)), std::invalid_argument);
}

TEST_CASE("nearest isometry: stated examples") {
  const auto id = nearest_isometry(LinearMapSample::euclidean(Mat::Identity(2, 2)), true);
  CHECK(id.dist == doctest::Approx(0.0).epsilon(1e-14));
  CHECK((id.map.coeff - Mat::Identity(2, 2)).norm() < 1e-12);

  const auto twice = nearest_isometry(LinearMapSample::euclidean(2.0 * Mat::Identity(2, 2)), true);
  CHECK(twice.dist == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK((twice.map.coeff - Mat::Identity(2, 2)).norm() < 1e-12);

  // reflective input: distance 2, attained by every rotation; the grid
  // oracle confirms the constant value
  Mat refl(2, 2);
  refl << 1.0, 0.0, 0.0, -1.0;
  const auto r = nearest_isometry(LinearMapSample::euclidean(refl), true);
  CHECK(r.dist == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(oracles::grid_min_rotation_distance(refl) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("nearest isometry matches the rotation-grid oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const Mat t = random_mat(rng, 2, 2, -2.0, 2.0);
    const auto fit = nearest_isometry(LinearMapSample::euclidean(t), true);
    const double brute = oracles::grid_min_rotation_distance(t);
    CHECK(fit.dist == doctest::Approx(brute).epsilon(5e-7));
  }
}

TEST_CASE("nearest isometry with metrics returns an actual isometry") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int s = 2, n = 3;
    const ConstMetric g(oracles::random_spd(rng, s));
    const ConstMetric h(oracles::random_spd(rng, n));
    const auto fit = nearest_isometry(LinearMapSample(random_mat(rng, n, s), g, h));

    const Mat basis = gram_schmidt(Mat::Identity(s, s), g.entries());
    for (int i = 0; i < s; ++i) {
      const Vec ri = fit.map.coeff * basis.col(i);
      CHECK(std::sqrt(ri.dot(h.entries() * ri)) == doctest::Approx(1.0).epsilon(1e-10));
      for (int j = i + 1; j < s; ++j) {
        const Vec rj = fit.map.coeff * basis.col(j);
        CHECK(std::abs(ri.dot(h.entries() * rj)) < 1e-10);
      }
    }
  }
}

TEST_CASE("nearest isometry of a dilated flat embedding is the embedding itself") {
  // (1+t) J for the inclusion J: R^2 -> R^3; nearest isometry J, distance sqrt(2) t
  for (double t : {0.1, 0.01}) {
    Mat j = Mat::Zero(3, 2);
    j.topRows(2) = Mat::Identity(2, 2);
    const auto fit = nearest_isometry(LinearMapSample::euclidean((1.0 + t) * j));
    CHECK((fit.map.coeff - j).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.dist == doctest::Approx(std::sqrt(2.0) * t).epsilon(1e-10));
  }
}

TEST_CASE("nearest isometry error cases") {
  CHECK_THROWS_AS(nearest_isometry(LinearMapSample::euclidean(Mat::Zero(1, 2))),
                  std::invalid_argument);
  CHECK_THROWS_AS(nearest_isometry(LinearMapSample::euclidean(Mat::Zero(3, 2)), true),
                  std::invalid_argument);
}

TEST_CASE("metric sqrt") {
  CHECK((metric_sqrt(ConstMetric::euclidean(3)).coeff - Mat::Identity(3, 3)).norm() < 1e-14);

  Mat d(2, 2);
  d << 4.0, 0.0, 0.0, 9.0;
  Mat expected(2, 2);
  expected << 2.0, 0.0, 0.0, 3.0;
  CHECK((metric_sqrt(ConstMetric(d)).coeff - expected).norm() < 1e-12);

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat g = oracles::random_spd(rng, 3);
    const Mat s = metric_sqrt(ConstMetric(g)).coeff;
    CHECK((s * s - ConstMetric(g).entries()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("ConstMetric invariants") {
  Mat asym(2, 2);
  asym << 1.0, 0.2, -0.2, 1.0;
  CHECK_THROWS_AS(ConstMetric{asym}, std::invalid_argument);

  Mat indef(2, 2);
  indef << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(ConstMetric{indef}, std::invalid_argument);

  Mat wild(2, 2);
  wild << 1e9, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(ConstMetric{wild}, std::invalid_argument);

  Mat g(2, 2);
  g << 4.0, 1.0, 1.0, 2.0;
  const ConstMetric m(g);
  Eigen::SelfAdjointEigenSolver<Mat> es(m.entries());
  CHECK(m.lambda_bound() ==
        doctest::Approx(std::max(es.eigenvalues().maxCoeff(), 1.0 / es.eigenvalues().minCoeff())));
}

TEST_CASE("norm comparison bounds (volume/norm comparison lemma)") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    const ConstMetric g(oracles::random_spd(rng, d));
    const ConstMetric h(oracles::random_spd(rng, d + 1));
    const Mat l = random_mat(rng, d + 1, d, -2.0, 2.0);
    const double lam = g.lambda_bound();
    const double ng = frobenius_norm(LinearMapSample(l, g, h));
    const double ne = frobenius_norm(LinearMapSample(l, ConstMetric::euclidean(d), h));
    CHECK(ne <= std::sqrt(lam) * ng * (1.0 + 1e-12));
    CHECK(ne >= ng / std::sqrt(lam) * (1.0 - 1e-12));
  }
}
