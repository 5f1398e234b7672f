#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "codim1/transport.hpp"
#include "test_helpers.hpp"

using namespace codim1;

TEST_CASE("curve length: flat segments and constant curves") {
  const auto flat = MetricField::flat(2);
  Vec a(2), b(2);
  a << 0.0, 0.0;
  b << 3.0, 4.0;
  CHECK(curve_length(flat, CurveSample::line(a, b, 17)) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(curve_length(flat, CurveSample::line(a, a, 9)) == 0.0);
}

TEST_CASE("curve length: quarter great circle to 1e-6 at 1e3 nodes") {
  // quarter circle through the pole region, sampled in stereographic coords
  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  CurveSample quarter;
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    const double t = 0.5 * M_PI * i / n;
    Vec p(3);
    p << std::sin(t), 0.0, std::cos(t);  // embedded sphere point
    Vec y(2);
    y << 2.0 * p[0] / (1.0 + p[2]), 2.0 * p[1] / (1.0 + p[2]);
    quarter.nodes.push_back(y);
  }
  CHECK(curve_length(sph, quarter) == doctest::Approx(0.5 * M_PI).epsilon(1e-6));
}

TEST_CASE("curve length refines at second order under node doubling") {
  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  Vec a(2), b(2);
  a << -0.6, 0.2;
  b << 0.5, 0.4;
  auto len_at = [&](int nodes) { return curve_length(sph, CurveSample::line(a, b, nodes)); };
  const double ref = len_at(4097);
  const double e1 = std::abs(len_at(33) - ref), e2 = std::abs(len_at(65) - ref);
  CHECK(e1 / e2 > 3.4);
  CHECK(e1 / e2 < 4.6);
}

TEST_CASE("curve validation") {
  const auto sph = MetricField::sphere_polar(1.0);
  CurveSample bad;
  bad.nodes.push_back((Vec(2) << 1.0, 0.0).finished());
  CHECK_THROWS_AS(curve_length(sph, bad), std::invalid_argument);
  bad.nodes.push_back((Vec(2) << 0.01, 0.0).finished());  // outside phi cutoff
  CHECK_THROWS_AS(curve_length(sph, bad), std::invalid_argument);
}

TEST_CASE("geodesics: flat, coincident, and spherical endpoints") {
  const auto flat = MetricField::flat(2);
  Vec a(2), b(2);
  a << 0.1, 0.2;
  b << 1.1, -0.3;
  const auto straight = geodesic_between(flat, a, b);
  CHECK(straight.dist == doctest::Approx((a - b).norm()).epsilon(1e-13));
  CHECK(geodesic_between(flat, a, a).dist == 0.0);

  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  Rng rng(53);
  for (int trial = 0; trial < 8; ++trial) {
    const Vec q1 = random_vec(rng, 2, -0.5, 0.5), q2 = random_vec(rng, 2, -0.5, 0.5);
    const double exact = oracles::stereo_distance(q1, q2, 1.0);
    CHECK(geodesic_between(sph, q1, q2).dist == doctest::Approx(exact).epsilon(1e-8));
    CHECK(shooting_distance(sph, q1, q2) == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("geodesics on the hyperbolic catalog match the closed form") {
  const auto hyp = MetricField::hyperbolic_fermi(2, 1.0);
  Rng rng(59);
  for (int trial = 0; trial < 6; ++trial) {
    const Vec q1 = random_vec(rng, 2, -0.7, 0.7), q2 = random_vec(rng, 2, -0.7, 0.7);
    const double exact = oracles::hyperbolic_distance(q1, q2, 1.0);
    CHECK(geodesic_between(hyp, q1, q2).dist == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("parallel transport: flat metric leaves vectors unchanged") {
  const auto flat = MetricField::flat(3);
  ChristoffelField gf(flat);
  Rng rng(61);
  const Vec a = random_vec(rng, 3), b = random_vec(rng, 3), v = random_vec(rng, 3);
  const auto out = parallel_transport(gf, CurveSample::line(a, b, 17), {b, v});
  CHECK((out.vec - v).norm() < 1e-14);
  CHECK((out.base - a).norm() == 0.0);
}

TEST_CASE("parallel transport: latitude holonomy and norm preservation") {
  const auto sph = MetricField::sphere_polar(1.0);
  ChristoffelField gf(sph);
  const double phi0 = 0.8;
  const double expected = 2.0 * M_PI * (1.0 - std::cos(phi0));
  CurveSample lat;
  const int nseg = 512;
  for (int i = 0; i <= nseg; ++i)
    lat.nodes.push_back((Vec(2) << phi0, 2.0 * M_PI * i / nseg).finished());

  Vec v(2);
  v << 1.0, 0.0;
  const auto out = parallel_transport(gf, lat, {lat.nodes.back(), v}, 4);
  const double angle =
      std::abs(std::atan2(out.vec[1] * std::sin(phi0), out.vec[0]));
  CHECK(angle == doctest::Approx(expected).epsilon(1e-5));
  CHECK(std::abs(sph.norm(out.base, out.vec) - sph.norm(lat.nodes.back(), v)) < 1e-8);
}

TEST_CASE("parallel transport is fourth order in the step") {
  const auto sph = MetricField::sphere_polar(1.0);
  ChristoffelField gf(sph);
  const double phi0 = 0.8;
  const double expected = 2.0 * M_PI * (1.0 - std::cos(phi0));
  auto holonomy_error = [&](int nseg) {
    CurveSample lat;
    for (int i = 0; i <= nseg; ++i)
      lat.nodes.push_back((Vec(2) << phi0, 2.0 * M_PI * i / nseg).finished());
    Vec v(2);
    v << 1.0, 0.0;
    const auto out = parallel_transport(gf, lat, {lat.nodes.back(), v}, 1);
    return std::abs(std::abs(std::atan2(out.vec[1] * std::sin(phi0), out.vec[0])) - expected);
  };
  const double e1 = holonomy_error(16), e2 = holonomy_error(32), e3 = holonomy_error(64);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("parallel transport: linearity and inverse") {
  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  ChristoffelField gf(sph);
  Rng rng(67);
  const Vec q1 = random_vec(rng, 2, -0.4, 0.4), q2 = random_vec(rng, 2, -0.4, 0.4);
  const auto geo = geodesic_between(sph, q1, q2);
  const Vec v = random_vec(rng, 2), w = random_vec(rng, 2);
  const double a = 1.7, b = -0.4;

  const Vec pv = parallel_transport(gf, geo.curve, {q2, v}).vec;
  const Vec pw = parallel_transport(gf, geo.curve, {q2, w}).vec;
  const Vec pc = parallel_transport(gf, geo.curve, {q2, a * v + b * w}).vec;
  CHECK((pc - a * pv - b * pw).norm() < 1e-9);

  CurveSample reversed = geo.curve;
  std::reverse(reversed.nodes.begin(), reversed.nodes.end());
  const Vec back = parallel_transport(gf, reversed, {q1, pv}).vec;
  CHECK((back - v).norm() < 1e-8);

  CHECK_THROWS_AS(parallel_transport(gf, geo.curve, {q1, v}), std::invalid_argument);
}

TEST_CASE("sasaki distance of vectors: identities and the flat closed form") {
  const auto flat = MetricField::flat(2);
  ChristoffelField gf_flat(flat);
  Rng rng(71);

  // same base point: |e1 - e2|_h, exactly
  const Vec q = random_vec(rng, 2), e1 = random_vec(rng, 2), e2 = random_vec(rng, 2);
  CHECK(sasaki_distance_vectors(flat, gf_flat, {q, e1}, {q, e2}) ==
        doctest::Approx((e1 - e2).norm()).epsilon(1e-12));

  // zero vectors: the base distance
  const Vec q2 = random_vec(rng, 2);
  CHECK(sasaki_distance_vectors(flat, gf_flat, {q, Vec::Zero(2)}, {q2, Vec::Zero(2)}) ==
        doctest::Approx((q - q2).norm()).epsilon(1e-9));

  // flat space: sqrt(|e1 - e2|^2 + |q1 - q2|^2); random polyline candidates
  // confirm the straight line is optimal
  const double ds = sasaki_distance_vectors(flat, gf_flat, {q, e1}, {q2, e2});
  const double closed = std::sqrt((e1 - e2).squaredNorm() + (q - q2).squaredNorm());
  CHECK(ds == doctest::Approx(closed).epsilon(1e-9));
  for (int trial = 0; trial < 40; ++trial) {
    CurveSample wiggly = CurveSample::line(q, q2, 17);
    for (size_t i = 1; i + 1 < wiggly.nodes.size(); ++i)
      wiggly.nodes[i] += random_vec(rng, 2, -0.1, 0.1);
    const Vec p = parallel_transport(gf_flat, wiggly, {q2, e2}).vec;
    const double len = curve_length(flat, wiggly);
    CHECK(std::sqrt((e1 - p).squaredNorm() + len * len) >= closed - 1e-12);
  }
}

TEST_CASE("sasaki distance of vectors: zero-section identity on curved catalogs") {
  struct Case {
    MetricField field;
    std::function<double(const Vec&, const Vec&)> oracle;
    double lo, hi;
  };
  std::vector<Case> cases;
  cases.push_back({MetricField::sphere_stereographic(2, 1.0),
                   [](const Vec& a, const Vec& b) { return oracles::stereo_distance(a, b, 1.0); },
                   -0.5, 0.5});
  cases.push_back({MetricField::sphere_polar(1.0),
                   [](const Vec& a, const Vec& b) { return oracles::polar_distance(a, b, 1.0); },
                   1.0, 2.0});
  cases.push_back({MetricField::hyperbolic_fermi(2, 1.0),
                   [](const Vec& a, const Vec& b) { return oracles::hyperbolic_distance(a, b, 1.0); },
                   -0.6, 0.6});
  for (auto& c : cases) {
    ChristoffelField gf(c.field);
    Rng rng(73);
    for (int trial = 0; trial < 5; ++trial) {
      const Vec q1 = random_vec(rng, 2, c.lo, c.hi), q2 = random_vec(rng, 2, c.lo, c.hi);
      const double ds =
          sasaki_distance_vectors(c.field, gf, {q1, Vec::Zero(2)}, {q2, Vec::Zero(2)});
      CHECK(ds == doctest::Approx(c.oracle(q1, q2)).epsilon(1e-6));
    }
  }
}

TEST_CASE("sasaki distance of vectors: triangle bound on random inputs") {
  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  ChristoffelField gf(sph);
  Rng rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec q1 = random_vec(rng, 2, -0.5, 0.5), q2 = random_vec(rng, 2, -0.5, 0.5);
    const Vec e1 = random_vec(rng, 2), e2 = random_vec(rng, 2);
    const double ds = sasaki_distance_vectors(sph, gf, {q1, e1}, {q2, e2});
    const double bound = sph.norm(q1, e1) + sph.norm(q2, e2) + oracles::stereo_distance(q1, q2, 1.0);
    CHECK(ds <= bound + 1e-5);
  }
}

TEST_CASE("sasaki distance of maps: identities, transport consistency, errors") {
  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  ChristoffelField gf(sph);
  Rng rng(83);
  const ConstMetric g0(oracles::random_spd(rng, 2));
  const Vec q1 = random_vec(rng, 2, -0.4, 0.4), q2 = random_vec(rng, 2, -0.4, 0.4);
  const ConstMetric h1(sph.coeff(q1)), h2(sph.coeff(q2));

  // constant curve: plain Frobenius distance of the samples
  const Mat a = random_mat(rng, 2, 2), b = random_mat(rng, 2, 2);
  const LinearMapSample l1(a, g0, h1), l1b(b, g0, h1);
  CHECK(sasaki_distance_maps(sph, gf, l1, q1, l1b, q1) ==
        doctest::Approx(frobenius_norm(LinearMapSample(a - b, g0, h1))).epsilon(1e-12));

  // zero maps: base distance
  const LinearMapSample z1(Mat::Zero(2, 2), g0, h1), z2(Mat::Zero(2, 2), g0, h2);
  CHECK(sasaki_distance_maps(sph, gf, z1, q1, z2, q2) ==
        doctest::Approx(oracles::stereo_distance(q1, q2, 1.0)).epsilon(1e-6));

  // columnwise transport consistency: d_sigma(L1, L2) against the direct
  // geodesic candidate assembled by hand
  const LinearMapSample l2(b, g0, h2);
  const double ds = sasaki_distance_maps(sph, gf, l1, q1, l2, q2);
  const auto geo = geodesic_between(sph, q1, q2);
  Mat transported(2, 2);
  for (int j = 0; j < 2; ++j)
    transported.col(j) = parallel_transport(gf, geo.curve, {q2, b.col(j)}).vec;
  const double fiber = frobenius_norm(LinearMapSample(a - transported, g0, h1));
  CHECK(ds <= std::sqrt(fiber * fiber + geo.dist * geo.dist) + 1e-12);

  // base-point mismatch in the source
  const LinearMapSample wrong(a, ConstMetric::euclidean(2), h1);
  if (!g0.same_as(ConstMetric::euclidean(2), 1e-10))
    CHECK_THROWS_AS(sasaki_distance_maps(sph, gf, l1, q1, wrong, q2), std::invalid_argument);
}

TEST_CASE("sasaki map distance obeys the coordinate comparison bound") {
  // d_sigma(L1, L2) <= C(|Dphi L1 - Dphi L2| + d_h (1 + |L2|)) on
  // epsilon-isometric charts; measure C on random inputs
  const auto sph = MetricField::sphere_stereographic(2, 1.0);
  ChristoffelField gf(sph);
  Vec q0(2);
  q0 << 0.0, 0.1;
  const Chart nc = normal_coordinates(sph, q0, 0.25);
  Rng rng(89);
  const ConstMetric g0 = ConstMetric::euclidean(2);
  double measured_c = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const Vec y1 = random_vec(rng, 2, -0.15, 0.15), y2 = random_vec(rng, 2, -0.15, 0.15);
    const Vec q1 = nc.invert(y1), q2 = nc.invert(y2);
    const ConstMetric h1(sph.coeff(q1)), h2(sph.coeff(q2));
    const LinearMapSample l1(random_mat(rng, 2, 2), g0, h1);
    const LinearMapSample l2(random_mat(rng, 2, 2), g0, h2);
    const double ds = sasaki_distance_maps(sph, gf, l1, q1, l2, q2);
    const double coord =
        (nc.differential(q1) * l1.coeff - nc.differential(q2) * l2.coeff).norm();
    const double dh = oracles::stereo_distance(q1, q2, 1.0);
    const double rhs = coord + dh * (1.0 + frobenius_norm(l2));
    REQUIRE(rhs > 0.0);
    measured_c = std::max(measured_c, ds / rhs);
  }
  CHECK(measured_c < 5.0);
  MESSAGE("sasaki coordinate comparison measured C = ", measured_c);
}
