#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "codim1/experiments.hpp"
#include "test_helpers.hpp"

#include <filesystem>
#include <fstream>

using namespace codim1;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kMinimalConfig = R"(
name = demo
seed = 7
p = 2.0
[domain]
d = 2
side = 1.0
mesh = 9
[target]
metric = flat
[immersion]
family = flat-iso
)";

}  // namespace

TEST_CASE("config parsing: sections, types, overrides, errors") {
  Config cfg = Config::parse_string(kMinimalConfig, "demo.cfg");
  CHECK(cfg.get_string("name") == "demo");
  CHECK(cfg.get_int("domain.mesh") == 9);
  CHECK(cfg.get_double("p") == 2.0);
  CHECK(cfg.get_double("missing.key", 1.5) == 1.5);
  cfg.set("domain.mesh", "17");
  CHECK(cfg.get_int("domain.mesh") == 17);

  CHECK_THROWS_AS(Config::parse_string("key value\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("[unclosed\n"), ConfigError);
  Config bad = Config::parse_string("[domain]\nmesh = nine\n");
  CHECK_THROWS_WITH_AS(bad.get_int("domain.mesh"), doctest::Contains("domain.mesh"), ConfigError);
}

TEST_CASE("scenario resolution: minimal flat config runs with zero stretching") {
  const Scenario s = Scenario::from_config(Config::parse_string(kMinimalConfig));
  const GridDomain dom = s.make_domain();
  const MetricField target = s.make_target();
  const auto u = s.make_immersion(1, dom, target);
  CHECK(stretching_energy(u, s.p) < 1e-12);
}

TEST_CASE("scenario resolution: misspelled names are reported with their key") {
  Config cfg = Config::parse_string(kMinimalConfig);
  cfg.set("target.metric", "sphere-stereografic");
  CHECK_THROWS_WITH_AS(Scenario::from_config(cfg), doctest::Contains("target.metric"),
                       ConfigError);
  Config cfg2 = Config::parse_string(kMinimalConfig);
  cfg2.set("immersion.family", "cylindre");
  CHECK_THROWS_WITH_AS(Scenario::from_config(cfg2), doctest::Contains("immersion.family"),
                       ConfigError);
}

TEST_CASE("cylinder scenario with matching reference shape has vanishing E_b^S") {
  Config cfg = Config::parse_string(kMinimalConfig);
  cfg.set("immersion.family", "cylinder");
  cfg.set("reference_shape.b", "cylinder");
  cfg.set("domain.mesh", "33");
  const Scenario s = Scenario::from_config(cfg);
  const GridDomain dom = s.make_domain();
  const auto u = s.make_immersion(1, dom, s.make_target());
  CHECK(modified_bending_energy(u, s.make_reference(dom), s.p) < 1e-6);
}

TEST_CASE("partition classification: inside, outside, and mixed constructions") {
  const auto flat3 = MetricField::flat(3);
  GridDomain dom = GridDomain::euclidean(2, 1.0, 17);
  auto u = sample_family(make_immersion_family("flat-iso", {}, dom), dom, flat3);
  const Vec q0 = u.value(dom.node_count() / 2);

  const auto all_good = classify_partition(u, 4, q0, 10.0);
  CHECK(all_good.good_count() == 16);
  CHECK(all_good.bad_volume == 0.0);

  const auto all_bad = classify_partition(u, 4, q0 + 100.0 * Vec::Ones(3), 1.0);
  CHECK(all_bad.bad_count() == 16);
  CHECK(all_bad.bad_volume == doctest::Approx(dom.volume()));

  // half-plane construction: x1 <= 1/2 lands inside the ball
  const double tau = 0.5;
  Vec far_center = Vec::Zero(3);
  far_center[0] = 0.0;  // distance along x1
  auto v = DiscreteImmersion::sample(dom, flat3, [](const Vec& x) {
    Vec p = Vec::Zero(3);
    p[0] = x[0];
    return p;
  });
  const auto mixed = classify_partition(v, 4, far_center, tau);
  CHECK(mixed.good_count() + mixed.bad_count() == 16);
  // direct recount with the same node-quadrature convention
  for (int c = 0; c < 16; ++c) {
    const auto cm = detail::subcube_multi(c, 2, 4);
    double covered = 0.0;
    const int seg = (dom.nodes_per_side() - 1) / 4;
    for (int a = 0; a <= seg; ++a)
      for (int b = 0; b <= seg; ++b) {
        std::array<int, 3> idx{cm[0] * seg + a, cm[1] * seg + b, 0};
        double w = dom.spacing() * dom.spacing();
        if (a == 0 || a == seg) w *= 0.5;
        if (b == 0 || b == seg) w *= 0.5;
        const Vec x = dom.node(dom.flat_index(idx));
        if (x[0] <= tau + 1e-12) covered += w;
      }
    const double density = covered / std::pow(dom.side() / 4, 2);
    CHECK(mixed.density[c] == doctest::Approx(density).epsilon(1e-12));
    CHECK(mixed.good[c] == (density > 0.5 ? 1 : 0));
  }

  CHECK_THROWS_AS(classify_partition(u, 5, q0, 1.0), std::invalid_argument);
}

TEST_CASE("partition volume bound under the global density hypothesis") {
  const auto flat3 = MetricField::flat(3);
  GridDomain dom = GridDomain::euclidean(2, 1.0, 33);
  // graph immersion whose image mostly stays near the center
  auto u = sample_family(make_immersion_family("graph", {{"t", 0.4}}, dom), dom, flat3);
  const Vec q0 = u.value(dom.node_count() / 2);
  double imgrad = 0.0;
  for (int i = 0; i < dom.node_count(); ++i)
    imgrad = std::max(imgrad, (u.value(i) - q0).norm());
  const double tau = 0.9 * imgrad;  // keeps a small escaping fraction
  for (int m : {2, 4, 8}) {
    const auto part = classify_partition(u, m, q0, tau);
    const double epsp = part.escape_fraction;  // smallest eps^p satisfying the hypothesis
    CHECK(part.bad_volume <= 2.0 * epsp * dom.volume() + 1e-12);
  }
}

TEST_CASE("partition aggregation upper-bounds the global Sasaki discrepancy") {
  const auto flat3 = MetricField::flat(3);
  GridDomain dom = GridDomain::euclidean(2, 1.0, 17);
  auto u1 = sample_family(make_immersion_family("graph", {{"t", 0.1}}, dom), dom, flat3);
  auto u2 = sample_family(
      make_immersion_family("rigid-motion", {{"angle1", 0.05}, {"shift2", 0.02}}, dom), dom,
      flat3);
  const Vec center = u1.value(dom.node_count() / 2);
  ExtendedChart ext(Chart::affine(flat3, center, 100.0), CutoffProfile(3), 3.0);
  const auto part = classify_partition(u1, 4, center, 1.1);
  const auto agg = partition_aggregate_check(u1, u2, part, ext, 0.5, 2.0);
  CHECK(agg.global <= agg.good_sum + agg.bad_crude + 1e-6 + 0.02 * agg.global);
}

TEST_CASE("convergence experiment: perturbation family on a small grid") {
  Scenario s;
  s.d = 2;
  s.mesh = 17;
  s.p = 2.0;
  s.family_name = "perturbed-iso";
  const auto trace = convergence_experiment(s, 8);
  REQUIRE(trace.rows.size() == 8);
  CHECK(trace.es_decay_exponent == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(trace.rows.back().e_s < trace.rows.front().e_s);
  CHECK(trace.rows.back().lp_to_final == 0.0);
  for (size_t i = 1; i + 2 < trace.rows.size(); ++i)
    CHECK(trace.rows[i + 1].cauchy_increment <= trace.rows[i].cauchy_increment * 1.01);
  CHECK(trace.warnings.empty());
}

TEST_CASE("convergence experiment: wrinkle family with bounded bending converges") {
  Scenario s;
  s.d = 2;
  s.mesh = 33;
  s.p = 2.0;
  s.family_name = "wrinkle";
  s.family_params = {{"amplitude", 0.5}, {"amplitude_exp", 2.0}, {"frequency_factor", 0.25}};
  const auto trace = convergence_experiment(s, 8);
  CHECK(trace.rows.back().e_b < 10.0 * trace.rows.front().e_b + 1.0);  // stays bounded
  CHECK(trace.rows[6].cauchy_increment < trace.rows[0].cauchy_increment);
  CHECK(trace.rows.back().e_s < 1e-4);
}

TEST_CASE("convergence experiment: unbounded bending blocks the Cauchy decay") {
  Scenario s;
  s.d = 2;
  s.mesh = 33;
  s.p = 2.0;
  s.family_name = "wrinkle";
  s.family_params = {{"amplitude", 0.5}, {"amplitude_exp", 1.0}, {"frequency_factor", 0.25}};
  const auto trace = convergence_experiment(s, 8);
  CHECK(trace.rows[trace.rows.size() - 2].cauchy_increment >=
        0.5 * trace.rows.front().cauchy_increment);
  CHECK(trace.rows.back().e_b > 10.0 * trace.rows.front().e_b);
}

TEST_CASE("report emission: schema, empty trace, determinism") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "codim1-test-out").string();
  fs::remove_all(dir);

  ConvergenceTrace empty;
  const auto files = emit_reports(trace_json(empty, Scenario{}), trace_csv(empty), dir, "empty");
  const std::string csv = read_file(dir + "/empty.csv");
  CHECK(csv ==
        "k,E_s,E_b,E_bS,lp_to_final,w1p_to_final,cauchy_increment,"
        "dist_du_Ort_median,shape_residual_median\n");

  Scenario s;
  s.d = 2;
  s.mesh = 9;
  s.family_name = "perturbed-iso";
  const auto trace = convergence_experiment(s, 3);
  emit_reports(trace_json(trace, s), trace_csv(trace), dir, "t1");
  emit_reports(trace_json(trace, s), trace_csv(trace), dir, "t2");
  CHECK(read_file(dir + "/t1.json") == read_file(dir + "/t2.json"));
  CHECK(read_file(dir + "/t1.csv") == read_file(dir + "/t2.csv"));

  // 3 data rows + header
  int lines = 0;
  for (char c : read_file(dir + "/t1.csv"))
    if (c == '\n') ++lines;
  CHECK(lines == 4);
}

TEST_CASE("restrict_to_subcube keeps values and shifts the metric") {
  const auto flat3 = MetricField::flat(3);
  MetricField g(2,
                [](const Vec& x) {
                  Mat m = Mat::Identity(2, 2);
                  m(1, 1) = 1.0 + 0.3 * x[0];
                  return m;
                },
                nullptr, "tilt", 1e-4, false);
  GridDomain dom(2, 1.0, 9, g);
  const auto fam = make_immersion_family("graph", {{"t", 0.2}}, dom);
  auto u = sample_family(fam, dom, flat3);
  auto sub = restrict_to_subcube(u, 3, 2);  // cube (1, 1)
  CHECK(sub.domain().nodes_per_side() == 5);
  CHECK(sub.domain().side() == doctest::Approx(0.5));
  // node (0,0) of the subcube is node (4,4) of the parent
  std::array<int, 3> parent{4, 4, 0};
  CHECK((sub.value(0) - u.value(dom.flat_index(parent))).norm() == 0.0);
  // metric sampled at shifted coordinates
  CHECK(sub.domain().metric_at(0).entries()(1, 1) == doctest::Approx(1.0 + 0.3 * 0.5));
}
