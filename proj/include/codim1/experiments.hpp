#pragma once

#include "codim1/config.hpp"
#include "codim1/families.hpp"
#include "codim1/rigidity.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace codim1 {

using Json = nlohmann::ordered_json;

/// A fully resolved experiment description: domain, target metric,
/// immersion family, reference shape tensor, exponent and seed.
/// Deterministic given the seed.
struct Scenario {
  std::string name = "scenario";
  int d = 2;
  double side = 1.0;
  int mesh = 17;
  std::string target_name = "flat";
  ParamMap target_params;
  std::string family_name = "flat-iso";
  ParamMap family_params;
  std::string reference_shape = "zero";
  ParamMap reference_params;
  double p = 2.0;
  uint64_t seed = 1;
  int k = 1;
  int K = 1;

  static Scenario from_config(const Config& cfg) {
    if (cfg.get_int("version", 1) != 1)
      throw ConfigError("config key 'version': only schema version 1 is supported");
    Scenario s;
    s.name = cfg.get_string("name", "scenario");
    s.seed = static_cast<uint64_t>(cfg.get_int("seed", 1));
    s.p = cfg.get_double("p", 2.0);
    if (!(s.p > 1.0)) throw ConfigError("config key 'p': exponent must exceed 1");
    s.d = static_cast<int>(cfg.get_int("domain.d", 2));
    if (s.d < 1 || s.d > 3) throw ConfigError("config key 'domain.d': must be 1, 2 or 3");
    s.side = cfg.get_double("domain.side", 1.0);
    if (s.side <= 0.0) throw ConfigError("config key 'domain.side': must be positive");
    s.mesh = static_cast<int>(cfg.get_int("domain.mesh", 17));
    if (s.mesh < 3) throw ConfigError("config key 'domain.mesh': need >= 3 nodes per side");
    s.target_name = cfg.get_string("target.metric", "flat");
    for (const auto& [key, value] : cfg.section("target"))
      if (key != "metric") s.target_params[key] = cfg.get_double("target." + key);
    s.family_name = cfg.get_string("immersion.family", "flat-iso");
    s.k = static_cast<int>(cfg.get_int("immersion.k", 1));
    s.K = static_cast<int>(cfg.get_int("immersion.K", 1));
    for (const auto& [key, value] : cfg.section("immersion"))
      if (key != "family" && key != "k" && key != "K")
        s.family_params[key] = cfg.get_double("immersion." + key);
    s.reference_shape = cfg.get_string("reference_shape.b", "zero");
    for (const auto& [key, value] : cfg.section("reference_shape"))
      if (key != "b") s.reference_params[key] = cfg.get_double("reference_shape." + key);
    s.validate();
    return s;
  }

  void validate() const {
    const auto names = immersion_family_names();
    if (std::find(names.begin(), names.end(), family_name) == names.end())
      throw ConfigError("config key 'immersion.family': unknown family '" + family_name + "'");
    static const std::vector<std::string> targets = {"flat", "sphere-stereographic",
                                                     "sphere-polar", "hyperbolic-fermi"};
    if (std::find(targets.begin(), targets.end(), target_name) == targets.end())
      throw ConfigError("config key 'target.metric': unknown metric '" + target_name + "'");
    static const std::vector<std::string> shapes = {"zero", "cylinder", "sphere", "constant"};
    if (std::find(shapes.begin(), shapes.end(), reference_shape) == shapes.end())
      throw ConfigError("config key 'reference_shape.b': unknown tensor '" + reference_shape + "'");
  }

  GridDomain make_domain() const { return GridDomain::euclidean(d, side, mesh); }

  MetricField make_target() const {
    const int dim = d + 1;
    if (target_name == "flat") return MetricField::flat(dim);
    if (target_name == "sphere-stereographic")
      return MetricField::sphere_stereographic(dim, param_or(target_params, "radius", 1.0),
                                               param_or(target_params, "patch_radius", 0.0));
    if (target_name == "sphere-polar") {
      if (dim != 2)
        throw ConfigError("config key 'target.metric': sphere-polar requires d = 1");
      return MetricField::sphere_polar(param_or(target_params, "radius", 1.0));
    }
    if (target_name == "hyperbolic-fermi")
      return MetricField::hyperbolic_fermi(dim, param_or(target_params, "scale", 1.0),
                                           param_or(target_params, "box", 3.0));
    throw ConfigError("config key 'target.metric': unknown metric '" + target_name + "'");
  }

  DiscreteImmersion make_immersion(int index, const GridDomain& domain,
                                   const MetricField& target) const {
    const ImmersionFamily fam = make_immersion_family(family_name, family_params, domain, index);
    return sample_family(fam, domain, target);
  }

  ShapeField make_reference(const GridDomain& domain) const {
    const int dd = domain.d();
    if (reference_shape == "zero") return ShapeField::zero(domain);
    if (reference_shape == "cylinder") {
      const double radius = param_or(reference_params, "radius", 1.0);
      return reference_shape_operator(domain, [dd, radius](const Vec&) {
        Mat b = Mat::Zero(dd, dd);
        b(0, 0) = 1.0 / radius;
        return b;
      });
    }
    if (reference_shape == "sphere") {
      const double radius = param_or(reference_params, "radius", 1.0);
      return reference_shape_operator(domain, [dd, radius](const Vec&) {
        return Mat((1.0 / radius) * Mat::Identity(dd, dd));
      });
    }
    if (reference_shape == "constant") {
      Vec diag = Vec::Zero(dd);
      for (int i = 0; i < dd; ++i)
        diag[i] = param_or(reference_params, "b" + std::to_string(i + 1), 0.0);
      return reference_shape_operator(domain, [diag](const Vec&) {
        return Mat(diag.asDiagonal());
      });
    }
    throw ConfigError("config key 'reference_shape.b': unknown tensor '" + reference_shape + "'");
  }

  /// Fully resolved-parameter echo for reproducibility.
  Json echo() const {
    Json j;
    j["name"] = name;
    j["seed"] = seed;
    j["p"] = p;
    j["domain"] = {{"d", d}, {"side", side}, {"mesh", mesh}, {"metric", "flat"}};
    Json t{{"metric", target_name}};
    for (const auto& [key, v] : target_params) t[key] = v;
    j["target"] = t;
    Json f{{"family", family_name}, {"k", k}, {"K", K}};
    for (const auto& [key, v] : family_params) f[key] = v;
    j["immersion"] = f;
    Json r{{"b", reference_shape}};
    for (const auto& [key, v] : reference_params) r[key] = v;
    j["reference_shape"] = r;
    return j;
  }
};

// ---- partition-and-classify (the localization device) ----

/// Subcube classification by the density of u^{-1}(B(q0, tau)):
/// subcubes with density above 1/2 are good, the rest bad.
struct PartitionClassification {
  int m = 1;
  std::vector<char> good;        // per subcube, m^d entries
  std::vector<double> density;   // |Q' cap u^{-1}(B(q0,tau))| / |Q'|
  double bad_volume = 0.0;       // total volume of bad subcubes
  double escape_fraction = 0.0;  // |Q \ u^{-1}(B(q0,tau))| / |Q|

  int good_count() const { return static_cast<int>(std::count(good.begin(), good.end(), 1)); }
  int bad_count() const { return static_cast<int>(good.size()) - good_count(); }
};

namespace detail {

inline int subcube_count(int d, int m) {
  int c = 1;
  for (int a = 0; a < d; ++a) c *= m;
  return c;
}

inline std::array<int, 3> subcube_multi(int cube, int d, int m) {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    c[a] = cube % m;
    cube /= m;
  }
  return c;
}

}  // namespace detail

inline PartitionClassification classify_partition(const DiscreteImmersion& u, int m,
                                                  const Vec& q0, double tau) {
  const GridDomain& dom = u.domain();
  const int d = dom.d(), nodes = dom.nodes_per_side();
  if (m < 1 || (nodes - 1) % m != 0)
    throw std::invalid_argument("classify_partition: m must divide the mesh segments");
  const int seg = (nodes - 1) / m;  // node segments per subcube side

  auto dist_to_q0 = [&](int i) {
    const MetricField& t = u.target();
    if (t.constant()) {
      const Vec dd = u.value(i) - q0;
      return std::sqrt(std::max(0.0, dd.dot(t.coeff_unchecked(q0) * dd)));
    }
    return geodesic_between(t, u.value(i), q0).dist;
  };
  std::vector<char> inside(dom.node_count());
  for (int i = 0; i < dom.node_count(); ++i) inside[i] = dist_to_q0(i) <= tau ? 1 : 0;

  PartitionClassification out;
  out.m = m;
  const int cubes = detail::subcube_count(d, m);
  out.good.resize(cubes);
  out.density.resize(cubes);
  const double sub_h = dom.spacing();
  const double sub_volume = std::pow(dom.side() / m, d);

  for (int c = 0; c < cubes; ++c) {
    const auto cm = detail::subcube_multi(c, d, m);
    double covered = 0.0;
    // iterate nodes of the subcube with its own trapezoid weights
    std::array<int, 3> local{0, 0, 0};
    const int per_side = seg + 1;
    int total = 1;
    for (int a = 0; a < d; ++a) total *= per_side;
    for (int t = 0; t < total; ++t) {
      int rem = t;
      double w = std::pow(sub_h, d);
      std::array<int, 3> idx{0, 0, 0};
      for (int a = 0; a < d; ++a) {
        local[a] = rem % per_side;
        rem /= per_side;
        idx[a] = cm[a] * seg + local[a];
        if (local[a] == 0 || local[a] == seg) w *= 0.5;
      }
      if (inside[dom.flat_index(idx)]) covered += w;
    }
    out.density[c] = covered / sub_volume;
    out.good[c] = out.density[c] > 0.5 ? 1 : 0;
    if (!out.good[c]) out.bad_volume += sub_volume;
  }

  double escape = 0.0;
  for (int i = 0; i < dom.node_count(); ++i)
    if (!inside[i]) escape += dom.quad_weight(i);
  out.escape_fraction = escape / dom.volume();
  return out;
}

/// Restriction of an immersion to one subcube of the m-fold partition;
/// node values are reused, the source metric is shifted accordingly.
inline DiscreteImmersion restrict_to_subcube(const DiscreteImmersion& u, int cube, int m) {
  const GridDomain& dom = u.domain();
  const int d = dom.d(), nodes = dom.nodes_per_side();
  if ((nodes - 1) % m != 0)
    throw std::invalid_argument("restrict_to_subcube: m must divide the mesh segments");
  const int seg = (nodes - 1) / m;
  const auto cm = detail::subcube_multi(cube, d, m);
  Vec offset(d);
  for (int a = 0; a < d; ++a) offset[a] = cm[a] * seg * dom.spacing();

  const MetricField& g = dom.metric_field();
  MetricField sub_g(
      d, [g, offset](const Vec& x) { return g.coeff_unchecked(Vec(x + offset)); }, nullptr,
      g.name() + "-sub", g.deriv_step(), g.constant());
  GridDomain sub(d, dom.side() / m, seg + 1, sub_g);

  std::vector<Vec> values;
  values.reserve(sub.node_count());
  for (int i = 0; i < sub.node_count(); ++i) {
    auto li = sub.multi_index(i);
    std::array<int, 3> gi{0, 0, 0};
    for (int a = 0; a < d; ++a) gi[a] = cm[a] * seg + li[a];
    values.push_back(u.value(dom.flat_index(gi)));
  }
  return DiscreteImmersion(DiscreteMap(sub, d + 1, std::move(values)), u.target());
}

// ---- convergence experiment ----

struct TraceRow {
  int k = 0;
  double e_s = 0.0, e_b = 0.0, e_bs = 0.0;
  double lp_to_final = 0.0, w1p_to_final = 0.0;
  double cauchy_increment = 0.0;  // w1p(u_k, u_{k+1}); 0 for the last k
  double dist_du_ort_median = 0.0;
  double shape_residual_median = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  double es_decay_exponent = 0.0;      // fitted slope of log E_s vs log k
  double cauchy_decay_exponent = 0.0;  // fitted slope of log increments vs log k
  std::vector<std::string> warnings;
};

namespace detail {

inline double ort_distance_median(const DiscreteImmersion& u) {
  std::vector<double> dists;
  dists.reserve(u.domain().node_count());
  for (int i = 0; i < u.domain().node_count(); ++i) {
    if (!u.regular(i)) {
      dists.push_back(std::sqrt(static_cast<double>(u.domain().d())));
      continue;
    }
    dists.push_back(isometry_distance(u.du_sample(i), false));
  }
  return median(std::move(dists));
}

inline double shape_residual_median(const DiscreteImmersion& u, const ShapeField& reference) {
  const ShapeField su = induced_shape_operator(u);
  std::vector<double> res;
  for (int i = 0; i < u.domain().node_count(); ++i) {
    if (!su.valid[i] || !reference.valid[i]) continue;
    const ConstMetric& g = u.domain().metric_at(i);
    res.push_back(frobenius_norm(LinearMapSample(su.op[i] - reference.op[i], g, g)));
  }
  return res.empty() ? std::numeric_limits<double>::quiet_NaN() : median(std::move(res));
}

}  // namespace detail

/// Runs the k = 1..K family sweep: energies, pairwise Sobolev distances
/// (consecutive and against the final iterate), decay-rate fits and
/// limit diagnostics on each iterate.
inline ConvergenceTrace convergence_experiment(const Scenario& scenario, int K,
                                               const SasakiOptions& sopt = {}) {
  if (K < 2) throw std::invalid_argument("convergence_experiment: need K >= 2");
  const GridDomain domain = scenario.make_domain();
  const MetricField target = scenario.make_target();
  const ShapeField reference = scenario.make_reference(domain);
  const DiscreteImmersion final_u = scenario.make_immersion(K, domain, target);

  ConvergenceTrace trace;
  std::optional<DiscreteImmersion> prev;
  std::vector<double> ks, es_values, inc_ks, increments;
  for (int k = 1; k <= K; ++k) {
    const DiscreteImmersion uk = (k == K) ? final_u : scenario.make_immersion(k, domain, target);
    TraceRow row;
    row.k = k;
    row.e_s = stretching_energy(uk, scenario.p);
    row.e_b = bending_energy(uk, scenario.p);
    row.e_bs = modified_bending_energy(uk, reference, scenario.p);
    row.lp_to_final = lp_distance(uk, final_u, scenario.p);
    row.w1p_to_final = w1p_distance(uk, final_u, scenario.p, sopt);
    row.dist_du_ort_median = detail::ort_distance_median(uk);
    row.shape_residual_median = detail::shape_residual_median(uk, reference);
    if (prev) {
      const double inc = w1p_distance(*prev, uk, scenario.p, sopt);
      trace.rows.back().cauchy_increment = inc;
      inc_ks.push_back(k - 1);
      increments.push_back(inc);
    }
    ks.push_back(k);
    es_values.push_back(row.e_s);
    trace.rows.push_back(row);
    prev = uk;
  }

  for (size_t i = 1; i < es_values.size(); ++i)
    if (es_values[i] > es_values[i - 1] * (1.0 + 1e-9)) {
      trace.warnings.push_back("stretching energy is not monotone along the family");
      break;
    }
  try {
    trace.es_decay_exponent = fit_log_slope(ks, es_values);
  } catch (const std::invalid_argument&) {
    trace.warnings.push_back("stretching energy vanished; decay fit skipped");
  }
  try {
    trace.cauchy_decay_exponent = fit_log_slope(inc_ks, increments);
  } catch (const std::invalid_argument&) {
    trace.warnings.push_back("Cauchy increments vanished; decay fit skipped");
  }
  return trace;
}

// ---- the partition aggregation of the Cauchy argument ----

struct PartitionAggregate {
  double global = 0.0;     // int_Q d_sigma^p(du1, du2) dx with the global differential
  double good_sum = 0.0;   // sum of per-good-cube reverse Poincare left-hand sides
  double bad_crude = 0.0;  // triangle-bound integral over the bad cubes
};

/// Reproduces the aggregation step of the Cauchy argument: per-good-cube
/// reverse Poincare left-hand sides plus the crude triangle bound on bad
/// cubes upper-bound the global Sasaki discrepancy (up to quadrature).
inline PartitionAggregate partition_aggregate_check(const DiscreteImmersion& u1,
                                                    const DiscreteImmersion& u2,
                                                    const PartitionClassification& part,
                                                    const ExtendedChart& ext, double delta,
                                                    double p) {
  detail::require_same_grid(u1, u2);
  const GridDomain& dom = u1.domain();
  const MetricField& target = u1.target();
  if (!target.constant())
    throw std::invalid_argument("partition_aggregate_check: constant-coefficient targets only");

  PartitionAggregate agg;
  for (int i = 0; i < dom.node_count(); ++i) {
    const Mat h = target.coeff_unchecked(u1.value(i));
    const double fiber = frobenius_norm(
        LinearMapSample(u1.du(i) - u2.du(i), dom.metric_at(i), ConstMetric(h)));
    const Vec dq = u1.value(i) - u2.value(i);
    const double ds = std::sqrt(fiber * fiber + dq.dot(h * dq));
    agg.global += dom.quad_weight(i) * std::pow(ds, p);
  }

  for (size_t c = 0; c < part.good.size(); ++c) {
    const DiscreteImmersion r1 = restrict_to_subcube(u1, static_cast<int>(c), part.m);
    const DiscreteImmersion r2 = restrict_to_subcube(u2, static_cast<int>(c), part.m);
    if (part.good[c]) {
      const GoodSet f1 = GoodSet::from_core(r1, ext, delta);
      const GoodSet f2 = GoodSet::from_core(r2, ext, delta);
      agg.good_sum += reverse_poincare_check(r1, r2, ext, f1, f2, p).lhs;
    } else {
      const GridDomain& sd = r1.domain();
      for (int i = 0; i < sd.node_count(); ++i) {
        const double a = frobenius_norm(r1.du_sample(i));
        const double b = frobenius_norm(r2.du_sample(i));
        const Vec dq = r1.value(i) - r2.value(i);
        const Mat h = target.coeff_unchecked(r1.value(i));
        const double dh = std::sqrt(std::max(0.0, dq.dot(h * dq)));
        agg.bad_crude += sd.quad_weight(i) * std::pow(a + b + dh, p);
      }
    }
  }
  return agg;
}

// ---- report emission ----

inline Json report_json(const RigidityReport& rep) {
  Json j;
  j["x0_index"] = rep.x0_index;
  j["x0"] = std::vector<double>(rep.x0.data(), rep.x0.data() + rep.x0.size());
  j["lhs"] = rep.lhs;
  Json terms;
  for (const auto& [label, v] : rep.rhs_terms) terms[label] = v;
  j["rhs_terms"] = terms;
  j["rhs_total"] = rep.rhs_total();
  j["ratio"] = rep.ratio;
  j["epsilon"] = rep.epsilon;
  j["delta"] = rep.delta;
  j["oscillation"] = rep.oscillation;
  j["diam_factor"] = rep.diam_factor;
  j["normal_gap"] = rep.normal_gap;
  return j;
}

inline Json trace_json(const ConvergenceTrace& trace, const Scenario& scenario) {
  Json j;
  j["scenario"] = scenario.echo();
  j["es_decay_exponent"] = trace.es_decay_exponent;
  j["cauchy_decay_exponent"] = trace.cauchy_decay_exponent;
  j["warnings"] = trace.warnings;
  Json rows = Json::array();
  for (const TraceRow& r : trace.rows) {
    rows.push_back(Json{{"k", r.k},
                        {"E_s", r.e_s},
                        {"E_b", r.e_b},
                        {"E_bS", r.e_bs},
                        {"lp_to_final", r.lp_to_final},
                        {"w1p_to_final", r.w1p_to_final},
                        {"cauchy_increment", r.cauchy_increment},
                        {"dist_du_Ort_median", r.dist_du_ort_median},
                        {"shape_residual_median", r.shape_residual_median}});
  }
  j["rows"] = rows;
  return j;
}

inline std::string format_csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Node-wise field table of an immersion: coordinates, values, normal and
/// induced shape operator entries.
inline std::string immersion_field_csv(const DiscreteImmersion& u) {
  const GridDomain& dom = u.domain();
  const int d = dom.d(), dim = u.target().dim();
  const ShapeField s = induced_shape_operator(u);
  std::ostringstream out;
  for (int a = 0; a < d; ++a) out << "x" << a + 1 << ',';
  for (int a = 0; a < dim; ++a) out << "u" << a + 1 << ',';
  for (int a = 0; a < dim; ++a) out << "nu" << a + 1 << ',';
  out << "regular";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out << ",S" << i + 1 << j + 1;
  out << '\n';
  for (int n = 0; n < dom.node_count(); ++n) {
    const Vec x = dom.node(n);
    for (int a = 0; a < d; ++a) out << format_csv_number(x[a]) << ',';
    for (int a = 0; a < dim; ++a) out << format_csv_number(u.value(n)[a]) << ',';
    for (int a = 0; a < dim; ++a) out << format_csv_number(u.normal(n)[a]) << ',';
    out << (u.regular(n) ? 1 : 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out << ',' << format_csv_number(s.valid[n] ? s.op[n](i, j)
                                                   : std::numeric_limits<double>::quiet_NaN());
    out << '\n';
  }
  return out.str();
}

inline std::string trace_csv(const ConvergenceTrace& trace) {
  std::ostringstream out;
  out << "k,E_s,E_b,E_bS,lp_to_final,w1p_to_final,cauchy_increment,"
         "dist_du_Ort_median,shape_residual_median\n";
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << format_csv_number(r.e_s) << ',' << format_csv_number(r.e_b) << ','
        << format_csv_number(r.e_bs) << ',' << format_csv_number(r.lp_to_final) << ','
        << format_csv_number(r.w1p_to_final) << ',' << format_csv_number(r.cauchy_increment)
        << ',' << format_csv_number(r.dist_du_ort_median) << ','
        << format_csv_number(r.shape_residual_median) << '\n';
  }
  return out.str();
}

/// Writes the CSV/JSON artifacts of a run; bit-stable for identical inputs.
inline std::vector<std::string> emit_reports(const Json& json_doc, const std::string& csv_text,
                                             const std::string& dir, const std::string& stem,
                                             const std::string& formats = "csv,json") {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("emit_reports: cannot create output dir '" + dir + "'");
  std::vector<std::string> written;
  if (formats.find("json") != std::string::npos) {
    const fs::path path = fs::path(dir) / (stem + ".json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_reports: cannot write '" + path.string() + "'");
    out << json_doc.dump(2) << '\n';
    written.push_back(path.string());
  }
  if (formats.find("csv") != std::string::npos) {
    const fs::path path = fs::path(dir) / (stem + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_reports: cannot write '" + path.string() + "'");
    out << csv_text;
    written.push_back(path.string());
  }
  return written;
}

}  // namespace codim1
