// rigidlab: batch driver for the rigidity experiments.
//
// Verbs:
//   rigidlab run <config> [--set key=value ...]
//   rigidlab check <config> [--set key=value ...]      (validate only)
//   rigidlab sweep <config> --param k=1..K [--set ...]
//
// Exit codes: 0 success, 1 config error, 2 hypothesis violation.
// The output directory comes from [output] dir, overridable with the
// RIGIDLAB_OUTDIR environment variable.

#include "codim1/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace codim1;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string param;
};

Config load_config(const CommonArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::string output_dir(const Config& cfg) {
  if (const char* env = std::getenv("RIGIDLAB_OUTDIR")) return env;
  return cfg.get_string("output.dir", "out");
}

// Builds the extended chart an experiment works in: an exact whitening
// chart for constant targets, normal coordinates otherwise.  The core
// radius is sized from the sampled image.
ExtendedChart make_experiment_chart(const Scenario& s, const DiscreteImmersion& u,
                                    double r_factor) {
  const MetricField target = s.make_target();
  Vec center = u.value(u.domain().node_count() / 2);
  double image_radius = 0.0;
  for (int i = 0; i < u.domain().node_count(); ++i)
    image_radius = std::max(image_radius, (u.value(i) - center).norm());
  image_radius = std::max(image_radius, 1e-6);

  Chart chart = [&]() {
    if (target.constant()) {
      const Mat a = ConstMetric(target.coeff_unchecked(center)).sqrt();
      return Chart::affine(target, center, 20.0 * image_radius, a);
    }
    return normal_coordinates(target, center, 2.5 * r_factor * image_radius);
  }();
  const double r = r_factor * image_radius;
  return extend_chart(chart, CutoffProfile(target.dim()), r);
}

Json run_energies(const Scenario& s) {
  const GridDomain domain = s.make_domain();
  const MetricField target = s.make_target();
  const DiscreteImmersion u = s.make_immersion(s.k, domain, target);
  const ShapeField ref = s.make_reference(domain);
  Json j;
  j["scenario"] = s.echo();
  j["E_s"] = stretching_energy(u, s.p);
  j["E_b"] = bending_energy(u, s.p);
  j["E_bS"] = modified_bending_energy(u, ref, s.p);
  j["degenerate_nodes"] = u.degenerate_count();
  j["excluded_nodes"] = u.covariant_excluded_count();
  return j;
}

Json run_local_rigidity(const Scenario& s, const Config& cfg) {
  const GridDomain domain = s.make_domain();
  const MetricField target = s.make_target();
  const DiscreteImmersion u = s.make_immersion(s.k, domain, target);
  const double delta = cfg.get_double("experiment.delta", 0.5);
  const double r_factor = cfg.get_double("experiment.r_factor", 1.5);
  const ExtendedChart ext = make_experiment_chart(s, u, r_factor);
  const GoodSet f = GoodSet::from_core(u, ext, delta);
  const RigidityReport rep = local_rigidity_codim1(u, ext, f, s.p);
  Json j;
  j["scenario"] = s.echo();
  j["report"] = report_json(rep);
  return j;
}

Json run_partition(const Scenario& s, const Config& cfg) {
  const GridDomain domain = s.make_domain();
  const MetricField target = s.make_target();
  const DiscreteImmersion u = s.make_immersion(s.k, domain, target);
  const int m = static_cast<int>(cfg.get_int("experiment.m", 2));
  Vec q0 = u.value(u.domain().node_count() / 2);
  double image_radius = 0.0;
  for (int i = 0; i < domain.node_count(); ++i)
    image_radius = std::max(image_radius, (u.value(i) - q0).norm());
  const double tau = cfg.get_double("experiment.tau", 3.0 * image_radius + 1e-12);
  const PartitionClassification part = classify_partition(u, m, q0, tau);
  Json j;
  j["scenario"] = s.echo();
  j["m"] = part.m;
  j["tau"] = tau;
  j["good_cubes"] = part.good_count();
  j["bad_cubes"] = part.bad_count();
  j["bad_volume"] = part.bad_volume;
  j["escape_fraction"] = part.escape_fraction;
  j["density"] = part.density;
  return j;
}

Json run_reverse_poincare(const Scenario& s, const Config& cfg) {
  const GridDomain domain = s.make_domain();
  const MetricField target = s.make_target();
  const DiscreteImmersion u1 = s.make_immersion(s.k, domain, target);
  Scenario s2 = s;
  s2.family_name = cfg.get_string("immersion2.family", s.family_name);
  s2.family_params.clear();
  for (const auto& [key, value] : cfg.section("immersion2"))
    if (key != "family") s2.family_params[key] = cfg.get_double("immersion2." + key);
  const DiscreteImmersion u2 = s2.make_immersion(s.k, domain, target);
  const double delta = cfg.get_double("experiment.delta", 0.5);
  const ExtendedChart ext = make_experiment_chart(s, u1, cfg.get_double("experiment.r_factor", 2.0));
  const GoodSet f1 = GoodSet::from_core(u1, ext, delta);
  const GoodSet f2 = GoodSet::from_core(u2, ext, delta);
  const RigidityReport rep = reverse_poincare_check(u1, u2, ext, f1, f2, s.p);
  Json j;
  j["scenario"] = s.echo();
  j["report"] = report_json(rep);
  return j;
}

int run_one(const Config& cfg, const Scenario& s, bool emit) {
  const std::string kind = cfg.get_string("experiment.kind", "energies");
  Json doc;
  std::string csv;
  if (kind == "energies") {
    doc = run_energies(s);
    csv = "E_s,E_b,E_bS\n" + format_csv_number(doc["E_s"].get<double>()) + "," +
          format_csv_number(doc["E_b"].get<double>()) + "," +
          format_csv_number(doc["E_bS"].get<double>()) + "\n";
  } else if (kind == "convergence") {
    const ConvergenceTrace trace = convergence_experiment(s, s.K);
    doc = trace_json(trace, s);
    csv = trace_csv(trace);
    for (const std::string& w : trace.warnings) std::cerr << "warning: " << w << "\n";
  } else if (kind == "local-rigidity") {
    doc = run_local_rigidity(s, cfg);
    const auto& rep = doc["report"];
    csv = "lhs,rhs_total,ratio\n" + format_csv_number(rep["lhs"].get<double>()) + "," +
          format_csv_number(rep["rhs_total"].get<double>()) + "," +
          format_csv_number(rep["ratio"].get<double>()) + "\n";
  } else if (kind == "partition") {
    doc = run_partition(s, cfg);
    csv = "good_cubes,bad_cubes,bad_volume,escape_fraction\n" +
          std::to_string(doc["good_cubes"].get<int>()) + "," +
          std::to_string(doc["bad_cubes"].get<int>()) + "," +
          format_csv_number(doc["bad_volume"].get<double>()) + "," +
          format_csv_number(doc["escape_fraction"].get<double>()) + "\n";
  } else if (kind == "reverse-poincare") {
    doc = run_reverse_poincare(s, cfg);
    const auto& rep = doc["report"];
    csv = "lhs,rhs_total,ratio\n" + format_csv_number(rep["lhs"].get<double>()) + "," +
          format_csv_number(rep["rhs_total"].get<double>()) + "," +
          format_csv_number(rep["ratio"].get<double>()) + "\n";
  } else {
    throw ConfigError("config key 'experiment.kind': unknown kind '" + kind + "'");
  }

  if (emit) {
    const std::string stem = cfg.get_string("output.stem", s.name);
    const auto files = emit_reports(doc, csv, output_dir(cfg), stem,
                                    cfg.get_string("output.format", "csv,json"));
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    if (cfg.get_string("output.fields", "false") == "true") {
      const GridDomain domain = s.make_domain();
      const DiscreteImmersion u = s.make_immersion(s.k, domain, s.make_target());
      const auto field_files =
          emit_reports(Json::object(), immersion_field_csv(u), output_dir(cfg), stem + "-fields",
                       "csv");
      for (const auto& f : field_files) std::cout << "wrote " << f << "\n";
    }
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return 0;
}

// parses "key=a..b" into (key, a, b)
std::tuple<std::string, long long, long long> parse_param_range(const std::string& spec) {
  const auto eq = spec.find('=');
  const auto dots = spec.find("..");
  if (eq == std::string::npos || dots == std::string::npos || dots < eq)
    throw ConfigError("--param expects key=lo..hi, got '" + spec + "'");
  const std::string key = spec.substr(0, eq);
  const long long lo = std::stoll(spec.substr(eq + 1, dots - eq - 1));
  const long long hi = std::stoll(spec.substr(dots + 2));
  if (hi < lo) throw ConfigError("--param range is empty");
  return {key, lo, hi};
}

int run_sweep(Config cfg, const std::string& param_spec) {
  const auto [key, lo, hi] = parse_param_range(param_spec);
  const std::string kind = cfg.get_string("experiment.kind", "energies");
  Json sweep_doc = Json::array();
  std::ostringstream csv;
  if (kind == "local-rigidity" || kind == "reverse-poincare")
    csv << key << ",lhs,rhs_total,ratio\n";
  else
    csv << key << ",E_s,E_b,E_bS\n";
  for (long long v = lo; v <= hi; ++v) {
    cfg.set(key == "k" ? "immersion.k" : key, std::to_string(v));
    const Scenario s = Scenario::from_config(cfg);
    Json j;
    if (kind == "local-rigidity") {
      j = run_local_rigidity(s, cfg);
    } else if (kind == "reverse-poincare") {
      j = run_reverse_poincare(s, cfg);
    } else {
      j = run_energies(s);
    }
    j["sweep_value"] = v;
    sweep_doc.push_back(j);
    csv << v;
    if (j.contains("report")) {
      const auto& rep = j["report"];
      csv << ',' << format_csv_number(rep["lhs"].get<double>()) << ','
          << format_csv_number(rep["rhs_total"].get<double>()) << ','
          << format_csv_number(rep["ratio"].get<double>());
    } else {
      csv << ',' << format_csv_number(j["E_s"].get<double>()) << ','
          << format_csv_number(j["E_b"].get<double>()) << ','
          << format_csv_number(j["E_bS"].get<double>());
    }
    csv << '\n';
  }
  const Scenario s = Scenario::from_config(cfg);
  const std::string stem = cfg.get_string("output.stem", s.name) + "-sweep";
  const auto files = emit_reports(sweep_doc, csv.str(), output_dir(cfg), stem,
                                  cfg.get_string("output.format", "csv,json"));
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity experiment driver"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", args.config_path, "config file")->required();
    sub->add_option("--set", args.overrides, "override config keys (key=value)");
  };
  CLI::App* cmd_run = app.add_subcommand("run", "run the configured experiment");
  add_common(cmd_run);
  CLI::App* cmd_check = app.add_subcommand("check", "validate the config and exit");
  add_common(cmd_check);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run over a parameter range");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--param", args.param, "sweep range key=lo..hi")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = load_config(args);
    const Scenario scenario = Scenario::from_config(cfg);
    if (cmd_check->parsed()) {
      std::cout << scenario.echo().dump(2) << "\n";
      return 0;
    }
    if (cmd_sweep->parsed()) return run_sweep(cfg, args.param);
    return run_one(cfg, scenario, true);
  } catch (const codim1::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const codim1::HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
