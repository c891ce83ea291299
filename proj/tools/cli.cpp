#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "currents/currents.hpp"
#include "flowlab/poincare.hpp"
#include "obstruction/obstruction.hpp"
#include "stabilize/stabilize.hpp"
#include "verify/residuals.hpp"

namespace {

using core::Expr;
using nlohmann::json;

struct Config {
  std::string model = "klein";
  std::array<double, 2> h_coeffs{2.0, -1.0};  // h(z) = c0 + c1 cos(2 pi z)
  int shear_l = 1;
  double T0 = 1.0;
  double eps = 0.25;
  int chi_order = 5;
  std::array<double, 4> T{1, 2, 1, 3};
  double delta = 0.1;
  int samples = 2000;
  int seed = 0;
};

void load_config(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("config", "cannot open " + path);
  json j;
  in >> j;
  if (j.contains("model")) cfg.model = j["model"].get<std::string>();
  if (j.contains("h_coeffs")) cfg.h_coeffs = j["h_coeffs"].get<std::array<double, 2>>();
  if (j.contains("shear_l")) cfg.shear_l = j["shear_l"].get<int>();
  if (j.contains("T0")) cfg.T0 = j["T0"].get<double>();
  if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
  if (j.contains("chi_order")) cfg.chi_order = j["chi_order"].get<int>();
  if (j.contains("T")) cfg.T = j["T"].get<std::array<double, 4>>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<int>();
}

Expr h_expr(const Config& cfg) {
  const Expr z = Expr::var(2);
  return Expr::constant(cfg.h_coeffs[0]) +
         Expr::constant(cfg.h_coeffs[1]) * core::cos(Expr::constant(2 * M_PI) * z);
}

models::ModelSolution build_model(const Config& cfg) {
  if (cfg.model == "klein") return models::klein_mapping_torus(h_expr(cfg));
  if (cfg.model == "shear")
    return models::shear_mapping_torus(cfg.shear_l, false, h_expr(cfg));
  if (cfg.model == "contact")
    return models::standardized_orbit_neighborhood(cfg.T0, cfg.eps);
  if (cfg.model == "counterexample")
    return models::glued_counterexample(cfg.T, cfg.delta, {0.3, 0.3, 0.3, 0.3}, nullptr,
                                        true)
        .solution;
  throw CLI::ValidationError("--model", "unknown model " + cfg.model);
}

flowlab::SectionMap section_for(const Config& cfg) {
  flowlab::SectionMap s;
  if (cfg.model == "klein" || cfg.model == "shear") {
    s.axis = 0;
    core::Mat2 B = core::Mat2::identity();
    if (cfg.model == "klein") {
      B[0][0] = B[1][1] = -1;
    } else {
      B[0][1] = cfg.shear_l;
    }
    s.deck = B.inverse();
  } else if (cfg.model == "contact") {
    s.axis = 2;
    s.transverse_periodic = {false, false};
  } else {
    throw CLI::ValidationError("--model", "no return-map section for " + cfg.model);
  }
  return s;
}

core::Vec3 parse_vec3(const std::string& s) {
  core::Vec3 v{};
  char c1, c2;
  std::istringstream in(s);
  if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',')
    throw CLI::ValidationError("vector", "expected x,y,z: " + s);
  return v;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << '\n';
  }
}

int cmd_verify(const Config& cfg) {
  const models::ModelSolution sol = build_model(cfg);
  const auto pts = verify::sample_points(sol, cfg.samples, cfg.seed);
  json report;
  report["model"] = sol.name;
  report["samples"] = cfg.samples;
  report["seed"] = cfg.seed;
  report["residuals"] = json::array();
  double worst = 0;
  bool ok = true;
  for (auto eq : {verify::EulerEq::momentum, verify::EulerEq::curlform,
                  verify::EulerEq::dualform, verify::EulerEq::volume}) {
    const auto r = verify::euler_residuals(sol, pts, eq, 1e-9, cfg.seed);
    report["residuals"].push_back(r.to_json());
    worst = std::max(worst, r.max_residual);
    ok = ok && r.pass();
  }
  report["max_residual"] = worst;
  report["pass"] = ok;
  emit(report, "");
  return ok ? 0 : 1;
}

int cmd_orbit(const Config& cfg, const std::string& start, double time,
              const std::string& out_path) {
  const models::ModelSolution sol = build_model(cfg);
  const auto p0 = models::normalize_point(sol.atlas, parse_vec3(start));
  const auto seg = flowlab::integrate(sol.X, sol.atlas, p0, time);
  if (out_path.empty()) {
    flowlab::dump_orbit_csv(seg, std::cout);
  } else {
    std::ofstream out(out_path);
    flowlab::dump_orbit_csv(seg, out);
  }
  return 0;
}

int cmd_periodic(const Config& cfg, const std::string& guess) {
  const models::ModelSolution sol = build_model(cfg);
  const auto section = section_for(cfg);
  const auto p0 = models::normalize_point(sol.atlas, parse_vec3(guess));
  const auto orbit = flowlab::find_periodic(sol.X, sol.atlas, section, p0);
  emit(orbit.to_json(), "");
  return 0;
}

int cmd_current(const Config& cfg, const std::string& sweep, const std::string& form,
                const std::string& out_path) {
  double a, d;
  int n;
  char c1, c2;
  std::istringstream in(sweep);
  if (!(in >> a >> c1 >> d >> c2 >> n) || c1 != ':' || c2 != ':' || n <= 0 || !(a < d))
    throw CLI::ValidationError("--sweep", "expected a:d:n with a < d, n > 0: " + sweep);

  const auto g = models::glued_counterexample(cfg.T, cfg.delta, {0.3, 0.3, 0.3, 0.3},
                                              nullptr, true);
  const auto region = currents::region_from_extension(g.region12);
  if (a < region.a || d > region.d)
    throw CLI::ValidationError("--sweep",
                               "sweep outside the extension region [" +
                                   std::to_string(region.a) + ", " +
                                   std::to_string(region.d) + "]");
  chartcalc::OneForm alpha = g.region12.sol.lambda;
  if (form == "dz") {
    alpha = chartcalc::OneForm({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  } else if (form == "dphi") {
    alpha = chartcalc::OneForm({Expr::constant(0), Expr::constant(1), Expr::constant(0)});
  } else if (form != "lambda") {
    throw CLI::ValidationError("--form", "expected lambda, dz, or dphi: " + form);
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "r,c_r\n";
  for (int i = 0; i < n; ++i) {
    const double r = a + (d - a) * (i + 0.5) / n;
    csv << r << ',' << currents::current_space_average(alpha, region, r).value << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return 0;
}

int cmd_stabilize(const Config& cfg) {
  if (cfg.model != "klein")
    throw CLI::ValidationError("--model", "stabilize supports only the klein model");
  const models::ModelSolution sol = build_model(cfg);
  const auto nu = stabilize::stabilizer_for_klein(sol);
  const auto pts = verify::sample_points(sol, cfg.samples, cfg.seed);
  const auto rep = verify::check_stabilizing(nu, sol.X, pts);
  const auto shs = [&] {
    const auto r = verify::rescale_to_reeb(sol, nu, pts);
    return verify::check_shs(r.omega, r.lambda, r.X, pts);
  }();
  json report;
  report["model"] = sol.name;
  report["samples"] = cfg.samples;
  report["seed"] = cfg.seed;
  report["stabilizing"] = {{"ok", rep.ok},
                           {"closure_residual", rep.closure.max_residual},
                           {"min_pairing", rep.min_pairing}};
  report["shs_after_rescale"] = {{"max_residual", shs.max()}, {"pass", shs.pass()}};
  emit(report, "");
  return rep.ok && shs.pass() ? 0 : 1;
}

int cmd_counterexample(const Config& cfg, const std::string& out_path) {
  const json report = obstruction::counterexample_report(cfg.T, cfg.delta, cfg.samples);
  emit(report, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary Euler model laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // --config/--seed may appear after the subcommand

  Config cfg;
  std::string config_path, start = "0,0,0", guess = "0.01,0.01,0",
              sweep = "1.05:1.95:16", form = "lambda", out_path;
  double time = 10.0;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", cfg.seed, "sampler offset");

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "klein|shear|contact|counterexample");
    sub->add_option("--samples", cfg.samples, "sample count");
  };

  auto* verify_cmd = app.add_subcommand("verify", "residual suite for a catalog model");
  add_model(verify_cmd);

  auto* orbit_cmd = app.add_subcommand("orbit", "integrate an orbit, dump CSV");
  add_model(orbit_cmd);
  orbit_cmd->add_option("--start", start, "initial point x,y,z");
  orbit_cmd->add_option("--time", time, "integration time");
  orbit_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* periodic_cmd = app.add_subcommand("periodic", "locate a periodic orbit");
  add_model(periodic_cmd);
  periodic_cmd->add_option("--guess", guess, "section guess x,y,z");

  auto* current_cmd = app.add_subcommand("current", "current sweep over radii");
  current_cmd->add_option("--sweep", sweep, "a:d:n radius sweep");
  current_cmd->add_option("--form", form, "lambda|dz|dphi");
  current_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* stabilize_cmd = app.add_subcommand("stabilize", "stabilizing 1-form check");
  add_model(stabilize_cmd);

  auto* counter_cmd = app.add_subcommand("counterexample", "full obstruction report");
  counter_cmd->add_option("--t", [&cfg](const std::vector<std::string>& vals) {
    std::istringstream in(vals.at(0));
    char c;
    return bool(in >> cfg.T[0] >> c >> cfg.T[1] >> c >> cfg.T[2] >> c >> cfg.T[3]);
  }, "periods T1,T2,T3,T4");
  counter_cmd->add_option("--delta", cfg.delta, "collar width");
  counter_cmd->add_option("--samples", cfg.samples, "sample count");
  counter_cmd->add_option("--out", out_path, "report file (default stdout)");

  try {
    // two-pass parse so the config file loads before flag overrides
    app.allow_extras(false);
    app.parse(argc, argv);
    if (!config_path.empty()) {
      Config fresh;
      load_config(fresh, config_path);
      const Config flag_values = cfg;
      cfg = fresh;
      // replay explicit flags on top of the file values
      for (auto* sub : app.get_subcommands()) {
        for (const auto& name : {"--model", "--samples"}) {
          if (sub->count(name)) {
            if (std::string(name) == "--model") cfg.model = flag_values.model;
            if (std::string(name) == "--samples") cfg.samples = flag_values.samples;
          }
        }
      }
      if (app.count("--seed")) cfg.seed = flag_values.seed;
      if (counter_cmd->count("--t")) cfg.T = flag_values.T;
      if (counter_cmd->count("--delta")) cfg.delta = flag_values.delta;
    }

    if ((verify_cmd->parsed() || stabilize_cmd->parsed() || counter_cmd->parsed()) &&
        cfg.samples <= 0)
      throw CLI::ValidationError("--samples", "sample count must be positive");

    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (orbit_cmd->parsed()) return cmd_orbit(cfg, start, time, out_path);
    if (periodic_cmd->parsed()) return cmd_periodic(cfg, guess);
    if (current_cmd->parsed()) return cmd_current(cfg, sweep, form, out_path);
    if (stabilize_cmd->parsed()) return cmd_stabilize(cfg);
    if (counter_cmd->parsed()) return cmd_counterexample(cfg, out_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
}
