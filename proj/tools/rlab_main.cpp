#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlab/builtins.hpp"
#include "rlab/io.hpp"
#include "rlab/knapp.hpp"
#include "rlab/oscillatory.hpp"
#include "rlab/parallel.hpp"
#include "rlab/polytope.hpp"
#include "rlab/sublevel.hpp"

namespace {

using nlohmann::json;
using namespace rlab;

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string threads = "auto";
  std::string budget = "default";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

std::vector<double> grid_or(const GridSpec& g, double lo, double hi,
                            int points) {
  if (g.set) return geometric_grid(g.lo, g.hi, g.points);
  return geometric_grid(lo, hi, points);
}

Polytope regular_polygon(int sides, double radius) {
  std::vector<Vec> verts;
  for (int i = 0; i < sides; ++i) {
    const double th = 2.0 * 3.14159265358979323846 * i / sides;
    verts.push_back({radius * std::cos(th), radius * std::sin(th)});
  }
  return Polytope::polygon(std::move(verts));
}

void run_volume_growth(const ExperimentConfig& cfg, const std::string& out,
                       Manifest& man) {
  const SurfacePatch s = make_surface(cfg.surface);
  const auto deltas = grid_or(cfg.delta_grid, std::pow(2.0, -12),
                              std::pow(2.0, -2), 11);
  const int resolution = s.graph_dim() == 1 ? 4096 : 1024;

  CsvWriter csv({"delta", "volume", "err_low", "err_high", "method", "seed"});
  std::vector<std::pair<double, VolumeEstimate>> mc_points;
  for (double delta : deltas) {
    const VolumeEstimate mc = volume_mc(s, delta, cfg.mc_samples, cfg.seed);
    const VolumeEstimate gr = volume_grid(s, delta, resolution);
    const VolumeEstimate po = volume_polar_exact(s.q(), delta);
    for (const VolumeEstimate* e : {&mc, &gr, &po})
      csv.add_row({format_double(delta), format_double(e->value),
                   format_double(e->lower), format_double(e->upper), e->method,
                   std::to_string(e->seed)});
    mc_points.emplace_back(delta, mc);
  }
  const ExponentFit fit = fit_growth_exponent(mc_points);
  csv.save(out + "/volumes.csv");
  man.outputs.push_back("volumes.csv");

  json j{{"slope", fit.slope},
         {"intercept", fit.intercept},
         {"r2", fit.r2},
         {"n_points", fit.grid.size()}};
  write_text_atomic(out + "/fit.json", j.dump(2) + "\n");
  man.outputs.push_back("fit.json");
  std::cout << "volume-growth slope " << format_double(fit.slope) << "\n";
}

void run_knapp(const ExperimentConfig& cfg, const std::string& out,
               Manifest& man) {
  const SurfacePatch s = make_surface(cfg.surface);
  const auto deltas = grid_or(cfg.delta_grid, std::pow(2.0, -14),
                              std::pow(2.0, -4), 11);
  const ScalingVerdict v = fit_knapp_exponents(s, deltas, cfg.p, cfg.margin);

  CsvWriter csv({"delta", "restriction_norm", "lp_norm", "p"});
  for (const auto& row : v.rows)
    csv.add_row({format_double(row.delta), format_double(row.restriction),
                 format_double(row.lp), format_double(v.p)});
  csv.save(out + "/knapp.csv");
  man.outputs.push_back("knapp.csv");

  json j{{"rho2", v.rho2},
         {"rhop", v.rhop},
         {"p", v.p},
         {"admissible", v.admissible},
         {"r_hat", v.r_hat}};
  write_text_atomic(out + "/verdict.json", j.dump(2) + "\n");
  man.outputs.push_back("verdict.json");
  std::cout << "knapp rho2 " << format_double(v.rho2) << " rhop "
            << format_double(v.rhop)
            << (v.admissible ? " admissible" : " not-admissible") << "\n";
}

void run_polytope_norm(const ExperimentConfig& cfg, const std::string& out,
                       Manifest& man) {
  const double p = cfg.p;
  const double lambda = cfg.norm_lambda;
  CsvWriter csv({"name", "vertices", "volume", "p", "lambda", "truncated",
                 "tail_bound", "total", "ratio"});
  struct Entry {
    std::string name;
    Polytope poly;
  };
  std::vector<Entry> sweep;
  sweep.push_back({"unit-triangle",
                   Polytope::polygon({{0, 0}, {1, 0}, {0, 1}})});
  sweep.push_back({"unit-square", Polytope::box({0, 0}, {1, 1})});
  for (int n : {5, 6, 8})
    sweep.push_back({"regular-" + std::to_string(n), regular_polygon(n, 1.0)});
  for (const auto& e : sweep) {
    const LpNormResult r = lp_norm_ft(e.poly, p, lambda);
    const double pprime = p / (p - 1.0);
    const double ratio =
        r.total / (static_cast<double>(e.poly.vertex_count()) *
                   std::pow(e.poly.volume(), 1.0 / pprime));
    csv.add_row({e.name, std::to_string(e.poly.vertex_count()),
                 format_double(e.poly.volume()), format_double(p),
                 format_double(lambda), format_double(r.truncated),
                 format_double(r.tail_bound), format_double(r.total),
                 format_double(ratio)});
  }
  csv.save(out + "/polytope_norms.csv");
  man.outputs.push_back("polytope_norms.csv");
  std::cout << "polytope-norm sweep complete\n";
}

void run_decay(const ExperimentConfig& cfg, const std::string& out,
               Manifest& man) {
  const SurfacePatch s = make_surface(cfg.surface);
  const int n = s.ambient_dim();
  const double default_max = n == 2 ? 2048.0 : 512.0;
  const auto lambdas = cfg.lambda_grid;
  Vec normal(n, 0.0);
  normal[n - 1] = 1.0;
  const DecayProfile prof = decay_profile(
      s, normal, lambdas.set ? lambdas.lo : 2.0,
      lambdas.set ? lambdas.hi : default_max, lambdas.set ? lambdas.points : 41,
      cfg.max_panels);

  CsvWriter csv({"lambda", "re", "im", "abs", "envelope_flag"});
  for (std::size_t i = 0; i < prof.lambdas.size(); ++i)
    csv.add_row({format_double(prof.lambdas[i]),
                 format_double(prof.values[i].real()),
                 format_double(prof.values[i].imag()),
                 format_double(std::abs(prof.values[i])),
                 std::to_string(static_cast<int>(prof.envelope_flag[i]))});
  csv.save(out + "/decay.csv");
  man.outputs.push_back("decay.csv");

  const ExponentFit fit = fit_decay_exponent(prof);
  json j{{"r_hat", fit.slope}, {"r2", fit.r2}, {"n_points", fit.grid.size()}};
  write_text_atomic(out + "/decay_fit.json", j.dump(2) + "\n");
  man.outputs.push_back("decay_fit.json");
  std::cout << "decay r_hat " << format_double(fit.slope) << "\n";
}

void run_scan(const ExperimentConfig& cfg, const std::string& out,
              Manifest& man) {
  const SurfacePatch s = make_surface(cfg.surface);
  const int n = s.ambient_dim();
  const int count = n == 2 ? 64 : 128;
  const double probe = cfg.lambda_grid.set ? cfg.lambda_grid.hi : 256.0;
  const ScanReport rep = isotropic_decay_scan(s, count, probe, cfg.max_panels);

  std::vector<std::string> header{"theta_index"};
  for (int k = 0; k < n; ++k) header.push_back("theta_" + std::to_string(k));
  header.push_back("abs_at_probe");
  CsvWriter csv(header);
  for (std::size_t i = 0; i < rep.directions.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (double c : rep.directions[i]) row.push_back(format_double(c));
    row.push_back(format_double(rep.abs_at_probe[i]));
    csv.add_row(row);
  }
  csv.save(out + "/scan.csv");
  man.outputs.push_back("scan.csv");
  std::cout << "scan worst direction index " << rep.worst_index << "\n";
}

void run_hyperbola(const ExperimentConfig& cfg, const std::string& out,
                   Manifest& man) {
  std::vector<double> deltas{1e-2, 1e-4, 1e-6};
  if (cfg.delta_grid.set)
    deltas = geometric_grid(cfg.delta_grid.lo, cfg.delta_grid.hi,
                            cfg.delta_grid.points);
  const auto rows = hyperbola_demo(deltas, cfg.steps);
  CsvWriter csv({"delta", "region_area", "cover_area", "ratio", "descent_gap"});
  for (const auto& r : rows)
    csv.add_row(std::vector<double>{r.delta, r.region_area, r.cover_area,
                                    r.ratio, r.descent_gap});
  csv.save(out + "/hyperbola.csv");
  man.outputs.push_back("hyperbola.csv");
  std::cout << "hyperbola-demo rows " << rows.size() << "\n";
}

void run_triangle_report(const ExperimentConfig& cfg, const std::string& out,
                         Manifest& man) {
  const SurfacePatch s = make_surface(cfg.surface);
  // volume side
  const auto deltas = grid_or(cfg.delta_grid, std::pow(2.0, -12),
                              std::pow(2.0, -2), 11);
  std::vector<std::pair<double, VolumeEstimate>> pts;
  for (double delta : deltas)
    pts.emplace_back(delta, volume_mc(s, delta, cfg.mc_samples, cfg.seed));
  const double volume_slope = fit_growth_exponent(pts).slope;

  // decay side (normal direction)
  const int n = s.ambient_dim();
  const double lam_max = cfg.lambda_grid.set ? cfg.lambda_grid.hi
                                             : (n == 2 ? 2048.0 : 512.0);
  Vec normal(n, 0.0);
  normal[n - 1] = 1.0;
  const DecayProfile prof =
      decay_profile(s, normal, 2.0, lam_max, 41, cfg.max_panels);
  const double r_hat = fit_decay_exponent(prof).slope;

  // knapp side
  const auto kd = grid_or(cfg.delta_grid, std::pow(2.0, -14),
                          std::pow(2.0, -4), 11);
  const double p_crit = critical_p_scan(s, kd, 1.05, 1.95, 1e-4, cfg.margin);
  const double p_from_decay = p_star(r_hat);

  json j{{"volume_slope", volume_slope},
         {"decay_r_hat", r_hat},
         {"knapp_critical_p", p_crit},
         {"p_star_of_r_hat", p_from_decay},
         {"delta_decay_vs_volume", std::abs(r_hat - volume_slope)},
         {"delta_p_crit", std::abs(p_crit - p_from_decay)}};
  write_text_atomic(out + "/triangle.json", j.dump(2) + "\n");
  man.outputs.push_back("triangle.json");
  std::cout << "triangle-report r_hat " << format_double(r_hat)
            << " volume slope " << format_double(volume_slope)
            << " critical p " << format_double(p_crit) << "\n";
}

int run_kind(const std::string& kind, const CliOptions& opts) {
  ExperimentConfig cfg = parse_experiment_config_file(opts.config_path);
  if (cfg.kind != kind)
    throw ValidationError("config kind '" + cfg.kind +
                          "' does not match subcommand '" + kind + "'");
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.budget == "small")
    cfg.max_panels = std::min(cfg.max_panels, 1LL << 20);
  else if (opts.budget == "large")
    cfg.max_panels = 1LL << 26;
  else if (opts.budget != "default")
    throw ValidationError("unknown budget preset: " + opts.budget);

  std::filesystem::create_directories(opts.out_dir);
  Manifest man;
  man.config_hash = content_hash(cfg.canonical);
  man.seed = cfg.seed;
  man.threads = thread_count();
  const auto t0 = std::chrono::steady_clock::now();

  if (kind == "volume-growth")
    run_volume_growth(cfg, opts.out_dir, man);
  else if (kind == "knapp")
    run_knapp(cfg, opts.out_dir, man);
  else if (kind == "polytope-norm")
    run_polytope_norm(cfg, opts.out_dir, man);
  else if (kind == "decay")
    run_decay(cfg, opts.out_dir, man);
  else if (kind == "scan")
    run_scan(cfg, opts.out_dir, man);
  else if (kind == "hyperbola-demo")
    run_hyperbola(cfg, opts.out_dir, man);
  else if (kind == "triangle-report")
    run_triangle_report(cfg, opts.out_dir, man);
  else
    throw ValidationError("unknown experiment kind: " + kind);

  man.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  man.outputs.push_back("manifest.json");
  write_manifest(opts.out_dir + "/manifest.json", man);
  return 0;
}

void list_builtins() {
  std::printf("%-16s %-10s %-8s %-6s %s\n", "name", "weights", "r", "fpt",
              "note");
  for (const auto& b : builtin_table()) {
    std::string w = "(";
    for (std::size_t i = 0; i < b.a.size(); ++i) {
      if (i) w += ",";
      w += std::to_string(b.a[i]);
    }
    w += ")";
    std::printf("%-16s %-10s %-8g %-6s %s\n", b.name.c_str(), w.c_str(),
                b.r_predicted, b.finite_polyhedral_type ? "yes" : "no-fpt",
                b.note.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for restriction scaling experiments"};
  app.require_subcommand(1);

  CliOptions opts;
  app.add_option("--config", opts.config_path, "experiment config (JSON)");
  app.add_option("--out", opts.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", opts.seed, "seed override");
  app.add_option("--threads", opts.threads, "worker count or 'auto'");
  app.add_option("--budget", opts.budget,
                 "budget preset: small | default | large");

  const std::vector<std::string> kinds{
      "volume-growth", "knapp",          "polytope-norm",  "decay",
      "scan",          "hyperbola-demo", "triangle-report"};
  // global options may appear after the subcommand name
  for (const auto& k : kinds)
    app.add_subcommand(k, "run the " + k + " experiment")->fallthrough();
  app.add_subcommand("list-builtins", "print the builtin surface table")
      ->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    opts.seed_set = seed_opt->count() > 0;
    if (opts.threads != "auto")
      rlab::set_thread_count(
          static_cast<unsigned>(std::stoul(opts.threads)));

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "list-builtins") {
      list_builtins();
      return 0;
    }
    if (opts.config_path.empty())
      throw rlab::ValidationError("--config is required for experiments");
    return run_kind(sub, opts);
  } catch (const rlab::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const rlab::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const rlab::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const rlab::ConstructionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
