#include "rlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rlab/builtins.hpp"

namespace rlab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw ValidationError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ValidationError("rename failed for: " + path);
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : columns_(header.size()) {
  if (header.empty()) throw ValidationError("csv: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ValidationError("csv: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

std::string CsvWriter::str() const { return body_; }

void CsvWriter::save(const std::string& path) const {
  write_text_atomic(path, body_);
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw ValidationError("config: unknown key '" + key + "' in " + where);
  }
}

SurfaceConfig parse_surface_json(const json& j) {
  if (!j.is_object())
    throw ValidationError("config: 'surface' must be an object");
  reject_unknown_keys(j, "surface",
                      {"builtin", "weights", "monomials", "remainder",
                       "offset", "halfwidth", "rho0", "rho1"});
  SurfaceConfig cfg;
  if (j.contains("builtin")) cfg.builtin = j.at("builtin").get<std::string>();
  if (j.contains("weights"))
    cfg.weights = j.at("weights").get<std::vector<long long>>();
  if (j.contains("monomials")) {
    for (const auto& m : j.at("monomials")) {
      reject_unknown_keys(m, "surface.monomials[]", {"alpha", "coeff"});
      Monomial mono;
      mono.alpha = m.at("alpha").get<std::vector<int>>();
      mono.coeff = m.at("coeff").get<double>();
      cfg.monomials.push_back(std::move(mono));
    }
  }
  if (j.contains("remainder"))
    cfg.remainder = j.at("remainder").get<std::string>();
  if (j.contains("offset")) cfg.offset = j.at("offset").get<double>();
  if (j.contains("halfwidth")) cfg.halfwidth = j.at("halfwidth").get<double>();
  if (j.contains("rho0")) cfg.rho0 = j.at("rho0").get<double>();
  if (j.contains("rho1")) cfg.rho1 = j.at("rho1").get<double>();
  if (cfg.builtin.empty()) {
    if (cfg.weights.empty())
      throw ValidationError("config: surface needs 'builtin' or 'weights'");
    if (cfg.monomials.empty())
      throw ValidationError("config: surface needs 'monomials' with 'weights'");
  }
  return cfg;
}

GridSpec parse_grid(const json& j, const std::string& where) {
  reject_unknown_keys(j, where, {"lo", "hi", "points"});
  GridSpec g;
  g.lo = j.at("lo").get<double>();
  g.hi = j.at("hi").get<double>();
  g.points = j.at("points").get<int>();
  g.set = true;
  if (g.points < 4)
    throw ValidationError("config: " + where + " needs at least 4 points");
  if (!(g.lo > 0.0) || !(g.hi > g.lo))
    throw ValidationError("config: " + where + " needs 0 < lo < hi");
  return g;
}

}  // namespace

SurfaceConfig parse_surface_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_surface_json(j);
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be object");
  reject_unknown_keys(j, "config",
                      {"kind", "surface", "delta_grid", "lambda_grid", "p",
                       "margin", "mc_samples", "seed", "steps", "max_panels",
                       "c2", "norm_lambda"});
  ExperimentConfig cfg;
  if (!j.contains("kind"))
    throw ValidationError("config: missing required key 'kind'");
  cfg.kind = j.at("kind").get<std::string>();
  if (j.contains("surface")) cfg.surface = parse_surface_json(j.at("surface"));
  if (j.contains("delta_grid"))
    cfg.delta_grid = parse_grid(j.at("delta_grid"), "delta_grid");
  if (j.contains("lambda_grid"))
    cfg.lambda_grid = parse_grid(j.at("lambda_grid"), "lambda_grid");
  if (j.contains("p")) cfg.p = j.at("p").get<double>();
  if (j.contains("margin")) cfg.margin = j.at("margin").get<double>();
  if (j.contains("mc_samples"))
    cfg.mc_samples = j.at("mc_samples").get<long long>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("steps")) cfg.steps = j.at("steps").get<int>();
  if (j.contains("max_panels"))
    cfg.max_panels = j.at("max_panels").get<long long>();
  if (j.contains("c2")) cfg.c2 = j.at("c2").get<double>();
  if (j.contains("norm_lambda"))
    cfg.norm_lambda = j.at("norm_lambda").get<double>();
  if (cfg.mc_samples <= 0 || cfg.max_panels <= 0 || !(cfg.margin > 0.0))
    throw ValidationError("config: caps and margins must be positive");
  cfg.canonical = j.dump();  // nlohmann objects serialize with sorted keys
  return cfg;
}

SurfacePatch make_surface(const SurfaceConfig& cfg) {
  if (!cfg.builtin.empty())
    return make_builtin_surface(cfg.builtin, cfg.halfwidth, cfg.rho0, cfg.rho1,
                                cfg.offset, cfg.remainder);
  WeightSystem w = make_weights(cfg.weights);
  MixedHomogeneousPoly q(cfg.monomials, w);
  Remainder r = builtin_remainder(cfg.remainder, w);
  return SurfacePatch(std::move(q), std::move(r), cfg.offset, cfg.halfwidth,
                      CutoffProfile{cfg.rho0, cfg.rho1});
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const std::string& path, const Manifest& m) {
  json j;
  j["version"] = m.version;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["wall_time_s"] = m.wall_time_s;
  j["outputs"] = m.outputs;
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace rlab
