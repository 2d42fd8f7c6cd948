#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlab/surface.hpp"

namespace rlab {

// Locale-independent shortest round-trip formatting (%.17g).
std::string format_double(double v);

// Write-temp-then-rename so readers never observe partial files.
void write_text_atomic(const std::string& path, const std::string& content);

// Minimal CSV accumulator; all numbers go through format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& values);
  std::string str() const;
  void save(const std::string& path) const;

 private:
  std::size_t columns_;
  std::string body_;
};

struct SurfaceConfig {
  std::string builtin;  // builtin name, or empty for an explicit Q
  std::vector<long long> weights;
  std::vector<Monomial> monomials;
  std::string remainder = "none";
  double offset = 0.0;
  double halfwidth = 1.0;
  double rho0 = 0.5;
  double rho1 = 0.9;
};

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
  bool set = false;
};

struct ExperimentConfig {
  std::string kind;  // volume-growth | knapp | polytope-norm | decay | scan |
                     // hyperbola-demo | triangle-report
  SurfaceConfig surface;
  GridSpec delta_grid;
  GridSpec lambda_grid;
  double p = 4.0 / 3.0;
  double margin = 1.1;
  long long mc_samples = 1000000;
  std::uint64_t seed = 1;
  int steps = 4;
  long long max_panels = 1LL << 23;
  double c2 = 16.0;
  double norm_lambda = 64.0;  // truncation radius for polytope-norm
  std::string canonical;      // canonical serialized form, for hashing
};

// Strict parsers: unknown keys are rejected with the offending key name.
SurfaceConfig parse_surface_config_text(const std::string& text);
ExperimentConfig parse_experiment_config_file(const std::string& path);

SurfacePatch make_surface(const SurfaceConfig& cfg);

// FNV-1a 64-bit hex digest.
std::string content_hash(const std::string& text);

struct Manifest {
  std::string version = "0.1.0";
  std::string config_hash;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;  // file names relative to the out dir
};

void write_manifest(const std::string& path, const Manifest& m);

}  // namespace rlab
