#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "metapop/lattice.hpp"
#include "metapop/models.hpp"

namespace metapop {

struct WindowSpec {
  int dimension = 2;
  std::vector<int> sides;
  Boundary boundary = Boundary::Periodic;

  LatticeWindow build() const { return LatticeWindow(dimension, sides, boundary); }
};

struct SimulateParams {
  double horizon = 0.0;
  std::vector<double> grid;  // defaults to {0, horizon}
  bool record_sites = false;
};

struct SurvivalParams {
  double horizon = 0.0;
};

struct SweepParams {
  std::string axis;  // phi | phi_A | N
  std::vector<double> values;
  double horizon = 0.0;
};

struct BisectParams {
  std::string axis;
  double lo = 0.0, hi = 0.0;
  double theta = 0.05;
  double tolerance = 0.05;
  int initial_replicas = 200;
  int max_doublings = 6;
  double horizon = 0.0;
};

struct CheckOrderParams {
  ModelSpec high;             // the candidate stochastically-larger model
  std::string method = "general";  // general | single | cross
  int k_bound = 0;
};

struct RuinParams {
  long long r1 = 0, r2 = 1, j = 0;
  double p = 0.5;
};

struct BlocksParams {
  std::string kind;  // survival | extinction
  int L = 1;
  double T = 1.0;
  bool phi_zero_inside = false;
  std::optional<std::array<int, 2>> start;
  std::vector<double> t_sweep;  // survival kind: evaluate at several horizons
};

struct PercolationParams {
  int width = 100, height = 100;
  double p = 0.5;
  int radius = 0;
  int trials = 100;
};

struct EdgeEventParams {
  double cutoff = 200.0;
};

struct MeanOccupancyParams {
  double horizon = 0.0;
  std::vector<double> grid;
};

using ExperimentParams =
    std::variant<SimulateParams, SurvivalParams, SweepParams, BisectParams,
                 CheckOrderParams, RuinParams, BlocksParams, PercolationParams,
                 EdgeEventParams, MeanOccupancyParams>;

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  int replicas = 100;
  int threads = 1;
  std::string out;  // output path prefix; empty = no files
  std::optional<ModelSpec> model;
  std::optional<WindowSpec> window;
  std::optional<InitSpec> init;
  ExperimentParams params;

  // Canonical echo of the fully resolved configuration (embedded in outputs).
  nlohmann::json resolved() const;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // every validation failure, not just the first

  bool ok() const { return errors.empty() && config.has_value(); }
};

// Parses JSON (comments allowed) in strict mode: unknown keys anywhere are
// rejected, and all numeric fields are validated against module invariants
// before any work starts.
ParseResult parse_config_text(const std::string& text);
ParseResult parse_config_file(const std::string& path);

nlohmann::json model_to_json(const ModelSpec& m);

}  // namespace metapop
