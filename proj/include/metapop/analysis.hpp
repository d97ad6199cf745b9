#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metapop/engine.hpp"
#include "metapop/stats.hpp"

namespace metapop {

// Nearest-neighbor random walk on {r1..r2} with up-probability p; asks for
// the chance of reaching r2 before r1 from `start`.
struct RuinProblem {
  long long r1 = 0;
  long long r2 = 1;
  long long start = 0;
  double up_p = 0.5;
};

// Closed-form hitting probability; (start-r1)/(r2-r1) at p = 1/2, exact 0/1
// at the endpoints.
double ruin_probability(const RuinProblem& problem);

struct SurvivalEstimate {
  int replicas = 0;
  double horizon = 0.0;
  int survivals = 0;
  double estimate = 0.0;
  Interval wilson;
  std::vector<double> extinction_times;  // sorted, one per extinct replica
  // fraction of extinctions landing in the final 20% of the horizon; the
  // estimate is flagged when it reaches 1% (horizon likely too short)
  double late_extinction_fraction = 0.0;
  bool horizon_flag = false;

  double extinction_quantile(double q) const {
    return quantile_sorted(extinction_times, q);
  }
};

// Fraction of independent seeded replicas still populated at `horizon`.
SurvivalEstimate estimate_survival(const ModelSpec& model, const LatticeWindow& window,
                                   const InitSpec& init, double horizon, int replicas,
                                   RngSeed seed, int threads = 1);

enum class ParamAxis { Phi, PhiAllee, CapacityN };

std::string to_string(ParamAxis axis);

// Applies the axis value to a copy of the base model.
ModelSpec with_axis_value(const ModelSpec& base, ParamAxis axis, double value);

struct BisectDecision {
  double value = 0.0;
  int replicas_used = 0;
  double estimate = 0.0;
  Interval wilson;
  bool survives = false;  // Wilson interval entirely above the threshold
};

struct BisectOptions {
  double survival_threshold = 0.05;  // theta
  double tolerance = 0.05;           // exit bracket width
  int initial_replicas = 200;
  int max_doublings = 6;  // replica budget per decision: 2^6 x initial
  int threads = 1;
};

struct BisectionResult {
  ParamAxis axis = ParamAxis::Phi;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  double critical = 0.0;  // bracket midpoint on exit
  bool budget_exhausted = false;
  std::vector<BisectDecision> log;
};

// Bisects the survival-vs-threshold crossing of one parameter axis. Endpoint
// estimates must separate across the threshold; each midpoint decision doubles
// replicas until its Wilson interval excludes the threshold or the budget is
// spent.
BisectionResult bisect_critical(const ModelSpec& base, ParamAxis axis, double lo,
                                double hi, const LatticeWindow& window,
                                const InitSpec& init, double horizon, RngSeed seed,
                                BisectOptions options = {});

struct OccupancySeries {
  std::vector<double> times;
  std::vector<double> mean;  // spatial mean occupancy averaged over replicas
  std::vector<double> se;    // standard error across replicas
};

OccupancySeries mean_occupancy(const ModelSpec& model, const LatticeWindow& window,
                               const InitSpec& init, double horizon,
                               const std::vector<double>& grid, int replicas,
                               RngSeed seed, int threads = 1);

// Single-site birth-death chain with `immortals` never-dying individuals:
// birth rate immortals + z, death rate phi_over * (immortals + z) for z > 0.
// Returns the mean of z over replicas at the grid times.
OccupancySeries immortal_dominator_mean(int immortals, double phi_over, int start,
                                        double horizon, const std::vector<double>& grid,
                                        int replicas, RngSeed seed, int threads = 1);

}  // namespace metapop
