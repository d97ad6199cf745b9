#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "metapop/engine.hpp"
#include "metapop/stats.hpp"

namespace metapop {

// Space-time box geometry used by the block estimators (d = 2).
//   Survival:   sites strictly inside (-4L,4L)^2, absorbing exterior, horizon T;
//               the monitored squares are I = [-L,L]^2 shifted by -+2L e1.
//   Extinction: sites strictly inside (-2L,2L)^2, frozen-full exterior,
//               horizon 2T; the monitored square is [-L,L]^2 during [T,2T].
enum class BlockKind { Survival, Extinction };

struct BlockSpec {
  BlockKind kind = BlockKind::Survival;
  int half_width = 1;  // L
  double period = 1.0;  // T
};

struct BlockEstimate {
  BlockSpec block;
  int replicas = 0;
  int hits = 0;  // wet replicas (survival flavor: both side squares occupied at
                 // T; extinction flavor: inner square empty throughout [T,2T])
  double frequency = 0.0;
  Interval wilson;
};

struct WetBlockOptions {
  // Auxiliary proof process: suppress all deaths inside the box.
  bool suppress_deaths_inside = false;
  // Starting cell inside [-L,L]^2 in centered coordinates; default corner (L,L).
  std::optional<std::array<int, 2>> start;
  int start_count = 1;
  int threads = 1;
};

// Frequency of "wet": one seeded colony in I spreads to both shifted squares
// by time T on the absorbing window. Models I and III.
BlockEstimate estimate_wet_probability(const ModelSpec& model, int L, double T,
                                       int replicas, RngSeed seed,
                                       WetBlockOptions options = {});

// Same, evaluated at several horizons with one trajectory per replica (the
// sweep shares randomness across the grid, so verdicts are comparable
// pointwise).
std::vector<BlockEstimate> estimate_wet_probability_sweep(
    const ModelSpec& model, int L, const std::vector<double>& horizons, int replicas,
    RngSeed seed, WetBlockOptions options = {});

// Frequency of the extinction-block event for Model II: starting all-full with
// a frozen-full exterior, the inner square holds no individuals at any time in
// [T, 2T].
BlockEstimate estimate_dry_probability(const ModelSpec& model, int L, double T,
                                       int replicas, RngSeed seed, int threads = 1);

struct DominatorHit {
  double exact = 0.0;  // transient solve of the (N+1)-state chain
  double mc_estimate = 0.0;
  Interval wilson;
  int replicas = 0;
};

// P(dominating single-site chain started at N is <= threshold at time S),
// estimated by Monte Carlo and exactly. Model II.
DominatorHit estimate_dominator_hit(const ModelSpec& model, double S, int threshold,
                                    int replicas, RngSeed seed, int threads = 1);

struct PercolationResult {
  bool percolates = false;
  int max_height = 0;
};

// Oriented site percolation on {(m,n): m+n even}, edges (m,n)->(m+-1,n+1),
// m in [0,width), n in [0,height]. Sites open i.i.d. with probability p; for
// dependence_radius r > 0 all sites in one (r+1)x(r+1) block share a single
// uniform. Openness is a pure function of (seed, block), so runs with the
// same seed and increasing p have nested open sets.
PercolationResult simulate_oriented_percolation(int width, int height, double p,
                                                int dependence_radius,
                                                std::uint64_t seed);

// Reached-site mask (row-major, (height+1) rows of `width`), for exact
// monotonicity checks.
std::vector<std::uint8_t> oriented_percolation_reached(int width, int height,
                                                       double p,
                                                       int dependence_radius,
                                                       std::uint64_t seed);

struct EdgeEventEstimate {
  int replicas = 0;
  int successes = 0;
  int failures = 0;
  int undecided = 0;  // hit the time cutoff; reported, never counted as success
  double frequency = 0.0;  // successes / replicas
  Interval wilson;
};

// Probability that a colony seeded with N-M individuals at a site sends a
// flock establishing N-M individuals on a fixed neighbor before its lineage
// dies, in the modification where every migration into the source or out of
// the 3x3 patch is a pure loss. Model III with N-M > N_A and M > N_A.
EdgeEventEstimate estimate_edge_event(const ModelSpec& model, int replicas,
                                      RngSeed seed, double time_cutoff = 200.0,
                                      int threads = 1);

struct VisitTail {
  double mc_estimate = 0.0;
  Interval wilson;
  double exact = 0.0;          // ruin-formula power
  double analytic_lower = 0.0; // (1 - phi^(N-M-N_A))^visits
  int replicas = 0;
};

// P(the embedded source-site walk returns to N-M+1 at least `visits` times
// before hitting N_A, starting at N-M), by Monte Carlo of the skeleton walk
// with up-probability 1/(1+phi), against the closed form.
VisitTail estimate_visit_count_tail(int capacity, int flock, int allee_threshold,
                                    double phi, int visits, int replicas,
                                    RngSeed seed);

}  // namespace metapop
