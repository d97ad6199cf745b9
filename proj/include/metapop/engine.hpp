#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "metapop/lattice.hpp"
#include "metapop/models.hpp"
#include "metapop/rng.hpp"

namespace metapop {

struct SimOptions {
  bool record_site_counts = false;
  // Auxiliary process used by the survival-block estimator: all death events
  // are suppressed inside the window.
  bool suppress_deaths = false;
  // Rebuild all site rates every this many events and cross-check the
  // incrementally maintained total (1e-9 relative tolerance).
  std::uint64_t resync_interval = std::uint64_t{1} << 16;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::int64_t> totals;
  std::vector<std::vector<std::int32_t>> site_counts;  // empty unless requested
  Configuration final_state;
  std::optional<double> extinction_time;
  std::uint64_t events = 0;
  std::uint64_t cap_hits = 0;

  bool operator==(const Trajectory&) const = default;
};

// Exact event-driven sampler for one process. Owns its state; one instance is
// strictly single-threaded. Site rates are kept in a binary sum tree with a
// periodic full rebuild to bound floating-point drift.
class Simulator {
 public:
  Simulator(ModelSpec model, const LatticeWindow& window, Configuration init,
            RngStream rng, SimOptions options = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  bool absorbed() const;
  double time() const;
  // Time the next event will fire (infinity when absorbed).
  double next_event_time() const;
  // Applies the pending event. Empty when absorbed.
  std::optional<Event> step();
  // Applies every event with time <= t; afterwards the state is the
  // configuration at time t.
  void advance_past(double t);

  const Configuration& config() const;
  std::int64_t total_population() const;
  std::optional<double> extinction_time() const;
  std::uint64_t event_count() const;
  std::uint64_t cap_hits() const;
  double total_rate() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Runs one seeded replica to `horizon`, recording totals (and optionally full
// snapshots) at the strictly increasing grid times. Deterministic in `seed`.
Trajectory simulate(const ModelSpec& model, const LatticeWindow& window,
                    const Configuration& init, double horizon,
                    const std::vector<double>& grid, RngSeed seed,
                    SimOptions options = {});

struct OrderViolation {
  double time = 0.0;
  std::int32_t site = 0;
  std::int32_t low_count = 0;
  std::int32_t high_count = 0;
};

struct CoupleReport {
  double horizon = 0.0;
  std::uint64_t violations = 0;
  std::optional<OrderViolation> first_violation;
  std::uint64_t clock_rings = 0;
  std::uint64_t applied_events = 0;
  std::vector<std::int32_t> final_low;
  std::vector<std::int32_t> final_high;
};

struct CoupleOptions {
  // Run a pair that fails the admissibility test anyway (falsifiability
  // harness); the marginal laws stay exact, only the order guarantee is void.
  bool allow_inadmissible = false;
  bool stop_at_first_violation = false;
};

// Empty when the pair admits a monotone coupling under the shared-mark scheme;
// otherwise an explanation. Admissible: same variant with equal structural
// parameters (lambda, N, N_A, M, sim_cap) and low-side death multipliers >=
// high-side ones; or Model I (low) against Model IV (high) sharing phi,
// lambda, N. Windows must share dimensions; boundaries must be equal, or the
// low side ZeroOutside against Periodic/FrozenFullOutside on the high side.
std::optional<std::string> coupling_obstruction(const ModelSpec& low,
                                                const ModelSpec& high,
                                                const LatticeWindow& window_low,
                                                const LatticeWindow& window_high);

// Uniformized thinning of two ordered processes under one stream of per-site
// Poisson marks. Band order per ring: birth, death, migrations by
// (neighbor slot, flock sub-band), then frozen-exterior immigrations by
// (slot, flock sub-band). Each marginal, viewed alone, has the exact law of
// its model. Reports every pointwise order violation at event times.
CoupleReport simulate_coupled(const ModelSpec& low, const ModelSpec& high,
                              const LatticeWindow& window_low,
                              const LatticeWindow& window_high,
                              const Configuration& init_low,
                              const Configuration& init_high, double horizon,
                              RngSeed seed, CoupleOptions options = {});

inline CoupleReport simulate_coupled(const ModelSpec& low, const ModelSpec& high,
                                     const LatticeWindow& window,
                                     const Configuration& init_low,
                                     const Configuration& init_high, double horizon,
                                     RngSeed seed, CoupleOptions options = {}) {
  return simulate_coupled(low, high, window, window, init_low, init_high, horizon,
                          seed, options);
}

}  // namespace metapop
