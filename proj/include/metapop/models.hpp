#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metapop/lattice.hpp"

namespace metapop {

// The four lattice metapopulation models.
//   ModelI   - capacity N, migration of one individual from a full site
//   ModelII  - Model I plus an elevated death multiplier at counts <= N_A
//   ModelIII - Model II plus migration of flocks of up to M individuals
//   ModelIV  - no capacity; death multiplier switches above N; migration from
//              sites holding >= N individuals
enum class ModelVariant { ModelI, ModelII, ModelIII, ModelIV };

std::string to_string(ModelVariant v);

struct ModelSpec {
  ModelVariant variant = ModelVariant::ModelI;
  double phi = 1.0;         // per-capita death multiplier
  double lambda = 1.0;      // migration rate per directed neighbor pair (times 2d)
  int capacity = 1;         // N: local capacity (I-III) / regulation threshold (IV)
  double phi_allee = 1.0;   // phi_A: death multiplier at counts <= allee_threshold
  int allee_threshold = 0;  // N_A (Models II/III)
  int flock_max = 1;        // M: largest migrating flock (Model III)
  double phi_over = 1.0;    // phi~: death multiplier at counts > N (Model IV)
  int sim_cap = 0;          // Model IV occupancy clamp; 0 = default 64*N
  bool relaxed_allee = false;  // permit phi_A < 1 or phi_A < phi (mixed regime)

  static ModelSpec model1(double phi, double lambda, int N);
  static ModelSpec model2(double phi, double phi_allee, double lambda, int N, int N_A);
  static ModelSpec model3(double phi, double phi_allee, double lambda, int N, int N_A,
                          int M);
  static ModelSpec model4(double phi, double phi_over, double lambda, int N,
                          int sim_cap = 0);

  // Throws std::invalid_argument naming the violated rule; returns a copy with
  // defaults resolved (Model IV sim_cap).
  ModelSpec validated() const;

  bool uses_allee() const {
    return variant == ModelVariant::ModelII || variant == ModelVariant::ModelIII;
  }
  // Largest representable occupancy: N for Models I-III, sim_cap for Model IV.
  int max_count() const {
    return variant == ModelVariant::ModelIV ? sim_cap : capacity;
  }
  // Largest flock size any migration can move.
  int flock_limit() const {
    return variant == ModelVariant::ModelIII ? flock_max : 1;
  }
};

// Single-site transition rates. `n` must lie in [0, max_count()].
double birth_rate(const ModelSpec& m, int n);
double death_rate(const ModelSpec& m, int n);

// Rate of a migration of k individuals across one directed neighbor pair,
// already divided by 2d. Zero when the jump is inadmissible; k <= 0 is an
// error.
double migration_rate(const ModelSpec& m, int dimension, int n_from, int n_to, int k);

// Largest admissible flock size from a site holding n_from toward one holding
// n_to (0 if no migration is possible). Admissible sizes are exactly
// {1..max_flock}; each moves at rate lambda/(2d).
int max_flock(const ModelSpec& m, int n_from, int n_to);

// Occupancy an exterior pseudo-site holds for this window/model pair.
int frozen_exterior_count(const ModelSpec& m, const LatticeWindow& window);

enum class EventType { Birth, Death, Migration };

// One transition. For Migration, `site` is the source and `target` the
// destination; LatticeWindow::kExterior as target marks an emigration through
// the boundary (pure loss of `flock` individuals), and as source an
// immigration from a frozen-full exterior into `target`.
struct Event {
  EventType type = EventType::Birth;
  std::int32_t site = 0;
  std::int32_t target = 0;
  int flock = 1;
};

// All strictly-positive-rate events whose source is `site`: one birth, one
// death, and one migration per (neighbor slot, admissible flock size).
// Exterior neighbor slots participate with their frozen occupancy.
std::vector<std::pair<Event, double>> enabled_events(const ModelSpec& m,
                                                     const LatticeWindow& window,
                                                     const Configuration& config,
                                                     std::int32_t site);

// Immigration events from frozen-full exterior pseudo-sites into `site`
// (empty unless the window is FrozenFullOutside and `site` touches the
// boundary).
std::vector<std::pair<Event, double>> boundary_immigration_events(
    const ModelSpec& m, const LatticeWindow& window, const Configuration& config,
    std::int32_t site);

// Single-site birth-death process dominating a Model II site whose
// immigration is replaced by the largest possible inflow: birth(l) = l+lambda
// below N, death as Model II. States 0..N.
struct DominatorSpec {
  std::vector<double> birth;
  std::vector<double> death;
  int states() const { return static_cast<int>(birth.size()); }
};

DominatorSpec dominator(const ModelSpec& m);  // Model II only

}  // namespace metapop
