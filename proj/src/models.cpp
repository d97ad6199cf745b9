#include "metapop/models.hpp"

#include <stdexcept>

namespace metapop {

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::ModelI: return "model1";
    case ModelVariant::ModelII: return "model2";
    case ModelVariant::ModelIII: return "model3";
    case ModelVariant::ModelIV: return "model4";
  }
  return "?";
}

ModelSpec ModelSpec::model1(double phi, double lambda, int N) {
  ModelSpec m;
  m.variant = ModelVariant::ModelI;
  m.phi = phi;
  m.lambda = lambda;
  m.capacity = N;
  return m.validated();
}

ModelSpec ModelSpec::model2(double phi, double phi_allee, double lambda, int N,
                            int N_A) {
  ModelSpec m;
  m.variant = ModelVariant::ModelII;
  m.phi = phi;
  m.phi_allee = phi_allee;
  m.lambda = lambda;
  m.capacity = N;
  m.allee_threshold = N_A;
  return m.validated();
}

ModelSpec ModelSpec::model3(double phi, double phi_allee, double lambda, int N,
                            int N_A, int M) {
  ModelSpec m;
  m.variant = ModelVariant::ModelIII;
  m.phi = phi;
  m.phi_allee = phi_allee;
  m.lambda = lambda;
  m.capacity = N;
  m.allee_threshold = N_A;
  m.flock_max = M;
  return m.validated();
}

ModelSpec ModelSpec::model4(double phi, double phi_over, double lambda, int N,
                            int sim_cap) {
  ModelSpec m;
  m.variant = ModelVariant::ModelIV;
  m.phi = phi;
  m.phi_over = phi_over;
  m.lambda = lambda;
  m.capacity = N;
  m.sim_cap = sim_cap;
  return m.validated();
}

ModelSpec ModelSpec::validated() const {
  ModelSpec m = *this;
  if (!(m.phi > 0.0)) throw std::invalid_argument("model: phi must be > 0");
  if (!(m.lambda > 0.0)) throw std::invalid_argument("model: lambda must be > 0");
  if (m.capacity < 1) throw std::invalid_argument("model: N must be >= 1");
  if (m.uses_allee()) {
    if (m.allee_threshold < 0 || m.allee_threshold > m.capacity)
      throw std::invalid_argument("model: need 0 <= N_A <= N");
    if (!(m.phi_allee > 0.0))
      throw std::invalid_argument("model: phi_A must be > 0");
    if (!m.relaxed_allee) {
      if (m.phi_allee < 1.0)
        throw std::invalid_argument(
            "model: phi_A >= 1 required (set relaxed to study the mixed regime)");
      if (m.phi_allee < m.phi)
        throw std::invalid_argument(
            "model: phi_A >= phi required (set relaxed to study the mixed regime)");
    }
  }
  if (m.variant == ModelVariant::ModelIII) {
    if (m.flock_max < 1 || m.flock_max > m.capacity)
      throw std::invalid_argument("model: need 1 <= M <= N");
  }
  if (m.variant == ModelVariant::ModelIV) {
    if (!(m.phi_over > 0.0))
      throw std::invalid_argument("model: phi_tilde must be > 0");
    if (m.sim_cap == 0) m.sim_cap = 64 * m.capacity;
    if (m.sim_cap <= m.capacity)
      throw std::invalid_argument("model: sim_cap must exceed N");
  }
  return m;
}

namespace {

void check_count(const ModelSpec& m, int n) {
  if (n < 0 || n > m.max_count())
    throw std::invalid_argument("model: occupancy out of range");
}

}  // namespace

double birth_rate(const ModelSpec& m, int n) {
  check_count(m, n);
  if (m.variant == ModelVariant::ModelIV) {
    // clamp: births are suppressed at the simulation cap
    return n >= m.sim_cap ? 0.0 : static_cast<double>(n);
  }
  return n < m.capacity ? static_cast<double>(n) : 0.0;
}

double death_rate(const ModelSpec& m, int n) {
  check_count(m, n);
  switch (m.variant) {
    case ModelVariant::ModelI:
      return m.phi * n;
    case ModelVariant::ModelII:
    case ModelVariant::ModelIII:
      return n * (n <= m.allee_threshold ? m.phi_allee : m.phi);
    case ModelVariant::ModelIV:
      return n * (n <= m.capacity ? m.phi : m.phi_over);
  }
  return 0.0;
}

int max_flock(const ModelSpec& m, int n_from, int n_to) {
  switch (m.variant) {
    case ModelVariant::ModelI:
    case ModelVariant::ModelII:
      return (n_from == m.capacity && n_to < m.capacity) ? 1 : 0;
    case ModelVariant::ModelIII: {
      int k = m.flock_max;
      if (n_from - k < m.capacity - m.flock_max)
        k = n_from - (m.capacity - m.flock_max);
      if (n_to + k > m.capacity) k = m.capacity - n_to;
      return k > 0 ? k : 0;
    }
    case ModelVariant::ModelIV:
      return (n_from >= m.capacity && n_to < m.capacity) ? 1 : 0;
  }
  return 0;
}

double migration_rate(const ModelSpec& m, int dimension, int n_from, int n_to,
                      int k) {
  if (k <= 0) throw std::invalid_argument("model: flock size must be >= 1");
  check_count(m, n_from);
  check_count(m, n_to);
  if (dimension < 1) throw std::invalid_argument("model: dimension must be >= 1");
  return k <= max_flock(m, n_from, n_to) ? m.lambda / (2.0 * dimension) : 0.0;
}

int frozen_exterior_count(const ModelSpec& m, const LatticeWindow& window) {
  return window.boundary() == Boundary::FrozenFullOutside ? m.capacity : 0;
}

std::vector<std::pair<Event, double>> enabled_events(const ModelSpec& m,
                                                     const LatticeWindow& window,
                                                     const Configuration& config,
                                                     std::int32_t site) {
  if (site < 0 || site >= window.site_count())
    throw std::invalid_argument("enabled_events: invalid site");
  std::vector<std::pair<Event, double>> events;
  const int n = config.counts[static_cast<std::size_t>(site)];
  const double per_slot = m.lambda / (2.0 * window.dimension());
  if (const double b = birth_rate(m, n); b > 0.0)
    events.push_back({{EventType::Birth, site, site, 1}, b});
  if (const double d = death_rate(m, n); d > 0.0)
    events.push_back({{EventType::Death, site, site, 1}, d});
  const int frozen = frozen_exterior_count(m, window);
  for (int slot = 0; slot < window.degree(); ++slot) {
    const std::int32_t target = window.neighbor(site, slot);
    const int nt = target == LatticeWindow::kExterior
                       ? frozen
                       : config.counts[static_cast<std::size_t>(target)];
    const int kmax = max_flock(m, n, nt);
    for (int k = 1; k <= kmax; ++k)
      events.push_back({{EventType::Migration, site, target, k}, per_slot});
  }
  return events;
}

std::vector<std::pair<Event, double>> boundary_immigration_events(
    const ModelSpec& m, const LatticeWindow& window, const Configuration& config,
    std::int32_t site) {
  std::vector<std::pair<Event, double>> events;
  if (window.boundary() != Boundary::FrozenFullOutside) return events;
  const int n = config.counts[static_cast<std::size_t>(site)];
  const double per_slot = m.lambda / (2.0 * window.dimension());
  for (int slot = 0; slot < window.degree(); ++slot) {
    if (window.neighbor(site, slot) != LatticeWindow::kExterior) continue;
    const int kmax = max_flock(m, m.capacity, n);
    for (int k = 1; k <= kmax; ++k)
      events.push_back(
          {{EventType::Migration, LatticeWindow::kExterior, site, k}, per_slot});
  }
  return events;
}

DominatorSpec dominator(const ModelSpec& m) {
  if (m.variant != ModelVariant::ModelII)
    throw std::invalid_argument("dominator: defined for Model II only");
  DominatorSpec d;
  const int N = m.capacity;
  d.birth.resize(static_cast<std::size_t>(N) + 1);
  d.death.resize(static_cast<std::size_t>(N) + 1);
  for (int l = 0; l <= N; ++l) {
    d.birth[static_cast<std::size_t>(l)] = l <= N - 1 ? l + m.lambda : 0.0;
    d.death[static_cast<std::size_t>(l)] =
        l * (l <= m.allee_threshold ? m.phi_allee : m.phi);
  }
  return d;
}

}  // namespace metapop
