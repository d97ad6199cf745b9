#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "metapop/engine.hpp"

namespace metapop {

namespace {

double death_bound(const ModelSpec& m) {
  double mult = m.phi;
  if (m.uses_allee()) mult = std::max(mult, m.phi_allee);
  if (m.variant == ModelVariant::ModelIV) mult = std::max(mult, m.phi_over);
  return mult * m.max_count();
}

struct Marginal {
  const ModelSpec* model;
  const LatticeWindow* window;
  std::vector<std::int32_t> counts;
  int frozen;        // occupancy of exterior pseudo-sites
  double lam_slot;   // lambda / 2d
  std::int64_t total = 0;

  int count(std::int32_t i) const { return counts[static_cast<std::size_t>(i)]; }

  void bump(std::int32_t i, int delta) {
    auto& c = counts[static_cast<std::size_t>(i)];
    c += delta;
    total += delta;
    if (c < 0 || c > model->max_count())
      throw std::logic_error("coupling: occupancy left the admissible range");
  }
};

}  // namespace

std::optional<std::string> coupling_obstruction(const ModelSpec& low_in,
                                                const ModelSpec& high_in,
                                                const LatticeWindow& window_low,
                                                const LatticeWindow& window_high) {
  const ModelSpec low = low_in.validated();
  const ModelSpec high = high_in.validated();
  if (window_low.dimension() != window_high.dimension() ||
      window_low.sides() != window_high.sides())
    return "windows must share dimensions and side lengths";
  if (window_low.boundary() != window_high.boundary() &&
      !(window_low.boundary() == Boundary::ZeroOutside &&
        (window_high.boundary() == Boundary::Periodic ||
         window_high.boundary() == Boundary::FrozenFullOutside)))
    return "boundaries must match, or the low side must be ZeroOutside";

  if (low.variant == ModelVariant::ModelI && high.variant == ModelVariant::ModelIV) {
    if (low.phi != high.phi) return "Model I below Model IV requires equal phi";
    if (low.lambda != high.lambda)
      return "Model I below Model IV requires equal lambda";
    if (low.capacity != high.capacity)
      return "Model I below Model IV requires equal N";
    return std::nullopt;
  }
  if (low.variant != high.variant)
    return "only Model I below Model IV is supported across variants";
  if (low.lambda != high.lambda)
    return "no stochastic order between systems with different lambda";
  if (low.capacity != high.capacity)
    return "no stochastic order between systems with different N";
  if (low.uses_allee()) {
    if (low.allee_threshold != high.allee_threshold)
      return "ordered pairs must share N_A";
    if (low.phi_allee < high.phi_allee)
      return "low process must have phi_A >= the high process";
  }
  if (low.variant == ModelVariant::ModelIII && low.flock_max != high.flock_max)
    return "ordered pairs must share M";
  if (low.variant == ModelVariant::ModelIV) {
    if (low.sim_cap != high.sim_cap) return "ordered pairs must share sim_cap";
    if (low.phi_over < high.phi_over)
      return "low process must have phi_tilde >= the high process";
  }
  if (low.phi < high.phi) return "low process must have phi >= the high process";
  return std::nullopt;
}

// Uniformized shared-mark coupling. Every site carries a fixed-rate clock
// whose marks fall into static bands: birth, death, one emigration band per
// neighbor slot (k_band flock sub-bands each), and one immigration band per
// frozen exterior slot. A marginal applies a band's transition only where its
// own rate covers the mark. Flock sub-bands are matched top-anchored: a mark
// in sub-band k moves j = k - (k_band - kappa) individuals, kappa being that
// marginal's largest admissible flock at its own state. Each jump size then
// occupies exactly one sub-band (exact marginal law), and for ordered states
// the jump sizes of the two marginals differ by at most the state gaps, which
// keeps the pair ordered.
CoupleReport simulate_coupled(const ModelSpec& low_in, const ModelSpec& high_in,
                              const LatticeWindow& window_low,
                              const LatticeWindow& window_high,
                              const Configuration& init_low,
                              const Configuration& init_high, double horizon,
                              RngSeed seed, CoupleOptions options) {
  const ModelSpec low = low_in.validated();
  const ModelSpec high = high_in.validated();
  if (horizon < 0.0) throw std::invalid_argument("simulate_coupled: horizon < 0");
  if (const auto why = coupling_obstruction(low, high, window_low, window_high);
      why && !options.allow_inadmissible)
    throw std::invalid_argument("simulate_coupled: pair not admissible: " + *why);

  const std::int32_t sites = window_low.site_count();
  if (window_high.site_count() != sites ||
      window_low.dimension() != window_high.dimension())
    throw std::invalid_argument("simulate_coupled: windows must share geometry");
  if (static_cast<std::int32_t>(init_low.counts.size()) != sites ||
      static_cast<std::int32_t>(init_high.counts.size()) != sites)
    throw std::invalid_argument("simulate_coupled: configurations do not match window");
  for (std::int32_t i = 0; i < sites; ++i) {
    if (init_low.counts[static_cast<std::size_t>(i)] >
        init_high.counts[static_cast<std::size_t>(i)])
      throw std::invalid_argument("simulate_coupled: initial states not ordered");
  }

  Marginal lo{&low, &window_low, init_low.counts, frozen_exterior_count(low, window_low),
              low.lambda / (2.0 * window_low.dimension())};
  Marginal hi{&high, &window_high, init_high.counts,
              frozen_exterior_count(high, window_high),
              high.lambda / (2.0 * window_high.dimension())};
  for (auto c : lo.counts) {
    if (c < 0 || c > low.max_count())
      throw std::invalid_argument("simulate_coupled: low occupancy out of range");
    lo.total += c;
  }
  for (auto c : hi.counts) {
    if (c < 0 || c > high.max_count())
      throw std::invalid_argument("simulate_coupled: high occupancy out of range");
    hi.total += c;
  }

  const int dim = window_low.dimension();
  const int deg = 2 * dim;
  const int k_band = std::max(low.flock_limit(), high.flock_limit());
  const double sub_width = std::max(low.lambda, high.lambda) / (2.0 * dim);
  const double birth_band = std::max(low.max_count(), high.max_count());
  const double death_band = std::max(death_bound(low), death_bound(high));
  const bool any_frozen =
      window_low.boundary() == Boundary::FrozenFullOutside ||
      window_high.boundary() == Boundary::FrozenFullOutside;
  const LatticeWindow& geom =
      window_high.boundary() == Boundary::FrozenFullOutside ? window_high : window_low;

  // static per-site clock rates and cumulative weights
  std::vector<double> clock(static_cast<std::size_t>(sites), 0.0);
  std::vector<double> cum(static_cast<std::size_t>(sites) + 1, 0.0);
  std::vector<std::vector<int>> ext_slots(static_cast<std::size_t>(sites));
  for (std::int32_t i = 0; i < sites; ++i) {
    double b = birth_band + death_band + deg * k_band * sub_width;
    if (any_frozen) {
      for (int slot = 0; slot < deg; ++slot)
        if (geom.neighbor(i, slot) == LatticeWindow::kExterior)
          ext_slots[static_cast<std::size_t>(i)].push_back(slot);
      b += static_cast<double>(ext_slots[static_cast<std::size_t>(i)].size()) *
           k_band * sub_width;
    }
    clock[static_cast<std::size_t>(i)] = b;
    cum[static_cast<std::size_t>(i) + 1] = cum[static_cast<std::size_t>(i)] + b;
  }
  const double total_clock = cum.back();

  RngStream rng = RngStream::from(seed);
  CoupleReport report;
  report.horizon = horizon;

  const auto record = [&](double t, std::int32_t site) {
    const int a = lo.count(site), b = hi.count(site);
    if (a > b) {
      ++report.violations;
      if (!report.first_violation) report.first_violation = {t, site, a, b};
    }
  };

  double t = 0.0;
  for (;;) {
    if (lo.total == 0 && hi.total == 0 && !any_frozen) break;  // jointly absorbed
    t += rng.exponential(total_clock);
    if (t > horizon) break;
    ++report.clock_rings;

    // site whose clock rang
    const double pick = rng.uniform() * total_clock;
    const std::int32_t site = static_cast<std::int32_t>(
        std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin() - 1);
    const std::int32_t x = std::min(site, sites - 1);
    double u = rng.uniform() * clock[static_cast<std::size_t>(x)];

    bool moved = false;
    if (u < birth_band) {
      if (u < birth_rate(low, lo.count(x))) { lo.bump(x, 1); moved = true; }
      if (u < birth_rate(high, hi.count(x))) { hi.bump(x, 1); moved = true; }
      if (moved) record(t, x);
    } else if ((u -= birth_band) < death_band) {
      if (u < death_rate(low, lo.count(x))) { lo.bump(x, -1); moved = true; }
      if (u < death_rate(high, hi.count(x))) { hi.bump(x, -1); moved = true; }
      if (moved) record(t, x);
    } else {
      u -= death_band;
      const double slot_width = k_band * sub_width;
      int slot = static_cast<int>(u / slot_width);
      double v = u - slot * slot_width;
      int ksub = std::min(k_band - 1, static_cast<int>(v / sub_width));
      const double off = v - ksub * sub_width;
      ksub += 1;
      if (slot < deg) {
        // emigration from x through this slot
        const auto attempt = [&](Marginal& m) -> std::int32_t {
          const std::int32_t target = m.window->neighbor(x, slot);
          const int nt = target == LatticeWindow::kExterior ? m.frozen
                                                            : m.count(target);
          const int kappa = max_flock(*m.model, m.count(x), nt);
          const int j = ksub - (k_band - kappa);
          if (j < 1 || off >= m.lam_slot) return LatticeWindow::kExterior - 1;
          m.bump(x, -j);
          if (target != LatticeWindow::kExterior) m.bump(target, j);
          moved = true;
          return target;
        };
        const std::int32_t t_lo = attempt(lo);
        const std::int32_t t_hi = attempt(hi);
        if (moved) {
          record(t, x);
          if (t_lo >= 0) record(t, t_lo);
          if (t_hi >= 0 && t_hi != t_lo) record(t, t_hi);
        }
      } else {
        // immigration from a frozen exterior slot into x
        const auto& ext = ext_slots[static_cast<std::size_t>(x)];
        const std::size_t which = static_cast<std::size_t>(slot - deg);
        if (which < ext.size()) {
          const int eslot = ext[which];
          const auto attempt = [&](Marginal& m) {
            if (m.window->neighbor(x, eslot) != LatticeWindow::kExterior) return;
            const int kappa = max_flock(*m.model, m.frozen, m.count(x));
            const int j = ksub - (k_band - kappa);
            if (j < 1 || off >= m.lam_slot) return;
            m.bump(x, j);
            moved = true;
          };
          attempt(lo);
          attempt(hi);
          if (moved) record(t, x);
        }
      }
    }
    if (moved) {
      ++report.applied_events;
      if (options.stop_at_first_violation && report.violations > 0) break;
    }
  }
  report.final_low = std::move(lo.counts);
  report.final_high = std::move(hi.counts);
  return report;
}

}  // namespace metapop
