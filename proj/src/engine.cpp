#include "metapop/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metapop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Binary sum tree over per-site rates: O(log n) update and inverse-CDF
// sampling, O(n) rebuild.
class RateTree {
 public:
  explicit RateTree(std::int32_t n) : n_(n) {
    base_ = 1;
    while (base_ < n_) base_ <<= 1;
    tree_.assign(static_cast<std::size_t>(2 * base_), 0.0);
  }

  double total() const { return tree_[1]; }
  double value(std::int32_t i) const {
    return tree_[static_cast<std::size_t>(base_ + i)];
  }

  void set(std::int32_t i, double v) {
    std::size_t node = static_cast<std::size_t>(base_ + i);
    tree_[node] = v;
    for (node >>= 1; node >= 1; node >>= 1) {
      tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
      if (node == 1) break;
    }
  }

  void rebuild(const std::vector<double>& values) {
    for (std::int32_t i = 0; i < n_; ++i)
      tree_[static_cast<std::size_t>(base_ + i)] = values[static_cast<std::size_t>(i)];
    for (std::int32_t i = n_; i < base_; ++i)
      tree_[static_cast<std::size_t>(base_ + i)] = 0.0;
    for (std::size_t node = static_cast<std::size_t>(base_) - 1; node >= 1; --node) {
      tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
      if (node == 1) break;
    }
  }

  // Index whose cumulative rate interval contains u, u in [0, total).
  std::int32_t sample(double u) const {
    std::size_t node = 1;
    while (node < static_cast<std::size_t>(base_)) {
      const double left = tree_[2 * node];
      if (u < left) {
        node = 2 * node;
      } else {
        u -= left;
        node = 2 * node + 1;
      }
    }
    std::int32_t idx = static_cast<std::int32_t>(node - static_cast<std::size_t>(base_));
    if (idx >= n_) idx = n_ - 1;
    // guard against landing on a zero-rate leaf through rounding
    while (idx > 0 && value(idx) <= 0.0) --idx;
    while (idx < n_ - 1 && value(idx) <= 0.0) ++idx;
    return idx;
  }

 private:
  std::int32_t n_, base_;
  std::vector<double> tree_;
};

}  // namespace

struct Simulator::Impl {
  ModelSpec model;
  const LatticeWindow* window;
  SimOptions options;
  RngStream rng;

  Configuration state;
  std::int64_t total_pop = 0;
  RateTree tree;
  std::vector<double> site_rate;
  double clock = 0.0;
  double pending = kInf;
  bool absorbed = false;
  std::optional<double> extinction;
  std::uint64_t events = 0;
  std::uint64_t cap_hits = 0;
  int frozen = 0;
  double per_slot = 0.0;
  std::vector<std::int32_t> touched;  // scratch

  Impl(ModelSpec m, const LatticeWindow& w, Configuration init, RngStream r,
       SimOptions opts)
      : model(m.validated()),
        window(&w),
        options(opts),
        rng(r),
        state(std::move(init)),
        tree(w.site_count()),
        site_rate(static_cast<std::size_t>(w.site_count()), 0.0) {
    if (static_cast<std::int32_t>(state.counts.size()) != w.site_count())
      throw std::invalid_argument("engine: configuration does not match window");
    if (state.capacity && *state.capacity > model.max_count())
      throw std::invalid_argument("engine: configuration capacity exceeds model bound");
    state.capacity = model.max_count();
    for (auto c : state.counts) {
      if (c < 0 || c > model.max_count())
        throw std::invalid_argument("engine: occupancy outside model range");
      total_pop += c;
    }
    frozen = frozen_exterior_count(model, w);
    per_slot = model.lambda / (2.0 * w.dimension());
    rebuild_all();
    draw_pending();
  }

  double bucket_rate(std::int32_t i) const {
    const int n = state.counts[static_cast<std::size_t>(i)];
    double r = birth_rate(model, n);
    if (!options.suppress_deaths) r += death_rate(model, n);
    const int deg = window->degree();
    for (int slot = 0; slot < deg; ++slot) {
      const std::int32_t t = window->neighbor(i, slot);
      const int nt = t == LatticeWindow::kExterior
                         ? frozen
                         : state.counts[static_cast<std::size_t>(t)];
      r += max_flock(model, n, nt) * per_slot;
      if (t == LatticeWindow::kExterior && window->boundary() == Boundary::FrozenFullOutside)
        r += max_flock(model, model.capacity, n) * per_slot;
    }
    return r;
  }

  void rebuild_all() {
    for (std::int32_t i = 0; i < window->site_count(); ++i)
      site_rate[static_cast<std::size_t>(i)] = bucket_rate(i);
    tree.rebuild(site_rate);
  }

  void refresh_site(std::int32_t i) {
    const double r = bucket_rate(i);
    site_rate[static_cast<std::size_t>(i)] = r;
    tree.set(i, r);
  }

  void refresh_around(std::int32_t i) {
    refresh_site(i);
    for (int slot = 0; slot < window->degree(); ++slot) {
      const std::int32_t t = window->neighbor(i, slot);
      if (t != LatticeWindow::kExterior) refresh_site(t);
    }
  }

  bool extinction_defined() const {
    return window->boundary() != Boundary::FrozenFullOutside;
  }

  void draw_pending() {
    const double R = tree.total();
    if (R <= 0.0) {
      absorbed = true;
      pending = kInf;
      if (total_pop == 0 && !extinction && extinction_defined()) extinction = clock;
      return;
    }
    pending = clock + rng.exponential(R);
  }

  // Selects the event at `site` whose within-bucket offset is u. Enumeration
  // order: birth, death, emigrations by (slot, flock), immigrations by
  // (slot, flock).
  Event select_event(std::int32_t site, double u) const {
    const int n = state.counts[static_cast<std::size_t>(site)];
    double acc = birth_rate(model, n);
    if (u < acc) return {EventType::Birth, site, site, 1};
    if (!options.suppress_deaths) {
      acc += death_rate(model, n);
      if (u < acc) return {EventType::Death, site, site, 1};
    }
    const int deg = window->degree();
    Event last{EventType::Death, site, site, 1};
    bool have_last = n > 0 && !options.suppress_deaths && death_rate(model, n) > 0.0;
    for (int slot = 0; slot < deg; ++slot) {
      const std::int32_t t = window->neighbor(site, slot);
      const int nt = t == LatticeWindow::kExterior
                         ? frozen
                         : state.counts[static_cast<std::size_t>(t)];
      const int kmax = max_flock(model, n, nt);
      for (int k = 1; k <= kmax; ++k) {
        acc += per_slot;
        last = {EventType::Migration, site, t, k};
        have_last = true;
        if (u < acc) return last;
      }
      if (t == LatticeWindow::kExterior &&
          window->boundary() == Boundary::FrozenFullOutside) {
        const int kin = max_flock(model, model.capacity, n);
        for (int k = 1; k <= kin; ++k) {
          acc += per_slot;
          last = {EventType::Migration, LatticeWindow::kExterior, site, k};
          have_last = true;
          if (u < acc) return last;
        }
      }
    }
    if (have_last) return last;  // rounding overshoot: take the final event
    if (birth_rate(model, n) > 0.0) return {EventType::Birth, site, site, 1};
    throw std::logic_error("engine: event selection on an empty bucket");
  }

  void bump(std::int32_t site, int delta) {
    auto& c = state.counts[static_cast<std::size_t>(site)];
    c += delta;
    total_pop += delta;
    if (c < 0 || c > model.max_count())
      throw std::logic_error("engine: occupancy left the admissible range");
    if (model.variant == ModelVariant::ModelIV && c == model.sim_cap) ++cap_hits;
  }

  void apply(const Event& e) {
    switch (e.type) {
      case EventType::Birth:
        bump(e.site, 1);
        refresh_around(e.site);
        break;
      case EventType::Death:
        bump(e.site, -1);
        refresh_around(e.site);
        break;
      case EventType::Migration:
        if (e.site == LatticeWindow::kExterior) {
          bump(e.target, e.flock);  // immigration from a frozen-full exterior
          refresh_around(e.target);
        } else if (e.target == LatticeWindow::kExterior) {
          bump(e.site, -e.flock);  // emigration through the boundary: pure loss
          refresh_around(e.site);
        } else {
          bump(e.site, -e.flock);
          bump(e.target, e.flock);
          refresh_around(e.site);
          refresh_around(e.target);
        }
        break;
    }
  }

  void resync_check() {
    const double before = tree.total();
    rebuild_all();
    const double after = tree.total();
    if (std::abs(before - after) > 1e-9 * std::max(1.0, std::abs(after)))
      throw std::logic_error("engine: incremental rate bookkeeping drifted");
  }

  std::optional<Event> step() {
    if (absorbed) return std::nullopt;
    clock = pending;
    const double R = tree.total();
    const std::int32_t site = tree.sample(rng.uniform() * R);
    const double u = rng.uniform() * site_rate[static_cast<std::size_t>(site)];
    const Event e = select_event(site, u);
    apply(e);
    ++events;
    if (total_pop == 0 && !extinction && extinction_defined()) extinction = clock;
    if (options.resync_interval && events % options.resync_interval == 0)
      resync_check();
    draw_pending();
    return e;
  }
};

Simulator::Simulator(ModelSpec model, const LatticeWindow& window, Configuration init,
                     RngStream rng, SimOptions options)
    : impl_(std::make_unique<Impl>(model, window, std::move(init), rng, options)) {}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

bool Simulator::absorbed() const { return impl_->absorbed; }
double Simulator::time() const { return impl_->clock; }
double Simulator::next_event_time() const { return impl_->pending; }
std::optional<Event> Simulator::step() { return impl_->step(); }

void Simulator::advance_past(double t) {
  while (!impl_->absorbed && impl_->pending <= t) impl_->step();
  if (impl_->clock < t) impl_->clock = t;
}

const Configuration& Simulator::config() const { return impl_->state; }

std::int64_t Simulator::total_population() const { return impl_->total_pop; }
std::optional<double> Simulator::extinction_time() const { return impl_->extinction; }
std::uint64_t Simulator::event_count() const { return impl_->events; }
std::uint64_t Simulator::cap_hits() const { return impl_->cap_hits; }
double Simulator::total_rate() const { return impl_->tree.total(); }

Trajectory simulate(const ModelSpec& model, const LatticeWindow& window,
                    const Configuration& init, double horizon,
                    const std::vector<double>& grid, RngSeed seed,
                    SimOptions options) {
  if (horizon < 0.0) throw std::invalid_argument("simulate: horizon must be >= 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > horizon)
      throw std::invalid_argument("simulate: grid time outside [0, horizon]");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw std::invalid_argument("simulate: grid must be strictly increasing");
  }
  Simulator sim(model, window, init, RngStream::from(seed), options);
  Trajectory out;
  const std::vector<double> effective = grid.empty() ? std::vector<double>{0.0} : grid;
  for (double t : effective) {
    sim.advance_past(t);
    out.times.push_back(t);
    out.totals.push_back(sim.total_population());
    if (options.record_site_counts) out.site_counts.push_back(sim.config().counts);
  }
  sim.advance_past(horizon);
  out.final_state = sim.config();
  out.extinction_time = sim.extinction_time();
  out.events = sim.event_count();
  out.cap_hits = sim.cap_hits();
  return out;
}

}  // namespace metapop
