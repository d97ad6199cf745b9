#include "metapop/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "metapop/analysis.hpp"
#include "metapop/markov.hpp"
#include "metapop/parallel.hpp"

namespace metapop {

namespace {

// centered coordinate c in [-(half-1), half-1] -> window coordinate
int to_window(int c, int half) { return c + half - 1; }

}  // namespace

std::vector<BlockEstimate> estimate_wet_probability_sweep(
    const ModelSpec& model_in, int L, const std::vector<double>& horizons,
    int replicas, RngSeed seed, WetBlockOptions options) {
  const ModelSpec model = model_in.validated();
  if (model.variant != ModelVariant::ModelI && model.variant != ModelVariant::ModelIII)
    throw std::invalid_argument("wet block: Model I or Model III only");
  if (L < 1) throw std::invalid_argument("wet block: L must be >= 1");
  if (replicas < 1) throw std::invalid_argument("wet block: replicas >= 1");
  if (horizons.empty()) throw std::invalid_argument("wet block: no horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 0.0) throw std::invalid_argument("wet block: negative horizon");
    if (i > 0 && horizons[i] <= horizons[i - 1])
      throw std::invalid_argument("wet block: horizons must increase");
  }
  const int half = 4 * L;           // sites strictly inside (-4L, 4L)
  const int side = 2 * half - 1;    // 8L - 1
  const LatticeWindow window(2, {side, side}, Boundary::ZeroOutside);

  std::array<int, 2> start = options.start.value_or(std::array<int, 2>{L, L});
  if (std::abs(start[0]) > L || std::abs(start[1]) > L)
    throw std::invalid_argument("wet block: start cell must lie in the seed square");
  InitSpec init = InitSpec::singleton(
      {to_window(start[0], half), to_window(start[1], half)}, options.start_count);
  const Configuration start_cfg =
      make_configuration(window, init, model.max_count());

  // site index sets of the two monitored squares
  std::vector<std::int32_t> left_sites, right_sites;
  for (int x = -3 * L; x <= -L; ++x)
    for (int y = -L; y <= L; ++y)
      left_sites.push_back(window.index_of({to_window(x, half), to_window(y, half)}));
  for (int x = L; x <= 3 * L; ++x)
    for (int y = -L; y <= L; ++y)
      right_sites.push_back(window.index_of({to_window(x, half), to_window(y, half)}));

  SimOptions sim_opts;
  sim_opts.suppress_deaths = options.suppress_deaths_inside;

  const auto wet_flags = run_indexed<std::vector<std::uint8_t>>(
      replicas, options.threads, [&](int r) {
        Simulator sim(model, window, start_cfg,
                      RngStream::from({seed.master,
                                       seed.replica + static_cast<std::uint64_t>(r)}),
                      sim_opts);
        std::vector<std::uint8_t> flags(horizons.size(), 0);
        for (std::size_t g = 0; g < horizons.size(); ++g) {
          sim.advance_past(horizons[g]);
          const auto& counts = sim.config().counts;
          const auto occupied = [&](const std::vector<std::int32_t>& sites) {
            for (auto s : sites)
              if (counts[static_cast<std::size_t>(s)] > 0) return true;
            return false;
          };
          flags[g] = occupied(left_sites) && occupied(right_sites) ? 1 : 0;
        }
        return flags;
      });

  std::vector<BlockEstimate> out;
  for (std::size_t g = 0; g < horizons.size(); ++g) {
    BlockEstimate est;
    est.block = {BlockKind::Survival, L, horizons[g]};
    est.replicas = replicas;
    for (const auto& f : wet_flags) est.hits += f[g];
    est.frequency = static_cast<double>(est.hits) / replicas;
    est.wilson = wilson_interval(est.hits, replicas);
    out.push_back(est);
  }
  return out;
}

BlockEstimate estimate_wet_probability(const ModelSpec& model, int L, double T,
                                       int replicas, RngSeed seed,
                                       WetBlockOptions options) {
  return estimate_wet_probability_sweep(model, L, {T}, replicas, seed, options)
      .front();
}

BlockEstimate estimate_dry_probability(const ModelSpec& model_in, int L, double T,
                                       int replicas, RngSeed seed, int threads) {
  const ModelSpec model = model_in.validated();
  if (model.variant != ModelVariant::ModelII)
    throw std::invalid_argument("dry block: Model II only");
  if (L < 1) throw std::invalid_argument("dry block: L must be >= 1");
  if (T < 0.0) throw std::invalid_argument("dry block: T must be >= 0");
  if (replicas < 1) throw std::invalid_argument("dry block: replicas >= 1");
  const int half = 2 * L;         // sites strictly inside (-2L, 2L)
  const int side = 2 * half - 1;  // 4L - 1
  const LatticeWindow window(2, {side, side}, Boundary::FrozenFullOutside);
  const Configuration start_cfg = make_configuration(
      window, InitSpec::full_at(model.capacity), model.max_count());

  std::vector<std::uint8_t> inner(static_cast<std::size_t>(window.site_count()), 0);
  for (int x = -L; x <= L; ++x)
    for (int y = -L; y <= L; ++y)
      inner[static_cast<std::size_t>(
          window.index_of({to_window(x, half), to_window(y, half)}))] = 1;

  const auto wet = run_indexed<std::uint8_t>(replicas, threads, [&](int r) {
    Simulator sim(model, window, start_cfg,
                  RngStream::from(
                      {seed.master, seed.replica + static_cast<std::uint64_t>(r)}));
    sim.advance_past(T);
    const auto& counts = sim.config().counts;
    std::int64_t inner_total = 0;
    for (std::int32_t i = 0; i < window.site_count(); ++i)
      if (inner[static_cast<std::size_t>(i)])
        inner_total += counts[static_cast<std::size_t>(i)];
    if (inner_total > 0) return std::uint8_t{0};
    // inner square empty at T; it must stay empty until 2T
    while (!sim.absorbed() && sim.next_event_time() <= 2.0 * T) {
      const auto ev = sim.step();
      if (!ev) break;
      std::int32_t gained = LatticeWindow::kExterior;
      if (ev->type == EventType::Birth) gained = ev->site;
      if (ev->type == EventType::Migration &&
          ev->target != LatticeWindow::kExterior)
        gained = ev->target;
      if (gained != LatticeWindow::kExterior &&
          inner[static_cast<std::size_t>(gained)] &&
          sim.config().counts[static_cast<std::size_t>(gained)] > 0)
        return std::uint8_t{0};
    }
    return std::uint8_t{1};
  });

  BlockEstimate est;
  est.block = {BlockKind::Extinction, L, T};
  est.replicas = replicas;
  for (auto w : wet) est.hits += w;
  est.frequency = static_cast<double>(est.hits) / replicas;
  est.wilson = wilson_interval(est.hits, replicas);
  return est;
}

DominatorHit estimate_dominator_hit(const ModelSpec& model_in, double S, int threshold,
                                    int replicas, RngSeed seed, int threads) {
  const ModelSpec model = model_in.validated();
  const DominatorSpec dom = dominator(model);  // validates Model II
  if (S < 0.0) throw std::invalid_argument("dominator hit: S must be >= 0");
  if (replicas < 1) throw std::invalid_argument("dominator hit: replicas >= 1");
  const int states = dom.states();
  const int start = model.capacity;

  // exact transient distribution of the (N+1)-state chain
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(states, states);
  for (int l = 0; l < states; ++l) {
    const double b = dom.birth[static_cast<std::size_t>(l)];
    const double d = dom.death[static_cast<std::size_t>(l)];
    if (l + 1 < states) Q(l, l + 1) = b;
    if (l > 0) Q(l, l - 1) = d;
    Q(l, l) = -(b + d);
  }
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(states);
  p0(start) = 1.0;
  const Eigen::VectorXd pt = ctmc_transient(Q, p0, S);
  double exact = 0.0;
  for (int l = 0; l <= std::min(threshold, states - 1); ++l) exact += pt(l);

  const auto hits = run_indexed<std::uint8_t>(replicas, threads, [&](int r) {
    RngStream rng = RngStream::from(
        {seed.master, seed.replica + static_cast<std::uint64_t>(r)});
    int l = start;
    double t = 0.0;
    for (;;) {
      const double b = dom.birth[static_cast<std::size_t>(l)];
      const double d = dom.death[static_cast<std::size_t>(l)];
      const double rate = b + d;
      if (rate <= 0.0) break;
      t += rng.exponential(rate);
      if (t > S) break;
      l += rng.uniform() * rate < b ? 1 : -1;
    }
    return static_cast<std::uint8_t>(l <= threshold ? 1 : 0);
  });

  DominatorHit out;
  out.exact = exact;
  out.replicas = replicas;
  int h = 0;
  for (auto v : hits) h += v;
  out.mc_estimate = static_cast<double>(h) / replicas;
  out.wilson = wilson_interval(h, replicas);
  return out;
}

namespace {

double site_uniform(std::uint64_t seed, int bm, int bn) {
  const std::uint64_t key =
      splitmix64(seed ^ splitmix64(0x9e3779b97f4a7c15ULL +
                                   (static_cast<std::uint64_t>(static_cast<std::uint32_t>(bm)) << 32) +
                                   static_cast<std::uint32_t>(bn)));
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<std::uint8_t> oriented_percolation_reached(int width, int height,
                                                       double p,
                                                       int dependence_radius,
                                                       std::uint64_t seed) {
  if (width < 1 || height < 0)
    throw std::invalid_argument("percolation: bad lattice size");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("percolation: p in [0,1]");
  if (dependence_radius < 0)
    throw std::invalid_argument("percolation: dependence radius >= 0");
  const int block = dependence_radius + 1;
  std::vector<std::uint8_t> reached(
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height + 1), 0);
  const auto open = [&](int m, int n) {
    return site_uniform(seed, m / block, n / block) < p;
  };
  const auto at = [&](int m, int n) -> std::uint8_t& {
    return reached[static_cast<std::size_t>(n) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(m)];
  };
  for (int m = 0; m < width; ++m)
    if (m % 2 == 0 && open(m, 0)) at(m, 0) = 1;
  for (int n = 1; n <= height; ++n)
    for (int m = 0; m < width; ++m) {
      if ((m + n) % 2 != 0) continue;
      if (!open(m, n)) continue;
      const bool from_left = m > 0 && at(m - 1, n - 1);
      const bool from_right = m + 1 < width && at(m + 1, n - 1);
      if (from_left || from_right) at(m, n) = 1;
    }
  return reached;
}

PercolationResult simulate_oriented_percolation(int width, int height, double p,
                                                int dependence_radius,
                                                std::uint64_t seed) {
  const auto reached =
      oriented_percolation_reached(width, height, p, dependence_radius, seed);
  PercolationResult res;
  for (int n = height; n >= 0; --n) {
    bool any = false;
    for (int m = 0; m < width; ++m)
      if (reached[static_cast<std::size_t>(n) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(m)]) {
        any = true;
        break;
      }
    if (any) {
      res.max_height = n;
      break;
    }
  }
  res.percolates = res.max_height == height;
  return res;
}

EdgeEventEstimate estimate_edge_event(const ModelSpec& model_in, int replicas,
                                      RngSeed seed, double time_cutoff,
                                      int threads) {
  const ModelSpec model = model_in.validated();
  if (model.variant != ModelVariant::ModelIII)
    throw std::invalid_argument("edge event: Model III only");
  const int N = model.capacity, M = model.flock_max, NA = model.allee_threshold;
  if (N - M <= NA)
    throw std::invalid_argument("edge event: requires N - M > N_A");
  if (M <= NA) throw std::invalid_argument("edge event: requires M > N_A");
  if (replicas < 1) throw std::invalid_argument("edge event: replicas >= 1");
  if (time_cutoff <= 0.0) throw std::invalid_argument("edge event: cutoff > 0");

  // Plus-shaped patch in d = 2: index 0 is the source, 1..4 its neighbors;
  // index 1 is the monitored neighbor. Transfers run only source -> neighbor;
  // every other migration (neighbor -> source, neighbor -> outside) removes
  // the flock from the system, with the receiving constraint dropped (the
  // target is treated as permanently empty).
  enum { kSource = 0, kTarget = 1, kSites = 5 };
  const double lam_slot = model.lambda / 4.0;

  struct Move {
    double rate;
    int site;
    int delta;        // applied to `site`
    int target = -1;  // receives -delta when >= 0
  };

  struct Outcome { std::uint8_t kind; };  // 0 fail, 1 success, 2 undecided
  const auto outcomes = run_indexed<Outcome>(replicas, threads, [&](int r) {
    RngStream rng = RngStream::from(
        {seed.master, seed.replica + static_cast<std::uint64_t>(r)});
    std::array<int, kSites> n{};
    n[kSource] = N - M;
    double t = 0.0;
    std::vector<Move> moves;
    for (;;) {
      if (n[kTarget] >= N - M) return Outcome{1};
      int total = 0;
      for (int i = 0; i < kSites; ++i) total += n[static_cast<std::size_t>(i)];
      if (total == 0) return Outcome{0};

      moves.clear();
      double rate = 0.0;
      const auto add = [&](double rr, int site, int delta, int target = -1) {
        if (rr <= 0.0) return;
        moves.push_back({rr, site, delta, target});
        rate += rr;
      };
      for (int i = 0; i < kSites; ++i) {
        add(birth_rate(model, n[static_cast<std::size_t>(i)]), i, 1);
        add(death_rate(model, n[static_cast<std::size_t>(i)]), i, -1);
      }
      for (int i = 1; i < kSites; ++i) {
        // real transfer source -> neighbor i, one slot at lambda/(2d) per flock
        const int kt = max_flock(model, n[kSource], n[static_cast<std::size_t>(i)]);
        for (int k = 1; k <= kt; ++k) add(lam_slot, kSource, -k, i);
        // the neighbor's four outgoing directions are all pure losses with the
        // receiving constraint dropped
        const int kl = max_flock(model, n[static_cast<std::size_t>(i)], 0);
        for (int k = 1; k <= kl; ++k) add(4.0 * lam_slot, i, -k);
      }
      if (rate <= 0.0) return Outcome{0};
      t += rng.exponential(rate);
      if (t > time_cutoff) return Outcome{2};
      double u = rng.uniform() * rate;
      std::size_t pick = moves.size() - 1;
      for (std::size_t i = 0; i < moves.size(); ++i) {
        if (u < moves[i].rate) {
          pick = i;
          break;
        }
        u -= moves[i].rate;
      }
      const Move& mv = moves[pick];
      n[static_cast<std::size_t>(mv.site)] += mv.delta;
      if (mv.target >= 0) n[static_cast<std::size_t>(mv.target)] -= mv.delta;
    }
  });

  EdgeEventEstimate est;
  est.replicas = replicas;
  for (const auto& o : outcomes) {
    if (o.kind == 1) ++est.successes;
    else if (o.kind == 0) ++est.failures;
    else ++est.undecided;
  }
  est.frequency = static_cast<double>(est.successes) / replicas;
  est.wilson = wilson_interval(est.successes, replicas);
  return est;
}

VisitTail estimate_visit_count_tail(int capacity, int flock, int allee_threshold,
                                    double phi, int visits, int replicas,
                                    RngSeed seed) {
  if (capacity - flock <= allee_threshold)
    throw std::invalid_argument("visit tail: requires N - M > N_A");
  if (visits < 1 || replicas < 1)
    throw std::invalid_argument("visit tail: visits and replicas >= 1");
  if (!(phi > 0.0)) throw std::invalid_argument("visit tail: phi > 0");
  const long long top = capacity - flock + 1;  // reflecting value, counts a visit
  const long long bottom = allee_threshold;    // absorbing
  const double p = 1.0 / (1.0 + phi);
  const double per_trip = ruin_probability({bottom, top, top - 1, p});

  VisitTail out;
  out.replicas = replicas;
  out.exact = std::pow(per_trip, visits);
  out.analytic_lower =
      std::pow(1.0 - std::pow(phi, static_cast<double>(capacity - flock -
                                                       allee_threshold)),
               visits);
  int hits = 0;
  for (int r = 0; r < replicas; ++r) {
    RngStream rng = RngStream::from(
        {seed.master, seed.replica + static_cast<std::uint64_t>(r)});
    int count = 0;
    long long state = top - 1;  // just bounced back from the top
    while (count < visits) {
      state += rng.uniform() < p ? 1 : -1;
      if (state == top) {
        ++count;
        state = top - 1;
      } else if (state == bottom) {
        break;
      }
    }
    if (count >= visits) ++hits;
  }
  out.mc_estimate = static_cast<double>(hits) / replicas;
  out.wilson = wilson_interval(hits, replicas);
  return out;
}

}  // namespace metapop
