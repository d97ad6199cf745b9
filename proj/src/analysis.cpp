#include "metapop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "metapop/parallel.hpp"

namespace metapop {

double ruin_probability(const RuinProblem& problem) {
  if (problem.r1 >= problem.r2)
    throw std::invalid_argument("ruin: need r1 < r2");
  if (problem.start < problem.r1 || problem.start > problem.r2)
    throw std::invalid_argument("ruin: start must lie in [r1, r2]");
  if (!(problem.up_p > 0.0) || !(problem.up_p < 1.0))
    throw std::invalid_argument("ruin: p must lie in (0, 1)");
  if (problem.start == problem.r1) return 0.0;
  if (problem.start == problem.r2) return 1.0;
  const double n = static_cast<double>(problem.r2 - problem.r1);
  const double j = static_cast<double>(problem.start - problem.r1);
  if (problem.up_p == 0.5) return j / n;  // symmetric limit
  const double ratio = (1.0 - problem.up_p) / problem.up_p;  // q/p
  return (1.0 - std::pow(ratio, j)) / (1.0 - std::pow(ratio, n));
}

namespace {

struct ReplicaOutcome {
  bool survived = false;
  double extinction_time = 0.0;
};

}  // namespace

SurvivalEstimate estimate_survival(const ModelSpec& model, const LatticeWindow& window,
                                   const InitSpec& init, double horizon, int replicas,
                                   RngSeed seed, int threads) {
  if (replicas < 1) throw std::invalid_argument("estimate_survival: replicas >= 1");
  const ModelSpec m = model.validated();
  const Configuration start = make_configuration(window, init, m.max_count());
  const auto outcomes = run_indexed<ReplicaOutcome>(replicas, threads, [&](int r) {
    Simulator sim(m, window, start, RngStream::from({seed.master, seed.replica + static_cast<std::uint64_t>(r)}));
    sim.advance_past(horizon);
    ReplicaOutcome out;
    if (sim.total_population() > 0) {
      out.survived = true;
    } else {
      out.extinction_time = sim.extinction_time().value_or(horizon);
    }
    return out;
  });
  SurvivalEstimate est;
  est.replicas = replicas;
  est.horizon = horizon;
  for (const auto& o : outcomes) {
    if (o.survived)
      ++est.survivals;
    else
      est.extinction_times.push_back(o.extinction_time);
  }
  std::sort(est.extinction_times.begin(), est.extinction_times.end());
  est.estimate = static_cast<double>(est.survivals) / replicas;
  est.wilson = wilson_interval(est.survivals, replicas);
  if (!est.extinction_times.empty()) {
    const double cutoff = 0.8 * horizon;
    const auto it = std::lower_bound(est.extinction_times.begin(),
                                     est.extinction_times.end(), cutoff);
    est.late_extinction_fraction =
        static_cast<double>(est.extinction_times.end() - it) /
        static_cast<double>(est.extinction_times.size());
    est.horizon_flag = est.late_extinction_fraction >= 0.01;
  }
  return est;
}

std::string to_string(ParamAxis axis) {
  switch (axis) {
    case ParamAxis::Phi: return "phi";
    case ParamAxis::PhiAllee: return "phi_A";
    case ParamAxis::CapacityN: return "N";
  }
  return "?";
}

ModelSpec with_axis_value(const ModelSpec& base, ParamAxis axis, double value) {
  ModelSpec m = base;
  switch (axis) {
    case ParamAxis::Phi:
      m.phi = value;
      break;
    case ParamAxis::PhiAllee:
      m.phi_allee = value;
      break;
    case ParamAxis::CapacityN:
      m.capacity = static_cast<int>(std::llround(value));
      break;
  }
  return m.validated();
}

namespace {

// Decides one parameter value: doubles replicas until the Wilson interval
// excludes the threshold or the budget is exhausted (nullopt).
std::optional<BisectDecision> decide(const ModelSpec& base, ParamAxis axis,
                                     double value, const LatticeWindow& window,
                                     const InitSpec& init, double horizon,
                                     RngSeed seed, const BisectOptions& opts,
                                     std::uint64_t salt) {
  const ModelSpec m = with_axis_value(base, axis, value);
  int replicas = opts.initial_replicas;
  for (int round = 0; round <= opts.max_doublings; ++round) {
    // block of 2^32 replica indices per (decision, round): streams never collide
    const RngSeed s{seed.master,
                    seed.replica + ((salt * 64ULL + static_cast<std::uint64_t>(round))
                                    << 32)};
    const auto est =
        estimate_survival(m, window, init, horizon, replicas, s, opts.threads);
    BisectDecision d;
    d.value = value;
    d.replicas_used = replicas;
    d.estimate = est.estimate;
    d.wilson = est.wilson;
    if (est.wilson.low > opts.survival_threshold) {
      d.survives = true;
      return d;
    }
    if (est.wilson.high < opts.survival_threshold) {
      d.survives = false;
      return d;
    }
    replicas *= 2;
  }
  return std::nullopt;
}

}  // namespace

BisectionResult bisect_critical(const ModelSpec& base, ParamAxis axis, double lo,
                                double hi, const LatticeWindow& window,
                                const InitSpec& init, double horizon, RngSeed seed,
                                BisectOptions options) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: need lo < hi");
  if (options.initial_replicas < 1 || options.tolerance <= 0.0)
    throw std::invalid_argument("bisect: bad options");

  BisectionResult result;
  result.axis = axis;

  std::uint64_t salt = 1;
  const auto lo_dec =
      decide(base, axis, lo, window, init, horizon, seed, options, salt++);
  const auto hi_dec =
      decide(base, axis, hi, window, init, horizon, seed, options, salt++);
  if (!lo_dec || !hi_dec)
    throw std::invalid_argument(
        "bisect: endpoint estimates do not separate from the threshold");
  if (lo_dec->survives == hi_dec->survives)
    throw std::invalid_argument(
        "bisect: bracket endpoints sit on the same side of the threshold");
  result.log.push_back(*lo_dec);
  result.log.push_back(*hi_dec);
  const bool survive_at_low = lo_dec->survives;

  double a = lo, b = hi;
  const bool integer_axis = axis == ParamAxis::CapacityN;
  for (;;) {
    if (integer_axis ? (b - a <= 1.0) : (b - a <= options.tolerance)) break;
    double mid = 0.5 * (a + b);
    if (integer_axis) mid = std::floor(mid);
    const auto dec =
        decide(base, axis, mid, window, init, horizon, seed, options, salt++);
    if (!dec) {
      result.budget_exhausted = true;
      break;
    }
    result.log.push_back(*dec);
    if (dec->survives == survive_at_low)
      a = mid;
    else
      b = mid;
  }
  result.bracket_low = a;
  result.bracket_high = b;
  result.critical = 0.5 * (a + b);
  return result;
}

OccupancySeries mean_occupancy(const ModelSpec& model, const LatticeWindow& window,
                               const InitSpec& init, double horizon,
                               const std::vector<double>& grid, int replicas,
                               RngSeed seed, int threads) {
  if (replicas < 1) throw std::invalid_argument("mean_occupancy: replicas >= 1");
  const ModelSpec m = model.validated();
  const Configuration start = make_configuration(window, init, m.max_count());
  const double sites = static_cast<double>(window.site_count());
  const auto series = run_indexed<std::vector<double>>(replicas, threads, [&](int r) {
    const Trajectory traj =
        simulate(m, window, start, horizon, grid,
                 {seed.master, seed.replica + static_cast<std::uint64_t>(r)});
    std::vector<double> means(traj.totals.size());
    for (std::size_t g = 0; g < traj.totals.size(); ++g)
      means[g] = static_cast<double>(traj.totals[g]) / sites;
    return means;
  });
  OccupancySeries out;
  out.times = grid.empty() ? std::vector<double>{0.0} : grid;
  out.mean.resize(out.times.size());
  out.se.resize(out.times.size());
  std::vector<double> column(static_cast<std::size_t>(replicas));
  for (std::size_t g = 0; g < out.times.size(); ++g) {
    for (int r = 0; r < replicas; ++r)
      column[static_cast<std::size_t>(r)] = series[static_cast<std::size_t>(r)][g];
    const auto ms = mean_and_se(column);
    out.mean[g] = ms.mean;
    out.se[g] = ms.se;
  }
  return out;
}

OccupancySeries immortal_dominator_mean(int immortals, double phi_over, int start,
                                        double horizon, const std::vector<double>& grid,
                                        int replicas, RngSeed seed, int threads) {
  if (immortals < 1) throw std::invalid_argument("dominator: immortals >= 1");
  if (!(phi_over > 0.0)) throw std::invalid_argument("dominator: phi_over > 0");
  if (start < 0) throw std::invalid_argument("dominator: start >= 0");
  const std::vector<double> times = grid.empty() ? std::vector<double>{0.0} : grid;
  const auto series = run_indexed<std::vector<double>>(replicas, threads, [&](int r) {
    RngStream rng =
        RngStream::from({seed.master, seed.replica + static_cast<std::uint64_t>(r)});
    std::vector<double> values(times.size());
    double t = 0.0;
    long long z = start;
    std::size_t g = 0;
    for (;;) {
      const double birth = static_cast<double>(immortals + z);
      const double death = z > 0 ? phi_over * static_cast<double>(immortals + z) : 0.0;
      const double rate = birth + death;
      const double next = t + rng.exponential(rate);
      while (g < times.size() && times[g] < next) {
        values[g] = static_cast<double>(z);
        ++g;
      }
      if (g == times.size() || next > horizon) break;
      t = next;
      z += rng.uniform() * rate < birth ? 1 : -1;
    }
    for (; g < times.size(); ++g) values[g] = static_cast<double>(z);
    return values;
  });
  OccupancySeries out;
  out.times = times;
  out.mean.resize(times.size());
  out.se.resize(times.size());
  std::vector<double> column(static_cast<std::size_t>(replicas));
  for (std::size_t g = 0; g < times.size(); ++g) {
    for (int r = 0; r < replicas; ++r)
      column[static_cast<std::size_t>(r)] = series[static_cast<std::size_t>(r)][g];
    const auto ms = mean_and_se(column);
    out.mean[g] = ms.mean;
    out.se[g] = ms.se;
  }
  return out;
}

}  // namespace metapop
