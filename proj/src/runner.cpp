#include "metapop/runner.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "metapop/analysis.hpp"
#include "metapop/engine.hpp"
#include "metapop/order.hpp"
#include "metapop/percolation.hpp"

namespace metapop {

using nlohmann::json;

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// CSV with a config-echo comment header; floats at 9 significant digits.
class CsvFile {
 public:
  CsvFile(const std::string& path, const json& config_echo) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    out_ << "# config " << config_echo.dump() << "\n";
  }
  void header(const std::string& line) { out_ << line << "\n"; }
  void raw(const std::string& line) { out_ << line << "\n"; }
  bool good() const { return static_cast<bool>(out_); }

 private:
  std::ofstream out_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("error writing " + path);
}

json interval_json(const Interval& iv) { return json::array({iv.low, iv.high}); }

json survival_json(const SurvivalEstimate& est) {
  json j;
  j["replicas"] = est.replicas;
  j["horizon"] = est.horizon;
  j["survivals"] = est.survivals;
  j["estimate"] = est.estimate;
  j["wilson_95"] = interval_json(est.wilson);
  j["late_extinction_fraction"] = est.late_extinction_fraction;
  j["horizon_flag"] = est.horizon_flag;
  if (!est.extinction_times.empty()) {
    json q;
    q["q50"] = est.extinction_quantile(0.5);
    q["q90"] = est.extinction_quantile(0.9);
    q["q99"] = est.extinction_quantile(0.99);
    q["max"] = est.extinction_times.back();
    j["extinction_time_quantiles"] = q;
  }
  return j;
}

ParamAxis axis_from(const std::string& name) {
  if (name == "phi") return ParamAxis::Phi;
  if (name == "phi_A") return ParamAxis::PhiAllee;
  return ParamAxis::CapacityN;
}

struct Outputs {
  json summary;
  std::string csv;  // body without the config comment
  bool has_csv = false;
  std::string one_liner;
  int exit_code = 0;
};

Outputs run_simulate(const RunConfig& cfg, const SimulateParams& p) {
  const LatticeWindow window = cfg.window->build();
  const Configuration init =
      make_configuration(window, *cfg.init, cfg.model->max_count());
  std::vector<double> grid = p.grid;
  if (grid.empty()) {
    grid.push_back(0.0);
    if (p.horizon > 0.0) grid.push_back(p.horizon);
  }
  SimOptions opts;
  opts.record_site_counts = p.record_sites;
  const Trajectory traj = simulate(*cfg.model, window, init, p.horizon, grid,
                                   {cfg.seed, 0}, opts);
  Outputs out;
  std::ostringstream csv;
  csv << "time,total_population";
  if (p.record_sites)
    for (std::int32_t s = 0; s < window.site_count(); ++s) csv << ",s" << s;
  csv << "\n";
  for (std::size_t g = 0; g < traj.times.size(); ++g) {
    csv << fmt9(traj.times[g]) << "," << traj.totals[g];
    if (p.record_sites)
      for (auto c : traj.site_counts[g]) csv << "," << c;
    csv << "\n";
  }
  out.csv = csv.str();
  out.has_csv = true;
  json r;
  r["events"] = traj.events;
  r["cap_hits"] = traj.cap_hits;
  r["final_population"] = traj.final_state.total();
  if (traj.extinction_time) r["extinction_time"] = *traj.extinction_time;
  out.summary = r;
  out.one_liner = "simulate: " + std::to_string(traj.events) + " events, final population " +
                  std::to_string(traj.final_state.total());
  return out;
}

Outputs run_survival(const RunConfig& cfg, const SurvivalParams& p) {
  const LatticeWindow window = cfg.window->build();
  const auto est = estimate_survival(*cfg.model, window, *cfg.init, p.horizon,
                                     cfg.replicas, {cfg.seed, 0}, cfg.threads);
  Outputs out;
  out.summary = survival_json(est);
  out.one_liner = "survival: " + fmt9(est.estimate) + " [" + fmt9(est.wilson.low) +
                  ", " + fmt9(est.wilson.high) + "] over " +
                  std::to_string(est.replicas) + " replicas";
  return out;
}

Outputs run_sweep(const RunConfig& cfg, const SweepParams& p) {
  const LatticeWindow window = cfg.window->build();
  const ParamAxis axis = axis_from(p.axis);
  Outputs out;
  std::ostringstream csv;
  csv << "value,replicas,survivals,estimate,wilson_low,wilson_high\n";
  json points = json::array();
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const ModelSpec m = with_axis_value(*cfg.model, axis, p.values[i]);
    const auto est =
        estimate_survival(m, window, *cfg.init, p.horizon, cfg.replicas,
                          {cfg.seed, (static_cast<std::uint64_t>(i) << 32)},
                          cfg.threads);
    csv << fmt9(p.values[i]) << "," << est.replicas << "," << est.survivals << ","
        << fmt9(est.estimate) << "," << fmt9(est.wilson.low) << ","
        << fmt9(est.wilson.high) << "\n";
    json pt = survival_json(est);
    pt["value"] = p.values[i];
    points.push_back(pt);
  }
  out.csv = csv.str();
  out.has_csv = true;
  out.summary["axis"] = p.axis;
  out.summary["points"] = points;
  out.one_liner =
      "sweep over " + p.axis + ": " + std::to_string(p.values.size()) + " points";
  return out;
}

Outputs run_bisect(const RunConfig& cfg, const BisectParams& p) {
  const LatticeWindow window = cfg.window->build();
  BisectOptions opts;
  opts.survival_threshold = p.theta;
  opts.tolerance = p.tolerance;
  opts.initial_replicas = p.initial_replicas;
  opts.max_doublings = p.max_doublings;
  opts.threads = cfg.threads;
  const auto res = bisect_critical(*cfg.model, axis_from(p.axis), p.lo, p.hi, window,
                                   *cfg.init, p.horizon, {cfg.seed, 0}, opts);
  Outputs out;
  json j;
  j["axis"] = to_string(res.axis);
  j["bracket"] = json::array({res.bracket_low, res.bracket_high});
  j["critical"] = res.critical;
  j["budget_exhausted"] = res.budget_exhausted;
  json log = json::array();
  for (const auto& d : res.log) {
    json e;
    e["value"] = d.value;
    e["replicas"] = d.replicas_used;
    e["estimate"] = d.estimate;
    e["wilson_95"] = interval_json(d.wilson);
    e["verdict"] = d.survives ? "survive" : "extinct";
    log.push_back(e);
  }
  j["decisions"] = log;
  out.summary = j;
  std::ostringstream csv;
  csv << "value,replicas,estimate,wilson_low,wilson_high,verdict\n";
  for (const auto& d : res.log)
    csv << fmt9(d.value) << "," << d.replicas_used << "," << fmt9(d.estimate) << ","
        << fmt9(d.wilson.low) << "," << fmt9(d.wilson.high) << ","
        << (d.survives ? "survive" : "extinct") << "\n";
  out.csv = csv.str();
  out.has_csv = true;
  out.one_liner = "bisect " + p.axis + ": critical ~ " + fmt9(res.critical) + " in [" +
                  fmt9(res.bracket_low) + ", " + fmt9(res.bracket_high) + "]";
  return out;
}

json witness_json(const OrderWitness& w) {
  json j;
  j["condition"] = w.condition == OrderCondition::UpMoves ? "C+" : "C-";
  j["K"] = w.K;
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["gamma"] = w.gamma;
  j["delta"] = w.delta;
  if (!w.j.empty()) j["j"] = w.j;
  if (!w.m.empty()) j["m"] = w.m;
  if (!w.h.empty()) j["h"] = w.h;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  if (w.reduced_rule) j["reduced_rule"] = w.reduced_rule;
  return j;
}

json verdict_json(const OrderVerdict& v) {
  json j;
  switch (v.result) {
    case OrderVerdict::Result::Ordered: j["result"] = "ordered"; break;
    case OrderVerdict::Result::NotOrdered: j["result"] = "not_ordered"; break;
    case OrderVerdict::Result::Inconclusive: j["result"] = "inconclusive"; break;
  }
  if (v.witness) j["witness"] = witness_json(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
  j["evaluations"] = v.evaluations;
  return j;
}

Outputs run_check_order(const RunConfig& cfg, const CheckOrderParams& p) {
  const RateTable low = table_from_model(*cfg.model);
  const RateTable high = table_from_model(p.high);
  Outputs out;
  OrderVerdict verdict;
  if (p.method == "single") {
    verdict = check_single_change(low, high);
    out.summary["verdict"] = verdict_json(verdict);
  } else if (p.method == "cross") {
    const auto cv = cross_validate(low, high);
    verdict = cv.general;
    out.summary["verdict"] = verdict_json(cv.general);
    out.summary["single_change"] = verdict_json(cv.single);
    out.summary["agree"] = cv.agree;
  } else {
    verdict = check_general(low, high, p.k_bound);
    out.summary["verdict"] = verdict_json(verdict);
  }
  switch (verdict.result) {
    case OrderVerdict::Result::Ordered: out.exit_code = 0; break;
    case OrderVerdict::Result::NotOrdered: out.exit_code = 1; break;
    case OrderVerdict::Result::Inconclusive: out.exit_code = 2; break;
  }
  // the verdict (with any witness) goes to stdout as JSON
  out.one_liner = out.summary.dump();
  return out;
}

Outputs run_ruin(const RunConfig&, const RuinParams& p) {
  const double value = ruin_probability({p.r1, p.r2, p.j, p.p});
  Outputs out;
  out.summary["probability"] = value;
  out.one_liner = "ruin: " + fmt9(value);
  return out;
}

Outputs run_blocks(const RunConfig& cfg, const BlocksParams& p) {
  Outputs out;
  if (p.kind == "survival") {
    WetBlockOptions opts;
    opts.suppress_deaths_inside = p.phi_zero_inside;
    opts.start = p.start;
    opts.threads = cfg.threads;
    const std::vector<double> horizons =
        p.t_sweep.empty() ? std::vector<double>{p.T} : p.t_sweep;
    const auto ests = estimate_wet_probability_sweep(*cfg.model, p.L, horizons,
                                                     cfg.replicas, {cfg.seed, 0}, opts);
    json arr = json::array();
    std::ostringstream csv;
    csv << "T,replicas,hits,frequency,wilson_low,wilson_high\n";
    for (const auto& est : ests) {
      json e;
      e["T"] = est.block.period;
      e["replicas"] = est.replicas;
      e["hits"] = est.hits;
      e["frequency"] = est.frequency;
      e["wilson_95"] = interval_json(est.wilson);
      arr.push_back(e);
      csv << fmt9(est.block.period) << "," << est.replicas << "," << est.hits << ","
          << fmt9(est.frequency) << "," << fmt9(est.wilson.low) << ","
          << fmt9(est.wilson.high) << "\n";
    }
    out.summary["kind"] = "survival";
    out.summary["L"] = p.L;
    out.summary["estimates"] = arr;
    out.csv = csv.str();
    out.has_csv = true;
    out.one_liner = "blocks survival: " + std::to_string(ests.size()) + " estimate(s), last frequency " +
                    fmt9(ests.back().frequency);
  } else {
    const auto est = estimate_dry_probability(*cfg.model, p.L, p.T, cfg.replicas,
                                              {cfg.seed, 0}, cfg.threads);
    out.summary["kind"] = "extinction";
    out.summary["L"] = p.L;
    out.summary["T"] = p.T;
    out.summary["replicas"] = est.replicas;
    out.summary["hits"] = est.hits;
    out.summary["frequency"] = est.frequency;
    out.summary["wilson_95"] = interval_json(est.wilson);
    out.one_liner = "blocks extinction: frequency " + fmt9(est.frequency);
  }
  return out;
}

Outputs run_percolation(const RunConfig& cfg, const PercolationParams& p) {
  Outputs out;
  std::ostringstream csv;
  csv << "trial,percolates,max_height\n";
  int hits = 0;
  long long height_sum = 0;
  for (int trial = 0; trial < p.trials; ++trial) {
    const auto res = simulate_oriented_percolation(
        p.width, p.height, p.p, p.radius,
        splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 17)));
    hits += res.percolates ? 1 : 0;
    height_sum += res.max_height;
    csv << trial << "," << (res.percolates ? 1 : 0) << "," << res.max_height << "\n";
  }
  const auto iv = wilson_interval(hits, p.trials);
  out.summary["trials"] = p.trials;
  out.summary["percolation_frequency"] = static_cast<double>(hits) / p.trials;
  out.summary["wilson_95"] = interval_json(iv);
  out.summary["mean_max_height"] =
      static_cast<double>(height_sum) / static_cast<double>(p.trials);
  out.csv = csv.str();
  out.has_csv = true;
  out.one_liner =
      "percolation: frequency " + fmt9(static_cast<double>(hits) / p.trials);
  return out;
}

Outputs run_edge_event(const RunConfig& cfg, const EdgeEventParams& p) {
  const auto est = estimate_edge_event(*cfg.model, cfg.replicas, {cfg.seed, 0},
                                       p.cutoff, cfg.threads);
  Outputs out;
  out.summary["replicas"] = est.replicas;
  out.summary["successes"] = est.successes;
  out.summary["failures"] = est.failures;
  out.summary["undecided"] = est.undecided;
  out.summary["frequency"] = est.frequency;
  out.summary["wilson_95"] = interval_json(est.wilson);
  out.one_liner = "edge-event: frequency " + fmt9(est.frequency) + " (" +
                  std::to_string(est.undecided) + " undecided)";
  return out;
}

Outputs run_mean_occupancy(const RunConfig& cfg, const MeanOccupancyParams& p) {
  const LatticeWindow window = cfg.window->build();
  const auto series = mean_occupancy(*cfg.model, window, *cfg.init, p.horizon, p.grid,
                                     cfg.replicas, {cfg.seed, 0}, cfg.threads);
  Outputs out;
  std::ostringstream csv;
  csv << "time,mean,se\n";
  for (std::size_t g = 0; g < series.times.size(); ++g)
    csv << fmt9(series.times[g]) << "," << fmt9(series.mean[g]) << ","
        << fmt9(series.se[g]) << "\n";
  out.csv = csv.str();
  out.has_csv = true;
  out.summary["times"] = series.times;
  out.summary["mean"] = series.mean;
  out.summary["se"] = series.se;
  out.one_liner = "mean-occupancy: " + std::to_string(series.times.size()) + " grid points";
  return out;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  Outputs out;
  try {
    out = std::visit(
        [&](const auto& p) -> Outputs {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, SimulateParams>) return run_simulate(cfg, p);
          else if constexpr (std::is_same_v<T, SurvivalParams>) return run_survival(cfg, p);
          else if constexpr (std::is_same_v<T, SweepParams>) return run_sweep(cfg, p);
          else if constexpr (std::is_same_v<T, BisectParams>) return run_bisect(cfg, p);
          else if constexpr (std::is_same_v<T, CheckOrderParams>) return run_check_order(cfg, p);
          else if constexpr (std::is_same_v<T, RuinParams>) return run_ruin(cfg, p);
          else if constexpr (std::is_same_v<T, BlocksParams>) return run_blocks(cfg, p);
          else if constexpr (std::is_same_v<T, PercolationParams>) return run_percolation(cfg, p);
          else if constexpr (std::is_same_v<T, EdgeEventParams>) return run_edge_event(cfg, p);
          else return run_mean_occupancy(cfg, p);
        },
        cfg.params);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return 3;
  }

  const json echo = cfg.resolved();
  json summary;
  summary["schema_version"] = 1;
  summary["config"] = echo;
  summary["seed"] = cfg.seed;
  summary["results"] = out.summary;
  try {
    if (!cfg.out.empty()) {
      write_json_file(cfg.out + ".json", summary);
      if (out.has_csv) {
        CsvFile csv(cfg.out + ".csv", echo);
        csv.raw(out.csv.substr(0, out.csv.size() - 1));  // body already newline-terminated
      }
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 4;
  }
  log << out.one_liner << "\n";
  return out.exit_code;
}

}  // namespace metapop
