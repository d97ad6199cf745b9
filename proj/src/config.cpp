#include "metapop/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace metapop {

using nlohmann::json;

namespace {

// Collects validation problems with their JSON paths; parsing never throws on
// bad user input, it reports everything at once.
struct Errors {
  std::vector<std::string> list;
  void add(const std::string& path, const std::string& what) {
    list.push_back(path + ": " + what);
  }
  bool empty() const { return list.empty(); }
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, Errors& errs) {
  if (!obj.is_object()) {
    errs.add(path, "expected an object");
    return;
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) errs.add(path + "/" + key, "unknown key");
  }
}

template <typename T>
std::optional<T> get_number(const json& obj, const std::string& path,
                            const std::string& key, Errors& errs,
                            std::optional<T> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (!fallback) errs.add(path + "/" + key, "missing required field");
    return fallback;
  }
  const auto& v = obj.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) {
      errs.add(path + "/" + key, "expected a number");
      return fallback;
    }
  } else {
    if (!v.is_number_integer()) {
      errs.add(path + "/" + key, "expected an integer");
      return fallback;
    }
  }
  return v.get<T>();
}

std::optional<std::string> get_string(const json& obj, const std::string& path,
                                      const std::string& key, Errors& errs,
                                      std::optional<std::string> fallback =
                                          std::nullopt) {
  if (!obj.contains(key)) {
    if (!fallback) errs.add(path + "/" + key, "missing required field");
    return fallback;
  }
  if (!obj.at(key).is_string()) {
    errs.add(path + "/" + key, "expected a string");
    return fallback;
  }
  return obj.at(key).get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key,
              Errors& errs, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) {
    errs.add(path + "/" + key, "expected a boolean");
    return fallback;
  }
  return obj.at(key).get<bool>();
}

std::vector<double> get_number_list(const json& obj, const std::string& path,
                                    const std::string& key, Errors& errs) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  if (!obj.at(key).is_array()) {
    errs.add(path + "/" + key, "expected an array of numbers");
    return out;
  }
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) {
      errs.add(path + "/" + key, "expected an array of numbers");
      return {};
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::optional<ModelSpec> parse_model(const json& obj, const std::string& path,
                                     Errors& all_errs) {
  Errors errs;
  const auto merge = [&]() {
    for (auto& e : errs.list) all_errs.list.push_back(std::move(e));
  };
  check_keys(obj, path,
             {"variant", "phi", "lambda", "N", "phi_A", "N_A", "M", "phi_tilde",
              "sim_cap", "relaxed"},
             errs);
  if (!obj.is_object()) {
    merge();
    return std::nullopt;
  }
  ModelSpec m;
  const auto variant = get_string(obj, path, "variant", errs);
  if (!variant) {
    merge();
    return std::nullopt;
  }
  if (*variant == "model1") m.variant = ModelVariant::ModelI;
  else if (*variant == "model2") m.variant = ModelVariant::ModelII;
  else if (*variant == "model3") m.variant = ModelVariant::ModelIII;
  else if (*variant == "model4") m.variant = ModelVariant::ModelIV;
  else {
    errs.add(path + "/variant", "expected model1|model2|model3|model4");
    merge();
    return std::nullopt;
  }
  m.phi = get_number<double>(obj, path, "phi", errs).value_or(1.0);
  m.lambda = get_number<double>(obj, path, "lambda", errs).value_or(1.0);
  m.capacity = get_number<int>(obj, path, "N", errs).value_or(1);
  if (m.uses_allee()) {
    m.phi_allee = get_number<double>(obj, path, "phi_A", errs).value_or(1.0);
    m.allee_threshold = get_number<int>(obj, path, "N_A", errs).value_or(0);
  } else {
    if (obj.contains("phi_A")) errs.add(path + "/phi_A", "not a parameter of this model");
    if (obj.contains("N_A")) errs.add(path + "/N_A", "not a parameter of this model");
  }
  if (m.variant == ModelVariant::ModelIII) {
    m.flock_max = get_number<int>(obj, path, "M", errs).value_or(1);
  } else if (obj.contains("M")) {
    errs.add(path + "/M", "not a parameter of this model");
  }
  if (m.variant == ModelVariant::ModelIV) {
    m.phi_over = get_number<double>(obj, path, "phi_tilde", errs).value_or(1.0);
    m.sim_cap = get_number<int>(obj, path, "sim_cap", errs, {0}).value_or(0);
  } else {
    if (obj.contains("phi_tilde"))
      errs.add(path + "/phi_tilde", "not a parameter of this model");
    if (obj.contains("sim_cap"))
      errs.add(path + "/sim_cap", "not a parameter of this model");
  }
  m.relaxed_allee = get_bool(obj, path, "relaxed", errs, false);
  if (!errs.empty()) {
    merge();
    return std::nullopt;
  }
  try {
    return m.validated();
  } catch (const std::exception& e) {
    all_errs.add(path, e.what());
    return std::nullopt;
  }
}

std::optional<WindowSpec> parse_window(const json& obj, const std::string& path,
                                       Errors& all_errs) {
  Errors errs;
  const auto merge = [&]() {
    for (auto& e : errs.list) all_errs.list.push_back(std::move(e));
  };
  check_keys(obj, path, {"dimension", "sides", "boundary"}, errs);
  if (!obj.is_object()) {
    merge();
    return std::nullopt;
  }
  WindowSpec w;
  w.dimension = get_number<int>(obj, path, "dimension", errs).value_or(2);
  if (obj.contains("sides") && obj.at("sides").is_array()) {
    for (const auto& v : obj.at("sides")) {
      if (!v.is_number_integer()) {
        errs.add(path + "/sides", "expected integers");
        break;
      }
      w.sides.push_back(v.get<int>());
    }
  } else {
    errs.add(path + "/sides", "missing required field");
  }
  const auto b = get_string(obj, path, "boundary", errs, {"periodic"});
  if (b) {
    if (*b == "periodic") w.boundary = Boundary::Periodic;
    else if (*b == "zero_outside") w.boundary = Boundary::ZeroOutside;
    else if (*b == "frozen_full_outside") w.boundary = Boundary::FrozenFullOutside;
    else errs.add(path + "/boundary",
                  "expected periodic|zero_outside|frozen_full_outside");
  }
  if (!errs.empty()) {
    merge();
    return std::nullopt;
  }
  try {
    w.build();
  } catch (const std::exception& e) {
    all_errs.add(path, e.what());
    return std::nullopt;
  }
  return w;
}

Site parse_site(const json& v, const std::string& path, Errors& errs) {
  Site s;
  if (!v.is_array()) {
    errs.add(path, "expected an array of coordinates");
    return s;
  }
  for (const auto& c : v) {
    if (!c.is_number_integer()) {
      errs.add(path, "expected integer coordinates");
      return {};
    }
    s.push_back(c.get<int>());
  }
  return s;
}

std::optional<InitSpec> parse_init(const json& obj, const std::string& path,
                                   Errors& all_errs) {
  Errors errs;
  const auto merge = [&]() {
    for (auto& e : errs.list) all_errs.list.push_back(std::move(e));
  };
  check_keys(obj, path, {"kind", "count", "site", "cells"}, errs);
  if (!obj.is_object()) {
    merge();
    return std::nullopt;
  }
  const auto kind = get_string(obj, path, "kind", errs);
  if (!kind) {
    merge();
    return std::nullopt;
  }
  InitSpec init;
  if (*kind == "empty") {
    init.kind = InitSpec::Kind::Empty;
  } else if (*kind == "full") {
    init.kind = InitSpec::Kind::FullAt;
    init.count = -1;  // resolved to the model capacity later
  } else if (*kind == "full_at") {
    init.kind = InitSpec::Kind::FullAt;
    init.count = get_number<int>(obj, path, "count", errs).value_or(0);
  } else if (*kind == "singleton") {
    init.kind = InitSpec::Kind::Singleton;
    init.count = get_number<int>(obj, path, "count", errs, {1}).value_or(1);
    if (obj.contains("site")) init.site = parse_site(obj.at("site"), path + "/site", errs);
    else errs.add(path + "/site", "missing required field");
  } else if (*kind == "explicit") {
    init.kind = InitSpec::Kind::Explicit;
    if (!obj.contains("cells") || !obj.at("cells").is_array()) {
      errs.add(path + "/cells", "missing required field");
    } else {
      int i = 0;
      for (const auto& cell : obj.at("cells")) {
        const std::string cp = path + "/cells/" + std::to_string(i++);
        check_keys(cell, cp, {"site", "count"}, errs);
        if (!cell.is_object()) continue;
        Site s;
        if (cell.contains("site")) s = parse_site(cell.at("site"), cp + "/site", errs);
        else errs.add(cp + "/site", "missing required field");
        int c = 0;
        if (cell.contains("count") && cell.at("count").is_number_integer())
          c = cell.at("count").get<int>();
        else
          errs.add(cp + "/count", "missing required field");
        init.cells.emplace_back(std::move(s), c);
      }
    }
  } else {
    errs.add(path + "/kind", "expected empty|full|full_at|singleton|explicit");
    merge();
    return std::nullopt;
  }
  if (!errs.empty()) {
    merge();
    return std::nullopt;
  }
  return init;
}

const std::set<std::string> kExperiments = {
    "simulate",  "survival",    "sweep",      "bisect",     "check-order",
    "ruin",      "blocks",      "percolation", "edge-event", "mean-occupancy"};

// which top-level blocks each experiment requires
bool needs_model(const std::string& e) {
  return e != "ruin" && e != "percolation";
}
bool needs_window(const std::string& e) {
  return e == "simulate" || e == "survival" || e == "sweep" || e == "bisect" ||
         e == "mean-occupancy";
}

}  // namespace

ParseResult parse_config_text(const std::string& text) {
  ParseResult result;
  Errors errs;
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const std::exception& e) {
    result.errors.push_back(std::string("json: ") + e.what());
    return result;
  }
  check_keys(root, "", {"experiment", "seed", "replicas", "threads", "out", "model",
                        "window", "init", "params"},
             errs);
  RunConfig cfg;
  const auto exp = get_string(root, "", "experiment", errs);
  if (exp) {
    if (!kExperiments.count(*exp))
      errs.add("/experiment", "unknown experiment '" + *exp + "'");
    else
      cfg.experiment = *exp;
  }
  cfg.seed = get_number<std::uint64_t>(root, "", "seed", errs, {0}).value_or(0);
  cfg.replicas = get_number<int>(root, "", "replicas", errs, {100}).value_or(100);
  cfg.threads = get_number<int>(root, "", "threads", errs, {1}).value_or(1);
  cfg.out = get_string(root, "", "out", errs, {""}).value_or("");
  if (cfg.replicas < 1) errs.add("/replicas", "must be >= 1");
  if (cfg.threads < 1) errs.add("/threads", "must be >= 1");

  if (root.contains("model")) cfg.model = parse_model(root.at("model"), "/model", errs);
  if (root.contains("window"))
    cfg.window = parse_window(root.at("window"), "/window", errs);
  if (root.contains("init")) cfg.init = parse_init(root.at("init"), "/init", errs);

  if (cfg.experiment.empty()) {
    result.errors = errs.list;
    return result;
  }
  if (needs_model(cfg.experiment) && !cfg.model)
    errs.add("/model", "required by experiment '" + cfg.experiment + "'");
  if (needs_window(cfg.experiment)) {
    if (!cfg.window) errs.add("/window", "required by experiment '" + cfg.experiment + "'");
    if (!cfg.init) errs.add("/init", "required by experiment '" + cfg.experiment + "'");
  }

  const json params = root.contains("params") ? root.at("params") : json::object();
  const std::string pp = "/params";
  const std::string& e = cfg.experiment;
  if (e == "simulate") {
    check_keys(params, pp, {"horizon", "grid", "record_sites"}, errs);
    SimulateParams p;
    p.horizon = get_number<double>(params, pp, "horizon", errs).value_or(0.0);
    p.grid = get_number_list(params, pp, "grid", errs);
    p.record_sites = get_bool(params, pp, "record_sites", errs, false);
    if (p.horizon < 0.0) errs.add(pp + "/horizon", "must be >= 0");
    cfg.params = p;
  } else if (e == "survival") {
    check_keys(params, pp, {"horizon"}, errs);
    SurvivalParams p;
    p.horizon = get_number<double>(params, pp, "horizon", errs).value_or(0.0);
    if (p.horizon <= 0.0) errs.add(pp + "/horizon", "must be > 0");
    cfg.params = p;
  } else if (e == "sweep") {
    check_keys(params, pp, {"axis", "values", "from", "to", "steps", "horizon"}, errs);
    SweepParams p;
    p.axis = get_string(params, pp, "axis", errs).value_or("");
    p.horizon = get_number<double>(params, pp, "horizon", errs).value_or(0.0);
    p.values = get_number_list(params, pp, "values", errs);
    if (p.values.empty() && params.contains("from")) {
      const double from = get_number<double>(params, pp, "from", errs).value_or(0.0);
      const double to = get_number<double>(params, pp, "to", errs).value_or(0.0);
      const int steps = get_number<int>(params, pp, "steps", errs).value_or(0);
      if (steps < 2) errs.add(pp + "/steps", "must be >= 2");
      else
        for (int i = 0; i < steps; ++i)
          p.values.push_back(from + (to - from) * i / (steps - 1));
    }
    if (p.values.empty()) errs.add(pp + "/values", "sweep needs values");
    for (std::size_t i = 1; i < p.values.size(); ++i)
      if (p.values[i] <= p.values[i - 1]) {
        errs.add(pp + "/values", "must be strictly increasing");
        break;
      }
    if (p.axis != "phi" && p.axis != "phi_A" && p.axis != "N")
      errs.add(pp + "/axis", "expected phi|phi_A|N");
    if (p.horizon <= 0.0) errs.add(pp + "/horizon", "must be > 0");
    cfg.params = p;
  } else if (e == "bisect") {
    check_keys(params, pp,
               {"axis", "lo", "hi", "theta", "tolerance", "initial_replicas",
                "max_doublings", "horizon"},
               errs);
    BisectParams p;
    p.axis = get_string(params, pp, "axis", errs).value_or("");
    p.lo = get_number<double>(params, pp, "lo", errs).value_or(0.0);
    p.hi = get_number<double>(params, pp, "hi", errs).value_or(0.0);
    p.theta = get_number<double>(params, pp, "theta", errs, {0.05}).value_or(0.05);
    p.tolerance =
        get_number<double>(params, pp, "tolerance", errs, {0.05}).value_or(0.05);
    p.initial_replicas =
        get_number<int>(params, pp, "initial_replicas", errs, {200}).value_or(200);
    p.max_doublings =
        get_number<int>(params, pp, "max_doublings", errs, {6}).value_or(6);
    p.horizon = get_number<double>(params, pp, "horizon", errs).value_or(0.0);
    if (p.axis != "phi" && p.axis != "phi_A" && p.axis != "N")
      errs.add(pp + "/axis", "expected phi|phi_A|N");
    if (!(p.lo < p.hi)) errs.add(pp + "/lo", "need lo < hi");
    if (p.theta <= 0.0 || p.theta >= 1.0) errs.add(pp + "/theta", "need 0 < theta < 1");
    if (p.tolerance <= 0.0) errs.add(pp + "/tolerance", "must be > 0");
    if (p.horizon <= 0.0) errs.add(pp + "/horizon", "must be > 0");
    cfg.params = p;
  } else if (e == "check-order") {
    check_keys(params, pp, {"high_model", "method", "k_bound"}, errs);
    CheckOrderParams p;
    if (params.contains("high_model")) {
      const auto high = parse_model(params.at("high_model"), pp + "/high_model", errs);
      if (high) p.high = *high;
    } else {
      errs.add(pp + "/high_model", "missing required field");
    }
    p.method = get_string(params, pp, "method", errs, {"general"}).value_or("general");
    if (p.method != "general" && p.method != "single" && p.method != "cross")
      errs.add(pp + "/method", "expected general|single|cross");
    p.k_bound = get_number<int>(params, pp, "k_bound", errs, {0}).value_or(0);
    if (p.k_bound < 0) errs.add(pp + "/k_bound", "must be >= 0");
    cfg.params = p;
  } else if (e == "ruin") {
    check_keys(params, pp, {"r1", "r2", "j", "p"}, errs);
    RuinParams p;
    p.r1 = get_number<long long>(params, pp, "r1", errs).value_or(0);
    p.r2 = get_number<long long>(params, pp, "r2", errs).value_or(1);
    p.j = get_number<long long>(params, pp, "j", errs).value_or(0);
    p.p = get_number<double>(params, pp, "p", errs).value_or(0.5);
    if (p.r1 >= p.r2) errs.add(pp + "/r1", "need r1 < r2");
    if (p.j < p.r1 || p.j > p.r2) errs.add(pp + "/j", "need r1 <= j <= r2");
    if (!(p.p > 0.0) || !(p.p < 1.0)) errs.add(pp + "/p", "need 0 < p < 1");
    cfg.params = p;
  } else if (e == "blocks") {
    check_keys(params, pp, {"kind", "L", "T", "phi_zero_inside", "start", "T_sweep"},
               errs);
    BlocksParams p;
    p.kind = get_string(params, pp, "kind", errs).value_or("");
    p.L = get_number<int>(params, pp, "L", errs).value_or(1);
    p.T = get_number<double>(params, pp, "T", errs, {0.0}).value_or(0.0);
    p.phi_zero_inside = get_bool(params, pp, "phi_zero_inside", errs, false);
    p.t_sweep = get_number_list(params, pp, "T_sweep", errs);
    if (params.contains("start")) {
      const Site s = parse_site(params.at("start"), pp + "/start", errs);
      if (s.size() == 2) p.start = std::array<int, 2>{s[0], s[1]};
      else errs.add(pp + "/start", "expected two coordinates");
    }
    if (p.kind != "survival" && p.kind != "extinction")
      errs.add(pp + "/kind", "expected survival|extinction");
    if (p.L < 1) errs.add(pp + "/L", "must be >= 1");
    if (p.T < 0.0) errs.add(pp + "/T", "must be >= 0");
    if (p.t_sweep.empty() && !params.contains("T"))
      errs.add(pp + "/T", "missing required field");
    cfg.params = p;
  } else if (e == "percolation") {
    check_keys(params, pp, {"width", "height", "p", "radius", "trials"}, errs);
    PercolationParams p;
    p.width = get_number<int>(params, pp, "width", errs).value_or(100);
    p.height = get_number<int>(params, pp, "height", errs).value_or(100);
    p.p = get_number<double>(params, pp, "p", errs).value_or(0.5);
    p.radius = get_number<int>(params, pp, "radius", errs, {0}).value_or(0);
    p.trials = get_number<int>(params, pp, "trials", errs, {100}).value_or(100);
    if (p.width < 1) errs.add(pp + "/width", "must be >= 1");
    if (p.height < 0) errs.add(pp + "/height", "must be >= 0");
    if (p.p < 0.0 || p.p > 1.0) errs.add(pp + "/p", "must lie in [0,1]");
    if (p.radius < 0) errs.add(pp + "/radius", "must be >= 0");
    if (p.trials < 1) errs.add(pp + "/trials", "must be >= 1");
    cfg.params = p;
  } else if (e == "edge-event") {
    check_keys(params, pp, {"cutoff"}, errs);
    EdgeEventParams p;
    p.cutoff = get_number<double>(params, pp, "cutoff", errs, {200.0}).value_or(200.0);
    if (p.cutoff <= 0.0) errs.add(pp + "/cutoff", "must be > 0");
    cfg.params = p;
  } else if (e == "mean-occupancy") {
    check_keys(params, pp, {"horizon", "grid"}, errs);
    MeanOccupancyParams p;
    p.horizon = get_number<double>(params, pp, "horizon", errs).value_or(0.0);
    p.grid = get_number_list(params, pp, "grid", errs);
    if (p.horizon < 0.0) errs.add(pp + "/horizon", "must be >= 0");
    for (double g : p.grid)
      if (g < 0.0 || g > p.horizon) {
        errs.add(pp + "/grid", "grid times must lie in [0, horizon]");
        break;
      }
    cfg.params = p;
  }

  // cross-block checks that need the model
  if (cfg.model && cfg.init && cfg.window) {
    try {
      InitSpec init = *cfg.init;
      if (init.kind == InitSpec::Kind::FullAt && init.count == -1)
        init.count = cfg.model->capacity;
      make_configuration(cfg.window->build(), init, cfg.model->max_count());
    } catch (const std::exception& ex) {
      errs.add("/init", ex.what());
    }
  }

  result.errors = errs.list;
  if (errs.empty()) {
    if (cfg.model && cfg.init && cfg.init->kind == InitSpec::Kind::FullAt &&
        cfg.init->count == -1)
      cfg.init->count = cfg.model->capacity;
    result.config = std::move(cfg);
  }
  return result;
}

ParseResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back("cannot open config file: " + path);
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json model_to_json(const ModelSpec& m) {
  json j;
  j["variant"] = to_string(m.variant);
  j["phi"] = m.phi;
  j["lambda"] = m.lambda;
  j["N"] = m.capacity;
  if (m.uses_allee()) {
    j["phi_A"] = m.phi_allee;
    j["N_A"] = m.allee_threshold;
  }
  if (m.variant == ModelVariant::ModelIII) j["M"] = m.flock_max;
  if (m.variant == ModelVariant::ModelIV) {
    j["phi_tilde"] = m.phi_over;
    j["sim_cap"] = m.sim_cap;
  }
  if (m.relaxed_allee) j["relaxed"] = true;
  return j;
}

json RunConfig::resolved() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["replicas"] = replicas;
  j["threads"] = threads;
  if (!out.empty()) j["out"] = out;
  if (model) j["model"] = model_to_json(*model);
  if (window) {
    json w;
    w["dimension"] = window->dimension;
    w["sides"] = window->sides;
    w["boundary"] = to_string(window->boundary);
    j["window"] = w;
  }
  if (init) {
    json i;
    switch (init->kind) {
      case InitSpec::Kind::Empty:
        i["kind"] = "empty";
        break;
      case InitSpec::Kind::FullAt:
        i["kind"] = "full_at";
        i["count"] = init->count;
        break;
      case InitSpec::Kind::Singleton:
        i["kind"] = "singleton";
        i["site"] = init->site;
        i["count"] = init->count;
        break;
      case InitSpec::Kind::Explicit: {
        i["kind"] = "explicit";
        json cells = json::array();
        for (const auto& [site, count] : init->cells) {
          json c;
          c["site"] = site;
          c["count"] = count;
          cells.push_back(c);
        }
        i["cells"] = cells;
        break;
      }
    }
    j["init"] = i;
  }
  json p;
  std::visit(
      [&p](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SimulateParams>) {
          p["horizon"] = v.horizon;
          if (!v.grid.empty()) p["grid"] = v.grid;
          p["record_sites"] = v.record_sites;
        } else if constexpr (std::is_same_v<T, SurvivalParams>) {
          p["horizon"] = v.horizon;
        } else if constexpr (std::is_same_v<T, SweepParams>) {
          p["axis"] = v.axis;
          p["values"] = v.values;
          p["horizon"] = v.horizon;
        } else if constexpr (std::is_same_v<T, BisectParams>) {
          p["axis"] = v.axis;
          p["lo"] = v.lo;
          p["hi"] = v.hi;
          p["theta"] = v.theta;
          p["tolerance"] = v.tolerance;
          p["initial_replicas"] = v.initial_replicas;
          p["max_doublings"] = v.max_doublings;
          p["horizon"] = v.horizon;
        } else if constexpr (std::is_same_v<T, CheckOrderParams>) {
          p["high_model"] = model_to_json(v.high);
          p["method"] = v.method;
          p["k_bound"] = v.k_bound;
        } else if constexpr (std::is_same_v<T, RuinParams>) {
          p["r1"] = v.r1;
          p["r2"] = v.r2;
          p["j"] = v.j;
          p["p"] = v.p;
        } else if constexpr (std::is_same_v<T, BlocksParams>) {
          p["kind"] = v.kind;
          p["L"] = v.L;
          p["T"] = v.T;
          p["phi_zero_inside"] = v.phi_zero_inside;
          if (v.start) p["start"] = {(*v.start)[0], (*v.start)[1]};
          if (!v.t_sweep.empty()) p["T_sweep"] = v.t_sweep;
        } else if constexpr (std::is_same_v<T, PercolationParams>) {
          p["width"] = v.width;
          p["height"] = v.height;
          p["p"] = v.p;
          p["radius"] = v.radius;
          p["trials"] = v.trials;
        } else if constexpr (std::is_same_v<T, EdgeEventParams>) {
          p["cutoff"] = v.cutoff;
        } else if constexpr (std::is_same_v<T, MeanOccupancyParams>) {
          p["horizon"] = v.horizon;
          if (!v.grid.empty()) p["grid"] = v.grid;
        }
      },
      params);
  j["params"] = p;
  return j;
}

}  // namespace metapop
