#include "snnevo/config.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

namespace snnevo {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const Json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

const Json* find(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

long long get_int(const Json& obj, const std::string& path, const char* key,
                  std::optional<long long> fallback = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required key");
  }
  if (!v->is_number_integer() && !v->is_number_unsigned())
    fail(path + "." + key, "expected an integer");
  const long long value = v->get<long long>();
  if (value < -2147483648LL || value > 2147483647LL)
    fail(path + "." + key, "out of range");
  return value;
}

std::uint64_t get_u64(const Json& obj, const std::string& path, const char* key,
                      std::optional<std::uint64_t> fallback = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required key");
  }
  if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
    fail(path + "." + key, "expected a non-negative integer");
  return v->get<std::uint64_t>();
}

double get_real(const Json& obj, const std::string& path, const char* key,
                std::optional<double> fallback = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required key");
  }
  if (!v->is_number()) fail(path + "." + key, "expected a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) fail(path + "." + key, "expected a finite number");
  return x;
}

std::string get_string(const Json& obj, const std::string& path, const char* key,
                       std::optional<std::string> fallback = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required key");
  }
  if (!v->is_string()) fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

void check_range_int(long long v, long long lo, long long hi, const std::string& path) {
  if (v < lo || v > hi)
    fail(path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void check_min_int(long long v, long long lo, const std::string& path) {
  if (v < lo) fail(path, "must be at least " + std::to_string(lo));
}

void check_prob(double v, const std::string& path) {
  if (!(v >= 0.0 && v <= 1.0)) fail(path, "must be in [0, 1]");
}

void check_non_negative(double v, const std::string& path) {
  if (!(v >= 0.0)) fail(path, "must be non-negative");
}

ScenarioSpec parse_scenario(const Json& doc) {
  const Json* section = find(doc, "scenario");
  if (!section) fail("scenario", "missing required section");
  require_object(*section, "scenario");
  reject_unknown_keys(*section, "scenario", {"name", "seed", "params", "perturbation"});

  ScenarioSpec spec;
  spec.name = get_string(*section, "scenario", "name");
  if (spec.name != "cue_assoc" && spec.name != "gridworld_forage")
    fail("scenario.name", "unknown scenario '" + spec.name + "'");
  spec.seed = get_u64(*section, "scenario", "seed", 0);

  const Json* params = find(*section, "params");
  if (params) require_object(*params, "scenario.params");
  const Json empty = Json::object();
  const Json& p = params ? *params : empty;
  if (spec.name == "cue_assoc") {
    reject_unknown_keys(p, "scenario.params",
                        {"cues", "rounds", "presentation_window", "decision_window"});
    spec.cue.cues = static_cast<int>(get_int(p, "scenario.params", "cues", 4));
    spec.cue.rounds = static_cast<int>(get_int(p, "scenario.params", "rounds", 8));
    spec.cue.presentation_window =
        static_cast<int>(get_int(p, "scenario.params", "presentation_window", 8));
    spec.cue.decision_window =
        static_cast<int>(get_int(p, "scenario.params", "decision_window", 8));
    check_min_int(spec.cue.cues, 2, "scenario.params.cues");
    check_min_int(spec.cue.rounds, 1, "scenario.params.rounds");
    check_min_int(spec.cue.presentation_window, 1, "scenario.params.presentation_window");
    check_min_int(spec.cue.decision_window, 1, "scenario.params.decision_window");
  } else {
    reject_unknown_keys(p, "scenario.params", {"grid", "food", "decision_window"});
    spec.gridworld.grid = static_cast<int>(get_int(p, "scenario.params", "grid", 5));
    spec.gridworld.food = static_cast<int>(get_int(p, "scenario.params", "food", 3));
    spec.gridworld.decision_window =
        static_cast<int>(get_int(p, "scenario.params", "decision_window", 8));
    check_min_int(spec.gridworld.grid, 2, "scenario.params.grid");
    check_min_int(spec.gridworld.food, 1, "scenario.params.food");
    if (spec.gridworld.food > spec.gridworld.grid * spec.gridworld.grid - 1)
      fail("scenario.params.food", "does not fit the grid");
    check_min_int(spec.gridworld.decision_window, 1, "scenario.params.decision_window");
  }

  const Json* pert = find(*section, "perturbation");
  if (pert) {
    require_object(*pert, "scenario.perturbation");
    reject_unknown_keys(*pert, "scenario.perturbation", {"kind", "level"});
    const std::string kind = get_string(*pert, "scenario.perturbation", "kind", "none");
    try {
      spec.perturbation.kind = parse_perturbation_kind(kind);
    } catch (const ValidationError& e) {
      fail("scenario.perturbation.kind", e.what());
    }
    spec.perturbation.level = get_real(*pert, "scenario.perturbation", "level", 0.0);
    check_prob(spec.perturbation.level, "scenario.perturbation.level");
    if (spec.perturbation.kind == Perturbation::Kind::cue_remap && spec.name != "cue_assoc")
      fail("scenario.perturbation.kind", "cue_remap applies only to cue_assoc");
    if (spec.perturbation.kind == Perturbation::Kind::layout_shift &&
        spec.name != "gridworld_forage")
      fail("scenario.perturbation.kind", "layout_shift applies only to gridworld_forage");
  }
  return spec;
}

}  // namespace

RunConfig parse_run_config(const Json& doc) {
  require_object(doc, "config");
  reject_unknown_keys(doc, "", {"search", "fitness", "scenario", "topology", "output"});

  RunConfig cfg;
  cfg.search.scenario = parse_scenario(doc);

  const Json* search = find(doc, "search");
  if (!search) fail("search", "missing required section");
  require_object(*search, "search");
  reject_unknown_keys(*search, "search",
                      {"pop_size", "generations", "tournament_k", "elitism_count",
                       "crossover_prob", "master_seed", "target_fitness", "mutation"});
  cfg.search.pop_size = static_cast<int>(get_int(*search, "search", "pop_size"));
  cfg.search.generations = static_cast<int>(get_int(*search, "search", "generations"));
  cfg.search.master_seed = get_u64(*search, "search", "master_seed");
  cfg.search.tournament_k = static_cast<int>(get_int(*search, "search", "tournament_k", 3));
  cfg.search.elitism_count = static_cast<int>(get_int(*search, "search", "elitism_count", 2));
  cfg.search.crossover_prob = get_real(*search, "search", "crossover_prob", 0.9);
  if (find(*search, "target_fitness"))
    cfg.search.target_fitness = get_real(*search, "search", "target_fitness");
  check_min_int(cfg.search.pop_size, 2, "search.pop_size");
  check_min_int(cfg.search.generations, 1, "search.generations");
  check_range_int(cfg.search.tournament_k, 1, cfg.search.pop_size, "search.tournament_k");
  check_range_int(cfg.search.elitism_count, 0, cfg.search.pop_size - 1, "search.elitism_count");
  check_prob(cfg.search.crossover_prob, "search.crossover_prob");

  const Json* mutation = find(*search, "mutation");
  if (mutation) {
    require_object(*mutation, "search.mutation");
    reject_unknown_keys(*mutation, "search.mutation",
                        {"weight_sigma", "micro_sigma", "flag_flip_prob", "per_gene_prob"});
    MutationConfig defaults;
    cfg.search.mutation.weight_sigma =
        get_real(*mutation, "search.mutation", "weight_sigma", defaults.weight_sigma);
    cfg.search.mutation.micro_sigma =
        get_real(*mutation, "search.mutation", "micro_sigma", defaults.micro_sigma);
    cfg.search.mutation.flag_flip_prob =
        get_real(*mutation, "search.mutation", "flag_flip_prob", defaults.flag_flip_prob);
    cfg.search.mutation.per_gene_prob =
        get_real(*mutation, "search.mutation", "per_gene_prob", defaults.per_gene_prob);
    check_non_negative(cfg.search.mutation.weight_sigma, "search.mutation.weight_sigma");
    check_non_negative(cfg.search.mutation.micro_sigma, "search.mutation.micro_sigma");
    check_prob(cfg.search.mutation.flag_flip_prob, "search.mutation.flag_flip_prob");
    check_prob(cfg.search.mutation.per_gene_prob, "search.mutation.per_gene_prob");
  }

  const Json* fitness = find(doc, "fitness");
  if (fitness) {
    require_object(*fitness, "fitness");
    reject_unknown_keys(*fitness, "fitness",
                        {"k", "lambda_disp", "eps_plastic", "penalty", "t_max"});
  }
  const Json empty = Json::object();
  const Json& f = fitness ? *fitness : empty;
  FitnessConfig fit_defaults;
  cfg.search.fitness.episodes = static_cast<int>(get_int(f, "fitness", "k", fit_defaults.episodes));
  cfg.search.fitness.dispersion_weight =
      get_real(f, "fitness", "lambda_disp", fit_defaults.dispersion_weight);
  cfg.search.fitness.plasticity_epsilon =
      get_real(f, "fitness", "eps_plastic", fit_defaults.plasticity_epsilon);
  cfg.search.fitness.penalty =
      get_real(f, "fitness", "penalty", 10.0 * scenario_max_score(cfg.search.scenario));
  cfg.search.fitness.t_max = static_cast<int>(get_int(f, "fitness", "t_max", fit_defaults.t_max));
  check_min_int(cfg.search.fitness.episodes, 2, "fitness.k");
  check_min_int(cfg.search.fitness.t_max, 1, "fitness.t_max");
  check_non_negative(cfg.search.fitness.dispersion_weight, "fitness.lambda_disp");
  check_non_negative(cfg.search.fitness.plasticity_epsilon, "fitness.eps_plastic");
  check_non_negative(cfg.search.fitness.penalty, "fitness.penalty");

  const Json* topology = find(doc, "topology");
  if (topology) {
    require_object(*topology, "topology");
    reject_unknown_keys(*topology, "topology", {"n", "n_in", "n_out"});
  }
  const Json& t = topology ? *topology : empty;
  cfg.search.topology.n = static_cast<int>(get_int(t, "topology", "n", 32));
  cfg.search.topology.n_in =
      static_cast<int>(get_int(t, "topology", "n_in", scenario_obs_dim(cfg.search.scenario)));
  cfg.search.topology.n_out =
      static_cast<int>(get_int(t, "topology", "n_out", scenario_n_actions(cfg.search.scenario)));
  check_min_int(cfg.search.topology.n, 1, "topology.n");
  if (cfg.search.topology.n_in + cfg.search.topology.n_out > cfg.search.topology.n)
    fail("topology.n", "must be at least n_in + n_out");
  if (cfg.search.topology.n_in != scenario_obs_dim(cfg.search.scenario))
    fail("topology.n_in", "must equal the scenario observation dimension (" +
                              std::to_string(scenario_obs_dim(cfg.search.scenario)) + ")");
  if (cfg.search.topology.n_out != scenario_n_actions(cfg.search.scenario))
    fail("topology.n_out", "must equal the scenario action count (" +
                               std::to_string(scenario_n_actions(cfg.search.scenario)) + ")");

  const Json* output = find(doc, "output");
  if (output) {
    require_object(*output, "output");
    reject_unknown_keys(*output, "output", {"checkpoint_every"});
    cfg.checkpoint_every = static_cast<int>(get_int(*output, "output", "checkpoint_every", 1));
    check_min_int(cfg.checkpoint_every, 0, "output.checkpoint_every");
  }

  validate_search_config(cfg.search);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = load_json_file(path);
  } catch (const DataError& e) {
    throw ValidationError(e.what());  // malformed config text is a validation failure
  }
  return parse_run_config(doc);
}

Json resolved_config_json(const RunConfig& cfg) {
  const Json full = search_config_to_json(cfg.search);
  Json doc;
  Json search;
  search["pop_size"] = full["pop_size"];
  search["generations"] = full["generations"];
  search["tournament_k"] = full["tournament_k"];
  search["elitism_count"] = full["elitism_count"];
  search["crossover_prob"] = full["crossover_prob"];
  search["master_seed"] = full["master_seed"];
  search["target_fitness"] = full["target_fitness"];
  search["mutation"] = full["mutation"];
  doc["search"] = std::move(search);
  doc["fitness"] = full["fitness"];
  doc["scenario"] = full["scenario"];
  doc["topology"] = full["topology"];
  Json output;
  output["checkpoint_every"] = cfg.checkpoint_every;
  doc["output"] = std::move(output);
  return doc;
}

}  // namespace snnevo
