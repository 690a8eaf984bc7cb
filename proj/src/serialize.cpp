#include "snnevo/serialize.hpp"

#include <fstream>
#include <sstream>

namespace snnevo {

namespace {

const Json& member(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T number(const Json& j, const char* key, const char* what) {
  const Json& v = member(j, key, what);
  if (!v.is_number()) throw DataError(std::string(what) + ": field '" + key + "' must be a number");
  return v.get<T>();
}

}  // namespace

Json genome_to_json(const Genome& g) {
  Json j;
  j["version"] = kGenomeFormatVersion;
  j["n"] = g.n;
  j["weight_genes"] = g.weight_genes;
  j["micro_genes"] = g.micro_genes;
  j["flag_genes"] = g.flag_genes;
  return j;
}

Genome genome_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("genome: expected an object");
  try {
    const int version = number<int>(j, "version", "genome");
    if (version != kGenomeFormatVersion)
      throw VersionError("genome: unsupported version " + std::to_string(version));
    Genome g;
    g.n = number<int>(j, "n", "genome");
    if (g.n < 1) throw DataError("genome: n must be positive");
    member(j, "weight_genes", "genome").get_to(g.weight_genes);
    member(j, "micro_genes", "genome").get_to(g.micro_genes);
    member(j, "flag_genes", "genome").get_to(g.flag_genes);
    if (g.weight_genes.size() != static_cast<std::size_t>(g.n) * g.n)
      throw DataError("genome: weight_genes length must be n*n");
    for (std::uint8_t f : g.flag_genes)
      if (f > 1) throw DataError("genome: flag genes must be bits");
    return g;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("genome: malformed field (") + e.what() + ")");
  } catch (const DataError& e) {
    throw ValidationError(e.what());  // genome files are user inputs: parse failures validate
  }
}

Json signature_to_json(const BehaviorSignature& s) {
  Json j;
  j["actions"] = s.actions;
  j["observations_hash"] = s.observations_hash;
  j["score"] = s.score;
  return j;
}

BehaviorSignature signature_from_json(const Json& j) {
  BehaviorSignature s;
  member(j, "actions", "signature").get_to(s.actions);
  s.observations_hash = number<std::uint64_t>(j, "observations_hash", "signature");
  s.score = number<double>(j, "score", "signature");
  return s;
}

Json episode_trace_to_json(const EpisodeTrace& trace) {
  Json j;
  Json steps = Json::array();
  for (const auto& [obs, action] : trace.steps) {
    Json step;
    step["observation"] = obs.values;
    step["action"] = action;
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  j["score"] = trace.score;
  return j;
}

Json fitness_report_to_json(const FitnessReport& r) {
  Json j;
  j["mean_score"] = r.mean_score;
  j["dispersion"] = r.dispersion;
  j["plasticity_magnitude"] = r.plasticity_magnitude;
  j["fitness"] = r.fitness;
  Json episodes = Json::array();
  for (const EpisodeRecord& e : r.episodes) {
    Json je;
    je["score"] = e.score;
    je["signature"] = signature_to_json(e.signature);
    je["plasticity"] = e.plasticity;
    episodes.push_back(std::move(je));
  }
  j["episodes"] = std::move(episodes);
  return j;
}

FitnessReport fitness_report_from_json(const Json& j) {
  FitnessReport r;
  r.mean_score = number<double>(j, "mean_score", "report");
  r.dispersion = number<double>(j, "dispersion", "report");
  r.plasticity_magnitude = number<double>(j, "plasticity_magnitude", "report");
  r.fitness = number<double>(j, "fitness", "report");
  for (const Json& je : member(j, "episodes", "report")) {
    EpisodeRecord e;
    e.score = number<double>(je, "score", "report");
    e.signature = signature_from_json(member(je, "signature", "report"));
    e.plasticity = number<double>(je, "plasticity", "report");
    r.episodes.push_back(std::move(e));
  }
  return r;
}

Json convergence_report_to_json(const ConvergenceReport& r) {
  Json j;
  j["converged"] = r.converged;
  if (r.n_star)
    j["n_star"] = *r.n_star;
  else
    j["n_star"] = nullptr;
  j["consecutive_distances"] = r.consecutive_distances;
  j["final_score"] = r.final_score;
  j["stability_window"] = r.stability_window;
  return j;
}

ConvergenceReport convergence_report_from_json(const Json& j) {
  ConvergenceReport r;
  r.converged = member(j, "converged", "report").get<bool>();
  const Json& n_star = member(j, "n_star", "report");
  if (!n_star.is_null()) r.n_star = n_star.get<int>();
  member(j, "consecutive_distances", "report").get_to(r.consecutive_distances);
  r.final_score = number<double>(j, "final_score", "report");
  r.stability_window = number<int>(j, "stability_window", "report");
  return r;
}

Json scenario_spec_to_json(const ScenarioSpec& s) {
  Json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  Json params;
  if (s.name == "gridworld_forage") {
    params["grid"] = s.gridworld.grid;
    params["food"] = s.gridworld.food;
    params["decision_window"] = s.gridworld.decision_window;
  } else {
    params["cues"] = s.cue.cues;
    params["rounds"] = s.cue.rounds;
    params["presentation_window"] = s.cue.presentation_window;
    params["decision_window"] = s.cue.decision_window;
  }
  j["params"] = std::move(params);
  Json pert;
  pert["kind"] = perturbation_kind_name(s.perturbation.kind);
  pert["level"] = s.perturbation.level;
  j["perturbation"] = std::move(pert);
  return j;
}

ScenarioSpec scenario_spec_from_json(const Json& j) {
  ScenarioSpec s;
  s.name = member(j, "name", "scenario").get<std::string>();
  s.seed = number<std::uint64_t>(j, "seed", "scenario");
  const Json& params = member(j, "params", "scenario");
  if (s.name == "gridworld_forage") {
    s.gridworld.grid = number<int>(params, "grid", "scenario");
    s.gridworld.food = number<int>(params, "food", "scenario");
    s.gridworld.decision_window = number<int>(params, "decision_window", "scenario");
  } else {
    s.cue.cues = number<int>(params, "cues", "scenario");
    s.cue.rounds = number<int>(params, "rounds", "scenario");
    s.cue.presentation_window = number<int>(params, "presentation_window", "scenario");
    s.cue.decision_window = number<int>(params, "decision_window", "scenario");
  }
  const Json& pert = member(j, "perturbation", "scenario");
  s.perturbation.kind =
      parse_perturbation_kind(member(pert, "kind", "scenario").get<std::string>());
  s.perturbation.level = number<double>(pert, "level", "scenario");
  return s;
}

Json search_config_to_json(const SearchConfig& c) {
  Json j;
  j["pop_size"] = c.pop_size;
  j["generations"] = c.generations;
  j["tournament_k"] = c.tournament_k;
  j["elitism_count"] = c.elitism_count;
  j["crossover_prob"] = c.crossover_prob;
  j["master_seed"] = c.master_seed;
  if (c.target_fitness)
    j["target_fitness"] = *c.target_fitness;
  else
    j["target_fitness"] = nullptr;
  Json mutation;
  mutation["weight_sigma"] = c.mutation.weight_sigma;
  mutation["micro_sigma"] = c.mutation.micro_sigma;
  mutation["flag_flip_prob"] = c.mutation.flag_flip_prob;
  mutation["per_gene_prob"] = c.mutation.per_gene_prob;
  j["mutation"] = std::move(mutation);
  Json fitness;
  fitness["k"] = c.fitness.episodes;
  fitness["lambda_disp"] = c.fitness.dispersion_weight;
  fitness["eps_plastic"] = c.fitness.plasticity_epsilon;
  fitness["penalty"] = c.fitness.penalty;
  fitness["t_max"] = c.fitness.t_max;
  j["fitness"] = std::move(fitness);
  j["scenario"] = scenario_spec_to_json(c.scenario);
  Json topology;
  topology["n"] = c.topology.n;
  topology["n_in"] = c.topology.n_in;
  topology["n_out"] = c.topology.n_out;
  j["topology"] = std::move(topology);
  return j;
}

SearchConfig search_config_from_json(const Json& j) {
  SearchConfig c;
  c.pop_size = number<int>(j, "pop_size", "config");
  c.generations = number<int>(j, "generations", "config");
  c.tournament_k = number<int>(j, "tournament_k", "config");
  c.elitism_count = number<int>(j, "elitism_count", "config");
  c.crossover_prob = number<double>(j, "crossover_prob", "config");
  c.master_seed = number<std::uint64_t>(j, "master_seed", "config");
  const Json& target = member(j, "target_fitness", "config");
  if (!target.is_null()) c.target_fitness = target.get<double>();
  const Json& mutation = member(j, "mutation", "config");
  c.mutation.weight_sigma = number<double>(mutation, "weight_sigma", "config");
  c.mutation.micro_sigma = number<double>(mutation, "micro_sigma", "config");
  c.mutation.flag_flip_prob = number<double>(mutation, "flag_flip_prob", "config");
  c.mutation.per_gene_prob = number<double>(mutation, "per_gene_prob", "config");
  const Json& fitness = member(j, "fitness", "config");
  c.fitness.episodes = number<int>(fitness, "k", "config");
  c.fitness.dispersion_weight = number<double>(fitness, "lambda_disp", "config");
  c.fitness.plasticity_epsilon = number<double>(fitness, "eps_plastic", "config");
  c.fitness.penalty = number<double>(fitness, "penalty", "config");
  c.fitness.t_max = number<int>(fitness, "t_max", "config");
  c.scenario = scenario_spec_from_json(member(j, "scenario", "config"));
  const Json& topology = member(j, "topology", "config");
  c.topology.n = number<int>(topology, "n", "config");
  c.topology.n_in = number<int>(topology, "n_in", "config");
  c.topology.n_out = number<int>(topology, "n_out", "config");
  return c;
}

Json generation_record_to_json(const GenerationRecord& r) {
  Json j;
  j["generation"] = r.generation;
  j["best_fitness"] = r.best_fitness;
  j["mean_fitness"] = r.mean_fitness;
  j["best_mean_score"] = r.best_mean_score;
  j["best_dispersion"] = r.best_dispersion;
  j["best_plasticity"] = r.best_plasticity;
  j["best_genome_digest"] = r.best_genome_digest;
  return j;
}

GenerationRecord generation_record_from_json(const Json& j) {
  GenerationRecord r;
  r.generation = number<int>(j, "generation", "record");
  r.best_fitness = number<double>(j, "best_fitness", "record");
  r.mean_fitness = number<double>(j, "mean_fitness", "record");
  r.best_mean_score = number<double>(j, "best_mean_score", "record");
  r.best_dispersion = number<double>(j, "best_dispersion", "record");
  r.best_plasticity = number<double>(j, "best_plasticity", "record");
  r.best_genome_digest = number<std::uint64_t>(j, "best_genome_digest", "record");
  return r;
}

Json checkpoint_to_json(const Checkpoint& cp) {
  Json j;
  j["version"] = cp.version;
  j["config"] = search_config_to_json(cp.config);
  j["generation"] = cp.generation;
  j["rng_position"] = cp.rng_position;
  Json population = Json::array();
  for (const Individual& ind : cp.population) {
    Json ji;
    ji["genome"] = genome_to_json(ind.genome);
    ji["report"] = fitness_report_to_json(ind.report);
    population.push_back(std::move(ji));
  }
  j["population"] = std::move(population);
  j["best_genome"] = genome_to_json(cp.best_genome);
  j["best_fitness"] = cp.best_fitness;
  const std::uint64_t checksum = fnv1a(j.dump());
  j["checksum"] = checksum;
  return j;
}

Checkpoint checkpoint_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("checkpoint: expected an object");
  const int version = number<int>(j, "version", "checkpoint");
  if (version != kCheckpointVersion)
    throw VersionError("checkpoint: unsupported version " + std::to_string(version));
  Json body = j;
  const auto checksum_it = body.find("checksum");
  if (checksum_it == body.end()) throw DataError("checkpoint: missing checksum");
  const auto stored = checksum_it->get<std::uint64_t>();
  body.erase("checksum");
  if (fnv1a(body.dump()) != stored) throw DataError("checkpoint: checksum mismatch");

  try {
    Checkpoint cp;
    cp.version = version;
    cp.config = search_config_from_json(member(j, "config", "checkpoint"));
    cp.generation = number<int>(j, "generation", "checkpoint");
    cp.rng_position = number<std::uint64_t>(j, "rng_position", "checkpoint");
    for (const Json& ji : member(j, "population", "checkpoint")) {
      Individual ind;
      ind.genome = genome_from_json(member(ji, "genome", "checkpoint"));
      ind.report = fitness_report_from_json(member(ji, "report", "checkpoint"));
      cp.population.push_back(std::move(ind));
    }
    cp.best_genome = genome_from_json(member(j, "best_genome", "checkpoint"));
    cp.best_fitness = number<double>(j, "best_fitness", "checkpoint");
    return cp;
  } catch (const Json::exception& e) {
    throw DataError(std::string("checkpoint: malformed field (") + e.what() + ")");
  } catch (const ValidationError& e) {
    throw DataError(e.what());  // nested genome problems are corruption here
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw DataError("'" + path.string() + "' is not valid JSON");
  return j;
}

void save_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void save_genome_file(const std::filesystem::path& path, const Genome& g) {
  save_json_file(path, genome_to_json(g));
}

Genome load_genome_file(const std::filesystem::path& path) {
  try {
    return genome_from_json(load_json_file(path));
  } catch (const DataError& e) {
    throw ValidationError(e.what());  // genome parse failures are validation failures
  }
}

void save_checkpoint_file(const std::filesystem::path& path, const Checkpoint& cp) {
  save_json_file(path, checkpoint_to_json(cp));
}

Checkpoint load_checkpoint_file(const std::filesystem::path& path) {
  return checkpoint_from_json(load_json_file(path));
}

}  // namespace snnevo
