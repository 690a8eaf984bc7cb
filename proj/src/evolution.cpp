#include "snnevo/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>
#include <utility>

namespace snnevo {

namespace {

std::size_t best_index(const Population& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].report.fitness > pop[best].report.fitness) best = i;
  return best;
}

Checkpoint make_checkpoint(const SearchConfig& cfg, int generation, const Population& pop,
                           const Genome& best_genome, double best_fitness) {
  Checkpoint cp;
  cp.version = kCheckpointVersion;
  cp.config = cfg;
  cp.generation = generation;
  cp.rng_position = static_cast<std::uint64_t>(generation) + 1;
  cp.population = pop;
  cp.best_genome = best_genome;
  cp.best_fitness = best_fitness;
  return cp;
}

SearchResult search_loop(const SearchConfig& cfg, Population pop, int generation,
                         Genome best_genome, double best_fitness, bool emit_current, int workers,
                         const GenerationHook& hook) {
  SearchResult result;
  result.best_genome = std::move(best_genome);
  result.best_fitness = best_fitness;

  auto emit = [&](const GenerationRecord& rec) {
    result.records.push_back(rec);
    if (hook) hook(rec, make_checkpoint(cfg, rec.generation, pop, result.best_genome, result.best_fitness));
  };

  double prev_best = pop.empty() ? 0.0 : pop[best_index(pop)].report.fitness;
  if (emit_current) {
    const GenerationRecord rec = make_generation_record(generation, pop);
    result.best_genome = pop[best_index(pop)].genome;
    result.best_fitness = rec.best_fitness;
    emit(rec);
  }

  const auto target_met = [&] {
    return cfg.target_fitness && result.best_fitness >= *cfg.target_fitness;
  };

  while (generation + 1 < cfg.generations && !target_met()) {
    auto [next, rec] = evolve_generation(pop, cfg, generation, workers);
    if (cfg.elitism_count >= 1 && rec.best_fitness < prev_best)
      throw std::logic_error("elitism monotonicity violated");
    prev_best = rec.best_fitness;
    pop = std::move(next);
    ++generation;
    if (rec.best_fitness > result.best_fitness) {
      result.best_fitness = rec.best_fitness;
      result.best_genome = pop[best_index(pop)].genome;
    }
    emit(rec);
  }

  result.final_checkpoint =
      make_checkpoint(cfg, generation, pop, result.best_genome, result.best_fitness);
  return result;
}

}  // namespace

void validate_search_config(const SearchConfig& cfg) {
  if (cfg.pop_size < 2) throw ValidationError("pop_size must be at least 2");
  if (cfg.generations < 1) throw ValidationError("generations must be at least 1");
  if (cfg.tournament_k < 1 || cfg.tournament_k > cfg.pop_size)
    throw ValidationError("tournament_k must be in [1, pop_size]");
  if (cfg.elitism_count < 0 || cfg.elitism_count >= cfg.pop_size)
    throw ValidationError("elitism_count must be in [0, pop_size)");
  if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0))
    throw ValidationError("crossover_prob must be in [0, 1]");
  if (!(cfg.mutation.per_gene_prob >= 0.0 && cfg.mutation.per_gene_prob <= 1.0))
    throw ValidationError("mutation.per_gene_prob must be in [0, 1]");
  if (!(cfg.mutation.flag_flip_prob >= 0.0 && cfg.mutation.flag_flip_prob <= 1.0))
    throw ValidationError("mutation.flag_flip_prob must be in [0, 1]");
  if (cfg.mutation.weight_sigma < 0.0 || cfg.mutation.micro_sigma < 0.0)
    throw ValidationError("mutation sigmas must be non-negative");
  if (cfg.fitness.episodes < 2) throw ValidationError("fitness.k must be at least 2");
  if (cfg.fitness.t_max < 1) throw ValidationError("fitness.t_max must be at least 1");
  if (cfg.fitness.dispersion_weight < 0.0)
    throw ValidationError("fitness.lambda_disp must be non-negative");
  if (cfg.fitness.plasticity_epsilon < 0.0)
    throw ValidationError("fitness.eps_plastic must be non-negative");
  if (cfg.fitness.penalty < 0.0) throw ValidationError("fitness.penalty must be non-negative");
  if (cfg.topology.n < 1) throw ValidationError("topology.n must be positive");
  if (cfg.topology.n_in < 0 || cfg.topology.n_out < 0 ||
      cfg.topology.n_in + cfg.topology.n_out > cfg.topology.n)
    throw ValidationError("topology needs n_in + n_out <= n");
  if (scenario_obs_dim(cfg.scenario) != cfg.topology.n_in)
    throw ValidationError("topology.n_in must equal the scenario observation dimension");
  if (scenario_n_actions(cfg.scenario) != cfg.topology.n_out)
    throw ValidationError("topology.n_out must equal the scenario action count");
  make_environment(cfg.scenario);  // validates scenario params and perturbation
}

Population init_population(const SearchConfig& cfg) {
  validate_search_config(cfg);
  Population pop;
  pop.reserve(static_cast<std::size_t>(cfg.pop_size));
  for (int i = 0; i < cfg.pop_size; ++i) {
    RngStream stream =
        derive_stream(cfg.master_seed, 0, static_cast<std::uint64_t>(i), "init");
    pop.push_back({random_genome(stream, cfg.topology.n), {}});
  }
  return pop;
}

std::size_t select_index(std::span<const double> fitness, int k, RngStream& stream) {
  if (fitness.empty()) throw ValidationError("selection over an empty population");
  if (k < 1) throw ValidationError("tournament size must be at least 1");
  std::size_t best = static_cast<std::size_t>(stream.next_below(fitness.size()));
  for (int draw = 1; draw < k; ++draw) {
    const auto idx = static_cast<std::size_t>(stream.next_below(fitness.size()));
    if (fitness[idx] > fitness[best] || (fitness[idx] == fitness[best] && idx < best)) best = idx;
  }
  return best;
}

const Genome& select(const Population& pop, int k, RngStream& stream) {
  std::vector<double> fitness(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = pop[i].report.fitness;
  return pop[select_index(fitness, k, stream)].genome;
}

void evaluate_population(Population& pop, const SearchConfig& cfg, int generation,
                         std::span<const std::size_t> todo, int workers) {
  const auto evaluate_one = [&](std::size_t idx) {
    RngStream stream = derive_stream(cfg.master_seed, static_cast<std::uint64_t>(generation),
                                     static_cast<std::uint64_t>(idx), "eval");
    pop[idx].report =
        evaluate(pop[idx].genome, cfg.topology, cfg.scenario, cfg.fitness, stream);
  };

  const int thread_count =
      std::clamp<int>(workers, 1, static_cast<int>(todo.size() == 0 ? 1 : todo.size()));
  if (thread_count <= 1) {
    for (std::size_t idx : todo) evaluate_one(idx);
    return;
  }

  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(thread_count));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= todo.size()) return;
          evaluate_one(todo[i]);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

GenerationRecord make_generation_record(int generation, const Population& pop) {
  GenerationRecord rec;
  rec.generation = generation;
  const std::size_t best = best_index(pop);
  double sum = 0.0;
  for (const Individual& ind : pop) sum += ind.report.fitness;
  rec.best_fitness = pop[best].report.fitness;
  rec.mean_fitness = sum / static_cast<double>(pop.size());
  rec.best_mean_score = pop[best].report.mean_score;
  rec.best_dispersion = pop[best].report.dispersion;
  rec.best_plasticity = pop[best].report.plasticity_magnitude;
  rec.best_genome_digest = pop[best].genome.digest();
  return rec;
}

std::pair<Population, GenerationRecord> evolve_generation(const Population& pop,
                                                          const SearchConfig& cfg,
                                                          int generation_index, int workers) {
  if (static_cast<int>(pop.size()) != cfg.pop_size)
    throw ValidationError("population size does not match the configuration");
  const int next_gen = generation_index + 1;

  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].report.fitness > pop[b].report.fitness;
  });

  std::vector<double> fitness(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = pop[i].report.fitness;

  Population next;
  next.reserve(pop.size());
  for (int e = 0; e < cfg.elitism_count; ++e)
    next.push_back(pop[order[static_cast<std::size_t>(e)]]);  // report carried unchanged

  std::vector<std::size_t> fresh;
  std::uint64_t pair_index = 0;
  while (next.size() < pop.size()) {
    RngStream breed = derive_stream(cfg.master_seed, static_cast<std::uint64_t>(next_gen),
                                    pair_index, "breed");
    const std::size_t pa = select_index(fitness, cfg.tournament_k, breed);
    const std::size_t pb = select_index(fitness, cfg.tournament_k, breed);
    Genome child_a = pop[pa].genome;
    Genome child_b = pop[pb].genome;
    if (breed.next_unit() < cfg.crossover_prob) {
      auto [xa, xb] = crossover(child_a, child_b, breed);
      child_a = std::move(xa);
      child_b = std::move(xb);
    }
    for (Genome* child : {&child_a, &child_b}) {
      if (next.size() >= pop.size()) break;  // odd remainder: drop the second child
      const std::size_t slot = next.size();
      RngStream mut = derive_stream(cfg.master_seed, static_cast<std::uint64_t>(next_gen),
                                    static_cast<std::uint64_t>(slot), "mutate");
      fresh.push_back(slot);
      next.push_back({mutate(*child, cfg.mutation, mut), {}});
    }
    ++pair_index;
  }

  evaluate_population(next, cfg, next_gen, fresh, workers);
  GenerationRecord rec = make_generation_record(next_gen, next);
  return {std::move(next), std::move(rec)};
}

SearchResult run_search(const SearchConfig& cfg, int workers, const GenerationHook& hook) {
  Population pop = init_population(cfg);
  std::vector<std::size_t> all(pop.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  evaluate_population(pop, cfg, 0, all, workers);
  return search_loop(cfg, std::move(pop), 0, Genome{}, 0.0, /*emit_current=*/true, workers, hook);
}

SearchResult resume_search(const Checkpoint& checkpoint, int workers, const GenerationHook& hook) {
  if (checkpoint.version != kCheckpointVersion)
    throw VersionError("unsupported checkpoint version");
  validate_search_config(checkpoint.config);
  if (static_cast<int>(checkpoint.population.size()) != checkpoint.config.pop_size)
    throw DataError("checkpoint population size does not match its configuration");
  return search_loop(checkpoint.config, checkpoint.population, checkpoint.generation,
                     checkpoint.best_genome, checkpoint.best_fitness, /*emit_current=*/false,
                     workers, hook);
}

}  // namespace snnevo
