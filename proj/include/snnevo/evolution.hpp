#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "snnevo/fitness.hpp"
#include "snnevo/genome.hpp"

namespace snnevo {

struct SearchConfig {
  int pop_size = 64;
  int generations = 50;
  int tournament_k = 3;
  int elitism_count = 2;
  double crossover_prob = 0.9;
  MutationConfig mutation;
  FitnessConfig fitness;
  ScenarioSpec scenario;
  Topology topology;
  std::uint64_t master_seed = 1;
  std::optional<double> target_fitness;
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double best_mean_score = 0.0;
  double best_dispersion = 0.0;
  double best_plasticity = 0.0;
  std::uint64_t best_genome_digest = 0;

  bool operator==(const GenerationRecord&) const = default;
};

struct Individual {
  Genome genome;
  FitnessReport report;
};

using Population = std::vector<Individual>;

// Full search state after a completed generation; resuming from it
// reproduces the uninterrupted run bit-exactly.
struct Checkpoint {
  int version = 1;
  SearchConfig config;
  int generation = 0;            // last completed generation index
  std::uint64_t rng_position = 0;  // next generation index in the stream derivation
  Population population;
  Genome best_genome;
  double best_fitness = 0.0;
};

inline constexpr int kCheckpointVersion = 1;

/// Throws ValidationError on invalid field combinations.
void validate_search_config(const SearchConfig& cfg);

/// pop_size genomes drawn on per-individual derived streams
/// (master_seed, 0, i, "init"); reports unevaluated.
Population init_population(const SearchConfig& cfg);

/// Tournament selection: k uniform draws with replacement, best fitness
/// wins, ties to the lower index.
std::size_t select_index(std::span<const double> fitness, int k, RngStream& stream);

/// Tournament selection over an evaluated population.
const Genome& select(const Population& pop, int k, RngStream& stream);

/// Evaluate every individual in [0, pop) listed in `todo` on streams
/// (master_seed, generation, index, "eval"), using up to `workers` threads.
/// Results are identical for any worker count.
void evaluate_population(Population& pop, const SearchConfig& cfg, int generation,
                         std::span<const std::size_t> todo, int workers);

GenerationRecord make_generation_record(int generation, const Population& pop);

/// One generational turn: elites copied unchanged, remainder bred by
/// tournament selection + crossover + mutation, new individuals evaluated.
/// `generation_index` is the index of pop; the result is generation
/// generation_index + 1 with its record.
std::pair<Population, GenerationRecord> evolve_generation(const Population& pop,
                                                          const SearchConfig& cfg,
                                                          int generation_index, int workers = 1);

struct SearchResult {
  Genome best_genome;
  double best_fitness = 0.0;
  std::vector<GenerationRecord> records;
  Checkpoint final_checkpoint;
};

/// Called after each evaluated generation with its record and the checkpoint
/// capturing the completed state.
using GenerationHook = std::function<void(const GenerationRecord&, const Checkpoint&)>;

/// Run until the generation budget is exhausted or best fitness reaches
/// target_fitness. Worker count never changes the result.
SearchResult run_search(const SearchConfig& cfg, int workers = 1,
                        const GenerationHook& hook = {});

/// Continue a checkpointed run to its configured generation budget. Records
/// cover only the newly run generations.
SearchResult resume_search(const Checkpoint& checkpoint, int workers = 1,
                           const GenerationHook& hook = {});

}  // namespace snnevo
