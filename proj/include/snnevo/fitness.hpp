#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snnevo/genome.hpp"
#include "snnevo/scenario.hpp"

namespace snnevo {

// Fixed-length record of one episode's behavior: the committed action per
// env step, NONE-padded past episode end. The hash of the injected
// observation stream is audit-only.
struct BehaviorSignature {
  std::vector<ActionId> actions;
  std::uint64_t observations_hash = 0;
  double score = 0.0;

  bool operator==(const BehaviorSignature&) const = default;
};

struct FitnessConfig {
  int episodes = 5;                  // K, repeated executions of the same task
  double dispersion_weight = 0.5;    // lambda_disp
  double plasticity_epsilon = 1e-3;  // minimum mean per-episode weight change
  double penalty = 80.0;             // applied when plasticity is below epsilon
  int t_max = 64;                    // env steps per episode = signature length
};

struct EpisodeRecord {
  double score = 0.0;
  BehaviorSignature signature;
  double plasticity = 0.0;  // weight_change_norm over the episode
};

struct FitnessReport {
  double mean_score = 0.0;
  double dispersion = 0.0;            // mean pairwise behavior distance, [0,1]
  double plasticity_magnitude = 0.0;  // mean per-episode weight change norm
  double fitness = 0.0;
  std::vector<EpisodeRecord> episodes;
};

/// Normalized Hamming distance over the padded action sequences (the NONE
/// sentinel counts as an ordinary symbol). Result in [0, 1].
double behavior_distance(const BehaviorSignature& a, const BehaviorSignature& b);

/// Mean behavior_distance over all unordered pairs; needs >= 2 signatures.
double dispersion(std::span<const BehaviorSignature> signatures);

struct EpisodeOutcome {
  BehaviorSignature signature;
  double plasticity = 0.0;
  EpisodeTrace trace;
};

inline constexpr double kInjectionGainFactor = 1.2;  // injection gain = 1.2 * threshold

/// Run one episode of env on net (weights persist in net). Caps the episode
/// at t_max env steps and pads the signature to exactly t_max actions.
EpisodeOutcome run_episode(Network& net, Environment& env, int t_max, RngStream& stream);

/// Assemble a report from per-episode records per the fitness formula:
/// fitness = mean_score - lambda * dispersion - (penalty if plasticity < eps).
FitnessReport make_fitness_report(std::vector<EpisodeRecord> episodes, const FitnessConfig& cfg);

/// The stability fitness: build one fresh network from the genome, run K
/// consecutive episodes of the same scenario on that same network instance,
/// and score expectation, cross-episode consistency, and active plasticity.
FitnessReport evaluate(const Genome& genome, const Topology& topo, const ScenarioSpec& scenario,
                       const FitnessConfig& cfg, RngStream& stream);

}  // namespace snnevo
