#include "snnevo/fitness.hpp"

#include <bit>
#include <utility>

namespace snnevo {

double behavior_distance(const BehaviorSignature& a, const BehaviorSignature& b) {
  if (a.actions.size() != b.actions.size() || a.actions.empty())
    throw DimensionError("behavior signatures must have equal nonzero length");
  std::size_t differing = 0;
  for (std::size_t k = 0; k < a.actions.size(); ++k)
    differing += a.actions[k] != b.actions[k] ? 1 : 0;
  return static_cast<double>(differing) / static_cast<double>(a.actions.size());
}

double dispersion(std::span<const BehaviorSignature> signatures) {
  if (signatures.size() < 2) throw ValidationError("dispersion needs at least 2 episodes");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    for (std::size_t j = i + 1; j < signatures.size(); ++j) {
      sum += behavior_distance(signatures[i], signatures[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

EpisodeOutcome run_episode(Network& net, Environment& env, int t_max, RngStream& stream) {
  if (t_max < 1) throw ValidationError("t_max must be at least 1");
  if (env.obs_dim() != net.n_in())
    throw DimensionError("scenario observation dimension must equal n_in");
  if (env.n_actions() != net.n_out())
    throw DimensionError("scenario action count must equal n_out");

  env.reset();
  net.reset_dynamic_state();  // fresh episode, persisted weights
  const double gain = kInjectionGainFactor * net.micro().threshold;
  const std::vector<double> weights_before = net.weights();

  EpisodeOutcome out;
  out.signature.actions.reserve(static_cast<std::size_t>(t_max));
  std::uint64_t obs_hash = 14695981039346656037ULL;
  double score = 0.0;

  for (int t = 0; t < t_max && !env.done(); ++t) {
    const Observation obs = env.observation();
    for (double v : obs.values) obs_hash = fnv1a_u64(std::bit_cast<std::uint64_t>(v), obs_hash);

    const int window = env.decision_window();
    const auto schedule = encode(obs, window, gain, stream);
    std::vector<SpikeVector> motor(static_cast<std::size_t>(window));
    for (int w = 0; w < window; ++w) {
      const SpikeVector fired = net.step(schedule[static_cast<std::size_t>(w)]);
      net.apply_plasticity(fired);
      motor[static_cast<std::size_t>(w)].assign(fired.end() - net.n_out(), fired.end());
    }
    const ActionId action = decode(motor);
    const EnvStep result = env.step(action);
    out.trace.steps.emplace_back(obs, action);
    out.signature.actions.push_back(action);
    score += result.score_delta;
  }

  out.signature.actions.resize(static_cast<std::size_t>(t_max), kActionNone);
  out.signature.observations_hash = obs_hash;
  out.signature.score = score;
  out.trace.score = score;
  out.plasticity = weight_change_norm(weights_before, net.weights());
  return out;
}

FitnessReport make_fitness_report(std::vector<EpisodeRecord> episodes, const FitnessConfig& cfg) {
  if (episodes.size() < 2) throw ValidationError("fitness needs at least 2 episodes");
  FitnessReport report;
  std::vector<BehaviorSignature> signatures;
  signatures.reserve(episodes.size());
  for (const EpisodeRecord& e : episodes) {
    report.mean_score += e.score;
    report.plasticity_magnitude += e.plasticity;
    signatures.push_back(e.signature);
  }
  const double k = static_cast<double>(episodes.size());
  report.mean_score /= k;
  report.plasticity_magnitude /= k;
  report.dispersion = dispersion(signatures);
  report.fitness = report.mean_score - cfg.dispersion_weight * report.dispersion -
                   (report.plasticity_magnitude < cfg.plasticity_epsilon ? cfg.penalty : 0.0);
  report.episodes = std::move(episodes);
  return report;
}

FitnessReport evaluate(const Genome& genome, const Topology& topo, const ScenarioSpec& scenario,
                       const FitnessConfig& cfg, RngStream& stream) {
  if (cfg.episodes < 2) throw ValidationError("fitness.k must be at least 2");
  auto env = make_environment(scenario);
  Network net = build_network(genome, topo);
  std::vector<EpisodeRecord> episodes;
  episodes.reserve(static_cast<std::size_t>(cfg.episodes));
  for (int k = 0; k < cfg.episodes; ++k) {
    EpisodeOutcome outcome = run_episode(net, *env, cfg.t_max, stream);
    const double score = outcome.signature.score;
    episodes.push_back({score, std::move(outcome.signature), outcome.plasticity});
  }
  return make_fitness_report(std::move(episodes), cfg);
}

}  // namespace snnevo
