#include "snnevo/fixedpoint.hpp"

namespace snnevo {

std::vector<BehaviorSignature> signature_sequence(const Genome& genome, const Topology& topo,
                                                  const ScenarioSpec& scenario, int episodes,
                                                  int t_max) {
  if (episodes < 1) throw ValidationError("signature sequence needs at least 1 episode");
  auto env = make_environment(scenario);
  Network net = build_network(genome, topo);
  RngStream stream(mix_seed({scenario.seed, fnv1a("signature_sequence")}));
  std::vector<BehaviorSignature> signatures;
  signatures.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e)
    signatures.push_back(run_episode(net, *env, t_max, stream).signature);
  return signatures;
}

ConvergenceReport classify_distances(std::vector<double> distances, double tol, int window,
                                     double final_score) {
  if (window < 1) throw ValidationError("stability window must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (static_cast<int>(distances.size()) < window)
    throw ValidationError("too few distances for the stability window");

  // Maximal all-below-tol suffix of the distance sequence.
  std::size_t start = distances.size();
  while (start > 0 && distances[start - 1] < tol) --start;

  ConvergenceReport report;
  report.stability_window = window;
  report.final_score = final_score;
  report.converged = distances.size() - start >= static_cast<std::size_t>(window);
  if (report.converged) report.n_star = static_cast<int>(start);
  report.consecutive_distances = std::move(distances);
  return report;
}

ConvergenceReport detect_fixed_point(std::span<const BehaviorSignature> signatures, double tol,
                                     int window) {
  if (static_cast<int>(signatures.size()) < window + 1)
    throw ValidationError("too few signatures for the stability window");
  std::vector<double> distances;
  distances.reserve(signatures.size() - 1);
  for (std::size_t e = 0; e + 1 < signatures.size(); ++e)
    distances.push_back(behavior_distance(signatures[e], signatures[e + 1]));
  return classify_distances(std::move(distances), tol, window, signatures.back().score);
}

std::pair<ConvergenceReport, ConvergenceReport> generalization_probe(
    const Genome& genome, const Topology& topo, const ScenarioSpec& train_spec,
    Perturbation::Kind kind, double level, const ProbeConfig& cfg, int t_max) {
  if (cfg.max_episodes < 2) throw ValidationError("probe needs at least 2 episodes");
  if (cfg.window >= cfg.max_episodes)
    throw ValidationError("stability window must be smaller than the episode count");

  const auto train_signatures = signature_sequence(genome, topo, train_spec, cfg.max_episodes, t_max);
  ConvergenceReport train_report = detect_fixed_point(train_signatures, cfg.tol, cfg.window);

  const ScenarioSpec perturbed_spec = perturb(train_spec, kind, level);
  const auto perturbed_signatures =
      signature_sequence(genome, topo, perturbed_spec, cfg.max_episodes, t_max);
  ConvergenceReport perturbed_report = detect_fixed_point(perturbed_signatures, cfg.tol, cfg.window);

  return {std::move(train_report), std::move(perturbed_report)};
}

}  // namespace snnevo
