#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "snnevo/fitness.hpp"

namespace snnevo {

// Outcome of the behavioral fixed-point test over one episode sequence.
struct ConvergenceReport {
  bool converged = false;
  std::optional<int> n_star;                  // first episode index after which stability holds
  std::vector<double> consecutive_distances;  // d(sig_e, sig_{e+1}) per episode pair
  double final_score = 0.0;
  int stability_window = 0;                   // m used

  bool operator==(const ConvergenceReport&) const = default;
};

struct ProbeConfig {
  int max_episodes = 20;  // E
  double tol = 0.05;
  int window = 3;         // m, consecutive sub-tolerance steps required
};

/// Build one network and run E consecutive episodes (weights persisting),
/// recording each episode's behavior signature in order.
std::vector<BehaviorSignature> signature_sequence(const Genome& genome, const Topology& topo,
                                                  const ScenarioSpec& scenario, int episodes,
                                                  int t_max);

/// Suffix rule on a raw consecutive-distance sequence: converged iff the
/// maximal all-below-tol suffix has length >= window; n_star is its first
/// index. Needs at least `window` distances.
ConvergenceReport classify_distances(std::vector<double> distances, double tol, int window,
                                     double final_score);

/// classify_distances applied to the consecutive behavior distances of a
/// signature sequence (needs >= window + 1 signatures).
ConvergenceReport detect_fixed_point(std::span<const BehaviorSignature> signatures, double tol,
                                     int window);

/// Measure re-convergence in a perturbed ("neighborhood") scenario: runs the
/// fixed-point test on the training spec and on perturb(train, kind, level).
/// Reports both outcomes; asserts nothing about either converging.
std::pair<ConvergenceReport, ConvergenceReport> generalization_probe(
    const Genome& genome, const Topology& topo, const ScenarioSpec& train_spec,
    Perturbation::Kind kind, double level, const ProbeConfig& cfg, int t_max);

}  // namespace snnevo
