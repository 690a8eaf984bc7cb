#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "snnevo/rng.hpp"
#include "snnevo/substrate.hpp"

namespace snnevo {

using ActionId = int;
inline constexpr ActionId kActionNone = -1;

struct Observation {
  std::vector<double> values;  // each in [0, 1]
};

struct Perturbation {
  enum class Kind { none, obs_noise, cue_remap, layout_shift };
  Kind kind = Kind::none;
  double level = 0.0;  // in [0, 1]; 0 behaves as none

  bool operator==(const Perturbation&) const = default;
};

const char* perturbation_kind_name(Perturbation::Kind kind);
Perturbation::Kind parse_perturbation_kind(const std::string& name);  // throws ValidationError

struct CueAssocParams {
  int cues = 4;                 // C distinct cue patterns = number of actions
  int rounds = 8;               // R scored rounds per episode
  int presentation_window = 8;  // ticks the cue is shown before the decision phase
  int decision_window = 8;      // ticks behind the scored action

  bool operator==(const CueAssocParams&) const = default;
};

struct GridworldParams {
  int grid = 5;            // G x G cells
  int food = 3;            // items to collect
  int decision_window = 8; // ticks behind each movement decision

  bool operator==(const GridworldParams&) const = default;
};

// Defines the episodes an agent is scored on. params for the inactive
// scenario name are carried but ignored.
struct ScenarioSpec {
  std::string name = "cue_assoc";  // "cue_assoc" | "gridworld_forage"
  std::uint64_t seed = 0;
  CueAssocParams cue;
  GridworldParams gridworld;
  Perturbation perturbation;

  bool operator==(const ScenarioSpec&) const = default;
};

struct EnvStep {
  double score_delta = 0.0;
  bool done = false;
};

// Deterministic episode state machine. reset() rebuilds the initial state
// from the spec's seed, so repeated episodes of one spec are identical tasks.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual void reset() = 0;
  virtual const Observation& observation() const = 0;
  /// Substrate ticks to simulate before the next action is committed.
  virtual int decision_window() const = 0;
  virtual EnvStep step(ActionId action) = 0;  // throws ValidationError after done
  virtual bool done() const = 0;

  virtual int obs_dim() const = 0;
  virtual int n_actions() const = 0;
  virtual double max_score() const = 0;
};

/// Factory; validates the spec (name, params, perturbation applicability)
/// and returns the environment in reset state.
std::unique_ptr<Environment> make_environment(const ScenarioSpec& spec);

double scenario_max_score(const ScenarioSpec& spec);
int scenario_obs_dim(const ScenarioSpec& spec);
int scenario_n_actions(const ScenarioSpec& spec);

struct EpisodeTrace {
  std::vector<std::pair<Observation, ActionId>> steps;
  double score = 0.0;
};

/// Deterministic rate coding: sensory neuron i receives constant current
/// gain * obs.values[i] on every tick of the window. The stream is unused by
/// this coder (reserved for stochastic coders).
std::vector<std::vector<double>> encode(const Observation& obs, int window, double gain,
                                        RngStream& stream);

/// Winner-take-all over motor spike counts in the decision window; ties break
/// to the lowest neuron index; an all-silent window decodes to kActionNone.
/// Rows are per-tick bit vectors over the n_out motor neurons.
ActionId decode(const std::vector<SpikeVector>& motor_window);

/// Construct the neighborhood scenario: same spec with perturbation
/// (kind, level) attached. level must be in [0, 1].
ScenarioSpec perturb(const ScenarioSpec& spec, Perturbation::Kind kind, double level);

}  // namespace snnevo
