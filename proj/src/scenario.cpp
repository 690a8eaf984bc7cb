#include "snnevo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace snnevo {

namespace {

RngStream scenario_stream(std::uint64_t seed, std::string_view tag) {
  return RngStream(mix_seed({seed, fnv1a(tag)}));
}

std::vector<int> seeded_shuffle(int count, RngStream& stream) {
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  for (int i = count - 1; i > 0; --i) {
    const auto j = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  return order;
}

int perturbation_count(double level, int total) {
  const int k = static_cast<int>(std::ceil(level * total));
  return std::clamp(k, 0, total);
}

// Same uniform draws at every level: the noise stream is keyed by the seed
// only, the level is a pure amplitude, so perturbation distance is exactly
// monotone in level.
void apply_obs_noise(Observation& obs, const Perturbation& pert, RngStream& noise) {
  if (pert.kind != Perturbation::Kind::obs_noise) return;
  for (double& v : obs.values)
    v = std::clamp(v + pert.level * noise.next_symmetric(), 0.0, 1.0);
}

void validate_perturbation(const ScenarioSpec& spec) {
  const auto kind = spec.perturbation.kind;
  const double level = spec.perturbation.level;
  if (!(level >= 0.0 && level <= 1.0))
    throw ValidationError("perturbation level must be in [0, 1]");
  if (kind == Perturbation::Kind::cue_remap && spec.name != "cue_assoc")
    throw ValidationError("perturbation kind cue_remap applies only to cue_assoc");
  if (kind == Perturbation::Kind::layout_shift && spec.name != "gridworld_forage")
    throw ValidationError("perturbation kind layout_shift applies only to gridworld_forage");
}

class CueAssocEnv final : public Environment {
 public:
  explicit CueAssocEnv(const ScenarioSpec& spec)
      : spec_(spec), params_(spec.cue), noise_(scenario_stream(spec.seed, "obs_noise")) {
    if (params_.cues < 2) throw ValidationError("cue_assoc needs at least 2 cues");
    if (params_.rounds < 1) throw ValidationError("cue_assoc needs at least 1 round");
    if (params_.presentation_window < 1 || params_.decision_window < 1)
      throw ValidationError("cue_assoc windows must be at least 1 tick");

    RngStream seq = scenario_stream(spec_.seed, "cue_sequence");
    cue_sequence_.resize(static_cast<std::size_t>(params_.rounds));
    for (int& c : cue_sequence_)
      c = static_cast<int>(seq.next_below(static_cast<std::uint64_t>(params_.cues)));

    RngStream tgt = scenario_stream(spec_.seed, "cue_targets");
    targets_ = seeded_shuffle(params_.cues, tgt);

    if (spec_.perturbation.kind == Perturbation::Kind::cue_remap) {
      // Rotate the targets of the first ceil(level*C) cues of a seeded
      // shuffle among themselves; k <= 1 changes nothing.
      const int k = perturbation_count(spec_.perturbation.level, params_.cues);
      if (k >= 2) {
        RngStream rm = scenario_stream(spec_.seed, "cue_remap");
        const std::vector<int> order = seeded_shuffle(params_.cues, rm);
        const int first = targets_[static_cast<std::size_t>(order[0])];
        for (int i = 0; i + 1 < k; ++i)
          targets_[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
              targets_[static_cast<std::size_t>(order[static_cast<std::size_t>(i) + 1])];
        targets_[static_cast<std::size_t>(order[static_cast<std::size_t>(k) - 1])] = first;
      }
    }
    reset();
  }

  void reset() override {
    round_ = 0;
    deciding_ = false;
    done_ = false;
    noise_ = scenario_stream(spec_.seed, "obs_noise");
    refresh_observation();
  }

  const Observation& observation() const override { return obs_; }
  int decision_window() const override {
    return deciding_ ? params_.decision_window : params_.presentation_window;
  }
  bool done() const override { return done_; }
  int obs_dim() const override { return params_.cues; }
  int n_actions() const override { return params_.cues; }
  double max_score() const override { return static_cast<double>(params_.rounds); }

  EnvStep step(ActionId action) override {
    if (done_) throw ValidationError("env step after episode end");
    if (action != kActionNone && (action < 0 || action >= params_.cues))
      throw ValidationError("action out of range");
    EnvStep result;
    if (!deciding_) {
      deciding_ = true;  // cue stays visible through the decision phase
    } else {
      const int cue = cue_sequence_[static_cast<std::size_t>(round_)];
      if (action == targets_[static_cast<std::size_t>(cue)]) result.score_delta = 1.0;
      deciding_ = false;
      if (++round_ >= params_.rounds) done_ = true;
    }
    result.done = done_;
    refresh_observation();
    return result;
  }

  const std::vector<int>& targets() const { return targets_; }
  const std::vector<int>& cue_sequence() const { return cue_sequence_; }

 private:
  void refresh_observation() {
    obs_.values.assign(static_cast<std::size_t>(params_.cues), 0.0);
    if (!done_) obs_.values[static_cast<std::size_t>(cue_sequence_[static_cast<std::size_t>(round_)])] = 1.0;
    apply_obs_noise(obs_, spec_.perturbation, noise_);
  }

  ScenarioSpec spec_;
  CueAssocParams params_;
  std::vector<int> cue_sequence_;  // cue shown in each round
  std::vector<int> targets_;       // cue -> rewarded action
  int round_ = 0;
  bool deciding_ = false;
  bool done_ = false;
  Observation obs_;
  RngStream noise_;
};

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

class GridworldEnv final : public Environment {
 public:
  explicit GridworldEnv(const ScenarioSpec& spec)
      : spec_(spec), params_(spec.gridworld), noise_(scenario_stream(spec.seed, "obs_noise")) {
    if (params_.grid < 2) throw ValidationError("gridworld grid must be at least 2");
    if (params_.food < 1) throw ValidationError("gridworld needs at least 1 food item");
    if (params_.food > params_.grid * params_.grid - 1)
      throw ValidationError("gridworld food does not fit the grid");
    if (params_.decision_window < 1)
      throw ValidationError("gridworld decision window must be at least 1 tick");

    RngStream place = scenario_stream(spec_.seed, "gridworld_place");
    start_ = draw_cell(place);
    food_home_.reserve(static_cast<std::size_t>(params_.food));
    for (int k = 0; k < params_.food; ++k) {
      Cell c;
      do {
        c = draw_cell(place);
      } while (c == start_ || occupied(food_home_, c));
      food_home_.push_back(c);
    }

    if (spec_.perturbation.kind == Perturbation::Kind::layout_shift) {
      // Redraw the first ceil(level*#food) items; rejecting all currently
      // occupied cells (including the item's own) guarantees each moves.
      const int k = perturbation_count(spec_.perturbation.level, params_.food);
      RngStream shift = scenario_stream(spec_.seed, "layout_shift");
      for (int i = 0; i < k; ++i) {
        Cell c;
        do {
          c = draw_cell(shift);
        } while (c == start_ || occupied(food_home_, c));
        food_home_[static_cast<std::size_t>(i)] = c;
      }
    }
    reset();
  }

  void reset() override {
    agent_ = start_;
    collected_.assign(static_cast<std::size_t>(params_.food), false);
    remaining_ = params_.food;
    done_ = false;
    noise_ = scenario_stream(spec_.seed, "obs_noise");
    refresh_observation();
  }

  const Observation& observation() const override { return obs_; }
  int decision_window() const override { return params_.decision_window; }
  bool done() const override { return done_; }
  int obs_dim() const override { return 4; }
  int n_actions() const override { return 4; }
  double max_score() const override { return static_cast<double>(params_.food); }

  EnvStep step(ActionId action) override {
    if (done_) throw ValidationError("env step after episode end");
    if (action != kActionNone && (action < 0 || action >= 4))
      throw ValidationError("action out of range");
    EnvStep result;
    Cell next = agent_;
    switch (action) {
      case 0: next.y -= 1; break;  // up
      case 1: next.y += 1; break;  // down
      case 2: next.x -= 1; break;  // left
      case 3: next.x += 1; break;  // right
      default: break;              // NONE = hold position
    }
    if (next.x >= 0 && next.x < params_.grid && next.y >= 0 && next.y < params_.grid)
      agent_ = next;  // moves into walls leave the position unchanged
    for (std::size_t k = 0; k < food_home_.size(); ++k) {
      if (!collected_[k] && food_home_[k] == agent_) {
        collected_[k] = true;
        --remaining_;
        result.score_delta += 1.0;
      }
    }
    if (remaining_ == 0) done_ = true;
    result.done = done_;
    refresh_observation();
    return result;
  }

  Cell agent_start() const { return start_; }
  const std::vector<Cell>& food_cells() const { return food_home_; }

 private:
  Cell draw_cell(RngStream& stream) const {
    Cell c;
    c.x = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(params_.grid)));
    c.y = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(params_.grid)));
    return c;
  }

  static bool occupied(const std::vector<Cell>& cells, Cell c) {
    return std::find(cells.begin(), cells.end(), c) != cells.end();
  }

  void refresh_observation() {
    const double span = static_cast<double>(params_.grid - 1);
    double dxn = 0.0;
    double dyn = 0.0;
    int best = -1;
    int best_dist = 0;
    for (std::size_t k = 0; k < food_home_.size(); ++k) {
      if (collected_[k]) continue;
      const int d = std::abs(food_home_[k].x - agent_.x) + std::abs(food_home_[k].y - agent_.y);
      if (best < 0 || d < best_dist) {
        best = static_cast<int>(k);
        best_dist = d;
      }
    }
    if (best >= 0) {
      dxn = (food_home_[static_cast<std::size_t>(best)].x - agent_.x) / span;
      dyn = (food_home_[static_cast<std::size_t>(best)].y - agent_.y) / span;
    }
    obs_.values = {agent_.x / span, agent_.y / span, (dxn + 1.0) * 0.5, (dyn + 1.0) * 0.5};
    apply_obs_noise(obs_, spec_.perturbation, noise_);
  }

  ScenarioSpec spec_;
  GridworldParams params_;
  Cell start_;
  std::vector<Cell> food_home_;
  Cell agent_;
  std::vector<bool> collected_;
  int remaining_ = 0;
  bool done_ = false;
  Observation obs_;
  RngStream noise_;
};

}  // namespace

const char* perturbation_kind_name(Perturbation::Kind kind) {
  switch (kind) {
    case Perturbation::Kind::none: return "none";
    case Perturbation::Kind::obs_noise: return "obs_noise";
    case Perturbation::Kind::cue_remap: return "cue_remap";
    case Perturbation::Kind::layout_shift: return "layout_shift";
  }
  return "none";
}

Perturbation::Kind parse_perturbation_kind(const std::string& name) {
  if (name == "none") return Perturbation::Kind::none;
  if (name == "obs_noise") return Perturbation::Kind::obs_noise;
  if (name == "cue_remap") return Perturbation::Kind::cue_remap;
  if (name == "layout_shift") return Perturbation::Kind::layout_shift;
  throw ValidationError("unknown perturbation kind '" + name + "'");
}

std::unique_ptr<Environment> make_environment(const ScenarioSpec& spec) {
  validate_perturbation(spec);
  if (spec.name == "cue_assoc") return std::make_unique<CueAssocEnv>(spec);
  if (spec.name == "gridworld_forage") return std::make_unique<GridworldEnv>(spec);
  throw ValidationError("unknown scenario '" + spec.name + "'");
}

double scenario_max_score(const ScenarioSpec& spec) {
  if (spec.name == "cue_assoc") return static_cast<double>(spec.cue.rounds);
  if (spec.name == "gridworld_forage") return static_cast<double>(spec.gridworld.food);
  throw ValidationError("unknown scenario '" + spec.name + "'");
}

int scenario_obs_dim(const ScenarioSpec& spec) {
  if (spec.name == "cue_assoc") return spec.cue.cues;
  if (spec.name == "gridworld_forage") return 4;
  throw ValidationError("unknown scenario '" + spec.name + "'");
}

int scenario_n_actions(const ScenarioSpec& spec) {
  if (spec.name == "cue_assoc") return spec.cue.cues;
  if (spec.name == "gridworld_forage") return 4;
  throw ValidationError("unknown scenario '" + spec.name + "'");
}

std::vector<std::vector<double>> encode(const Observation& obs, int window, double gain,
                                        RngStream&) {
  if (window < 1) throw ValidationError("encode window must be at least 1 tick");
  std::vector<double> row(obs.values.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = gain * obs.values[i];
  return std::vector<std::vector<double>>(static_cast<std::size_t>(window), row);
}

ActionId decode(const std::vector<SpikeVector>& motor_window) {
  if (motor_window.empty()) return kActionNone;
  const std::size_t n_out = motor_window.front().size();
  std::vector<long> counts(n_out, 0);
  for (const SpikeVector& row : motor_window) {
    if (row.size() != n_out) throw DimensionError("ragged motor spike window");
    for (std::size_t j = 0; j < n_out; ++j) counts[j] += row[j] ? 1 : 0;
  }
  long best = 0;
  ActionId action = kActionNone;
  for (std::size_t j = 0; j < n_out; ++j) {
    if (counts[j] > best) {  // strict: ties keep the lowest index, silence keeps NONE
      best = counts[j];
      action = static_cast<ActionId>(j);
    }
  }
  return action;
}

ScenarioSpec perturb(const ScenarioSpec& spec, Perturbation::Kind kind, double level) {
  if (!(level >= 0.0 && level <= 1.0))
    throw ValidationError("perturbation level must be in [0, 1]");
  ScenarioSpec out = spec;
  // level 0 behaves as none; normalize so the identity case is literal
  out.perturbation = level == 0.0 ? Perturbation{} : Perturbation{kind, level};
  validate_perturbation(out);
  return out;
}

}  // namespace snnevo
