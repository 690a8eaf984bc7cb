#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snnevo/errors.hpp"

namespace snnevo {

// Independently toggleable micro-feature bits, the one-hot coded part of the
// solution space.
struct FeatureFlags {
  bool stdp_enabled = true;
  bool refractory_enabled = true;
  bool symmetric_stdp = false;  // decode forces a_minus := a_plus when set
};

// Neuron and plasticity micro-characteristics shared by every neuron of one
// network.
struct MicroParams {
  double threshold = 1.0;      // firing threshold, > v_reset
  double decay = 0.9;          // per-tick leak factor in [0, 1)
  double v_reset = 0.0;        // post-spike membrane potential
  int refractory_period = 1;   // ticks a neuron stays silent after firing
  double stdp_a_plus = 0.1;    // potentiation amplitude
  double stdp_a_minus = 0.12;  // depression amplitude
  double stdp_tau = 5.0;       // trace time constant, ticks
  double learning_rate = 0.1;  // eta
  double w_max = 2.0;          // hard weight bound
  FeatureFlags flags;
};

struct NeuronState {
  double potential = 0.0;
  double buffer_a = 0.0;
  double buffer_b = 0.0;
  std::uint8_t active_buffer = 0;       // 0: A integrates/sends this tick, B receives
  int refractory_remaining = 0;
  std::int64_t last_spike_tick = -1;    // -1 = never fired
  double pre_trace = 0.0;
  double post_trace = 0.0;
};

struct Topology {
  int n = 32;     // total neurons
  int n_in = 4;   // sensory neurons, indices [0, n_in)
  int n_out = 4;  // motor neurons, last n_out indices
};

// One bit per neuron for one tick.
using SpikeVector = std::vector<std::uint8_t>;

// Fully-connected discrete-time LIF network with ping-pong-buffered signal
// exchange. A spike produced in tick t reaches other potentials in tick t+1
// exactly (the buffer swap realizes the uniform one-tick synaptic delay).
class Network {
 public:
  // weights is row-major, weights[i*n + j] = strength of synapse i -> j.
  // The diagonal is forced to 0 and all entries clamped to [-w_max, w_max].
  Network(const Topology& topo, const MicroParams& micro, std::vector<double> weights);

  /// Advance one tick. injected has length n_in; spikes returned are the
  /// neurons that fired during this tick.
  SpikeVector step(std::span<const double> injected);

  /// Pair-based trace STDP for the spikes of the tick just stepped. Returns
  /// the summed per-synapse |dw| before clamping; no-op returning 0 when
  /// stdp is disabled.
  double apply_plasticity(const SpikeVector& fired);

  /// Episode boundary: potentials, buffers, refractory counters and traces
  /// back to rest. Weights (the learned material basis) persist.
  void reset_dynamic_state();

  int n() const { return n_; }
  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  std::int64_t tick() const { return tick_; }
  const MicroParams& micro() const { return micro_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int pre, int post) const { return weights_[static_cast<std::size_t>(pre) * n_ + post]; }
  const NeuronState& neuron(int i) const { return neurons_[static_cast<std::size_t>(i)]; }
  const std::vector<NeuronState>& neurons() const { return neurons_; }

  std::uint64_t weight_digest() const;

 private:
  int n_;
  int n_in_;
  int n_out_;
  std::int64_t tick_ = 0;
  MicroParams micro_;
  double trace_decay_;  // exp(-1/stdp_tau), cached
  std::vector<double> weights_;
  std::vector<NeuronState> neurons_;
};

// Two-tier presentation of the fully-connected network: an agent layer of N
// handles that own no state and alias the N physical neurons, with the
// interlayer weights being the network's weight matrix. Stepping the view is
// stepping the flat network, by construction.
class LayeredView {
 public:
  explicit LayeredView(Network& net) : net_(&net) {}

  int units() const { return net_->n(); }
  const NeuronState& agent_unit(int i) const { return net_->neuron(i); }
  const NeuronState& physical_unit(int i) const { return net_->neuron(i); }
  const std::vector<double>& interlayer_weights() const { return net_->weights(); }

  SpikeVector step(std::span<const double> injected) { return net_->step(injected); }
  double apply_plasticity(const SpikeVector& fired) { return net_->apply_plasticity(fired); }

 private:
  Network* net_;
};

/// Mean absolute elementwise change between two equally-sized weight
/// matrices: sum |after - before| / N^2.
double weight_change_norm(const std::vector<double>& before, const std::vector<double>& after);

}  // namespace snnevo
