#include "snnevo/substrate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "snnevo/rng.hpp"

namespace snnevo {

Network::Network(const Topology& topo, const MicroParams& micro, std::vector<double> weights)
    : n_(topo.n), n_in_(topo.n_in), n_out_(topo.n_out), micro_(micro), weights_(std::move(weights)) {
  if (n_ <= 0) throw DimensionError("network size must be positive");
  if (n_in_ < 0 || n_out_ < 0 || n_in_ + n_out_ > n_)
    throw DimensionError("topology needs n_in + n_out <= n");
  if (weights_.size() != static_cast<std::size_t>(n_) * n_)
    throw DimensionError("weight matrix size does not match topology");
  if (!(micro_.threshold > micro_.v_reset)) throw ValidationError("threshold must exceed v_reset");
  if (!(micro_.stdp_tau > 0.0)) throw ValidationError("stdp_tau must be positive");
  trace_decay_ = std::exp(-1.0 / micro_.stdp_tau);

  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      double& w = weights_[static_cast<std::size_t>(i) * n_ + j];
      w = i == j ? 0.0 : std::clamp(w, -micro_.w_max, micro_.w_max);
    }
  }
  neurons_.resize(static_cast<std::size_t>(n_));
  for (auto& nr : neurons_) nr.potential = micro_.v_reset;
}

SpikeVector Network::step(std::span<const double> injected) {
  if (static_cast<int>(injected.size()) != n_in_)
    throw DimensionError("injection vector length must equal n_in");
  for (double v : injected)
    if (!std::isfinite(v)) throw NumericError("injected current must be finite");

  SpikeVector fired(static_cast<std::size_t>(n_), 0);
  const int refractory = micro_.flags.refractory_enabled ? micro_.refractory_period : 0;

  // Integrate the send-role buffer (input accumulated during the previous
  // tick) and decide firing. Neurons counting down a refractory period
  // integrate but cannot fire.
  for (int i = 0; i < n_; ++i) {
    NeuronState& nr = neurons_[static_cast<std::size_t>(i)];
    double& send = nr.active_buffer == 0 ? nr.buffer_a : nr.buffer_b;
    double pot = micro_.decay * nr.potential + send;
    send = 0.0;
    if (i < n_in_) pot += injected[static_cast<std::size_t>(i)];
    if (nr.refractory_remaining > 0) {
      --nr.refractory_remaining;
    } else if (pot >= micro_.threshold) {
      fired[static_cast<std::size_t>(i)] = 1;
      pot = micro_.v_reset;
      nr.refractory_remaining = refractory;
      nr.last_spike_tick = tick_;
    }
    nr.potential = pot;
  }

  // Spikes deposit into receive-role buffers, in ascending source index
  // order, to be integrated next tick.
  for (int i = 0; i < n_; ++i) {
    if (!fired[static_cast<std::size_t>(i)]) continue;
    const double* row = &weights_[static_cast<std::size_t>(i) * n_];
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      NeuronState& nr = neurons_[static_cast<std::size_t>(j)];
      double& recv = nr.active_buffer == 0 ? nr.buffer_b : nr.buffer_a;
      recv += row[j];
    }
  }

  for (auto& nr : neurons_) nr.active_buffer ^= 1;
  ++tick_;
  return fired;
}

double Network::apply_plasticity(const SpikeVector& fired) {
  if (!micro_.flags.stdp_enabled) return 0.0;
  if (static_cast<int>(fired.size()) != n_)
    throw DimensionError("spike vector length must equal n");

  for (auto& nr : neurons_) {
    nr.pre_trace *= trace_decay_;
    nr.post_trace *= trace_decay_;
  }

  // Weight updates read the post-decay traces; this tick's spikes increment
  // the traces only afterwards, so co-fired pairs contribute nothing at lag 0.
  const double eta = micro_.learning_rate;
  const double a_plus = micro_.stdp_a_plus;
  const double a_minus = micro_.stdp_a_minus;
  const double w_max = micro_.w_max;
  double magnitude = 0.0;

  for (int j = 0; j < n_; ++j) {  // fired presynaptic: depression on row j
    if (!fired[static_cast<std::size_t>(j)]) continue;
    double* row = &weights_[static_cast<std::size_t>(j) * n_];
    for (int i = 0; i < n_; ++i) {
      if (i == j) continue;
      double d = -eta * a_minus * neurons_[static_cast<std::size_t>(i)].post_trace;
      if (fired[static_cast<std::size_t>(i)])
        d += eta * a_plus * neurons_[static_cast<std::size_t>(j)].pre_trace;
      magnitude += std::abs(d);
      row[i] = std::clamp(row[i] + d, -w_max, w_max);
    }
  }
  for (int i = 0; i < n_; ++i) {  // fired postsynaptic: potentiation from silent presynaptics
    if (!fired[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j < n_; ++j) {
      if (j == i || fired[static_cast<std::size_t>(j)]) continue;
      const double d = eta * a_plus * neurons_[static_cast<std::size_t>(j)].pre_trace;
      magnitude += std::abs(d);
      double& w = weights_[static_cast<std::size_t>(j) * n_ + i];
      w = std::clamp(w + d, -w_max, w_max);
    }
  }
  for (int k = 0; k < n_; ++k) {
    if (!fired[static_cast<std::size_t>(k)]) continue;
    neurons_[static_cast<std::size_t>(k)].pre_trace += 1.0;
    neurons_[static_cast<std::size_t>(k)].post_trace += 1.0;
  }
  return magnitude;
}

void Network::reset_dynamic_state() {
  for (auto& nr : neurons_) {
    nr = NeuronState{};
    nr.potential = micro_.v_reset;
  }
}

std::uint64_t Network::weight_digest() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (double w : weights_) h = fnv1a_u64(std::bit_cast<std::uint64_t>(w), h);
  return h;
}

double weight_change_norm(const std::vector<double>& before, const std::vector<double>& after) {
  if (before.size() != after.size() || before.empty())
    throw DimensionError("weight matrices must have equal nonzero size");
  double sum = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k) sum += std::abs(after[k] - before[k]);
  return sum / static_cast<double>(before.size());
}

}  // namespace snnevo
