#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "snnevo/rng.hpp"
#include "snnevo/substrate.hpp"

namespace snnevo {

// Index order of the micro genes inside a genome.
enum MicroGene : int {
  kGeneThreshold = 0,
  kGeneDecay,
  kGeneVReset,
  kGeneRefractory,
  kGeneAPlus,
  kGeneAMinus,
  kGeneTau,
  kGeneLearningRate,
  kGeneWMax,
  kMicroGeneCount  // 9
};

enum FlagGene : int {
  kFlagStdp = 0,
  kFlagRefractory,
  kFlagSymmetricStdp,
  kFlagGeneCount  // 3
};

// Flat encoding of one agent: N^2 initial weights, 9 unconstrained micro
// genes (squashed by decode_micro), 3 feature-flag bits.
struct Genome {
  int n = 0;
  std::vector<double> weight_genes;                     // n*n, row-major pre -> post
  std::array<double, kMicroGeneCount> micro_genes{};    // order per MicroGene
  std::array<std::uint8_t, kFlagGeneCount> flag_genes{};

  std::size_t size() const { return weight_genes.size() + kMicroGeneCount + kFlagGeneCount; }
  std::uint64_t digest() const;
  bool operator==(const Genome&) const = default;
};

struct MutationConfig {
  double weight_sigma = 0.2;    // Gaussian step on weight genes
  double micro_sigma = 0.15;    // Gaussian step on micro genes
  double flag_flip_prob = 0.02;
  double per_gene_prob = 0.1;   // chance each real gene is perturbed
};

/// Weight and micro genes uniform in [-1, 1], flags fair coin flips.
Genome random_genome(RngStream& stream, int n);

/// Uniform crossover: each gene position independently swapped with
/// probability 0.5. Children are position-wise permutations of the parents.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, RngStream& stream);

/// Additive Gaussian noise per real gene with probability per_gene_prob;
/// each flag flipped with probability flag_flip_prob.
Genome mutate(const Genome& g, const MutationConfig& cfg, RngStream& stream);

/// Squash the unconstrained micro genes onto their parameter ranges (affine
/// from [-1,1], inputs clamped first) and decode the flag bits. Total on any
/// genome.
MicroParams decode_micro(const Genome& g);

/// Instantiate the runtime agent: weights copied from the genome with the
/// diagonal forced to 0 and values clamped to [-w_max, w_max]; all neurons at
/// rest, tick 0.
Network build_network(const Genome& g, const Topology& topo);

}  // namespace snnevo
