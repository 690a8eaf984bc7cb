#include "snnevo/genome.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace snnevo {

namespace {

double affine_from_unit(double gene, double lo, double hi) {
  const double x = std::clamp(gene, -1.0, 1.0);
  return lo + (x + 1.0) * 0.5 * (hi - lo);
}

}  // namespace

std::uint64_t Genome::digest() const {
  std::uint64_t h = fnv1a_u64(static_cast<std::uint64_t>(n));
  for (double g : weight_genes) h = fnv1a_u64(std::bit_cast<std::uint64_t>(g), h);
  for (double g : micro_genes) h = fnv1a_u64(std::bit_cast<std::uint64_t>(g), h);
  for (std::uint8_t b : flag_genes) h = fnv1a_u64(b, h);
  return h;
}

Genome random_genome(RngStream& stream, int n) {
  if (n <= 0) throw DimensionError("genome size must be positive");
  Genome g;
  g.n = n;
  g.weight_genes.resize(static_cast<std::size_t>(n) * n);
  for (double& w : g.weight_genes) w = stream.next_symmetric();
  for (double& m : g.micro_genes) m = stream.next_symmetric();
  for (std::uint8_t& f : g.flag_genes) f = stream.next_bool() ? 1 : 0;
  return g;
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, RngStream& stream) {
  if (a.n != b.n) throw DimensionError("crossover parents must have equal length");
  Genome c1 = a;
  Genome c2 = b;
  for (std::size_t k = 0; k < a.weight_genes.size(); ++k)
    if (stream.next_bool()) std::swap(c1.weight_genes[k], c2.weight_genes[k]);
  for (int k = 0; k < kMicroGeneCount; ++k)
    if (stream.next_bool()) std::swap(c1.micro_genes[k], c2.micro_genes[k]);
  for (int k = 0; k < kFlagGeneCount; ++k)
    if (stream.next_bool()) std::swap(c1.flag_genes[k], c2.flag_genes[k]);
  return {std::move(c1), std::move(c2)};
}

Genome mutate(const Genome& g, const MutationConfig& cfg, RngStream& stream) {
  Genome out = g;
  for (double& w : out.weight_genes)
    if (stream.next_unit() < cfg.per_gene_prob) w += cfg.weight_sigma * stream.next_gaussian();
  for (double& m : out.micro_genes)
    if (stream.next_unit() < cfg.per_gene_prob) m += cfg.micro_sigma * stream.next_gaussian();
  for (std::uint8_t& f : out.flag_genes)
    if (stream.next_unit() < cfg.flag_flip_prob) f ^= 1;
  return out;
}

MicroParams decode_micro(const Genome& g) {
  MicroParams p;
  p.threshold = affine_from_unit(g.micro_genes[kGeneThreshold], 0.5, 2.0);
  p.decay = affine_from_unit(g.micro_genes[kGeneDecay], 0.0, 0.99);
  p.v_reset = affine_from_unit(g.micro_genes[kGeneVReset], -1.0, 0.0);
  p.refractory_period =
      static_cast<int>(std::lround(affine_from_unit(g.micro_genes[kGeneRefractory], 0.0, 5.0)));
  p.stdp_a_plus = affine_from_unit(g.micro_genes[kGeneAPlus], 0.0, 0.5);
  p.stdp_a_minus = affine_from_unit(g.micro_genes[kGeneAMinus], 0.0, 0.5);
  p.stdp_tau = affine_from_unit(g.micro_genes[kGeneTau], 1.0, 20.0);
  p.learning_rate = affine_from_unit(g.micro_genes[kGeneLearningRate], 0.0, 1.0);
  p.w_max = affine_from_unit(g.micro_genes[kGeneWMax], 0.5, 4.0);
  p.flags.stdp_enabled = g.flag_genes[kFlagStdp] != 0;
  p.flags.refractory_enabled = g.flag_genes[kFlagRefractory] != 0;
  p.flags.symmetric_stdp = g.flag_genes[kFlagSymmetricStdp] != 0;
  if (p.flags.symmetric_stdp) p.stdp_a_minus = p.stdp_a_plus;
  return p;
}

Network build_network(const Genome& g, const Topology& topo) {
  if (g.n != topo.n) throw DimensionError("genome length does not match topology");
  if (g.weight_genes.size() != static_cast<std::size_t>(g.n) * g.n)
    throw DimensionError("malformed genome weight block");
  return Network(topo, decode_micro(g), g.weight_genes);
}

}  // namespace snnevo
