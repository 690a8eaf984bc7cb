// Acceptance suite: one test case per criterion, one printed line each.
// Reaching the end of a case means every REQUIRE held; doctest reports any
// failure with the criterion number in the case name.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "snnevo/artifacts.hpp"
#include "snnevo/evolution.hpp"
#include "snnevo/fixedpoint.hpp"
#include "snnevo/serialize.hpp"
#include "support/oracle.hpp"

using namespace snnevo;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string render_log(const std::vector<GenerationRecord>& records) {
  std::string text = generations_csv_header() + "\n";
  for (const auto& rec : records) text += format_generation_row(rec) + "\n";
  return text;
}

SearchConfig desk_config(std::uint64_t seed) {
  SearchConfig cfg;
  cfg.pop_size = 8;
  cfg.generations = 4;
  cfg.tournament_k = 2;
  cfg.elitism_count = 2;
  cfg.master_seed = seed;
  cfg.topology = {8, 4, 4};
  cfg.scenario.name = "cue_assoc";
  cfg.scenario.seed = 5;
  cfg.scenario.cue.rounds = 2;
  cfg.scenario.cue.presentation_window = 4;
  cfg.scenario.cue.decision_window = 4;
  cfg.fitness.episodes = 2;
  cfg.fitness.t_max = 8;
  return cfg;
}

}  // namespace

TEST_CASE("criterion 1: substrate oracle equivalence") {
  const auto start = std::chrono::steady_clock::now();
  RngStream setup(20240601);
  for (int config = 0; config < 200; ++config) {
    const int n = 2 + static_cast<int>(setup.next_below(15));  // N in [2, 16]
    const int n_in = 1 + static_cast<int>(setup.next_below(
                             static_cast<std::uint64_t>(std::max(1, n / 2))));
    const int n_out = static_cast<int>(setup.next_below(
        static_cast<std::uint64_t>(n - n_in) + 1));
    const int ticks = 1 + static_cast<int>(setup.next_below(200));
    const Topology topo{n, n_in, n_out};

    RngStream gstream(setup.next_u64());
    const Genome genome = random_genome(gstream, n);

    Network net = build_network(genome, topo);
    testing::OracleSim oracle(genome, topo);
    const double drive = 2.0 * net.micro().threshold;
    RngStream inj(setup.next_u64());
    for (int t = 0; t < ticks; ++t) {
      std::vector<double> current(static_cast<std::size_t>(n_in));
      for (double& c : current) c = drive * inj.next_unit();
      const SpikeVector fired = net.step(current);
      net.apply_plasticity(fired);
      const auto oracle_fired = oracle.tick(current);
      REQUIRE(fired == oracle_fired);
    }
    REQUIRE(net.weights() == oracle.weights());
  }
  const double elapsed = seconds_since(start);
  REQUIRE(elapsed < 10.0);
  std::printf("[PASS] criterion 1: substrate oracle equivalence, 200 configs bit-exact in %.2fs\n",
              elapsed);
}

TEST_CASE("criterion 2: layered-view equivalence") {
  RngStream setup(77);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 4 + static_cast<int>(setup.next_below(9));
    const Topology topo{n, 2, 2};
    RngStream gstream(setup.next_u64());
    Genome genome = random_genome(gstream, n);
    Network flat = build_network(genome, topo);
    Network backing = build_network(genome, topo);
    LayeredView view(backing);
    RngStream inj(setup.next_u64());
    const double drive = 2.0 * flat.micro().threshold;
    for (int t = 0; t < 100; ++t) {
      const std::vector<double> current{drive * inj.next_unit(), drive * inj.next_unit()};
      const SpikeVector a = flat.step(current);
      flat.apply_plasticity(a);
      const SpikeVector b = view.step(current);
      view.apply_plasticity(b);
      REQUIRE(a == b);
    }
    REQUIRE(flat.weights() == backing.weights());
  }
  std::printf("[PASS] criterion 2: layered-view stepping bit-identical on 50 networks\n");
}

TEST_CASE("criterion 3: stdp kernel against the analytic oracle") {
  const double eta = 0.7;
  const double a_plus = 0.3;
  const double a_minus = 0.2;
  const double tau = 3.7;
  MicroParams micro;
  micro.threshold = 1.0;
  micro.v_reset = 0.0;
  micro.stdp_tau = tau;
  micro.learning_rate = eta;
  micro.stdp_a_plus = a_plus;
  micro.stdp_a_minus = a_minus;
  micro.w_max = 100.0;
  micro.flags.stdp_enabled = true;

  for (int lag = 1; lag <= 20; ++lag) {
    Network pot({2, 1, 1}, micro, {0, 0, 0, 0});
    pot.apply_plasticity(SpikeVector{1, 0});
    for (int t = 1; t < lag; ++t) pot.apply_plasticity(SpikeVector{0, 0});
    pot.apply_plasticity(SpikeVector{0, 1});
    const double expected_pot = eta * a_plus * std::exp(-lag / tau);
    REQUIRE(std::abs(pot.weight(0, 1) - expected_pot) / expected_pot < 1e-12);

    Network dep({2, 1, 1}, micro, {0, 0, 0, 0});
    dep.apply_plasticity(SpikeVector{0, 1});
    for (int t = 1; t < lag; ++t) dep.apply_plasticity(SpikeVector{0, 0});
    dep.apply_plasticity(SpikeVector{1, 0});
    const double expected_dep = -eta * a_minus * std::exp(-lag / tau);
    REQUIRE(std::abs(dep.weight(0, 1) - expected_dep) / std::abs(expected_dep) < 1e-12);
  }
  std::printf("[PASS] criterion 3: stdp kernel matches eta*a*exp(-lag/tau) at 20 lags (<1e-12)\n");
}

TEST_CASE("criterion 4: behavior metric axioms") {
  RngStream s(99);
  const int t_max = 24;
  const auto random_sig = [&] {
    BehaviorSignature sig;
    sig.actions.resize(t_max);
    for (ActionId& a : sig.actions) {
      const auto v = s.next_below(5);
      a = v == 0 ? kActionNone : static_cast<ActionId>(v - 1);
    }
    return sig;
  };
  for (int rep = 0; rep < 100000; ++rep) {
    const BehaviorSignature x = random_sig();
    const BehaviorSignature y = random_sig();
    const BehaviorSignature z = random_sig();
    REQUIRE(behavior_distance(x, x) == 0.0);
    const double xy = behavior_distance(x, y);
    REQUIRE(xy == behavior_distance(y, x));
    REQUIRE(behavior_distance(x, z) <= xy + behavior_distance(y, z));
  }
  std::printf("[PASS] criterion 4: metric axioms exact, 100000 random triples, 0 violations\n");
}

TEST_CASE("criterion 5: stability gate on constructed genomes") {
  ScenarioSpec spec;
  spec.name = "cue_assoc";
  spec.seed = 4;
  FitnessConfig cfg;  // eps 1e-3, penalty 80
  const Topology topo{16, 4, 4};

  RngStream gs(31);
  Genome frozen = random_genome(gs, 16);
  frozen.flag_genes[kFlagStdp] = 0;
  RngStream e1(1);
  const FitnessReport frozen_report = evaluate(frozen, topo, spec, cfg, e1);
  REQUIRE(frozen_report.plasticity_magnitude < cfg.plasticity_epsilon);
  REQUIRE(frozen_report.fitness ==
          frozen_report.mean_score - cfg.dispersion_weight * frozen_report.dispersion -
              cfg.penalty);

  Genome plastic = frozen;
  plastic.flag_genes[kFlagStdp] = 1;
  plastic.micro_genes[kGeneLearningRate] = 1.0;  // eta = 1
  plastic.micro_genes[kGeneAPlus] = 1.0;         // a+ = 0.5
  plastic.micro_genes[kGeneAMinus] = 0.0;        // a- = 0.25
  RngStream e2(1);
  const FitnessReport plastic_report = evaluate(plastic, topo, spec, cfg, e2);
  REQUIRE(plastic_report.plasticity_magnitude >= cfg.plasticity_epsilon);
  REQUIRE(plastic_report.fitness ==
          plastic_report.mean_score - cfg.dispersion_weight * plastic_report.dispersion);
  std::printf("[PASS] criterion 5: plasticity gate penalizes frozen genomes only "
              "(frozen %.3g, plastic %.3g)\n",
              frozen_report.plasticity_magnitude, plastic_report.plasticity_magnitude);
}

TEST_CASE("criterion 6: determinism, parallel safety, checkpoint fidelity") {
  const SearchConfig cfg = desk_config(606);

  const SearchResult w1 = run_search(cfg, 1);
  const SearchResult w8 = run_search(cfg, 8);
  REQUIRE(render_log(w1.records) == render_log(w8.records));
  REQUIRE(checkpoint_to_json(w1.final_checkpoint).dump() ==
          checkpoint_to_json(w8.final_checkpoint).dump());

  std::vector<Checkpoint> snapshots;
  const SearchResult full = run_search(
      cfg, 2, [&](const GenerationRecord&, const Checkpoint& cp) { snapshots.push_back(cp); });
  const SearchResult resumed = resume_search(snapshots[1], 8);  // after generation 1
  std::vector<GenerationRecord> stitched(full.records.begin(), full.records.begin() + 2);
  stitched.insert(stitched.end(), resumed.records.begin(), resumed.records.end());
  REQUIRE(render_log(stitched) == render_log(full.records));
  REQUIRE(checkpoint_to_json(resumed.final_checkpoint).dump() ==
          checkpoint_to_json(full.final_checkpoint).dump());
  std::printf("[PASS] criterion 6: 1-vs-8-worker logs and checkpoint-resume byte-identical\n");
}

TEST_CASE("criterion 7: elitism monotonicity on every run") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SearchConfig cfg = desk_config(seed);
    cfg.generations = 6;
    REQUIRE(cfg.elitism_count >= 1);
    const SearchResult res = run_search(cfg, 4);
    for (std::size_t g = 1; g < res.records.size(); ++g)
      REQUIRE(res.records[g].best_fitness >= res.records[g - 1].best_fitness);
  }
  std::printf("[PASS] criterion 7: best_fitness non-decreasing with elitism on all runs\n");
}

TEST_CASE("criterion 8: search efficacy at desk scale") {
  const auto start = std::chrono::steady_clock::now();
  const double random_policy_score = 8.0 / 4.0;  // R rounds / C cues
  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SearchConfig cfg;
    cfg.pop_size = 64;
    cfg.generations = 50;
    cfg.master_seed = seed;
    cfg.topology = {32, 4, 4};
    cfg.scenario.name = "cue_assoc";
    cfg.scenario.seed = 12;
    cfg.fitness.episodes = 5;
    cfg.fitness.t_max = 64;

    const SearchResult res = run_search(cfg, 8);
    const double gen0_best = res.records.front().best_fitness;
    const double final_best = res.records.back().best_fitness;
    const double final_score = res.records.back().best_mean_score;
    const bool improved = final_best > gen0_best;
    const bool beats_random = final_score > random_policy_score;
    if (improved && beats_random) ++successes;
    std::printf("  seed %llu: gen0 best %.3f -> final best %.3f, mean_score %.3f%s\n",
                static_cast<unsigned long long>(seed), gen0_best, final_best, final_score,
                improved && beats_random ? "" : "  (miss)");
  }
  const double elapsed = seconds_since(start);
  REQUIRE(successes >= 4);
  REQUIRE(elapsed < 900.0);
  std::printf("[PASS] criterion 8: %d/5 seeds improved and beat the random policy in %.1fs\n",
              successes, elapsed);
}

TEST_CASE("criterion 9: fixed-point detector against the analytic suffix rule") {
  // scripted canonical sequences
  const ConvergenceReport constant = classify_distances({0, 0, 0, 0, 0}, 0.05, 3, 0.0);
  REQUIRE(constant.converged);
  REQUIRE(constant.n_star == 0);
  const ConvergenceReport divergent =
      classify_distances({0.5, 0.6, 0.7, 0.8, 0.9}, 0.05, 3, 0.0);
  REQUIRE_FALSE(divergent.converged);
  std::vector<double> geometric;
  for (int e = 0; e < 12; ++e) geometric.push_back(0.8 * std::pow(0.5, e));
  const ConvergenceReport decay = classify_distances(geometric, 0.06, 3, 0.0);
  REQUIRE(decay.converged);
  REQUIRE(decay.n_star == 4);  // first index with 0.8*0.5^e < 0.06

  // randomized scripted cases vs an independent evaluation of the rule
  RngStream s(909);
  for (int rep = 0; rep < 100; ++rep) {
    const int len = 4 + static_cast<int>(s.next_below(10));
    std::vector<double> d(static_cast<std::size_t>(len));
    for (double& v : d) v = s.next_unit();
    const double tol = 0.1 + 0.6 * s.next_unit();
    const int window = 1 + static_cast<int>(s.next_below(3));

    int expected_n_star = len;
    for (int j = len; j-- > 0;) {
      if (d[static_cast<std::size_t>(j)] < tol)
        expected_n_star = j;
      else
        break;
    }
    const bool expected_converged = len - expected_n_star >= window;

    const ConvergenceReport r = classify_distances(d, tol, window, 0.0);
    REQUIRE(r.converged == expected_converged);
    if (expected_converged) REQUIRE(r.n_star == expected_n_star);
    else REQUIRE_FALSE(r.n_star.has_value());
  }
  std::printf("[PASS] criterion 9: suffix rule exact on canonical and 100 random scripts\n");
}

TEST_CASE("criterion 10: probe identity at perturbation level zero") {
  RngStream gs(1010);
  ScenarioSpec spec;
  spec.name = "cue_assoc";
  spec.seed = 8;
  spec.cue.rounds = 2;
  spec.cue.presentation_window = 4;
  spec.cue.decision_window = 4;
  const ProbeConfig cfg{5, 0.05, 2};
  for (int rep = 0; rep < 20; ++rep) {
    const Genome g = random_genome(gs, 10);
    const auto kind =
        rep % 2 == 0 ? Perturbation::Kind::obs_noise : Perturbation::Kind::cue_remap;
    const auto [train, perturbed] =
        generalization_probe(g, {10, 4, 4}, spec, kind, 0.0, cfg, 8);
    REQUIRE(train == perturbed);
  }
  std::printf("[PASS] criterion 10: level-0 probes identical on 20 random genomes\n");
}
