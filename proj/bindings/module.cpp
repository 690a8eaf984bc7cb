#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "snnevo/artifacts.hpp"
#include "snnevo/config.hpp"
#include "snnevo/evolution.hpp"
#include "snnevo/fixedpoint.hpp"
#include "snnevo/serialize.hpp"

namespace py = pybind11;
using namespace snnevo;

namespace {

std::vector<double> network_potentials(const Network& net) {
  std::vector<double> out;
  out.reserve(net.neurons().size());
  for (const NeuronState& n : net.neurons()) out.push_back(n.potential);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Evolutionary search for spiking-network agents scored by the "
            "stability of their on-substrate learning";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<VersionError>(m, "VersionError", PyExc_RuntimeError);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &RngStream::next_u64)
      .def("next_unit", &RngStream::next_unit)
      .def("next_symmetric", &RngStream::next_symmetric)
      .def("next_below", &RngStream::next_below, py::arg("bound"))
      .def("next_bool", &RngStream::next_bool)
      .def("next_gaussian", &RngStream::next_gaussian);

  m.def("derive_stream", &derive_stream, py::arg("master_seed"), py::arg("generation"),
        py::arg("individual"), py::arg("purpose"));

  py::class_<FeatureFlags>(m, "FeatureFlags")
      .def(py::init<>())
      .def_readwrite("stdp_enabled", &FeatureFlags::stdp_enabled)
      .def_readwrite("refractory_enabled", &FeatureFlags::refractory_enabled)
      .def_readwrite("symmetric_stdp", &FeatureFlags::symmetric_stdp);

  py::class_<MicroParams>(m, "MicroParams")
      .def(py::init<>())
      .def_readwrite("threshold", &MicroParams::threshold)
      .def_readwrite("decay", &MicroParams::decay)
      .def_readwrite("v_reset", &MicroParams::v_reset)
      .def_readwrite("refractory_period", &MicroParams::refractory_period)
      .def_readwrite("stdp_a_plus", &MicroParams::stdp_a_plus)
      .def_readwrite("stdp_a_minus", &MicroParams::stdp_a_minus)
      .def_readwrite("stdp_tau", &MicroParams::stdp_tau)
      .def_readwrite("learning_rate", &MicroParams::learning_rate)
      .def_readwrite("w_max", &MicroParams::w_max)
      .def_readwrite("flags", &MicroParams::flags);

  py::class_<Topology>(m, "Topology")
      .def(py::init<>())
      .def(py::init([](int n, int n_in, int n_out) {
             return Topology{n, n_in, n_out};
           }),
           py::arg("n"), py::arg("n_in"), py::arg("n_out"))
      .def_readwrite("n", &Topology::n)
      .def_readwrite("n_in", &Topology::n_in)
      .def_readwrite("n_out", &Topology::n_out);

  py::class_<Genome>(m, "Genome")
      .def(py::init<>())
      .def_readwrite("n", &Genome::n)
      .def_readwrite("weight_genes", &Genome::weight_genes)
      .def_readwrite("micro_genes", &Genome::micro_genes)
      .def_readwrite("flag_genes", &Genome::flag_genes)
      .def("digest", &Genome::digest)
      .def("__len__", &Genome::size)
      .def("__eq__", [](const Genome& a, const Genome& b) { return a == b; });

  py::class_<MutationConfig>(m, "MutationConfig")
      .def(py::init<>())
      .def_readwrite("weight_sigma", &MutationConfig::weight_sigma)
      .def_readwrite("micro_sigma", &MutationConfig::micro_sigma)
      .def_readwrite("flag_flip_prob", &MutationConfig::flag_flip_prob)
      .def_readwrite("per_gene_prob", &MutationConfig::per_gene_prob);

  m.def("random_genome", &random_genome, py::arg("stream"), py::arg("n"));
  m.def("crossover", &crossover, py::arg("a"), py::arg("b"), py::arg("stream"));
  m.def("mutate", &mutate, py::arg("genome"), py::arg("config"), py::arg("stream"));
  m.def("decode_micro", &decode_micro, py::arg("genome"));
  m.def("build_network", &build_network, py::arg("genome"), py::arg("topology"));
  m.def("weight_change_norm", &weight_change_norm, py::arg("before"), py::arg("after"));

  py::class_<Network>(m, "Network")
      .def("step",
           [](Network& net, const std::vector<double>& injected) {
             return net.step(injected);
           },
           py::arg("injected"))
      .def("apply_plasticity", &Network::apply_plasticity, py::arg("fired"))
      .def_property_readonly("n", &Network::n)
      .def_property_readonly("n_in", &Network::n_in)
      .def_property_readonly("n_out", &Network::n_out)
      .def_property_readonly("tick", &Network::tick)
      .def_property_readonly("weights", &Network::weights)
      .def_property_readonly("potentials", &network_potentials)
      .def_property_readonly("micro", &Network::micro);

  py::class_<Perturbation>(m, "Perturbation")
      .def(py::init<>())
      .def_property(
          "kind",
          [](const Perturbation& p) { return std::string(perturbation_kind_name(p.kind)); },
          [](Perturbation& p, const std::string& name) { p.kind = parse_perturbation_kind(name); })
      .def_readwrite("level", &Perturbation::level);

  py::class_<CueAssocParams>(m, "CueAssocParams")
      .def(py::init<>())
      .def_readwrite("cues", &CueAssocParams::cues)
      .def_readwrite("rounds", &CueAssocParams::rounds)
      .def_readwrite("presentation_window", &CueAssocParams::presentation_window)
      .def_readwrite("decision_window", &CueAssocParams::decision_window);

  py::class_<GridworldParams>(m, "GridworldParams")
      .def(py::init<>())
      .def_readwrite("grid", &GridworldParams::grid)
      .def_readwrite("food", &GridworldParams::food)
      .def_readwrite("decision_window", &GridworldParams::decision_window);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("name", &ScenarioSpec::name)
      .def_readwrite("seed", &ScenarioSpec::seed)
      .def_readwrite("cue", &ScenarioSpec::cue)
      .def_readwrite("gridworld", &ScenarioSpec::gridworld)
      .def_readwrite("perturbation", &ScenarioSpec::perturbation);

  m.def("perturb",
        [](const ScenarioSpec& spec, const std::string& kind, double level) {
          return perturb(spec, parse_perturbation_kind(kind), level);
        },
        py::arg("spec"), py::arg("kind"), py::arg("level"));
  m.def("scenario_max_score", &scenario_max_score, py::arg("spec"));

  py::class_<BehaviorSignature>(m, "BehaviorSignature")
      .def(py::init<>())
      .def_readwrite("actions", &BehaviorSignature::actions)
      .def_readwrite("observations_hash", &BehaviorSignature::observations_hash)
      .def_readwrite("score", &BehaviorSignature::score)
      .def("__eq__", [](const BehaviorSignature& a, const BehaviorSignature& b) { return a == b; });

  py::class_<FitnessConfig>(m, "FitnessConfig")
      .def(py::init<>())
      .def_readwrite("k", &FitnessConfig::episodes)
      .def_readwrite("lambda_disp", &FitnessConfig::dispersion_weight)
      .def_readwrite("eps_plastic", &FitnessConfig::plasticity_epsilon)
      .def_readwrite("penalty", &FitnessConfig::penalty)
      .def_readwrite("t_max", &FitnessConfig::t_max);

  py::class_<EpisodeRecord>(m, "EpisodeRecord")
      .def_readonly("score", &EpisodeRecord::score)
      .def_readonly("signature", &EpisodeRecord::signature)
      .def_readonly("plasticity", &EpisodeRecord::plasticity);

  py::class_<FitnessReport>(m, "FitnessReport")
      .def_readonly("mean_score", &FitnessReport::mean_score)
      .def_readonly("dispersion", &FitnessReport::dispersion)
      .def_readonly("plasticity_magnitude", &FitnessReport::plasticity_magnitude)
      .def_readonly("fitness", &FitnessReport::fitness)
      .def_readonly("episodes", &FitnessReport::episodes)
      .def("to_json", [](const FitnessReport& r) { return fitness_report_to_json(r).dump(2); });

  m.def("behavior_distance", &behavior_distance, py::arg("a"), py::arg("b"));
  m.def("dispersion",
        [](const std::vector<BehaviorSignature>& sigs) {
          return dispersion(std::span<const BehaviorSignature>(sigs));
        },
        py::arg("signatures"));
  m.def("evaluate", &evaluate, py::arg("genome"), py::arg("topology"), py::arg("scenario"),
        py::arg("config"), py::arg("stream"));

  py::class_<ProbeConfig>(m, "ProbeConfig")
      .def(py::init<>())
      .def_readwrite("max_episodes", &ProbeConfig::max_episodes)
      .def_readwrite("tol", &ProbeConfig::tol)
      .def_readwrite("window", &ProbeConfig::window);

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("converged", &ConvergenceReport::converged)
      .def_readonly("n_star", &ConvergenceReport::n_star)
      .def_readonly("consecutive_distances", &ConvergenceReport::consecutive_distances)
      .def_readonly("final_score", &ConvergenceReport::final_score)
      .def_readonly("stability_window", &ConvergenceReport::stability_window)
      .def("to_json", [](const ConvergenceReport& r) { return convergence_report_to_json(r).dump(2); })
      .def("__eq__",
           [](const ConvergenceReport& a, const ConvergenceReport& b) { return a == b; });

  m.def("signature_sequence", &signature_sequence, py::arg("genome"), py::arg("topology"),
        py::arg("scenario"), py::arg("episodes"), py::arg("t_max"));
  m.def("detect_fixed_point",
        [](const std::vector<BehaviorSignature>& sigs, double tol, int window) {
          return detect_fixed_point(std::span<const BehaviorSignature>(sigs), tol, window);
        },
        py::arg("signatures"), py::arg("tol"), py::arg("window"));
  m.def("classify_distances", &classify_distances, py::arg("distances"), py::arg("tol"),
        py::arg("window"), py::arg("final_score") = 0.0);
  m.def("generalization_probe",
        [](const Genome& g, const Topology& topo, const ScenarioSpec& train,
           const std::string& kind, double level, const ProbeConfig& cfg, int t_max) {
          return generalization_probe(g, topo, train, parse_perturbation_kind(kind), level, cfg,
                                      t_max);
        },
        py::arg("genome"), py::arg("topology"), py::arg("train_spec"), py::arg("kind"),
        py::arg("level"), py::arg("config"), py::arg("t_max"));

  py::class_<SearchConfig>(m, "SearchConfig")
      .def(py::init<>())
      .def_readwrite("pop_size", &SearchConfig::pop_size)
      .def_readwrite("generations", &SearchConfig::generations)
      .def_readwrite("tournament_k", &SearchConfig::tournament_k)
      .def_readwrite("elitism_count", &SearchConfig::elitism_count)
      .def_readwrite("crossover_prob", &SearchConfig::crossover_prob)
      .def_readwrite("mutation", &SearchConfig::mutation)
      .def_readwrite("fitness", &SearchConfig::fitness)
      .def_readwrite("scenario", &SearchConfig::scenario)
      .def_readwrite("topology", &SearchConfig::topology)
      .def_readwrite("master_seed", &SearchConfig::master_seed)
      .def_readwrite("target_fitness", &SearchConfig::target_fitness);

  py::class_<GenerationRecord>(m, "GenerationRecord")
      .def_readonly("generation", &GenerationRecord::generation)
      .def_readonly("best_fitness", &GenerationRecord::best_fitness)
      .def_readonly("mean_fitness", &GenerationRecord::mean_fitness)
      .def_readonly("best_mean_score", &GenerationRecord::best_mean_score)
      .def_readonly("best_dispersion", &GenerationRecord::best_dispersion)
      .def_readonly("best_plasticity", &GenerationRecord::best_plasticity)
      .def_readonly("best_genome_digest", &GenerationRecord::best_genome_digest);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("best_genome", &SearchResult::best_genome)
      .def_readonly("best_fitness", &SearchResult::best_fitness)
      .def_readonly("records", &SearchResult::records);

  m.def("run_search",
        [](const SearchConfig& cfg, int workers) { return run_search(cfg, workers); },
        py::arg("config"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("search_config_from_json",
        [](const std::string& text) { return search_config_from_json(Json::parse(text)); },
        py::arg("text"));
  m.def("run_config_from_json",
        [](const std::string& text) {
          Json doc = Json::parse(text, nullptr, false);
          if (doc.is_discarded()) throw ValidationError("config text is not valid JSON");
          return parse_run_config(doc).search;
        },
        py::arg("text"),
        "Parse + validate a full run-config document, returning the search config");
  m.def("search_config_to_json",
        [](const SearchConfig& cfg) { return search_config_to_json(cfg).dump(2); },
        py::arg("config"));

  m.def("save_genome", &save_genome_file, py::arg("path"), py::arg("genome"));
  m.def("load_genome", &load_genome_file, py::arg("path"));

  m.attr("ACTION_NONE") = kActionNone;
  m.attr("__version__") = "0.1.0";
}
