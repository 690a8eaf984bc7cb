#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "snnevo/evolution.hpp"
#include "snnevo/fixedpoint.hpp"

namespace snnevo {

using Json = nlohmann::ordered_json;

inline constexpr int kGenomeFormatVersion = 1;

// Genome record {version, n, weight_genes, micro_genes, flag_genes}.
// Reals survive the round trip bit-exactly.
Json genome_to_json(const Genome& g);
Genome genome_from_json(const Json& j);

Json signature_to_json(const BehaviorSignature& s);
BehaviorSignature signature_from_json(const Json& j);

// Audit export of a full episode: per-step observation/action pairs + score.
Json episode_trace_to_json(const EpisodeTrace& trace);

Json fitness_report_to_json(const FitnessReport& r);
FitnessReport fitness_report_from_json(const Json& j);

Json convergence_report_to_json(const ConvergenceReport& r);
ConvergenceReport convergence_report_from_json(const Json& j);

Json scenario_spec_to_json(const ScenarioSpec& s);
ScenarioSpec scenario_spec_from_json(const Json& j);

Json search_config_to_json(const SearchConfig& c);
SearchConfig search_config_from_json(const Json& j);

Json generation_record_to_json(const GenerationRecord& r);
GenerationRecord generation_record_from_json(const Json& j);

// Checkpoints carry a checksum over their canonical serialization; loading
// rejects checksum mismatches (DataError) and unknown versions
// (VersionError).
Json checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const Json& j);

Json load_json_file(const std::filesystem::path& path);  // IoError / DataError
void save_json_file(const std::filesystem::path& path, const Json& j);

void save_genome_file(const std::filesystem::path& path, const Genome& g);
Genome load_genome_file(const std::filesystem::path& path);

void save_checkpoint_file(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint load_checkpoint_file(const std::filesystem::path& path);

}  // namespace snnevo
