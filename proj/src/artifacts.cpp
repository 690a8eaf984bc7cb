#include "snnevo/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace snnevo {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ArtifactPaths artifact_paths(const std::filesystem::path& out_dir) {
  ArtifactPaths p;
  p.out_dir = out_dir;
  p.generations_csv = out_dir / "generations.csv";
  p.best_genome = out_dir / "best_genome.json";
  p.checkpoint = out_dir / "checkpoint.json";
  p.resolved_config = out_dir / "resolved_config.json";
  return p;
}

ArtifactPaths prepare_out_dir(const std::filesystem::path& out_dir, const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir.string() + "'");
  ArtifactPaths paths = artifact_paths(out_dir);
  save_json_file(paths.resolved_config, resolved_config_json(cfg));
  std::ofstream log(paths.generations_csv, std::ios::trunc);
  if (!log) throw std::runtime_error("cannot write '" + paths.generations_csv.string() + "'");
  log << generations_csv_header() << '\n';
  return paths;
}

std::string generations_csv_header() {
  return "generation,best_fitness,mean_fitness,best_mean_score,best_dispersion,"
         "best_plasticity,best_genome_digest";
}

std::string format_generation_row(const GenerationRecord& rec) {
  std::string row = std::to_string(rec.generation);
  row += ',';
  row += format_real(rec.best_fitness);
  row += ',';
  row += format_real(rec.mean_fitness);
  row += ',';
  row += format_real(rec.best_mean_score);
  row += ',';
  row += format_real(rec.best_dispersion);
  row += ',';
  row += format_real(rec.best_plasticity);
  row += ',';
  row += std::to_string(rec.best_genome_digest);
  return row;
}

void append_generation_row(const ArtifactPaths& paths, const GenerationRecord& rec) {
  std::ofstream log(paths.generations_csv, std::ios::app);
  if (!log) throw std::runtime_error("cannot append to '" + paths.generations_csv.string() + "'");
  log << format_generation_row(rec) << '\n';
  log.flush();
  if (!log) throw std::runtime_error("failed writing '" + paths.generations_csv.string() + "'");
}

}  // namespace snnevo
