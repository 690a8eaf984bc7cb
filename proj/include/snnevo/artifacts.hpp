#pragma once

#include <filesystem>
#include <string>

#include "snnevo/config.hpp"
#include "snnevo/evolution.hpp"

namespace snnevo {

// Layout of one run's output directory.
struct ArtifactPaths {
  std::filesystem::path out_dir;
  std::filesystem::path generations_csv;
  std::filesystem::path best_genome;
  std::filesystem::path checkpoint;
  std::filesystem::path resolved_config;
};

ArtifactPaths artifact_paths(const std::filesystem::path& out_dir);

/// Create the directory, write the resolved-config echo, and start the
/// generations log with its header row.
ArtifactPaths prepare_out_dir(const std::filesystem::path& out_dir, const RunConfig& cfg);

std::string generations_csv_header();

/// One comma-separated row, reals rendered as full-precision decimals
/// (%.17g) so determinism is byte-checkable.
std::string format_generation_row(const GenerationRecord& rec);

/// Append one row and flush; a crash later leaves this row intact.
void append_generation_row(const ArtifactPaths& paths, const GenerationRecord& rec);

std::string format_real(double v);

}  // namespace snnevo
