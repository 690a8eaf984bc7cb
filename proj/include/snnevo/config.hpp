#pragma once

#include <filesystem>

#include "snnevo/serialize.hpp"

namespace snnevo {

// A fully resolved run configuration: the search setup plus output policy.
struct RunConfig {
  SearchConfig search;
  int checkpoint_every = 1;  // generations between checkpoint rewrites; 0 = final only
};

/// Parse and validate a config document with sections
/// {search, fitness, scenario, topology, output}. Unknown keys anywhere are
/// rejected; every violation names the offending field path
/// ("search.pop_size: ..."). Throws ValidationError.
RunConfig parse_run_config(const Json& doc);

/// Read + parse + validate a config file. Missing file -> IoError,
/// malformed JSON -> DataError, schema violation -> ValidationError.
RunConfig load_run_config(const std::filesystem::path& path);

/// The config echoed with every default materialized; feeding the echo back
/// through parse_run_config reproduces the same resolved configuration.
Json resolved_config_json(const RunConfig& cfg);

}  // namespace snnevo
