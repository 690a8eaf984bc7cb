#pragma once

#include <stdexcept>
#include <string>

namespace snnevo {

// Shape/size disagreements between genomes, topologies, matrices, vectors.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite or otherwise unusable numeric input.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument values; messages carry the field path
// ("search.pop_size: ...") when raised by the config layer.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable input file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Artifact parsed but failed an integrity check (bad checksum, mangled field).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Artifact version is not one this build can consume.
struct VersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace snnevo
