#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace phishmatch {

/// Directory holding bundled assets. `PHISHMATCH_DATA_DIR` in the environment
/// overrides the path baked in at build time.
std::filesystem::path data_dir();

/// `data_dir() / name`; throws ArtifactMissing if the file does not exist.
std::filesystem::path data_file(std::string_view name);

/// Reads a whole file; throws ArtifactMissing on failure.
std::string read_file(const std::filesystem::path& path);

}  // namespace phishmatch
