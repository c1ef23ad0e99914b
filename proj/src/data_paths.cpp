#include "phishmatch/data_paths.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phishmatch/error.hpp"

#ifndef PHISHMATCH_DEFAULT_DATA_DIR
#define PHISHMATCH_DEFAULT_DATA_DIR "data"
#endif

namespace phishmatch {

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("PHISHMATCH_DATA_DIR"); env && *env) return env;
    return PHISHMATCH_DEFAULT_DATA_DIR;
}

std::filesystem::path data_file(std::string_view name) {
    auto p = data_dir() / std::string(name);
    if (!std::filesystem::exists(p)) throw ArtifactMissing("missing data file: " + p.string());
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactMissing("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace phishmatch
