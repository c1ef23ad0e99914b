#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phishmatch/domain_machine.hpp"
#include "phishmatch/fuzzy.hpp"

namespace phishmatch {

/// Global-whitelist artifacts built offline: the matching machine and the
/// trigram index over the same ranked domains.
struct MachineBundle {
    static constexpr uint32_t kVariantBitmapLexTld = 3;

    DomainMachine machine;
    TrigramIndex index;

    /// `reference` is the larger ranked list used to find common brands.
    static MachineBundle build(const std::vector<std::string>& domains, const std::vector<std::string>& reference);

    /// Container with a header section (variant, alphabet size, state count),
    /// the machine and the index.
    std::string serialize() const;
    static MachineBundle deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static MachineBundle load(const std::filesystem::path& path);
};

/// Domains of a "rank,domain" CSV in rank order, lowercased; at most `limit`.
/// Throws InvalidRecord on malformed lines and EmptyKeywordSet when empty.
std::vector<std::string> parse_ranked_csv(std::string_view text, size_t limit = SIZE_MAX);
std::vector<std::string> load_ranked_csv(const std::filesystem::path& path, size_t limit = SIZE_MAX);

}  // namespace phishmatch
