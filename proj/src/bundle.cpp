#include "phishmatch/bundle.hpp"

#include <algorithm>
#include <fstream>

#include "phishmatch/alphabet.hpp"
#include "phishmatch/artifact.hpp"
#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"

namespace phishmatch {

namespace {
constexpr uint32_t kHead = make_tag("HEAD");
constexpr uint32_t kMach = make_tag("MACH");
constexpr uint32_t kIndex = make_tag("TIDX");
}  // namespace

MachineBundle MachineBundle::build(const std::vector<std::string>& domains, const std::vector<std::string>& reference) {
    DomainMachine::Options opt;
    opt.reference_domains = reference;
    return {DomainMachine::build(domains, opt), TrigramIndex(domains)};
}

std::string MachineBundle::serialize() const {
    BinaryWriter head;
    head.put<uint32_t>(kVariantBitmapLexTld);
    head.put<uint32_t>(static_cast<uint32_t>(kSigma));
    head.put<uint64_t>(machine.size());
    ArtifactContainer c;
    c.add(kHead, head.take());
    c.add(kMach, machine.serialize());
    c.add(kIndex, index.serialize());
    return c.serialize();
}

MachineBundle MachineBundle::deserialize(std::string_view bytes) {
    auto c = ArtifactContainer::deserialize(bytes);
    BinaryReader head(c.require(kHead));
    if (head.get<uint32_t>() != kVariantBitmapLexTld) throw ArtifactVersionMismatch("unsupported machine variant");
    if (head.get<uint32_t>() != static_cast<uint32_t>(kSigma)) throw ArtifactVersionMismatch("alphabet size differs");
    uint64_t states = head.get<uint64_t>();
    MachineBundle b{DomainMachine::deserialize(c.require(kMach)), TrigramIndex::deserialize(c.require(kIndex))};
    if (b.machine.size() != states) throw ArtifactCorrupt("state count differs from header");
    if (b.machine.domains() != b.index.domains()) throw ArtifactCorrupt("machine and index cover different domains");
    return b;
}

void MachineBundle::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("cannot write " + path.string());
}

MachineBundle MachineBundle::load(const std::filesystem::path& path) { return deserialize(read_file(path)); }

std::vector<std::string> parse_ranked_csv(std::string_view text, size_t limit) {
    std::vector<std::string> out;
    size_t lineno = 0;
    while (!text.empty() && out.size() < limit) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        size_t comma = line.find(',');
        std::string d(comma == std::string_view::npos ? line : line.substr(comma + 1));
        std::transform(d.begin(), d.end(), d.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (d.empty() || !in_alphabet(d) || d.find('.') == std::string::npos)
            throw InvalidRecord("ranked list line " + std::to_string(lineno) + ": bad domain");
        out.push_back(std::move(d));
    }
    if (out.empty()) throw EmptyKeywordSet("ranked list is empty");
    return out;
}

std::vector<std::string> load_ranked_csv(const std::filesystem::path& path, size_t limit) {
    return parse_ranked_csv(read_file(path), limit);
}

}  // namespace phishmatch
