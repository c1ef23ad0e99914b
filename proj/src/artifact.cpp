#include "phishmatch/artifact.hpp"

#include <fstream>

#include "phishmatch/data_paths.hpp"

namespace phishmatch {

namespace {
constexpr char kMagic[4] = {'P', 'M', 'A', 'T'};
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void ArtifactContainer::add(uint32_t tag, std::string payload) { sections_.emplace_back(tag, std::move(payload)); }

const std::string* ArtifactContainer::find(uint32_t tag) const {
    for (const auto& [t, p] : sections_)
        if (t == tag) return &p;
    return nullptr;
}

const std::string& ArtifactContainer::require(uint32_t tag) const {
    if (const auto* p = find(tag)) return *p;
    throw ArtifactCorrupt("artifact lacks a required section");
}

std::string ArtifactContainer::serialize() const {
    BinaryWriter w;
    for (char c : kMagic) w.put<char>(c);
    w.put<uint32_t>(kVersion);
    w.put<uint32_t>(static_cast<uint32_t>(sections_.size()));
    std::string out = w.take();
    for (const auto& [tag, payload] : sections_) {
        BinaryWriter h;
        h.put<uint32_t>(tag);
        h.put<uint64_t>(payload.size());
        out += h.bytes();
        out += payload;
    }
    BinaryWriter tail;
    tail.put<uint64_t>(fnv1a64(out));
    return out + tail.bytes();
}

ArtifactContainer ArtifactContainer::deserialize(std::string_view bytes) {
    if (bytes.size() < 20 || bytes.substr(0, 4) != std::string_view(kMagic, 4)) throw ArtifactCorrupt("bad artifact magic");
    BinaryReader r(bytes.substr(4));
    auto version = r.get<uint32_t>();
    if (version != kVersion)
        throw ArtifactVersionMismatch("artifact version " + std::to_string(version) + ", expected " + std::to_string(kVersion));
    std::string_view body = bytes.substr(0, bytes.size() - 8);
    BinaryReader tail(bytes.substr(bytes.size() - 8));
    if (tail.get<uint64_t>() != fnv1a64(body)) throw ArtifactCorrupt("artifact checksum mismatch");

    BinaryReader br(body.substr(12));
    uint32_t count = BinaryReader(body.substr(8, 4)).get<uint32_t>();
    ArtifactContainer c;
    for (uint32_t i = 0; i < count; ++i) {
        auto tag = br.get<uint32_t>();
        auto len = br.get<uint64_t>();
        c.add(tag, std::string(br.get_bytes(len)));
    }
    if (!br.done()) throw ArtifactCorrupt("trailing bytes in artifact");
    return c;
}

void ArtifactContainer::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ArtifactContainer ArtifactContainer::load(const std::filesystem::path& path) { return deserialize(read_file(path)); }

}  // namespace phishmatch
