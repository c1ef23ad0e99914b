#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "phishmatch/error.hpp"

namespace phishmatch {

/// Little-endian byte sink for artifact payloads.
class BinaryWriter {
public:
    template <class T>
        requires std::is_arithmetic_v<T>
    void put(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        bytes_.append(buf, sizeof(T));
    }

    void put_string(std::string_view s) {
        put<uint32_t>(static_cast<uint32_t>(s.size()));
        bytes_.append(s);
    }

    template <class T>
        requires std::is_arithmetic_v<T>
    void put_vector(const std::vector<T>& v) {
        put<uint64_t>(v.size());
        bytes_.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    }

    void put_strings(const std::vector<std::string>& v) {
        put<uint64_t>(v.size());
        for (const auto& s : v) put_string(s);
    }

    const std::string& bytes() const { return bytes_; }
    std::string take() { return std::move(bytes_); }

private:
    std::string bytes_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::string_view bytes) : bytes_(bytes) {}

    template <class T>
        requires std::is_arithmetic_v<T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string get_string() {
        auto n = get<uint32_t>();
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    template <class T>
        requires std::is_arithmetic_v<T>
    std::vector<T> get_vector() {
        auto n = get<uint64_t>();
        if (n > (bytes_.size() - pos_) / sizeof(T)) throw ArtifactCorrupt("vector length exceeds payload");
        std::vector<T> v(n);
        std::memcpy(v.data(), bytes_.data() + pos_, n * sizeof(T));
        pos_ += n * sizeof(T);
        return v;
    }

    std::vector<std::string> get_strings() {
        auto n = get<uint64_t>();
        if (n > bytes_.size() - pos_) throw ArtifactCorrupt("string count exceeds payload");
        std::vector<std::string> v;
        v.reserve(n);
        for (uint64_t i = 0; i < n; ++i) v.push_back(get_string());
        return v;
    }

    std::string_view get_bytes(size_t n) {
        need(n);
        auto v = bytes_.substr(pos_, n);
        pos_ += n;
        return v;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(size_t n) const {
        if (bytes_.size() - pos_ < n) throw ArtifactCorrupt("truncated artifact");
    }
    std::string_view bytes_;
    size_t pos_ = 0;
};

/// Versioned container of tagged sections with a trailing FNV-1a checksum.
///
/// Layout: magic "PMAT", u32 version, u32 section count, then per section
/// u32 tag, u64 length, payload; finally u64 checksum of everything before it.
class ArtifactContainer {
public:
    static constexpr uint32_t kVersion = 1;

    void add(uint32_t tag, std::string payload);
    const std::string* find(uint32_t tag) const;
    const std::string& require(uint32_t tag) const;

    std::string serialize() const;
    static ArtifactContainer deserialize(std::string_view bytes);

    void save(const std::filesystem::path& path) const;
    static ArtifactContainer load(const std::filesystem::path& path);

private:
    std::vector<std::pair<uint32_t, std::string>> sections_;
};

constexpr uint32_t make_tag(const char (&s)[5]) {
    return static_cast<uint32_t>(s[0]) | static_cast<uint32_t>(s[1]) << 8 | static_cast<uint32_t>(s[2]) << 16 |
           static_cast<uint32_t>(s[3]) << 24;
}

uint64_t fnv1a64(std::string_view bytes);

}  // namespace phishmatch
