#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace phishmatch::kernels {

/// Bytes per unigram histogram row (38 used, zero padded).
inline constexpr size_t kHistStride = 64;

/// Match masks of a pattern of at most 64 characters.
struct OsaPattern {
    std::array<uint64_t, 256> peq{};
    uint32_t length = 0;

    static constexpr uint32_t kMaxLength = 64;
    explicit OsaPattern(std::string_view pattern);
};

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    const char* name;

    /// pass[i] = 1 when the multiset difference between `query` and row
    /// `ids[i]` is at most `e` in both directions, else 0.
    void (*histogram_within)(const uint8_t* query, const uint8_t* rows, const uint32_t* ids, size_t n, uint32_t e,
                             uint8_t* pass);

    /// Optimal string alignment distance from the pattern to each text.
    void (*osa_batch)(const OsaPattern& pattern, const std::string_view* texts, size_t n, uint32_t* out);

    /// x[i] = sign(x[i]) · max(|x[i]| − t, 0).
    void (*soft_threshold)(double* x, size_t n, double t);
};

const KernelTable& scalar();

/// AVX2 table, or nullptr when the CPU lacks AVX2.
const KernelTable* avx2();

/// The table in use: AVX2 when available unless PHISHMATCH_KERNELS=scalar.
const KernelTable& active();

}  // namespace phishmatch::kernels
