// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "kernels_internal.hpp"

namespace phishmatch::kernels::avx2_impl {

namespace {

inline uint64_t hsum_epi64(__m256i v) {
    __m128i s = _mm_add_epi64(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
    return static_cast<uint64_t>(_mm_cvtsi128_si64(s)) + static_cast<uint64_t>(_mm_extract_epi64(s, 1));
}

}  // namespace

void histogram_within(const uint8_t* query, const uint8_t* rows, const uint32_t* ids, size_t n, uint32_t e, uint8_t* pass) {
    static_assert(kHistStride == 64);
    const __m256i q0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(query));
    const __m256i q1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(query + 32));
    const __m256i zero = _mm256_setzero_si256();
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* row = rows + size_t{ids[i]} * kHistStride;
        __m256i r0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row));
        __m256i r1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + 32));
        __m256i missing = _mm256_add_epi64(_mm256_sad_epu8(_mm256_subs_epu8(q0, r0), zero),
                                           _mm256_sad_epu8(_mm256_subs_epu8(q1, r1), zero));
        __m256i extra = _mm256_add_epi64(_mm256_sad_epu8(_mm256_subs_epu8(r0, q0), zero),
                                         _mm256_sad_epu8(_mm256_subs_epu8(r1, q1), zero));
        pass[i] = hsum_epi64(missing) <= e && hsum_epi64(extra) <= e;
    }
}

void osa_batch(const OsaPattern& p, const std::string_view* texts, size_t n, uint32_t* out) {
    if (p.length == 0) {
        for (size_t i = 0; i < n; ++i) out[i] = static_cast<uint32_t>(texts[i].size());
        return;
    }
    const __m256i ones = _mm256_set1_epi64x(-1);
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i zero = _mm256_setzero_si256();
    const __m256i top = _mm256_set1_epi64x(static_cast<int64_t>(uint64_t{1} << (p.length - 1)));

    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const std::string_view* t = texts + i;
        size_t max_len = std::max({t[0].size(), t[1].size(), t[2].size(), t[3].size()});
        __m256i lens = _mm256_set_epi64x(static_cast<int64_t>(t[3].size()), static_cast<int64_t>(t[2].size()),
                                         static_cast<int64_t>(t[1].size()), static_cast<int64_t>(t[0].size()));
        __m256i vp = ones, vn = zero, d0 = zero, pm_old = zero;
        __m256i dist = _mm256_set1_epi64x(p.length);
        for (size_t j = 0; j < max_len; ++j) {
            auto peq = [&](int lane) -> int64_t {
                return j < t[lane].size() ? static_cast<int64_t>(p.peq[static_cast<unsigned char>(t[lane][j])]) : 0;
            };
            __m256i pm = _mm256_set_epi64x(peq(3), peq(2), peq(1), peq(0));
            __m256i active = _mm256_cmpgt_epi64(lens, _mm256_set1_epi64x(static_cast<int64_t>(j)));

            __m256i tr = _mm256_and_si256(_mm256_slli_epi64(_mm256_andnot_si256(d0, pm), 1), pm_old);
            __m256i sum = _mm256_add_epi64(_mm256_and_si256(pm, vp), vp);
            d0 = _mm256_or_si256(_mm256_or_si256(_mm256_xor_si256(sum, vp), pm), _mm256_or_si256(vn, tr));
            __m256i hp = _mm256_or_si256(vn, _mm256_xor_si256(_mm256_or_si256(d0, vp), ones));
            __m256i hn = _mm256_and_si256(d0, vp);

            // Lanes past their text length keep their distance.
            __m256i up = _mm256_and_si256(active, _mm256_cmpeq_epi64(_mm256_and_si256(hp, top), top));
            __m256i down = _mm256_and_si256(active, _mm256_cmpeq_epi64(_mm256_and_si256(hn, top), top));
            dist = _mm256_add_epi64(dist, _mm256_and_si256(up, one));
            dist = _mm256_sub_epi64(dist, _mm256_and_si256(down, one));

            hp = _mm256_or_si256(_mm256_slli_epi64(hp, 1), one);
            hn = _mm256_slli_epi64(hn, 1);
            vp = _mm256_or_si256(hn, _mm256_xor_si256(_mm256_or_si256(d0, hp), ones));
            vn = _mm256_and_si256(hp, d0);
            pm_old = pm;
        }
        alignas(32) int64_t d[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(d), dist);
        for (int k = 0; k < 4; ++k) out[i + k] = static_cast<uint32_t>(d[k]);
    }
    for (; i < n; ++i) out[i] = scalar_impl::osa_one(p, texts[i]);
}

void soft_threshold(double* x, size_t n, double t) {
    const __m256d tv = _mm256_set1_pd(t);
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d r = _mm256_add_pd(_mm256_max_pd(_mm256_sub_pd(v, tv), zero), _mm256_min_pd(_mm256_add_pd(v, tv), zero));
        _mm256_storeu_pd(x + i, r);
    }
    for (; i < n; ++i) {
        double v = x[i];
        x[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
}

}  // namespace phishmatch::kernels::avx2_impl
