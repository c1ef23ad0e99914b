#include "kernels_internal.hpp"

namespace phishmatch::kernels {

OsaPattern::OsaPattern(std::string_view pattern) : length(static_cast<uint32_t>(pattern.size())) {
    for (size_t i = 0; i < pattern.size() && i < kMaxLength; ++i) peq[static_cast<unsigned char>(pattern[i])] |= uint64_t{1} << i;
}

namespace scalar_impl {

void histogram_within(const uint8_t* query, const uint8_t* rows, const uint32_t* ids, size_t n, uint32_t e, uint8_t* pass) {
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* row = rows + size_t{ids[i]} * kHistStride;
        uint32_t missing = 0, extra = 0;
        for (size_t k = 0; k < kHistStride; ++k) {
            if (query[k] > row[k]) missing += query[k] - row[k];
            else extra += row[k] - query[k];
        }
        pass[i] = missing <= e && extra <= e;
    }
}

uint32_t osa_one(const OsaPattern& p, std::string_view text) {
    if (p.length == 0) return static_cast<uint32_t>(text.size());
    uint64_t vp = ~uint64_t{0}, vn = 0, d0 = 0, pm_old = 0;
    const uint64_t top = uint64_t{1} << (p.length - 1);
    uint32_t dist = p.length;
    for (char ch : text) {
        uint64_t pm = p.peq[static_cast<unsigned char>(ch)];
        uint64_t tr = ((~d0 & pm) << 1) & pm_old;
        d0 = (((pm & vp) + vp) ^ vp) | pm | vn | tr;
        uint64_t hp = vn | ~(d0 | vp);
        uint64_t hn = d0 & vp;
        dist += (hp & top) != 0;
        dist -= (hn & top) != 0;
        hp = (hp << 1) | 1;
        hn <<= 1;
        vp = hn | ~(d0 | hp);
        vn = hp & d0;
        pm_old = pm;
    }
    return dist;
}

void osa_batch(const OsaPattern& p, const std::string_view* texts, size_t n, uint32_t* out) {
    for (size_t i = 0; i < n; ++i) out[i] = osa_one(p, texts[i]);
}

void soft_threshold(double* x, size_t n, double t) {
    for (size_t i = 0; i < n; ++i) {
        double v = x[i];
        x[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
}

}  // namespace scalar_impl

const KernelTable& scalar() {
    static const KernelTable table{Isa::Scalar, "scalar", scalar_impl::histogram_within, scalar_impl::osa_batch,
                                   scalar_impl::soft_threshold};
    return table;
}

}  // namespace phishmatch::kernels
