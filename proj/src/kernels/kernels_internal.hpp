#pragma once

#include "phishmatch/kernels.hpp"

namespace phishmatch::kernels {

namespace scalar_impl {
uint32_t osa_one(const OsaPattern& p, std::string_view text);
}

namespace avx2_impl {
void histogram_within(const uint8_t* query, const uint8_t* rows, const uint32_t* ids, size_t n, uint32_t e, uint8_t* pass);
void osa_batch(const OsaPattern& p, const std::string_view* texts, size_t n, uint32_t* out);
void soft_threshold(double* x, size_t n, double t);
}  // namespace avx2_impl

}  // namespace phishmatch::kernels
