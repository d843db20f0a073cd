// Compiled with -mavx2; only reached after a runtime CPU check.

#include "sass/kernels.hpp"

#include <immintrin.h>

namespace sass::kernels::avx2 {

namespace {

inline std::size_t popcount32(std::uint32_t m) noexcept {
    return static_cast<std::size_t>(__builtin_popcount(m));
}

}  // namespace

std::size_t count_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) noexcept {
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
        count += popcount32(mask);
    }
    return count + scalar::count_equal(a + i, b + i, n - i);
}

void equal_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) noexcept {
    const __m256i one = _mm256_set1_epi8(1);
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i eq = _mm256_and_si256(_mm256_cmpeq_epi8(va, vb), one);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), eq);
    }
    scalar::equal_mask(a + i, b + i, out + i, n - i);
}

std::size_t count_nonzero(const std::uint8_t* a, std::size_t n) noexcept {
    const __m256i zero = _mm256_setzero_si256();
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const auto zeros = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, zero)));
        count += 32 - popcount32(zeros);
    }
    return count + scalar::count_nonzero(a + i, n - i);
}

}  // namespace sass::kernels::avx2
