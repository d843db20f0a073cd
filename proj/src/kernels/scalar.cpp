#include "sass/kernels.hpp"

namespace sass::kernels::scalar {

std::size_t count_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) noexcept {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += a[i] == b[i] ? 1 : 0;
    return count;
}

void equal_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] == b[i] ? 1 : 0;
}

std::size_t count_nonzero(const std::uint8_t* a, std::size_t n) noexcept {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += a[i] != 0 ? 1 : 0;
    return count;
}

}  // namespace sass::kernels::scalar
