#include "sass/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sass::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SASS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* env = std::getenv("SASS_KERNELS"); env != nullptr && std::string(env) == "scalar") {
        return Isa::scalar;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw std::invalid_argument("kernel variant unavailable: " + std::string(to_string(isa)));
    }
    current().store(isa, std::memory_order_relaxed);
}

std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    check_sizes(a.size(), b.size());
#if defined(SASS_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::count_equal(a.data(), b.data(), a.size());
#endif
    return scalar::count_equal(a.data(), b.data(), a.size());
}

void equal_mask(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                std::span<std::uint8_t> out) {
    check_sizes(a.size(), b.size());
    check_sizes(a.size(), out.size());
#if defined(SASS_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::equal_mask(a.data(), b.data(), out.data(), a.size());
#endif
    scalar::equal_mask(a.data(), b.data(), out.data(), a.size());
}

std::size_t count_nonzero(std::span<const std::uint8_t> a) {
#if defined(SASS_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::count_nonzero(a.data(), a.size());
#endif
    return scalar::count_nonzero(a.data(), a.size());
}

}  // namespace sass::kernels
