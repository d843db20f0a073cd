#pragma once

// Byte-array kernels behind the sequence sweeps and trace folds.
//
// Every kernel has a scalar reference in kernels::scalar. Vector variants
// (kernels::avx2 on x86-64) must agree with it bit for bit; the unqualified
// entry points dispatch to the best variant the running CPU supports.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sass::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Compiled in and supported by this CPU.
bool isa_available(Isa isa) noexcept;

/// Variant chosen at first use: the widest available, unless SASS_KERNELS=scalar
/// is set in the environment.
Isa active_isa() noexcept;

/// Pins the dispatch target (tests and benchmarks). Throws std::invalid_argument
/// if `isa` is unavailable.
void force_isa(Isa isa);

/// Number of positions i < a.size() with a[i] == b[i]. Sizes must match.
std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// out[i] = (a[i] == b[i]) ? 1 : 0.
void equal_mask(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                std::span<std::uint8_t> out);

/// Number of nonzero bytes.
std::size_t count_nonzero(std::span<const std::uint8_t> a);

namespace scalar {
std::size_t count_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) noexcept;
void equal_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) noexcept;
std::size_t count_nonzero(const std::uint8_t* a, std::size_t n) noexcept;
}  // namespace scalar

#if defined(SASS_HAVE_AVX2)
namespace avx2 {
std::size_t count_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) noexcept;
void equal_mask(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) noexcept;
std::size_t count_nonzero(const std::uint8_t* a, std::size_t n) noexcept;
}  // namespace avx2
#endif

}  // namespace sass::kernels
