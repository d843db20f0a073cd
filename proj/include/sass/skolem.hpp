#pragma once

// Skolem and extended Skolem sequences, and channel-count normalization.
//
// Convention used throughout: the two occurrences of a value k sit exactly
// k + 1 positions apart (so {3,1,2,1,3,2} is valid and the ESS prefix {0,0}
// is two adjacent zeros). Such sequences of order n exist iff n = 0 or 3
// (mod 4).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sass {

using Channel = std::uint8_t;

/// Largest channel count representable by Channel (sequences are byte arrays).
inline constexpr int kMaxChannels = 255;

/// Thrown when a sequence of the requested order cannot exist.
class ExistenceError : public std::domain_error {
public:
    explicit ExistenceError(int order);
    int order() const noexcept { return order_; }

private:
    int order_;
};

namespace skolem {

class SkolemSequence {
public:
    /// Validates; throws std::invalid_argument if `values` is not a Skolem
    /// sequence.
    explicit SkolemSequence(std::vector<int> values);

    int order() const noexcept { return static_cast<int>(values_.size() / 2); }
    std::span<const int> values() const noexcept { return values_; }

private:
    std::vector<int> values_;
};

/// A Skolem-property permutation of {0,0,1,1,...,n,n}. Its length 2(n+1) is
/// the hopping period for N' = n + 1 effective channels.
class EssSequence {
public:
    explicit EssSequence(std::vector<Channel> values);

    int order() const noexcept { return static_cast<int>(values_.size() / 2) - 1; }
    int channel_count() const noexcept { return order() + 1; }
    std::size_t period() const noexcept { return values_.size(); }
    std::span<const Channel> values() const noexcept { return values_; }
    Channel operator[](std::size_t i) const noexcept { return values_[i]; }

    friend bool operator==(const EssSequence&, const EssSequence&) = default;

private:
    std::vector<Channel> values_;
};

enum class Base { one, zero };

/// Predicate: true iff `values` is a Skolem sequence (Base::one, values in
/// [1,n]) or an ESS (Base::zero, values in [0,n]). Never throws.
bool verify_skolem(std::span<const int> values, Base base);

/// n >= 1 and n = 0 or 3 (mod 4).
bool order_exists(int n) noexcept;

/// Direct construction; deterministic for a given n. Throws ExistenceError
/// when n is not 0 or 3 (mod 4).
SkolemSequence construct_skolem(int n);

/// Prepends {0, 0}.
EssSequence extend_to_ess(const SkolemSequence& s);

/// ESS of order channels - 1, i.e. the hopping base for `channels` effective
/// channels. channels must be 0 or 1 (mod 4).
EssSequence ess_for_channels(int channels);

/// Backtracking generator. Visits every Skolem sequence (Base::one) of order
/// n exactly once; the visitor returns false to stop early.
/// Returns the number of sequences visited.
std::size_t enumerate_skolem(int n, const std::function<bool(std::span<const int>)>& visit);

/// First sequence found by backtracking, or nullopt if none exists.
std::optional<std::vector<int>> backtrack_skolem(int n);

enum class PlanMode { padding, downsizing };

std::string to_string(PlanMode mode);
PlanMode parse_plan_mode(const std::string& text);

/// Mapping between the N' effective hopping channels and the N physical ones.
class ChannelPlan {
public:
    ChannelPlan(int physical_count, int effective_count, PlanMode mode);

    int physical_count() const noexcept { return physical_; }
    int effective_count() const noexcept { return effective_; }
    PlanMode mode() const noexcept { return mode_; }

    /// Physical channel behind effective channel `c`. Added padding channels
    /// alias physical channel c - N.
    Channel physical(Channel c) const;

    /// Physical channels never used under downsizing (highest indices).
    std::vector<Channel> discarded() const;

private:
    int physical_;
    int effective_;
    PlanMode mode_;
};

/// Padding picks the smallest N' >= N, downsizing the largest N' <= N, with
/// N' = 0 or 1 (mod 4). Throws std::invalid_argument for N < 1, N above
/// kMaxChannels, or downsizing with no admissible N' >= 1.
ChannelPlan make_channel_plan(int physical_count, PlanMode mode);

}  // namespace skolem
}  // namespace sass
