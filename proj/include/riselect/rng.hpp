#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace riselect {

namespace detail {

// SplitMix64 finalizer. Bijective on 64-bit integers.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// FNV-1a over a byte string; used to derive stream ids from labels.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

double normal_icdf(double u);

}  // namespace detail

/// Counter-based random stream. A stream is identified by (base_seed,
/// stream_id); the i-th draw is a pure function of that pair and i, so
/// replications can be dealt out to workers in any order and still
/// reproduce the same numbers. Platform-stable: integer mixing plus an
/// explicit rational approximation for the normal quantile.
class RngStream {
public:
    RngStream(std::uint64_t base_seed, std::uint64_t stream_id)
        : base_seed_(base_seed),
          stream_id_(stream_id),
          key_(detail::mix64(detail::mix64(base_seed + detail::kGolden) ^
                             detail::mix64(stream_id + 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t base_seed() const { return base_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Child stream for a tagged purpose (split, draw index, ...).
    RngStream derive(std::uint64_t tag) const {
        return RngStream(base_seed_, detail::mix64(stream_id_ + detail::mix64(tag + detail::kGolden)));
    }

    RngStream derive(std::string_view label) const { return derive(detail::fnv1a(label)); }

    std::uint64_t bits(std::uint64_t i) const { return detail::mix64(key_ + i * detail::kGolden); }

    /// Uniform draw in the open interval (0, 1).
    double uniform01(std::uint64_t i) const {
        return static_cast<double>(bits(i) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    /// Standard normal draw via the inverse CDF.
    double normal(std::uint64_t i) const { return detail::normal_icdf(uniform01(i)); }

private:
    std::uint64_t base_seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
};

/// len independent N(0,1) draws; deterministic in (stream, len) and
/// prefix-stable (the first m entries match any longer request).
std::vector<double> gaussian_vector(const RngStream& stream, std::size_t len);

}  // namespace riselect
