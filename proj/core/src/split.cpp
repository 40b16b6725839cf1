#include <cmath>
#include <stdexcept>

#include "fallacy/corpus.hpp"

namespace fallacy {

namespace {

// 2^64 / golden ratio; consecutive multiples are maximally spread over 2^64.
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::size_t kMaxSuffixDigits = 18;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t keyed_hash(std::string_view s, std::uint64_t seed) {
    return mix64(fnv1a(s) ^ mix64(seed + kGoldenGamma));
}

}  // namespace

double split_unit(std::string_view id, std::uint64_t seed) {
    std::size_t digits = 0;
    while (digits < id.size() && digits < kMaxSuffixDigits &&
           id[id.size() - 1 - digits] >= '0' && id[id.size() - 1 - digits] <= '9') {
        ++digits;
    }

    std::uint64_t position = 0;
    if (digits > 0) {
        const auto prefix = id.substr(0, id.size() - digits);
        std::uint64_t n = 0;
        for (char c : id.substr(id.size() - digits)) n = n * 10 + static_cast<std::uint64_t>(c - '0');
        // Unsigned overflow is the intended mod 2^64.
        position = keyed_hash(prefix, seed) + n * kGoldenGamma;
    } else {
        position = keyed_hash(id, seed);
    }
    return static_cast<double>(position >> 11) * 0x1.0p-53;
}

Split split_for(std::string_view id, const SplitRatios& ratios, std::uint64_t seed) {
    const double u = split_unit(id, seed);
    if (u < ratios.train) return Split::Train;
    if (u < ratios.train + ratios.dev) return Split::Dev;
    return Split::Test;
}

std::vector<FallacyRecord> assign_splits(std::vector<FallacyRecord> records, const SplitRatios& ratios,
                                         std::uint64_t seed) {
    if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0) {
        throw std::invalid_argument("split ratios must be non-negative");
    }
    if (std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) {
        throw std::invalid_argument("split ratios must sum to 1");
    }
    for (auto& r : records) {
        if (!r.split) r.split = split_for(r.id, ratios, seed);
    }
    return records;
}

}  // namespace fallacy
