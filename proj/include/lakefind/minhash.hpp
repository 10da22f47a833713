#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "lakefind/common.hpp"

namespace lakefind {

/// MinHash sketch of a set of strings. An empty input set produces a sentinel
/// signature that matches nothing (estimated distance 1 to everything,
/// itself included).
struct MinHashSignature {
    static constexpr std::uint64_t kSentinel = std::numeric_limits<std::uint64_t>::max();

    std::vector<std::uint64_t> mins;

    bool empty_input() const { return !mins.empty() && mins[0] == kSentinel; }
    bool operator==(const MinHashSignature& o) const { return mins == o.mins; }
};

/// Seeded pairwise-independent hash family over 64-bit string hashes:
/// h_i(x) = (a_i * x + b_i) mod p with p = 2^61 - 1. Identical (size, seed)
/// pairs produce identical sketches on every run.
class MinHasher {
public:
    MinHasher(int size, std::uint64_t seed) : size_(size), seed_(seed) {
        if (size < 16) throw ParamError("minhash size must be >= 16");
        Rng rng(mix_seed(seed, 0x6d696e68617368ULL));
        mult_.reserve(size_);
        add_.reserve(size_);
        for (int i = 0; i < size_; ++i) {
            mult_.push_back(1 + rng.next_below(kPrime - 1));
            add_.push_back(rng.next_below(kPrime));
        }
    }

    MinHashSignature sketch(const std::set<std::string>& items) const {
        MinHashSignature sig;
        sig.mins.assign(size_, MinHashSignature::kSentinel);
        if (items.empty()) return sig;
        std::vector<std::uint64_t> base;
        base.reserve(items.size());
        for (const auto& s : items) base.push_back(hash_bytes(s, seed_) % kPrime);
        for (int i = 0; i < size_; ++i) {
            std::uint64_t best = kPrime;
            for (std::uint64_t x : base) {
                std::uint64_t h = mod_mul_add(mult_[i], x, add_[i]);
                if (h < best) best = h;
            }
            sig.mins[i] = best;
        }
        return sig;
    }

    int size() const { return size_; }
    std::uint64_t seed() const { return seed_; }

private:
    static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

    static std::uint64_t mod_mul_add(std::uint64_t a, std::uint64_t x, std::uint64_t b) {
        unsigned __int128 t = static_cast<unsigned __int128>(a) * x + b;
        std::uint64_t lo = static_cast<std::uint64_t>(t & kPrime);
        std::uint64_t hi = static_cast<std::uint64_t>(t >> 61);
        std::uint64_t r = lo + hi;
        if (r >= kPrime) r -= kPrime;
        return r;
    }

    int size_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> mult_;
    std::vector<std::uint64_t> add_;
};

/// Estimated Jaccard distance: one minus the fraction of matching
/// components. Sentinel signatures are maximally distant from everything.
inline double jaccard_distance(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.mins.size() != b.mins.size() || a.mins.empty())
        throw ParamError("minhash signatures have different sizes");
    if (a.empty_input() || b.empty_input()) return 1.0;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < a.mins.size(); ++i)
        if (a.mins[i] == b.mins[i]) ++matches;
    return 1.0 - static_cast<double>(matches) / static_cast<double>(a.mins.size());
}

}  // namespace lakefind
