#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "lakefind/common.hpp"

namespace lakefind {

/// Sign-of-projection bit sketch. A zero or empty vector produces a sentinel
/// (empty_input) that is maximally distant from everything.
struct RpSignature {
    std::vector<std::uint64_t> words;  // packed bits, little-endian within a word
    int bit_count = 0;
    bool empty_input = false;

    bool bit(int i) const { return (words[i / 64] >> (i % 64)) & 1; }
    bool operator==(const RpSignature& o) const {
        return bit_count == o.bit_count && empty_input == o.empty_input && words == o.words;
    }
};

/// Seeded Gaussian projection directions. Directions are generated lazily per
/// input dimension and depend only on (seed, bit index, dimension), so the
/// sketch of a vector never depends on what was sketched before it.
class RandomProjector {
public:
    RandomProjector(int bits, std::uint64_t seed) : bits_(bits), seed_(seed) {
        if (bits < 16) throw ParamError("random projection width must be >= 16");
    }

    RpSignature sketch(const std::vector<float>& v) const {
        RpSignature sig;
        sig.bit_count = bits_;
        sig.words.assign(static_cast<std::size_t>((bits_ + 63) / 64), 0);
        bool degenerate = v.empty();
        if (!degenerate) {
            degenerate = true;
            for (float x : v)
                if (x != 0.0f) {
                    degenerate = false;
                    break;
                }
        }
        if (degenerate) {
            sig.empty_input = true;
            return sig;
        }
        const auto& dirs = directions(v.size());
        for (int j = 0; j < bits_; ++j) {
            const auto& r = dirs[static_cast<std::size_t>(j)];
            double dot = 0.0;
            for (std::size_t d = 0; d < v.size(); ++d) dot += static_cast<double>(v[d]) * r[d];
            if (dot >= 0.0) sig.words[j / 64] |= (std::uint64_t{1} << (j % 64));
        }
        return sig;
    }

    int bits() const { return bits_; }
    std::uint64_t seed() const { return seed_; }

private:
    const std::vector<std::vector<double>>& directions(std::size_t dim) const {
        auto it = dirs_.find(dim);
        if (it != dirs_.end()) return it->second;
        std::vector<std::vector<double>> m(static_cast<std::size_t>(bits_));
        for (int j = 0; j < bits_; ++j) {
            Rng rng(mix_seed(seed_, static_cast<std::uint64_t>(j) + 1, dim));
            auto& row = m[static_cast<std::size_t>(j)];
            row.resize(dim);
            for (std::size_t d = 0; d < dim; ++d) row[d] = rng.next_gaussian();
        }
        return dirs_.emplace(dim, std::move(m)).first->second;
    }

    int bits_;
    std::uint64_t seed_;
    mutable std::map<std::size_t, std::vector<std::vector<double>>> dirs_;
};

inline double hamming_fraction(const RpSignature& a, const RpSignature& b) {
    if (a.bit_count != b.bit_count || a.bit_count == 0)
        throw ParamError("projection signatures have different widths");
    std::size_t diff = 0;
    for (std::size_t w = 0; w < a.words.size(); ++w)
        diff += static_cast<std::size_t>(__builtin_popcountll(a.words[w] ^ b.words[w]));
    return static_cast<double>(diff) / static_cast<double>(a.bit_count);
}

/// Estimated cosine distance: 1 - cos(pi * hamming_fraction), clamped to
/// [0, 1]. Sentinels are maximally distant.
inline double cosine_distance(const RpSignature& a, const RpSignature& b) {
    if (a.bit_count != b.bit_count || a.bit_count == 0)
        throw ParamError("projection signatures have different widths");
    if (a.empty_input || b.empty_input) return 1.0;
    double f = hamming_fraction(a, b);
    return clamp01(1.0 - std::cos(std::numbers::pi * f));
}

}  // namespace lakefind
