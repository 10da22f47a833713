#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/minhash.hpp"
#include "lakefind/random_projection.hpp"

namespace lakefind {

/// Policy mapping MinHash signatures onto forest symbol sequences.
struct MinHashPolicy {
    using Sig = MinHashSignature;
    static int length(const Sig& s) { return static_cast<int>(s.mins.size()); }
    static std::uint64_t symbol(const Sig& s, int i) { return s.mins[static_cast<std::size_t>(i)]; }
    static bool is_sentinel(const Sig& s) { return s.empty_input(); }
    static double distance(const Sig& a, const Sig& b) { return jaccard_distance(a, b); }
};

/// Policy mapping bit sketches onto forest symbol sequences (one bit per
/// symbol).
struct RpPolicy {
    using Sig = RpSignature;
    static int length(const Sig& s) { return s.bit_count; }
    static std::uint64_t symbol(const Sig& s, int i) { return s.bit(i) ? 1 : 0; }
    static bool is_sentinel(const Sig& s) { return s.empty_input; }
    static double distance(const Sig& a, const Sig& b) { return cosine_distance(a, b); }
};

/// Multi-tree prefix index over signature component sequences. Tree t owns
/// the signature slice [t*depth, (t+1)*depth); a lookup descends all trees in
/// lockstep from the deepest prefix, gathering candidates until the budget is
/// met, then ranks the gathered candidates by their full-signature distance
/// and keeps those within the similarity threshold.
///
/// Sentinel signatures (built from empty sets / zero vectors) are stored but
/// never planted in the trees, so they are never retrieved — by definition
/// they match nothing, not even themselves.
template <class Policy>
class LshForest {
public:
    using Sig = typename Policy::Sig;

    struct Params {
        int trees = 8;
        int depth = 32;
        double threshold = 0.7;
    };

    struct Hit {
        std::uint32_t id;
        double distance;
    };

    explicit LshForest(Params params) : params_(params) {
        if (params.trees < 1 || params.depth < 1)
            throw ParamError("forest needs at least one tree and depth 1");
        if (!(params.threshold > 0.0 && params.threshold < 1.0))
            throw ParamError("forest threshold must be in (0, 1)");
    }

    const Params& params() const { return params_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t replaced() const { return replaced_; }

    /// Idempotent on identical (id, sig); a different signature for an
    /// existing id replaces the old one (counted in replaced()).
    void insert(std::uint32_t id, Sig sig) {
        if (Policy::length(sig) < params_.trees * params_.depth)
            throw ParamError("signature shorter than trees * depth");
        auto it = entries_.find(id);
        if (it != entries_.end()) {
            if (it->second == sig) return;
            it->second = std::move(sig);
            ++replaced_;
        } else {
            entries_.emplace(id, std::move(sig));
        }
        dirty_ = true;
    }

    const Sig* find(std::uint32_t id) const {
        auto it = entries_.find(id);
        return it == entries_.end() ? nullptr : &it->second;
    }

    /// Visits entries in ascending id order (used for persistence).
    template <class Fn>
    void for_each(Fn fn) const {
        for (const auto& [id, sig] : entries_) fn(id, sig);
    }

    std::vector<Hit> lookup(const Sig& probe, std::size_t budget) const {
        if (budget == 0 || entries_.empty()) return {};
        if (Policy::length(probe) < params_.trees * params_.depth)
            throw ParamError("probe signature shorter than trees * depth");
        if (Policy::is_sentinel(probe)) return {};
        rebuild_if_dirty();

        std::set<std::uint32_t> gathered;
        for (int depth = params_.depth; depth >= 1 && gathered.size() < budget; --depth) {
            for (int t = 0; t < params_.trees; ++t) {
                const auto& tree = trees_[static_cast<std::size_t>(t)];
                auto lo = std::lower_bound(
                    tree.begin(), tree.end(), probe,
                    [&](const Entry& e, const Sig& p) { return prefix_less(*e.sig, p, t, depth); });
                auto hi = std::upper_bound(
                    lo, tree.end(), probe,
                    [&](const Sig& p, const Entry& e) { return prefix_less(p, *e.sig, t, depth); });
                for (auto it = lo; it != hi; ++it) gathered.insert(it->id);
            }
        }

        const double cutoff = 1.0 - params_.threshold;
        std::vector<Hit> hits;
        hits.reserve(gathered.size());
        for (std::uint32_t id : gathered) {
            double d = Policy::distance(probe, entries_.at(id));
            if (d <= cutoff) hits.push_back({id, d});
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            return a.id < b.id;
        });
        if (hits.size() > budget) hits.resize(budget);
        return hits;
    }

private:
    struct Entry {
        const Sig* sig;
        std::uint32_t id;
    };

    bool prefix_less(const Sig& a, const Sig& b, int tree, int len) const {
        const int base = tree * params_.depth;
        for (int i = 0; i < len; ++i) {
            std::uint64_t x = Policy::symbol(a, base + i);
            std::uint64_t y = Policy::symbol(b, base + i);
            if (x != y) return x < y;
        }
        return false;
    }

    void rebuild_if_dirty() const {
        if (!dirty_) return;
        trees_.assign(static_cast<std::size_t>(params_.trees), {});
        for (const auto& [id, sig] : entries_) {
            if (Policy::is_sentinel(sig)) continue;
            for (auto& tree : trees_) tree.push_back({&sig, id});
        }
        for (int t = 0; t < params_.trees; ++t) {
            auto& tree = trees_[static_cast<std::size_t>(t)];
            std::sort(tree.begin(), tree.end(), [&](const Entry& a, const Entry& b) {
                if (prefix_less(*a.sig, *b.sig, t, params_.depth)) return true;
                if (prefix_less(*b.sig, *a.sig, t, params_.depth)) return false;
                return a.id < b.id;
            });
        }
        dirty_ = false;
    }

    Params params_;
    std::map<std::uint32_t, Sig> entries_;
    std::size_t replaced_ = 0;
    mutable std::vector<std::vector<Entry>> trees_;
    mutable bool dirty_ = true;
};

}  // namespace lakefind
