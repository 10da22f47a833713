#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/evidence.hpp"

namespace lakefind {

/// Lower bound on the overlap coefficient of two token sets whose Jaccard
/// similarity is at least tau, clamped to 1.
inline double overlap_lower_bound(std::size_t size_a, std::size_t size_b, double tau) {
    if (size_a == 0 || size_b == 0) return 0.0;
    double m = static_cast<double>(std::min(size_a, size_b));
    double bound = tau * static_cast<double>(size_a + size_b) / ((1.0 + tau) * m);
    return bound > 1.0 ? 1.0 : bound;
}

/// Subject-attribute join edge between two datasets: a token-overlap pair of
/// attributes, at least one of which is its dataset's subject attribute.
struct JoinEdge {
    std::uint32_t dataset_a = 0;  // dataset_a < dataset_b
    std::uint32_t dataset_b = 0;
    std::uint32_t attr_a = 0;  // attribute ordinal in dataset_a
    std::uint32_t attr_b = 0;  // attribute ordinal in dataset_b
    double overlap_bound = 0.0;
    double distance = 1.0;  // estimated token-set distance of the pair
};

struct JoinGraph {
    std::size_t node_count = 0;
    std::vector<JoinEdge> edges;
    std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adjacency;  // (node, edge)

    void finalize() {
        adjacency.assign(node_count, {});
        for (std::size_t e = 0; e < edges.size(); ++e) {
            adjacency[edges[e].dataset_a].emplace_back(edges[e].dataset_b, e);
            adjacency[edges[e].dataset_b].emplace_back(edges[e].dataset_a, e);
        }
        for (auto& adj : adjacency) std::sort(adj.begin(), adj.end());
    }
};

/// Builds the subject-attribute join graph: an edge between two datasets
/// whenever some attribute pair overlaps on value tokens (a value-index hit)
/// and at least one side is a subject attribute. Each dataset pair keeps its
/// strongest pair (largest overlap bound, then smallest distance).
inline JoinGraph build_join_graph(const EvidenceSource& src, std::size_t budget, double tau) {
    const auto& attrs = src.attributes();
    JoinGraph graph;
    graph.node_count = src.datasets().size();

    std::map<std::pair<std::uint32_t, std::uint32_t>, JoinEdge> best;
    for (std::uint32_t a = 0; a < attrs.size(); ++a) {
        if (attrs[a].kind != ColumnKind::Text || attrs[a].token_count == 0) continue;
        for (const auto& hit : src.lookup_attribute(Evidence::Value, a, budget)) {
            const std::uint32_t b = hit.attr;
            if (attrs[b].dataset == attrs[a].dataset) continue;
            if (!attrs[a].is_subject && !attrs[b].is_subject) continue;
            JoinEdge edge;
            edge.dataset_a = attrs[a].dataset;
            edge.dataset_b = attrs[b].dataset;
            edge.attr_a = a;
            edge.attr_b = b;
            if (edge.dataset_a > edge.dataset_b) {
                std::swap(edge.dataset_a, edge.dataset_b);
                std::swap(edge.attr_a, edge.attr_b);
            }
            edge.overlap_bound =
                overlap_lower_bound(attrs[a].token_count, attrs[b].token_count, tau);
            edge.distance = hit.distance;
            auto key = std::make_pair(edge.dataset_a, edge.dataset_b);
            auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(key, edge);
            } else {
                const JoinEdge& cur = it->second;
                bool better = edge.overlap_bound > cur.overlap_bound ||
                              (edge.overlap_bound == cur.overlap_bound &&
                               (edge.distance < cur.distance ||
                                (edge.distance == cur.distance &&
                                 std::make_pair(edge.attr_a, edge.attr_b) <
                                     std::make_pair(cur.attr_a, cur.attr_b))));
                if (better) it->second = edge;
            }
        }
    }
    graph.edges.reserve(best.size());
    for (auto& [_, edge] : best) graph.edges.push_back(edge);
    graph.finalize();
    return graph;
}

/// An acyclic traversal from a top-k dataset into non-top-k, target-related
/// datasets. `hops[i]` is the edge joining nodes[i] and nodes[i+1].
struct JoinPath {
    std::vector<std::uint32_t> nodes;
    std::vector<std::size_t> hops;  // edge indexes into the graph
};

namespace detail {

inline void extend_paths(const JoinGraph& graph, const std::set<std::uint32_t>& top_k,
                         const std::set<std::uint32_t>& target_related, int max_len,
                         std::vector<std::uint32_t>& nodes, std::vector<std::size_t>& hops,
                         std::vector<JoinPath>& out) {
    if (static_cast<int>(nodes.size()) - 1 >= max_len) return;
    for (const auto& [next, edge] : graph.adjacency[nodes.back()]) {
        if (top_k.count(next)) continue;
        if (std::find(nodes.begin(), nodes.end(), next) != nodes.end()) continue;
        if (!target_related.count(next)) continue;
        nodes.push_back(next);
        hops.push_back(edge);
        out.push_back({nodes, hops});
        extend_paths(graph, top_k, target_related, max_len, nodes, hops, out);
        nodes.pop_back();
        hops.pop_back();
    }
}

}  // namespace detail

/// Depth-first join path discovery: every simple path that starts at a top-k
/// dataset, visits only non-top-k datasets afterwards, only visits datasets
/// with index evidence of target relatedness, and is at most max_len hops
/// long. Every qualifying prefix is itself a path.
inline std::vector<JoinPath> find_join_paths(const JoinGraph& graph,
                                             const std::set<std::uint32_t>& top_k,
                                             const std::set<std::uint32_t>& target_related,
                                             int max_len) {
    std::vector<JoinPath> out;
    for (std::uint32_t start : top_k) {
        if (start >= graph.node_count) continue;
        std::vector<std::uint32_t> nodes{start};
        std::vector<std::size_t> hops;
        detail::extend_paths(graph, top_k, target_related, max_len, nodes, hops, out);
    }
    return out;
}

}  // namespace lakefind
