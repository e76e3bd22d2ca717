#pragma once

// Seeded graph and instance generators shared by the unit and acceptance
// suites. Everything here is deterministic in the seed alone.

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cso/graph.hpp"
#include "cso/problem.hpp"
#include "cso/workload.hpp"

namespace testgen {

using Rng = cso::detail::Rng;

inline double unit_double(Rng& rng) {
    return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

inline cso::Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<cso::Vertex, cso::Vertex>> edges;
    for (cso::Vertex u = 0; u < n; ++u)
        for (cso::Vertex v = u + 1; v < n; ++v)
            if (unit_double(rng) < p) edges.emplace_back(u, v);
    return cso::make_graph(n, edges);
}

// Community-structured random graph with an exact edge count: vertices fall
// into contiguous groups; each sampled edge stays inside its group with
// probability intra_frac.
inline cso::Graph clustered_graph(std::size_t n, std::size_t groups,
                                  std::size_t target_edges, double intra_frac,
                                  std::uint64_t seed) {
    if (groups == 0 || n < 2 * groups)
        throw std::invalid_argument("clustered_graph: bad group shape");
    Rng rng(seed);
    auto group_of = [&](std::uint64_t v) { return v * groups / n; };
    auto group_begin = [&](std::size_t gidx) {
        // smallest v with group_of(v) == gidx
        return (gidx * n + groups - 1) / groups;
    };
    std::unordered_set<std::uint64_t> used;
    std::vector<std::pair<cso::Vertex, cso::Vertex>> edges;
    while (edges.size() < target_edges) {
        std::uint64_t u = rng.below(n);
        std::uint64_t v;
        if (unit_double(rng) < intra_frac) {
            std::size_t gidx = group_of(u);
            std::uint64_t lo = group_begin(gidx);
            std::uint64_t hi = gidx + 1 < groups ? group_begin(gidx + 1) : n;
            v = lo + rng.below(hi - lo);
        } else {
            v = rng.below(n);
        }
        if (u == v) continue;
        std::uint64_t key = u < v ? u * n + v : v * n + u;
        if (!used.insert(key).second) continue;
        edges.emplace_back(static_cast<cso::Vertex>(u),
                           static_cast<cso::Vertex>(v));
    }
    return cso::make_graph(n, edges);
}

inline cso::CommunityMembership block_communities(std::size_t n,
                                                  std::size_t groups) {
    cso::CommunityMembership memb;
    memb.labels.resize(n);
    for (std::size_t v = 0; v < n; ++v) memb.labels[v] = v * groups / n;
    return memb;
}

// A random graph plus an admissible query set; the caller draws the variant
// parameter itself.
struct Instance {
    cso::Graph graph;
    cso::QuerySet queries;
};

inline Instance random_instance(std::uint64_t seed) {
    Rng rng(seed);
    std::size_t n = 4 + rng.below(9);  // 4..12
    const double probs[3] = {0.3, 0.5, 0.7};
    double p = probs[rng.below(3)];
    cso::Graph g = erdos_renyi(n, p, rng.next());

    std::size_t q_size = 1 + rng.below(n);
    std::vector<cso::Vertex> pool(n);
    for (cso::Vertex v = 0; v < n; ++v) pool[v] = v;
    std::vector<cso::Vertex> q =
        cso::detail::sample_without_replacement(pool, q_size, rng);
    std::size_t k = rng.below(q_size);
    return Instance{std::move(g), cso::QuerySet::make(std::move(q), k)};
}

} // namespace testgen
