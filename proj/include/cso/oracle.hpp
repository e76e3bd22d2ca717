#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cso/graph.hpp"
#include "cso/problem.hpp"

namespace cso {

/// Where the distance constraint of the distance-bounded variant is
/// measured. The strict reading binds distances to the candidate subgraph
/// itself; the host-graph reading can only enlarge the feasible set.
enum class DistanceMode {
    InSubgraph,
    InHostGraph,
};

struct OracleOptions {
    std::size_t max_vertices = 20;  // enumeration guard
    std::size_t witness_cap = 64;   // stored witnesses; the count stays exact
    DistanceMode distance_mode = DistanceMode::InSubgraph;
};

/// Ground truth from exhaustive subset enumeration.
struct OracleResult {
    bool feasible = false;
    std::uint32_t optimum = 0;  // objective of every witness
    std::vector<std::vector<Vertex>> witnesses;
    std::uint64_t witness_count = 0;
    // Smallest exact diameter over *all* optimal witnesses, tracked online so
    // the cap cannot hide it. Only filled for the diameter-constrained
    // variant.
    Dist min_diameter_among_witnesses = kInfDist;
};

namespace detail {

using Mask = std::uint64_t;

inline bool mask_connected(Mask mask, const std::vector<Mask>& adj) {
    Mask visited = mask & (~mask + 1);  // lowest set bit
    Mask frontier = visited;
    while (frontier) {
        Mask next = 0;
        Mask f = frontier;
        while (f) {
            int v = std::countr_zero(f);
            f &= f - 1;
            next |= adj[v];
        }
        next &= mask & ~visited;
        visited |= next;
        frontier = next;
    }
    return visited == mask;
}

// Max over members of the BFS distance from `sources & mask`; kInfDist if
// some member is unreachable from the sources inside the mask.
inline Dist mask_eccentricity(Mask mask, Mask sources,
                              const std::vector<Mask>& adj) {
    Mask visited = sources & mask;
    if (visited == 0) return kInfDist;
    Mask frontier = visited;
    Dist depth = 0;
    while (visited != mask && frontier) {
        Mask next = 0;
        Mask f = frontier;
        while (f) {
            int v = std::countr_zero(f);
            f &= f - 1;
            next |= adj[v];
        }
        next &= mask & ~visited;
        visited |= next;
        frontier = next;
        ++depth;
    }
    return visited == mask ? depth : kInfDist;
}

inline Dist mask_diameter(Mask mask, const std::vector<Mask>& adj) {
    Dist best = 0;
    Mask f = mask;
    while (f) {
        int v = std::countr_zero(f);
        f &= f - 1;
        Dist e = mask_eccentricity(mask, Mask{1} << v, adj);
        if (e == kInfDist) return kInfDist;
        best = std::max(best, e);
    }
    return best;
}

inline std::uint32_t mask_min_degree(Mask mask, const std::vector<Mask>& adj) {
    std::uint32_t best = kInfDist;
    Mask f = mask;
    while (f) {
        int v = std::countr_zero(f);
        f &= f - 1;
        best = std::min(best,
                        static_cast<std::uint32_t>(std::popcount(adj[v] & mask)));
    }
    return best;
}

} // namespace detail

/// Enumerates every non-empty vertex subset, keeps the feasible ones per the
/// problem definition (connectivity, query count, variant constraint with
/// distances inside the induced subgraph) and reports the best objective
/// with its witnesses. Intended as test ground truth for small graphs.
inline OracleResult oracle_solve(const Graph& g, const QuerySet& qs,
                                 const ProblemSpec& spec,
                                 const OracleOptions& opts = {}) {
    spec.validate();
    qs.validate(g);
    const std::size_t n = g.n();
    if (n > opts.max_vertices || n > 62)
        throw std::domain_error("oracle_solve: n=" + std::to_string(n) +
                                " exceeds the enumeration guard (" +
                                std::to_string(opts.max_vertices) + ")");

    using detail::Mask;
    std::vector<Mask> adj(n, 0);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.neighbors(v)) adj[v] |= Mask{1} << w;
    Mask query_mask = 0;
    for (Vertex v : qs.vertices) query_mask |= Mask{1} << v;

    // Host-graph distances from each query vertex, for the relaxed reading.
    std::vector<DistanceArray> host_dist;
    if (spec.variant == Variant::MaxMinDegDist &&
        opts.distance_mode == DistanceMode::InHostGraph) {
        for (Vertex v : qs.vertices) host_dist.push_back(bfs_distances(g, v));
    }

    const std::size_t need = qs.required_hits();
    const bool minimize = spec.variant == Variant::MinDiamMinDeg;

    OracleResult out;
    auto offer = [&](Mask mask, std::uint32_t objective) {
        bool better = !out.feasible ||
                      (minimize ? objective < out.optimum : objective > out.optimum);
        if (better) {
            out.feasible = true;
            out.optimum = objective;
            out.witnesses.clear();
            out.witness_count = 0;
            out.min_diameter_among_witnesses = kInfDist;
        } else if (objective != out.optimum) {
            return;
        }
        ++out.witness_count;
        if (spec.variant == Variant::MaxMinDegDiam)
            out.min_diameter_among_witnesses =
                std::min(out.min_diameter_among_witnesses,
                         detail::mask_diameter(mask, adj));
        if (out.witnesses.size() < opts.witness_cap) {
            std::vector<Vertex> verts;
            Mask f = mask;
            while (f) {
                verts.push_back(static_cast<Vertex>(std::countr_zero(f)));
                f &= f - 1;
            }
            out.witnesses.push_back(std::move(verts));
        }
    };

    const Mask full = (Mask{1} << n) - 1;
    for (Mask mask = 1; mask <= full; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask & query_mask)) < need)
            continue;
        if (!detail::mask_connected(mask, adj)) continue;
        switch (spec.variant) {
            case Variant::MinDiamMinDeg: {
                if (detail::mask_min_degree(mask, adj) < spec.parameter) break;
                offer(mask, detail::mask_diameter(mask, adj));
                break;
            }
            case Variant::MaxMinDegDiam: {
                if (detail::mask_diameter(mask, adj) > spec.parameter) break;
                offer(mask, detail::mask_min_degree(mask, adj));
                break;
            }
            case Variant::MaxMinDegDist: {
                bool ok;
                if (opts.distance_mode == DistanceMode::InSubgraph) {
                    ok = detail::mask_eccentricity(mask, mask & query_mask, adj) <=
                         spec.parameter;
                } else {
                    ok = true;
                    Mask f = mask;
                    while (ok && f) {
                        int v = std::countr_zero(f);
                        f &= f - 1;
                        Dist dmin = kInfDist;
                        for (std::size_t i = 0; i < qs.vertices.size(); ++i) {
                            if (mask >> qs.vertices[i] & 1)
                                dmin = std::min(dmin, host_dist[i][v]);
                        }
                        ok = dmin <= spec.parameter;
                    }
                }
                if (ok) offer(mask, detail::mask_min_degree(mask, adj));
                break;
            }
        }
    }
    return out;
}

} // namespace cso
