#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cso/graph.hpp"

namespace cso {

/// The three community-search-with-outliers variants. The constraint
/// parameter is delta_min, diam_max and d_max respectively; the objective is
/// the diameter for the first and the minimum degree for the other two.
enum class Variant {
    MinDiamMinDeg,
    MaxMinDegDiam,
    MaxMinDegDist,
};

inline std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::MinDiamMinDeg: return "min-diam";
        case Variant::MaxMinDegDiam: return "max-deg-diam";
        case Variant::MaxMinDegDist: return "max-deg-dist";
    }
    return "?";
}

inline Variant variant_from_name(std::string_view name) {
    if (name == "min-diam") return Variant::MinDiamMinDeg;
    if (name == "max-deg-diam") return Variant::MaxMinDegDiam;
    if (name == "max-deg-dist") return Variant::MaxMinDegDist;
    throw std::runtime_error("unknown variant: " + std::string(name));
}

inline std::string_view variant_param_name(Variant v) {
    switch (v) {
        case Variant::MinDiamMinDeg: return "delta_min";
        case Variant::MaxMinDegDiam: return "diam_max";
        case Variant::MaxMinDegDist: return "d_max";
    }
    return "?";
}

/// Query vertices plus the outlier budget k. At most k query vertices may be
/// dropped by a solution, so k <= |Q| - 1.
struct QuerySet {
    std::vector<Vertex> vertices;  // sorted, unique
    std::size_t k = 0;

    static QuerySet make(std::vector<Vertex> q, std::size_t k) {
        std::sort(q.begin(), q.end());
        q.erase(std::unique(q.begin(), q.end()), q.end());
        if (q.empty()) throw std::domain_error("query set must be non-empty");
        if (k > q.size() - 1)
            throw std::domain_error("outlier budget k=" + std::to_string(k) +
                                    " exceeds |Q|-1=" + std::to_string(q.size() - 1));
        return QuerySet{std::move(q), k};
    }

    void validate(const Graph& g) const {
        for (Vertex v : vertices)
            if (v >= g.n())
                throw std::domain_error("query vertex " + std::to_string(v) +
                                        " not in graph");
    }

    std::size_t required_hits() const { return vertices.size() - k; }

    bool contains(Vertex v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }
};

/// Variant tag plus its constraint parameter.
struct ProblemSpec {
    Variant variant = Variant::MaxMinDegDist;
    std::uint32_t parameter = 1;

    void validate() const {
        if (variant != Variant::MinDiamMinDeg && parameter < 1)
            throw std::domain_error(std::string(variant_param_name(variant)) +
                                    " must be >= 1");
    }
};

/// Result of a solve: the vertex set of H with the achieved objective, or
/// the distinguished unfeasible outcome (empty vertex set).
struct Solution {
    bool feasible = false;
    std::vector<Vertex> vertices;  // sorted
    std::uint32_t objective = 0;   // diameter (variant 1) or min degree (2-3)
    std::size_t query_hits = 0;

    static Solution unfeasible() { return Solution{}; }

    bool operator==(const Solution&) const = default;
};

enum class RemovalReason {
    DegreeViolation,
    DistanceViolation,
    MaxDistanceFromQ,
    MinDegree,
};

inline std::string_view removal_reason_name(RemovalReason r) {
    switch (r) {
        case RemovalReason::DegreeViolation: return "degree-violation";
        case RemovalReason::DistanceViolation: return "distance-violation";
        case RemovalReason::MaxDistanceFromQ: return "max-distance-from-q";
        case RemovalReason::MinDegree: return "min-degree";
    }
    return "?";
}

/// Audit log of one peel run: the ordered removals and the candidate
/// snapshots evaluated along the way. Step t counts removals, so the
/// snapshot recorded at step t is the graph after the first t removals.
struct PeelTrace {
    struct Removal {
        std::uint32_t step;
        Vertex vertex;
        RemovalReason reason;
    };
    struct Candidate {
        std::uint32_t step;
        std::vector<Vertex> vertices;  // sorted
        std::uint32_t score;
        bool feasible;
    };
    std::vector<Removal> removals;
    std::vector<Candidate> candidates;
};

/// Evaluates the variant's conditions exactly as stated on a connected
/// vertex set: query count, then the degree / diameter / distance constraint
/// measured inside the induced subgraph.
inline bool check_feasible(const Graph& g, std::span<const Vertex> component,
                           const QuerySet& qs, const ProblemSpec& spec) {
    spec.validate();
    InducedSubgraph ind = induced_subgraph(g, component);
    std::vector<Vertex> retained_queries;
    for (Vertex q : qs.vertices)
        if (auto id = ind.new_id(q)) retained_queries.push_back(*id);
    if (retained_queries.size() < qs.required_hits()) return false;

    switch (spec.variant) {
        case Variant::MinDiamMinDeg:
            return min_degree(ind.graph) >= spec.parameter;
        case Variant::MaxMinDegDiam:
            return diameter_exact(ind.graph) <= spec.parameter;
        case Variant::MaxMinDegDist: {
            DistanceArray dist =
                multi_source_distances(ind.graph, retained_queries);
            for (Dist d : dist)
                if (d > spec.parameter) return false;
            return true;
        }
    }
    return false;
}

} // namespace cso
