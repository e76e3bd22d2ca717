#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cso {

using Vertex = std::uint32_t;
using Dist = std::uint32_t;

// Sentinel for unreachable pairs; strictly greater than any achievable
// distance (n-1 is the longest possible shortest path).
inline constexpr Dist kInfDist = std::numeric_limits<Dist>::max();

/// Immutable undirected simple graph over dense vertex ids 0..n-1.
/// Neighbor lists are sorted; every edge appears in both endpoint lists.
struct Graph {
    std::vector<std::vector<Vertex>> adj;
    std::size_t m = 0;

    std::size_t n() const { return adj.size(); }
    std::size_t degree(Vertex v) const { return adj[v].size(); }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adj[v]; }

    bool has_edge(Vertex u, Vertex v) const {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }

    bool operator==(const Graph&) const = default;
};

/// Builds a normalized graph: self-loops and duplicate edges are dropped,
/// neighbor lists sorted. Endpoints must be < n.
inline Graph make_graph(std::size_t n,
                        const std::vector<std::pair<Vertex, Vertex>>& edges) {
    Graph g;
    g.adj.resize(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n)
            throw std::domain_error("make_graph: endpoint out of range");
        if (u == v) continue;
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    g.m = 0;
    for (auto& list : g.adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        g.m += list.size();
    }
    g.m /= 2;
    return g;
}

/// Full-scan check of the representation invariants: symmetry, simplicity,
/// sortedness, id bounds and edge-count consistency.
inline bool check_graph_invariants(const Graph& g) {
    std::size_t half_sum = 0;
    for (Vertex u = 0; u < g.n(); ++u) {
        const auto& list = g.adj[u];
        if (!std::is_sorted(list.begin(), list.end())) return false;
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) return false;
        for (Vertex v : list) {
            if (v >= g.n()) return false;
            if (v == u) return false;
            if (!g.has_edge(v, u)) return false;
        }
        half_sum += list.size();
    }
    return g.m == half_sum / 2 && half_sum % 2 == 0;
}

/// A graph loaded from an edge-list file. Ids in files may be sparse, so
/// the loader compacts them to 0..n-1; original_ids maps each compact id
/// back to the id that appeared in the file (ascending).
struct LoadedGraph {
    Graph graph;
    std::vector<std::uint64_t> original_ids;

    std::optional<Vertex> compact_id(std::uint64_t original) const {
        auto it = std::lower_bound(original_ids.begin(), original_ids.end(), original);
        if (it == original_ids.end() || *it != original) return std::nullopt;
        return static_cast<Vertex>(it - original_ids.begin());
    }
};

namespace detail {

inline bool parse_u64(std::string_view tok, std::uint64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

} // namespace detail

/// Parses a whitespace-separated edge list ("u v" per line). Lines starting
/// with '#' or '%' and blank lines are ignored. Duplicate edges and
/// self-loops are dropped; (u,v) and (v,u) are the same edge. Every id that
/// appears in the file becomes a vertex.
inline LoadedGraph load_edge_list(std::istream& in) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_edges;
    std::vector<std::uint64_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (toks[0][0] == '#' || toks[0][0] == '%') continue;
        if (toks.size() != 2)
            throw std::runtime_error("edge list parse error at line " +
                                     std::to_string(line_no) +
                                     ": expected two vertex ids");
        std::uint64_t u = 0, v = 0;
        if (!detail::parse_u64(toks[0], u) || !detail::parse_u64(toks[1], v))
            throw std::runtime_error("edge list parse error at line " +
                                     std::to_string(line_no) +
                                     ": malformed vertex id");
        ids.push_back(u);
        ids.push_back(v);
        raw_edges.emplace_back(u, v);
    }

    LoadedGraph loaded;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    loaded.original_ids = std::move(ids);

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(raw_edges.size());
    for (auto [u, v] : raw_edges)
        edges.emplace_back(*loaded.compact_id(u), *loaded.compact_id(v));
    loaded.graph = make_graph(loaded.original_ids.size(), edges);
    return loaded;
}

using DistanceArray = std::vector<Dist>;

namespace detail {

// BFS restricted to vertices with alive[v] != 0. Dead and unreachable
// vertices get kInfDist. `sources` entries must be alive.
inline void bfs_alive(const Graph& g, std::span<const Vertex> sources,
                      const std::vector<char>& alive, DistanceArray& dist,
                      std::vector<Vertex>& queue_buf) {
    dist.assign(g.n(), kInfDist);
    queue_buf.clear();
    for (Vertex s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue_buf.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue_buf.size(); ++head) {
        Vertex u = queue_buf[head];
        Dist du = dist[u];
        for (Vertex w : g.neighbors(u)) {
            if (alive[w] && dist[w] == kInfDist) {
                dist[w] = du + 1;
                queue_buf.push_back(w);
            }
        }
    }
}

} // namespace detail

/// Shortest-path distance from `source` to every vertex; kInfDist when
/// unreachable.
inline DistanceArray bfs_distances(const Graph& g, Vertex source) {
    if (source >= g.n())
        throw std::domain_error("bfs_distances: source out of range");
    std::vector<char> alive(g.n(), 1);
    DistanceArray dist;
    std::vector<Vertex> buf;
    Vertex src[1] = {source};
    detail::bfs_alive(g, src, alive, dist, buf);
    return dist;
}

/// dist[v] = min over s in sources of d(s, v). One sweep; equals the
/// pointwise minimum of the per-source BFS arrays.
inline DistanceArray multi_source_distances(const Graph& g,
                                            std::span<const Vertex> sources) {
    if (sources.empty())
        throw std::domain_error("multi_source_distances: empty source set");
    for (Vertex s : sources)
        if (s >= g.n())
            throw std::domain_error("multi_source_distances: source out of range");
    std::vector<char> alive(g.n(), 1);
    DistanceArray dist;
    std::vector<Vertex> buf;
    detail::bfs_alive(g, sources, alive, dist, buf);
    return dist;
}

/// Per-vertex component labels, dense 0..c-1, ordered by the smallest
/// vertex id contained in each component.
inline std::vector<std::uint32_t> connected_components(const Graph& g) {
    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(g.n(), kNone);
    std::vector<Vertex> stack;
    std::uint32_t next = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (label[v] != kNone) continue;
        label[v] = next;
        stack.push_back(v);
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(u)) {
                if (label[w] == kNone) {
                    label[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

/// Induced subgraph plus the order-preserving relabel map. vertices[i] is
/// the old id of new vertex i (ascending).
struct InducedSubgraph {
    Graph graph;
    std::vector<Vertex> vertices;

    std::optional<Vertex> new_id(Vertex old) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), old);
        if (it == vertices.end() || *it != old) return std::nullopt;
        return static_cast<Vertex>(it - vertices.begin());
    }
};

inline InducedSubgraph induced_subgraph(const Graph& g,
                                        std::span<const Vertex> keep) {
    InducedSubgraph out;
    out.vertices.assign(keep.begin(), keep.end());
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()),
                       out.vertices.end());
    for (Vertex v : out.vertices)
        if (v >= g.n())
            throw std::domain_error("induced_subgraph: vertex id out of range");

    std::vector<std::uint32_t> to_new(g.n(), std::numeric_limits<std::uint32_t>::max());
    for (std::size_t i = 0; i < out.vertices.size(); ++i)
        to_new[out.vertices[i]] = static_cast<std::uint32_t>(i);

    out.graph.adj.resize(out.vertices.size());
    std::size_t half = 0;
    for (std::size_t i = 0; i < out.vertices.size(); ++i) {
        for (Vertex w : g.neighbors(out.vertices[i])) {
            if (to_new[w] != std::numeric_limits<std::uint32_t>::max())
                out.graph.adj[i].push_back(to_new[w]);
        }
        half += out.graph.adj[i].size();
    }
    out.graph.m = half / 2;
    return out;
}

/// Exact diameter: max over all pairs of d(u,v). kInfDist when disconnected,
/// 0 for a single vertex and for the empty graph.
inline Dist diameter_exact(const Graph& g) {
    if (g.n() == 0) return 0;
    std::vector<char> alive(g.n(), 1);
    DistanceArray dist;
    std::vector<Vertex> buf;
    Dist best = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        Vertex src[1] = {v};
        detail::bfs_alive(g, src, alive, dist, buf);
        for (Vertex u = 0; u < g.n(); ++u) {
            if (dist[u] == kInfDist) return kInfDist;
            best = std::max(best, dist[u]);
        }
        // one full sweep settles connectivity; later sweeps only need the max
        if (v == 0 && best == 0 && g.n() == 1) break;
    }
    return best;
}

inline std::size_t min_degree(const Graph& g) {
    if (g.n() == 0) throw std::domain_error("min_degree: empty graph");
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Vertex v = 0; v < g.n(); ++v) best = std::min(best, g.degree(v));
    return best;
}

} // namespace cso
