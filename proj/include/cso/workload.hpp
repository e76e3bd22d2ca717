#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cso/algorithms.hpp"
#include "cso/graph.hpp"
#include "cso/problem.hpp"

namespace cso {

/// One community label per vertex; labels need not be dense. Vertices
/// missing from the file default to a singleton community (their own id).
struct CommunityMembership {
    std::vector<std::uint64_t> labels;
};

namespace detail {

// Deterministic 64-bit generator (splitmix64); self-contained so sampled
// query sets do not depend on the standard library's distribution choices.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound > 0; rejection keeps it unbiased
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }
};

// First `count` elements of a seeded partial Fisher-Yates shuffle.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t count,
                                          Rng& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

} // namespace detail

/// Parses "vertex_id community_id" lines ('#' comments, blanks ignored).
/// Ids are in the graph's dense 0..n-1 space; a duplicate vertex line wins
/// last and emits a warning when a stream is supplied.
inline CommunityMembership load_communities(std::istream& in, std::size_t n,
                                            std::ostream* warnings = nullptr) {
    CommunityMembership memb;
    memb.labels.resize(n);
    for (std::size_t v = 0; v < n; ++v) memb.labels[v] = v;
    std::vector<char> seen(n, 0);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (toks[0][0] == '#' || toks[0][0] == '%') continue;
        std::uint64_t v = 0, c = 0;
        if (toks.size() != 2 || !detail::parse_u64(toks[0], v) ||
            !detail::parse_u64(toks[1], c))
            throw std::runtime_error("community file parse error at line " +
                                     std::to_string(line_no));
        if (v >= n)
            throw std::domain_error("community file line " +
                                    std::to_string(line_no) + ": vertex id " +
                                    std::to_string(v) + " >= n");
        if (seen[v] && warnings)
            *warnings << "warning: duplicate community assignment for vertex "
                      << v << " at line " << line_no << ", last one wins\n";
        seen[v] = 1;
        memb.labels[v] = c;
    }
    return memb;
}

/// Same format, but vertex ids are the original file ids of a loaded graph.
inline CommunityMembership load_communities_mapped(std::istream& in,
                                                   const LoadedGraph& loaded,
                                                   std::ostream* warnings = nullptr) {
    std::ostringstream translated;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0][0] == '#' || toks[0][0] == '%') continue;
        std::uint64_t v = 0, c = 0;
        if (toks.size() != 2 || !detail::parse_u64(toks[0], v) ||
            !detail::parse_u64(toks[1], c))
            throw std::runtime_error("community file parse error at line " +
                                     std::to_string(line_no));
        auto compact = loaded.compact_id(v);
        if (!compact)
            throw std::domain_error("community file line " +
                                    std::to_string(line_no) + ": vertex id " +
                                    std::to_string(v) + " not in graph");
        translated << *compact << ' ' << c << '\n';
    }
    std::istringstream in2(translated.str());
    return load_communities(in2, loaded.graph.n(), warnings);
}

/// Seeded query-generation protocol: pick a community with at least n_same
/// members, sample n_same of them, pick `span` distinct other communities
/// and sample m_other vertices from their union.
struct QueryGenParams {
    std::size_t n_same = 0;
    std::size_t m_other = 0;
    std::size_t span = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_same + m_other < 1)
            throw std::domain_error("query generation needs n_same + m_other >= 1");
        if (m_other > 0 && span < 1)
            throw std::domain_error("span must be >= 1 when m_other > 0");
    }
};

/// Deterministic in all inputs including the seed. Returns Q only; the
/// caller attaches the outlier budget.
inline std::vector<Vertex> generate_query(const Graph& g,
                                          const CommunityMembership& memb,
                                          const QueryGenParams& p) {
    p.validate();
    if (memb.labels.size() != g.n())
        throw std::domain_error("community membership size does not match graph");

    std::map<std::uint64_t, std::vector<Vertex>> members;  // ordered labels
    for (Vertex v = 0; v < g.n(); ++v) members[memb.labels[v]].push_back(v);

    std::vector<std::uint64_t> eligible;
    for (const auto& [label, verts] : members)
        if (verts.size() >= p.n_same) eligible.push_back(label);
    if (eligible.empty())
        throw std::runtime_error("no community has >= " +
                                 std::to_string(p.n_same) + " members");
    if (p.m_other > 0 && members.size() < p.span + 1)
        throw std::runtime_error(
            "need " + std::to_string(p.span) +
            " communities besides the seed one, found only " +
            std::to_string(members.size() > 0 ? members.size() - 1 : 0));

    detail::Rng rng(p.seed);
    const std::uint64_t seed_label = eligible[rng.below(eligible.size())];

    std::vector<Vertex> query =
        detail::sample_without_replacement(members[seed_label], p.n_same, rng);

    if (p.m_other > 0) {
        std::vector<std::uint64_t> others;
        for (const auto& [label, verts] : members)
            if (label != seed_label) others.push_back(label);
        std::vector<std::uint64_t> chosen =
            detail::sample_without_replacement(others, p.span, rng);
        std::sort(chosen.begin(), chosen.end());
        std::vector<Vertex> pool;
        for (std::uint64_t label : chosen) {
            const auto& verts = members[label];
            pool.insert(pool.end(), verts.begin(), verts.end());
        }
        if (pool.size() < p.m_other)
            throw std::runtime_error(
                "the " + std::to_string(p.span) + " sampled communities hold " +
                std::to_string(pool.size()) + " vertices, fewer than m_other=" +
                std::to_string(p.m_other));
        auto sampled = detail::sample_without_replacement(pool, p.m_other, rng);
        query.insert(query.end(), sampled.begin(), sampled.end());
    }

    std::sort(query.begin(), query.end());
    return query;
}

/// Descriptive statistics of a feasible solution, computed on the induced
/// subgraph. The clustering coefficient is the average local one
/// (triangles / (deg choose 2), vertices of degree < 2 contribute 0).
struct SolutionMetrics {
    std::size_t size = 0;
    Dist diameter = 0;
    std::size_t min_degree = 0;
    std::size_t query_hits = 0;
    double avg_local_clustering = 0.0;
    double density = 0.0;
    double runtime_ms = 0.0;
};

inline SolutionMetrics solution_metrics(const Graph& g, const Solution& sol,
                                        const QuerySet& qs, double runtime_ms) {
    if (!sol.feasible)
        throw std::domain_error("solution_metrics: unfeasible solution");
    InducedSubgraph ind = induced_subgraph(g, sol.vertices);
    const Graph& h = ind.graph;

    SolutionMetrics m;
    m.size = h.n();
    m.diameter = diameter_exact(h);
    m.min_degree = min_degree(h);
    m.runtime_ms = runtime_ms;
    for (Vertex v : qs.vertices)
        if (ind.new_id(v)) ++m.query_hits;

    double cc_sum = 0.0;
    for (Vertex v = 0; v < h.n(); ++v) {
        const auto& nb = h.neighbors(v);
        if (nb.size() < 2) continue;
        std::size_t closed = 0;
        for (Vertex u : nb) {
            // sorted lists: count common neighbors of v and u
            const auto& nu = h.neighbors(u);
            std::size_t a = 0, b = 0;
            while (a < nb.size() && b < nu.size()) {
                if (nb[a] < nu[b]) ++a;
                else if (nb[a] > nu[b]) ++b;
                else { ++closed; ++a; ++b; }
            }
        }
        closed /= 2;  // every triangle at v counted from both endpoints
        cc_sum += static_cast<double>(closed) /
                  (static_cast<double>(nb.size()) * (nb.size() - 1) / 2.0);
    }
    m.avg_local_clustering = h.n() > 0 ? cc_sum / static_cast<double>(h.n()) : 0.0;
    m.density = h.n() > 1 ? 2.0 * static_cast<double>(h.m) /
                                (static_cast<double>(h.n()) *
                                 static_cast<double>(h.n() - 1))
                          : 0.0;
    return m;
}

/// Flat key=value configuration of a sweep: graph/communities files, the
/// variant, a parameter value or range, a k range, repetitions and seed.
struct ExperimentConfig {
    std::string graph_path;
    std::string communities_path;
    std::string out_path;
    Variant variant = Variant::MaxMinDegDist;
    std::uint32_t param_lo = 1, param_hi = 1;
    std::size_t k_lo = 0, k_hi = 0;
    std::size_t reps = 10;
    std::uint64_t seed = 42;
    std::size_t n_same = 3, m_other = 1, span = 1;
    bool use_pruning = true;
    bool all_starts = false;
};

namespace detail {

template <typename T>
inline void parse_range(const std::string& text, T& lo, T& hi) {
    auto dots = text.find("..");
    std::uint64_t a = 0, b = 0;
    if (dots == std::string::npos) {
        if (!parse_u64(text, a))
            throw std::runtime_error("bad numeric value: " + text);
        b = a;
    } else {
        if (!parse_u64(text.substr(0, dots), a) ||
            !parse_u64(text.substr(dots + 2), b) || b < a)
            throw std::runtime_error("bad range: " + text);
    }
    lo = static_cast<T>(a);
    hi = static_cast<T>(b);
}

template <typename T>
inline void parse_scalar(const std::string& text, T& out) {
    std::uint64_t v = 0;
    if (!parse_u64(text, v))
        throw std::runtime_error("bad numeric value: " + text);
    out = static_cast<T>(v);
}

inline bool parse_bool(const std::string& text) {
    if (text == "1" || text == "on" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "off" || text == "false" || text == "no") return false;
    throw std::runtime_error("bad boolean value: " + text);
}

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 6);
    return std::string(buf, ptr);
}

} // namespace detail

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    if (key == "graph") cfg.graph_path = value;
    else if (key == "communities") cfg.communities_path = value;
    else if (key == "out") cfg.out_path = value;
    else if (key == "variant") cfg.variant = variant_from_name(value);
    else if (key == "param") detail::parse_range(value, cfg.param_lo, cfg.param_hi);
    else if (key == "k") detail::parse_range(value, cfg.k_lo, cfg.k_hi);
    else if (key == "reps") detail::parse_scalar(value, cfg.reps);
    else if (key == "seed") detail::parse_scalar(value, cfg.seed);
    else if (key == "n_same") detail::parse_scalar(value, cfg.n_same);
    else if (key == "m_other") detail::parse_scalar(value, cfg.m_other);
    else if (key == "span") detail::parse_scalar(value, cfg.span);
    else if (key == "pruning") cfg.use_pruning = detail::parse_bool(value);
    else if (key == "all_starts") cfg.all_starts = detail::parse_bool(value);
    else throw std::runtime_error("unknown config key: " + key);
}

/// Accepts "key=value" tokens, one per entry; '#' starts a comment.
inline ExperimentConfig parse_experiment_config(const std::vector<std::string>& entries) {
    ExperimentConfig cfg;
    for (const std::string& raw : entries) {
        std::string entry = raw;
        if (auto hash = entry.find('#'); hash != std::string::npos)
            entry.erase(hash);
        while (!entry.empty() && (entry.back() == ' ' || entry.back() == '\t' ||
                                  entry.back() == '\r'))
            entry.pop_back();
        std::size_t start = entry.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        entry = entry.substr(start);
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config entry is not key=value: " + entry);
        apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
    }
    return cfg;
}

/// One CSV row: a (parameter, k) cell averaged over the feasible repetitions.
struct SweepRow {
    Variant variant;
    std::uint32_t param = 0;
    std::size_t k = 0;
    std::size_t reps = 0;
    double mean_size = 0.0;
    double mean_diameter = 0.0;
    double mean_min_degree = 0.0;
    double mean_query_hits = 0.0;
    double mean_cc = 0.0;
    double mean_runtime_ms = 0.0;
    std::size_t unfeasible_count = 0;
};

inline constexpr const char* kSweepCsvHeader =
    "variant,param,k,reps,mean_size,mean_diameter,mean_min_degree,"
    "mean_query_hits,mean_cc,mean_runtime_ms,unfeasible_count";

inline void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        out << variant_name(r.variant) << ',' << r.param << ',' << r.k << ','
            << r.reps << ',' << detail::format_double(r.mean_size) << ','
            << detail::format_double(r.mean_diameter) << ','
            << detail::format_double(r.mean_min_degree) << ','
            << detail::format_double(r.mean_query_hits) << ','
            << detail::format_double(r.mean_cc) << ','
            << detail::format_double(r.mean_runtime_ms) << ','
            << r.unfeasible_count << '\n';
    }
}

/// Runs the full (parameter, k, repetition) grid. Every repetition r draws a
/// fresh query set with seed seed+r; unfeasible or rejected repetitions are
/// counted per cell and excluded from the means (nan when nothing succeeded).
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg,
                                       std::ostream* log = nullptr) {
    if (cfg.graph_path.empty())
        throw std::runtime_error("sweep config needs graph=<edge list file>");
    std::ifstream gf(cfg.graph_path);
    if (!gf) throw std::runtime_error("cannot open graph file: " + cfg.graph_path);
    LoadedGraph loaded = load_edge_list(gf);

    if (cfg.communities_path.empty())
        throw std::runtime_error(
            "sweep query generation needs communities=<community file>");
    std::ifstream cf(cfg.communities_path);
    if (!cf)
        throw std::runtime_error("cannot open community file: " +
                                 cfg.communities_path);
    CommunityMembership memb = load_communities_mapped(cf, loaded, log);

    SolveOptions solve_opts;
    solve_opts.use_pruning = cfg.use_pruning;
    solve_opts.all_starts = cfg.all_starts;

    std::vector<SweepRow> rows;
    for (std::uint32_t param = cfg.param_lo; param <= cfg.param_hi; ++param) {
        for (std::size_t k = cfg.k_lo; k <= cfg.k_hi; ++k) {
            SweepRow row;
            row.variant = cfg.variant;
            row.param = param;
            row.k = k;
            row.reps = cfg.reps;
            std::size_t feasible = 0;
            for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
                QueryGenParams qp{cfg.n_same, cfg.m_other, cfg.span,
                                  cfg.seed + rep};
                Solution sol;
                QuerySet qs;
                double ms = 0.0;
                try {
                    qs = QuerySet::make(generate_query(loaded.graph, memb, qp), k);
                    ProblemSpec spec{cfg.variant, param};
                    auto t0 = std::chrono::steady_clock::now();
                    sol = solve(loaded.graph, qs, spec, solve_opts);
                    auto t1 = std::chrono::steady_clock::now();
                    ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                } catch (const std::exception& e) {
                    ++row.unfeasible_count;
                    if (log)
                        *log << "cell param=" << param << " k=" << k << " rep="
                             << rep << " rejected: " << e.what() << '\n';
                    continue;
                }
                if (!sol.feasible) {
                    ++row.unfeasible_count;
                    continue;
                }
                SolutionMetrics m = solution_metrics(loaded.graph, sol, qs, ms);
                row.mean_size += static_cast<double>(m.size);
                row.mean_diameter += static_cast<double>(m.diameter);
                row.mean_min_degree += static_cast<double>(m.min_degree);
                row.mean_query_hits += static_cast<double>(m.query_hits);
                row.mean_cc += m.avg_local_clustering;
                row.mean_runtime_ms += m.runtime_ms;
                ++feasible;
            }
            const double denom = feasible > 0
                                     ? static_cast<double>(feasible)
                                     : std::numeric_limits<double>::quiet_NaN();
            row.mean_size /= denom;
            row.mean_diameter /= denom;
            row.mean_min_degree /= denom;
            row.mean_query_hits /= denom;
            row.mean_cc /= denom;
            row.mean_runtime_ms /= denom;
            rows.push_back(row);
        }
        if (log && cfg.k_hi > cfg.k_lo) {
            // observed trend, not a gate: solutions tend to shrink as the
            // outlier budget grows
            const std::size_t cells = cfg.k_hi - cfg.k_lo + 1;
            const std::size_t base = rows.size() - cells;
            for (std::size_t i = 1; i < cells; ++i) {
                const SweepRow& prev = rows[base + i - 1];
                const SweepRow& cur = rows[base + i];
                if (std::isnan(prev.mean_size) || std::isnan(cur.mean_size))
                    continue;
                if (cur.mean_size > prev.mean_size)
                    *log << "note: param=" << param << " mean_size grew "
                         << prev.mean_size << " -> " << cur.mean_size
                         << " from k=" << cur.k - 1 << " to k=" << cur.k << '\n';
                if (cur.mean_diameter > prev.mean_diameter)
                    *log << "note: param=" << param << " mean_diameter grew "
                         << prev.mean_diameter << " -> " << cur.mean_diameter
                         << " from k=" << cur.k - 1 << " to k=" << cur.k << '\n';
            }
        }
    }
    return rows;
}

} // namespace cso
