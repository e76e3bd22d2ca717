#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "cso/graph.hpp"
#include "cso/problem.hpp"

namespace cso {

struct PeelOptions {
    bool record_trace = false;
    // Forces the general re-BFS loop even when the sorted-order shortcut for
    // delta_min <= 1 applies; used to cross-check the two routes.
    bool force_general_path = false;
};

/// One q-rooted peel run. `solution` carries the winning snapshot (or the
/// unfeasible outcome); `score` is the run's internal candidate score:
/// eccentricity from q for the diameter objective, minimum degree otherwise.
struct PeelResult {
    Solution solution;
    std::uint32_t score = 0;
    PeelTrace trace;
};

struct SolveOptions {
    bool all_starts = false;  // widen the k+1 starts to all of Q
    bool use_pruning = true;  // distance-variant preprocessing
    PeelOptions peel;
};

namespace detail {

// Mutable working copy of one peel run. The input graph stays read-only;
// alive/deg/counters are private to the run.
struct PeelState {
    const Graph* g = nullptr;
    std::vector<char> alive;
    std::vector<std::uint32_t> deg;
    std::vector<char> is_query;
    std::size_t alive_edges = 0;
    std::size_t alive_query = 0;
    std::uint32_t step = 0;

    void init(const Graph& graph, const QuerySet& qs) {
        g = &graph;
        alive.assign(graph.n(), 1);
        deg.resize(graph.n());
        for (Vertex v = 0; v < graph.n(); ++v)
            deg[v] = static_cast<std::uint32_t>(graph.degree(v));
        is_query.assign(graph.n(), 0);
        for (Vertex v : qs.vertices) is_query[v] = 1;
        alive_edges = graph.m;
        alive_query = qs.vertices.size();
        step = 0;
    }

    void remove(Vertex v, RemovalReason reason, PeelTrace* trace) {
        assert(alive[v]);
        alive[v] = 0;
        alive_edges -= deg[v];
        for (Vertex w : g->neighbors(v))
            if (alive[w]) --deg[w];
        deg[v] = 0;
        if (is_query[v]) --alive_query;
        ++step;
        if (trace) trace->removals.push_back({step, v, reason});
    }
};

// Best-so-far snapshot of a peel run. `prefer_low_score` selects the
// direction of the score comparison (eccentricity is minimized, min degree
// maximized); remaining ties go to more query hits, then fewer vertices,
// then the lexicographically smallest set. An empty span never loses a tie,
// which lets callers use it as a cheap pre-check before materializing.
struct BestCandidate {
    bool found = false;
    std::uint32_t score = 0;
    std::size_t hits = 0;
    std::vector<Vertex> vertices;  // sorted

    bool improves(bool prefer_low_score, std::uint32_t s, std::size_t h,
                  std::span<const Vertex> verts) const {
        if (!found) return true;
        if (s != score) return prefer_low_score ? s < score : s > score;
        if (h != hits) return h > hits;
        if (verts.empty()) return true;
        if (verts.size() != vertices.size()) return verts.size() < vertices.size();
        return std::lexicographical_compare(verts.begin(), verts.end(),
                                            vertices.begin(), vertices.end());
    }

    void take(std::uint32_t s, std::size_t h, std::span<const Vertex> verts) {
        found = true;
        score = s;
        hits = h;
        vertices.assign(verts.begin(), verts.end());
    }
};

} // namespace detail

/// Single-start peel for the minimum-diameter variant. Repeatedly removes a
/// degree violator if one exists (stopping if that would be q), otherwise a
/// vertex at maximum distance from q (unreachable counts as infinite, ties
/// to the smallest id). Snapshots are scored by the eccentricity from q of
/// q's connected component and are feasible when the component keeps at
/// least |Q|-k query vertices and minimum degree delta_min.
inline PeelResult peel_min_diam(const Graph& g, const QuerySet& qs,
                                std::uint32_t delta_min, Vertex q,
                                const PeelOptions& opts = {}) {
    qs.validate(g);
    if (!qs.contains(q))
        throw std::domain_error("peel_min_diam: start vertex not in query set");

    const std::size_t n = g.n();
    const std::size_t need = qs.required_hits();

    detail::PeelState st;
    st.init(g, qs);
    PeelResult result;
    PeelTrace* trace = opts.record_trace ? &result.trace : nullptr;
    detail::BestCandidate best;

    DistanceArray dist;
    std::vector<Vertex> bfs_buf;
    std::vector<Vertex> comp;
    const Vertex start[1] = {q};

    const bool fast = delta_min <= 1 && !opts.force_general_path &&
                      !(delta_min == 1 && g.degree(q) == 0);
    if (fast) {
        // Farthest-first removal keeps every remaining distance from q
        // intact, so one BFS fixes the whole removal order. With
        // delta_min <= 1 a reachable vertex always keeps its BFS parent, so
        // degree violations only ever involve unreachable vertices and the
        // component of q evolves exactly as in the general loop.
        detail::bfs_alive(g, start, st.alive, dist, bfs_buf);
        std::vector<Vertex> order;  // removal order, q excluded
        order.reserve(n > 0 ? n - 1 : 0);
        for (Vertex v = 0; v < n; ++v)
            if (v != q && dist[v] == kInfDist) order.push_back(v);
        const std::size_t finite_begin = order.size();
        for (Vertex v = 0; v < n; ++v)
            if (v != q && dist[v] != kInfDist) order.push_back(v);
        std::sort(order.begin() + finite_begin, order.end(),
                  [&](Vertex a, Vertex b) {
                      if (dist[a] != dist[b]) return dist[a] > dist[b];
                      return a < b;
                  });

        // query hits inside q's component, kept current across removals
        std::size_t comp_hits = 0;
        for (Vertex v = 0; v < n; ++v)
            if (dist[v] != kInfDist && st.is_query[v]) ++comp_hits;

        auto evaluate_suffix = [&](std::size_t suffix, bool check_degrees) {
            std::uint32_t ecc = suffix < order.size() ? dist[order[suffix]] : 0;
            if (!trace && !best.improves(true, ecc, comp_hits, {})) return;
            comp.clear();
            comp.push_back(q);
            for (std::size_t j = suffix; j < order.size(); ++j)
                comp.push_back(order[j]);
            std::sort(comp.begin(), comp.end());
            bool ok = comp_hits >= need;
            if (ok && check_degrees && delta_min == 1) {
                for (Vertex v : comp)
                    if (st.deg[v] < delta_min) { ok = false; break; }
            }
            if (trace) trace->candidates.push_back({st.step, comp, ecc, ok});
            if (ok && best.improves(true, ecc, comp_hits, comp))
                best.take(ecc, comp_hits, comp);
        };

        std::size_t i = 0;
        for (; i < order.size(); ++i) {
            if (st.alive_edges == 0 || st.alive_query < need) break;
            Vertex v = order[i];
            if (i >= finite_begin) {
                evaluate_suffix(i, false);  // quiescent snapshot
                if (st.is_query[v]) --comp_hits;
            }
            st.remove(v,
                      st.deg[v] < delta_min ? RemovalReason::DegreeViolation
                                            : RemovalReason::MaxDistanceFromQ,
                      trace);
        }
        // loop-exit snapshot; q's component ignores any unreachable leftovers
        evaluate_suffix(std::max(i, finite_begin), true);
    } else {
        // Violators ordered by id; degree violation is monotone under
        // removals, so queue entries only ever need a liveness check.
        std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> violators;
        std::vector<char> queued(n, 0);
        for (Vertex v = 0; v < n; ++v) {
            if (st.deg[v] < delta_min) {
                violators.push(v);
                queued[v] = 1;
            }
        }
        auto enqueue_new_violators = [&](Vertex removed) {
            for (Vertex w : g.neighbors(removed)) {
                if (st.alive[w] && !queued[w] && st.deg[w] < delta_min) {
                    violators.push(w);
                    queued[w] = 1;
                }
            }
        };
        auto evaluate = [&](bool check_degrees) {
            detail::bfs_alive(g, start, st.alive, dist, bfs_buf);
            comp.clear();
            std::uint32_t ecc = 0;
            std::size_t hits = 0;
            for (Vertex v = 0; v < n; ++v) {
                if (dist[v] == kInfDist) continue;
                comp.push_back(v);
                ecc = std::max(ecc, dist[v]);
                hits += st.is_query[v] != 0;
            }
            bool ok = hits >= need;
            if (ok && check_degrees) {
                for (Vertex v : comp)
                    if (st.deg[v] < delta_min) { ok = false; break; }
            }
            if (trace) trace->candidates.push_back({st.step, comp, ecc, ok});
            if (ok && best.improves(true, ecc, hits, comp))
                best.take(ecc, hits, comp);
        };

        bool q_break = false;
        for (;;) {
            if (st.alive_edges == 0 || st.alive_query < need) break;
            while (!violators.empty() && !st.alive[violators.top()])
                violators.pop();
            if (!violators.empty()) {
                Vertex v = violators.top();
                if (v == q) {
                    q_break = true;
                    break;
                }
                violators.pop();
                st.remove(v, RemovalReason::DegreeViolation, trace);
                enqueue_new_violators(v);
                continue;
            }
            // quiescent: no degree violator remains anywhere
            evaluate(false);
            Vertex sel = static_cast<Vertex>(n);
            Dist sel_dist = 0;
            for (Vertex v = 0; v < n; ++v) {
                if (!st.alive[v]) continue;
                if (sel == static_cast<Vertex>(n) || dist[v] > sel_dist) {
                    sel = v;
                    sel_dist = dist[v];
                }
            }
            assert(sel != static_cast<Vertex>(n) && sel != q);
            st.remove(sel, RemovalReason::MaxDistanceFromQ, trace);
            enqueue_new_violators(sel);
        }
        // On a q break the final state keeps q below delta_min, so it can
        // never be feasible and needs no snapshot.
        if (!q_break) evaluate(true);
    }

    if (best.found) {
        result.solution.feasible = true;
        result.solution.vertices = std::move(best.vertices);
        result.solution.query_hits = best.hits;
        result.solution.objective =
            diameter_exact(induced_subgraph(g, result.solution.vertices).graph);
        result.score = best.score;
    } else {
        result.solution = Solution::unfeasible();
    }
    return result;
}

/// Multi-start driver for the minimum-diameter variant: peels from each of
/// the k+1 smallest query ids (all of Q with all_starts) and keeps the run
/// whose exact recomputed diameter is smallest, ties to more query hits,
/// then fewer vertices, then the lexicographically smallest set.
inline Solution solve_min_diam(const Graph& g, const QuerySet& qs,
                               std::uint32_t delta_min,
                               const SolveOptions& opts = {}) {
    qs.validate(g);
    const std::size_t starts =
        opts.all_starts ? qs.vertices.size()
                        : std::min(qs.k + 1, qs.vertices.size());
    Solution best = Solution::unfeasible();
    for (std::size_t i = 0; i < starts; ++i) {
        PeelResult run = peel_min_diam(g, qs, delta_min, qs.vertices[i], opts.peel);
        if (!run.solution.feasible) continue;
        const Solution& cand = run.solution;
        bool better;
        if (!best.feasible)
            better = true;
        else if (cand.objective != best.objective)
            better = cand.objective < best.objective;
        else if (cand.query_hits != best.query_hits)
            better = cand.query_hits > best.query_hits;
        else if (cand.vertices.size() != best.vertices.size())
            better = cand.vertices.size() < best.vertices.size();
        else
            better = cand.vertices < best.vertices;
        if (better) best = cand;
    }
    return best;
}

/// Removes, all together, every vertex farther than d_max from the query
/// set. No removed vertex can belong to a feasible solution, since
/// distances only grow in subgraphs.
inline InducedSubgraph prune_by_distance(const Graph& g, const QuerySet& qs,
                                         std::uint32_t d_max) {
    qs.validate(g);
    if (d_max < 1)
        throw std::domain_error("prune_by_distance: d_max must be >= 1");
    DistanceArray dist = multi_source_distances(g, qs.vertices);
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.n(); ++v)
        if (dist[v] <= d_max) keep.push_back(v);
    return induced_subgraph(g, keep);
}

namespace detail {

// Exact peeling core for the distance-constrained variant.
inline Solution max_min_deg_dist_core(const Graph& g, const QuerySet& qs,
                                      std::uint32_t d_max) {
    const std::size_t n = g.n();
    const std::size_t need = qs.required_hits();

    PeelState st;
    st.init(g, qs);
    BestCandidate best;

    constexpr std::uint32_t kNoComp = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> comp_label(n);
    std::vector<std::size_t> comp_qcount;
    std::vector<Vertex> stack, sources, batch;
    DistanceArray qdist;
    std::vector<Vertex> bfs_buf;

    auto recompute = [&]() {
        comp_label.assign(n, kNoComp);
        comp_qcount.clear();
        std::uint32_t next = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (!st.alive[v] || comp_label[v] != kNoComp) continue;
            comp_label[v] = next;
            comp_qcount.push_back(0);
            stack.assign(1, v);
            while (!stack.empty()) {
                Vertex u = stack.back();
                stack.pop_back();
                if (st.is_query[u]) ++comp_qcount[next];
                for (Vertex w : g.neighbors(u)) {
                    if (st.alive[w] && comp_label[w] == kNoComp) {
                        comp_label[w] = next;
                        stack.push_back(w);
                    }
                }
            }
            ++next;
        }
        sources.clear();
        for (Vertex v : qs.vertices)
            if (st.alive[v]) sources.push_back(v);
        // BFS cannot cross components, so qdist[v] = d(v, Q_v)
        bfs_alive(g, sources, st.alive, qdist, bfs_buf);
    };

    std::vector<std::uint32_t> comp_mindeg;
    std::vector<std::size_t> comp_offset, fill_pos;
    std::vector<Vertex> comp_members;
    auto evaluate_components = [&]() {
        const std::size_t ncomp = comp_qcount.size();
        comp_mindeg.assign(ncomp, kInfDist);
        comp_offset.assign(ncomp + 1, 0);
        for (Vertex v = 0; v < n; ++v) {
            if (!st.alive[v]) continue;
            const auto c = comp_label[v];
            comp_mindeg[c] = std::min(comp_mindeg[c], st.deg[v]);
            ++comp_offset[c + 1];
        }
        for (std::size_t c = 0; c < ncomp; ++c) comp_offset[c + 1] += comp_offset[c];
        comp_members.resize(comp_offset[ncomp]);
        fill_pos.assign(comp_offset.begin(), comp_offset.end() - 1);
        for (Vertex v = 0; v < n; ++v)
            if (st.alive[v]) comp_members[fill_pos[comp_label[v]]++] = v;
        for (std::uint32_t c = 0; c < ncomp; ++c) {
            std::span<const Vertex> members(comp_members.data() + comp_offset[c],
                                            comp_offset[c + 1] - comp_offset[c]);
            if (members.empty()) continue;
            bool ok = comp_qcount[c] >= need;
            for (Vertex v : members)
                if (qdist[v] > d_max) { ok = false; break; }
            if (ok && best.improves(false, comp_mindeg[c], comp_qcount[c], members))
                best.take(comp_mindeg[c], comp_qcount[c], members);
        }
    };

    bool exhausted = false;
    while (!exhausted) {
        if (st.alive_edges == 0) break;
        recompute();
        batch.clear();
        for (Vertex v = 0; v < n; ++v) {
            if (!st.alive[v]) continue;
            if (comp_qcount[comp_label[v]] < need || qdist[v] > d_max)
                batch.push_back(v);
        }
        if (!batch.empty()) {
            for (Vertex v : batch) {
                if (st.alive_edges == 0) {
                    exhausted = true;
                    break;
                }
                st.remove(v, RemovalReason::DistanceViolation, nullptr);
            }
            continue;
        }
        // quiescent: every alive component is feasible; record them all
        evaluate_components();
        Vertex sel = static_cast<Vertex>(n);
        for (Vertex v = 0; v < n; ++v) {
            if (!st.alive[v]) continue;
            if (sel == static_cast<Vertex>(n) || st.deg[v] < st.deg[sel]) sel = v;
        }
        assert(sel != static_cast<Vertex>(n));
        st.remove(sel, RemovalReason::MinDegree, nullptr);
    }

    // final state: no edges are left, so surviving feasible components are
    // singleton query vertices (the degree objective bottoms out at 0)
    recompute();
    evaluate_components();

    Solution out;
    if (best.found) {
        out.feasible = true;
        out.vertices = std::move(best.vertices);
        out.objective = best.score;
        out.query_hits = best.hits;
    }
    return out;
}

} // namespace detail

/// Exact solver for the distance-constrained variant. Peels away vertices
/// whose component holds too few query vertices or that sit farther than
/// d_max from their component's query vertices, otherwise the minimum-degree
/// vertex; returns the feasible component with maximum minimum degree, ties
/// to more query vertices, then fewer vertices, then lexicographic.
inline Solution solve_max_min_deg_dist(const Graph& g, const QuerySet& qs,
                                       std::uint32_t d_max,
                                       const SolveOptions& opts = {}) {
    qs.validate(g);
    if (d_max < 1)
        throw std::domain_error("solve_max_min_deg_dist: d_max must be >= 1");
    if (!opts.use_pruning)
        return detail::max_min_deg_dist_core(g, qs, d_max);

    InducedSubgraph pruned = prune_by_distance(g, qs, d_max);
    std::vector<Vertex> mapped;
    mapped.reserve(qs.vertices.size());
    for (Vertex v : qs.vertices) mapped.push_back(*pruned.new_id(v));
    Solution sol = detail::max_min_deg_dist_core(
        pruned.graph, QuerySet{std::move(mapped), qs.k}, d_max);
    for (Vertex& v : sol.vertices) v = pruned.vertices[v];
    return sol;
}

/// Single-start peel for the degree objective under a diameter constraint.
/// Removes vertices farther than diam_max from q (unreachable included),
/// otherwise the minimum-degree vertex, stopping if that vertex is q.
/// A snapshot is feasible when q's component keeps enough query vertices and
/// every member sits within diam_max of q (which caps the diameter at
/// 2 * diam_max); the score is its minimum degree.
inline PeelResult peel_max_min_deg_diam(const Graph& g, const QuerySet& qs,
                                        std::uint32_t diam_max, Vertex q,
                                        const PeelOptions& opts = {}) {
    qs.validate(g);
    if (!qs.contains(q))
        throw std::domain_error(
            "peel_max_min_deg_diam: start vertex not in query set");
    if (diam_max < 1)
        throw std::domain_error("peel_max_min_deg_diam: diam_max must be >= 1");

    const std::size_t n = g.n();
    const std::size_t need = qs.required_hits();

    detail::PeelState st;
    st.init(g, qs);
    PeelResult result;
    PeelTrace* trace = opts.record_trace ? &result.trace : nullptr;
    detail::BestCandidate best;

    DistanceArray dist;
    std::vector<Vertex> bfs_buf, batch, comp;
    const Vertex start[1] = {q};

    bool q_break = false;
    bool exhausted = false;
    while (!q_break && !exhausted) {
        if (st.alive_edges == 0 || st.alive_query < need) break;
        detail::bfs_alive(g, start, st.alive, dist, bfs_buf);
        batch.clear();
        for (Vertex v = 0; v < n; ++v)
            if (st.alive[v] && dist[v] > diam_max) batch.push_back(v);
        if (!batch.empty()) {
            for (Vertex v : batch) {
                if (st.alive_edges == 0 || st.alive_query < need) {
                    exhausted = true;
                    break;
                }
                st.remove(v, RemovalReason::DistanceViolation, trace);
            }
            continue;
        }
        // quiescent: the alive graph is exactly q's component with every
        // member within diam_max, so feasibility reduces to the query count
        comp.clear();
        std::uint32_t mindeg = kInfDist;
        for (Vertex v = 0; v < n; ++v) {
            if (!st.alive[v]) continue;
            comp.push_back(v);
            mindeg = std::min(mindeg, st.deg[v]);
        }
        const bool ok = st.alive_query >= need;
        if (trace) trace->candidates.push_back({st.step, comp, mindeg, ok});
        if (ok && best.improves(false, mindeg, st.alive_query, comp))
            best.take(mindeg, st.alive_query, comp);

        Vertex sel = static_cast<Vertex>(n);
        for (Vertex v = 0; v < n; ++v) {
            if (!st.alive[v]) continue;
            if (sel == static_cast<Vertex>(n) || st.deg[v] < st.deg[sel]) sel = v;
        }
        assert(sel != static_cast<Vertex>(n));
        if (sel == q) {
            q_break = true;  // this snapshot was already recorded above
            break;
        }
        st.remove(sel, RemovalReason::MinDegree, trace);
    }

    if (!q_break) {
        // loop-exit snapshot: e.g. q left as a lone query vertex after the
        // last edge vanished
        detail::bfs_alive(g, start, st.alive, dist, bfs_buf);
        comp.clear();
        std::uint32_t mindeg = kInfDist;
        std::size_t hits = 0;
        bool within = true;
        for (Vertex v = 0; v < n; ++v) {
            if (dist[v] == kInfDist) continue;
            comp.push_back(v);
            mindeg = std::min(mindeg, st.deg[v]);
            hits += st.is_query[v] != 0;
            if (dist[v] > diam_max) within = false;
        }
        const bool ok = within && hits >= need;
        if (trace) trace->candidates.push_back({st.step, comp, mindeg, ok});
        if (ok && best.improves(false, mindeg, hits, comp))
            best.take(mindeg, hits, comp);
    }

    if (best.found) {
        result.solution.feasible = true;
        result.solution.vertices = std::move(best.vertices);
        result.solution.query_hits = best.hits;
        result.solution.objective = best.score;
        result.score = best.score;
    } else {
        result.solution = Solution::unfeasible();
    }
    return result;
}

/// Multi-start driver for the diameter-constrained degree objective. The
/// returned subgraph has minimum degree at least the constrained optimum and
/// diameter at most 2 * diam_max.
inline Solution solve_max_min_deg_diam(const Graph& g, const QuerySet& qs,
                                       std::uint32_t diam_max,
                                       const SolveOptions& opts = {}) {
    qs.validate(g);
    const std::size_t starts =
        opts.all_starts ? qs.vertices.size()
                        : std::min(qs.k + 1, qs.vertices.size());
    Solution best = Solution::unfeasible();
    Dist best_diam = kInfDist;  // lazily computed, only needed on ties
    auto diameter_of = [&](const Solution& s) {
        return diameter_exact(induced_subgraph(g, s.vertices).graph);
    };
    for (std::size_t i = 0; i < starts; ++i) {
        PeelResult run =
            peel_max_min_deg_diam(g, qs, diam_max, qs.vertices[i], opts.peel);
        if (!run.solution.feasible) continue;
        const Solution& cand = run.solution;
        Dist cand_diam = kInfDist;
        bool better;
        if (!best.feasible) {
            better = true;
        } else if (cand.objective != best.objective) {
            better = cand.objective > best.objective;
        } else if (cand.query_hits != best.query_hits) {
            better = cand.query_hits > best.query_hits;
        } else {
            if (best_diam == kInfDist) best_diam = diameter_of(best);
            cand_diam = diameter_of(cand);
            better = cand_diam != best_diam ? cand_diam < best_diam
                                            : cand.vertices < best.vertices;
        }
        if (better) {
            best = cand;
            best_diam = cand_diam;  // kInfDist means "not computed yet"
        }
    }
    return best;
}

/// Variant dispatch used by the CLI and the sweep harness.
inline Solution solve(const Graph& g, const QuerySet& qs,
                      const ProblemSpec& spec, const SolveOptions& opts = {}) {
    spec.validate();
    switch (spec.variant) {
        case Variant::MinDiamMinDeg:
            return solve_min_diam(g, qs, spec.parameter, opts);
        case Variant::MaxMinDegDiam:
            return solve_max_min_deg_diam(g, qs, spec.parameter, opts);
        case Variant::MaxMinDegDist:
            return solve_max_min_deg_dist(g, qs, spec.parameter, opts);
    }
    return Solution::unfeasible();
}

} // namespace cso
