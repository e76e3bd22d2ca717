#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cso/algorithms.hpp"
#include "cso/graph.hpp"
#include "cso/oracle.hpp"
#include "cso/problem.hpp"
#include "cso/workload.hpp"

namespace cso::cli {

// exit codes: 0 feasible/success, 1 usage or IO error, 2 unfeasible outcome
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnfeasible = 2;

namespace detail {

inline LoadedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_edge_list(in);
}

// Queries arrive as original file ids, inline ("0,3,17") or one per line.
inline std::vector<std::uint64_t> parse_query_ids(const std::string& inline_list,
                                                  const std::string& file_path) {
    std::vector<std::uint64_t> ids;
    auto add_token = [&](const std::string& tok) {
        std::uint64_t id = 0;
        if (!cso::detail::parse_u64(tok, id))
            throw std::runtime_error("bad query vertex id: " + tok);
        ids.push_back(id);
    };
    if (!inline_list.empty()) {
        std::string tok;
        std::istringstream ss(inline_list);
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) add_token(tok);
    }
    if (!file_path.empty()) {
        std::ifstream in(file_path);
        if (!in) throw std::runtime_error("cannot open query file: " + file_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto toks = cso::detail::split_ws(line);
            if (toks.empty() || toks[0][0] == '#') continue;
            add_token(std::string(toks[0]));
        }
    }
    if (ids.empty()) throw std::runtime_error("no query vertices given");
    return ids;
}

inline QuerySet make_query_set(const LoadedGraph& loaded,
                               const std::vector<std::uint64_t>& original_ids,
                               std::size_t k) {
    std::vector<Vertex> compact;
    compact.reserve(original_ids.size());
    for (std::uint64_t id : original_ids) {
        auto c = loaded.compact_id(id);
        if (!c)
            throw std::runtime_error("query vertex " + std::to_string(id) +
                                     " does not appear in the graph");
        compact.push_back(*c);
    }
    return QuerySet::make(std::move(compact), k);
}

inline std::vector<std::uint64_t> to_original(const LoadedGraph& loaded,
                                              std::span<const Vertex> vertices) {
    std::vector<std::uint64_t> out;
    out.reserve(vertices.size());
    for (Vertex v : vertices) out.push_back(loaded.original_ids[v]);
    return out;
}

} // namespace detail

/// JSON report of one solve; vertices use the original file ids.
inline nlohmann::json solution_to_json(const LoadedGraph& loaded,
                                       const Solution& sol, const QuerySet& qs,
                                       const ProblemSpec& spec,
                                       double runtime_ms) {
    nlohmann::json j;
    j["variant"] = variant_name(spec.variant);
    j["parameters"] = {{"k", qs.k},
                       {std::string(variant_param_name(spec.variant)),
                        spec.parameter}};
    j["feasible"] = sol.feasible;
    j["runtime_ms"] = runtime_ms;
    if (sol.feasible) {
        j["objective"] = sol.objective;
        j["vertices"] = detail::to_original(loaded, sol.vertices);
        SolutionMetrics m = solution_metrics(loaded.graph, sol, qs, runtime_ms);
        j["metrics"] = {{"size", m.size},
                        {"diameter", m.diameter},
                        {"min_degree", m.min_degree},
                        {"query_hits", m.query_hits},
                        {"avg_local_clustering", m.avg_local_clustering},
                        {"density", m.density}};
    }
    return j;
}

inline nlohmann::json oracle_to_json(const LoadedGraph& loaded,
                                     const OracleResult& res, const QuerySet& qs,
                                     const ProblemSpec& spec) {
    nlohmann::json j;
    j["variant"] = variant_name(spec.variant);
    j["parameters"] = {{"k", qs.k},
                       {std::string(variant_param_name(spec.variant)),
                        spec.parameter}};
    j["feasible"] = res.feasible;
    if (res.feasible) {
        j["optimum"] = res.optimum;
        j["witness"] = res.witnesses.empty()
                           ? nlohmann::json::array()
                           : nlohmann::json(detail::to_original(
                                 loaded, res.witnesses.front()));
        j["count"] = res.witness_count;
    }
    return j;
}

/// Parses and dispatches one invocation. Streams are injected so tests can
/// capture output; main() passes std::cout / std::cerr.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"community search with outliers on undirected graphs"};
    app.require_subcommand(1);

    struct CommonArgs {
        std::string graph;
        std::string queries;
        std::string queries_file;
        std::size_t k = 0;
        std::string out_path;
    };

    auto add_common = [](CLI::App* sub, CommonArgs& c) {
        sub->add_option("--graph", c.graph, "edge list file")->required();
        sub->add_option("--queries", c.queries, "inline query ids, e.g. 0,3,17");
        sub->add_option("--queries-file", c.queries_file,
                        "file with one query id per line");
        sub->add_option("--k", c.k, "outlier budget")->capture_default_str();
        sub->add_option("--out", c.out_path, "write output here instead of stdout");
    };

    CommonArgs solve_args[3];
    std::uint32_t delta_min = 0, diam_max = 1, d_max = 1;
    bool all_starts = false, no_prune = false;

    CLI::App* sub_min_diam = app.add_subcommand(
        "min-diam", "minimize the diameter under a minimum-degree bound");
    add_common(sub_min_diam, solve_args[0]);
    sub_min_diam->add_option("--delta-min", delta_min, "minimum-degree bound")
        ->required();
    sub_min_diam->add_flag("--all-starts", all_starts,
                           "peel from every query vertex, not just k+1");

    CLI::App* sub_deg_diam = app.add_subcommand(
        "max-deg-diam", "maximize the minimum degree under a diameter bound");
    add_common(sub_deg_diam, solve_args[1]);
    sub_deg_diam->add_option("--diam-max", diam_max, "diameter bound")->required();
    sub_deg_diam->add_flag("--all-starts", all_starts,
                           "peel from every query vertex, not just k+1");

    CLI::App* sub_deg_dist = app.add_subcommand(
        "max-deg-dist",
        "maximize the minimum degree under a query-distance bound (exact)");
    add_common(sub_deg_dist, solve_args[2]);
    sub_deg_dist->add_option("--d-max", d_max, "query-distance bound")->required();
    sub_deg_dist->add_flag("--no-prune", no_prune,
                           "skip the distance-pruning preprocessing");

    CommonArgs oracle_args;
    std::string oracle_variant;
    std::uint32_t oracle_delta = 0, oracle_diam = 1, oracle_dist = 1;
    std::size_t oracle_guard = 20;
    CLI::App* sub_oracle = app.add_subcommand(
        "oracle", "brute-force exact optimum on small graphs");
    add_common(sub_oracle, oracle_args);
    sub_oracle->add_option("--variant", oracle_variant,
                           "min-diam | max-deg-diam | max-deg-dist")
        ->required();
    sub_oracle->add_option("--delta-min", oracle_delta, "bound for min-diam");
    sub_oracle->add_option("--diam-max", oracle_diam, "bound for max-deg-diam");
    sub_oracle->add_option("--d-max", oracle_dist, "bound for max-deg-dist");
    sub_oracle->add_option("--max-vertices", oracle_guard, "enumeration guard")
        ->capture_default_str();

    std::string gq_graph, gq_communities, gq_out;
    std::size_t gq_n_same = 0, gq_m_other = 0, gq_span = 1;
    std::uint64_t gq_seed = 0;
    CLI::App* sub_gen = app.add_subcommand(
        "gen-queries", "sample a query set from a community structure");
    sub_gen->add_option("--graph", gq_graph, "edge list file")->required();
    sub_gen->add_option("--communities", gq_communities, "community file")
        ->required();
    sub_gen->add_option("--n-same", gq_n_same, "vertices from the seed community")
        ->capture_default_str();
    sub_gen->add_option("--m-other", gq_m_other, "vertices from other communities")
        ->capture_default_str();
    sub_gen->add_option("--span", gq_span, "number of other communities")
        ->capture_default_str();
    sub_gen->add_option("--seed", gq_seed, "RNG seed")->capture_default_str();
    sub_gen->add_option("--out", gq_out, "write ids here instead of stdout");

    std::string sweep_config;
    std::vector<std::string> sweep_entries;
    CLI::App* sub_sweep = app.add_subcommand(
        "sweep", "metrics-vs-k parameter sweeps with CSV output");
    sub_sweep->add_option("--config", sweep_config,
                          "key=value file (graph=, communities=, variant=, "
                          "param=, k=, reps=, seed=, out=, ...)");
    sub_sweep->add_option("entries", sweep_entries,
                          "inline key=value entries overriding the file");

    std::vector<const char*> argv;
    argv.push_back("cso");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    auto emit = [&](const std::string& text, const std::string& out_path) {
        if (out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << text;
    };

    try {
        ProblemSpec spec;
        const CommonArgs* common = nullptr;
        if (sub_min_diam->parsed()) {
            spec = {Variant::MinDiamMinDeg, delta_min};
            common = &solve_args[0];
        } else if (sub_deg_diam->parsed()) {
            spec = {Variant::MaxMinDegDiam, diam_max};
            common = &solve_args[1];
        } else if (sub_deg_dist->parsed()) {
            spec = {Variant::MaxMinDegDist, d_max};
            common = &solve_args[2];
        }

        if (common != nullptr) {
            spec.validate();
            LoadedGraph loaded = detail::load_graph_file(common->graph);
            QuerySet qs = detail::make_query_set(
                loaded, detail::parse_query_ids(common->queries, common->queries_file),
                common->k);
            qs.validate(loaded.graph);
            SolveOptions opts;
            opts.all_starts = all_starts;
            opts.use_pruning = !no_prune;
            auto t0 = std::chrono::steady_clock::now();
            Solution sol = solve(loaded.graph, qs, spec, opts);
            auto t1 = std::chrono::steady_clock::now();
            double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            emit(solution_to_json(loaded, sol, qs, spec, ms).dump(2) + "\n",
                 common->out_path);
            return sol.feasible ? kExitOk : kExitUnfeasible;
        }

        if (sub_oracle->parsed()) {
            Variant variant = variant_from_name(oracle_variant);
            std::uint32_t param = variant == Variant::MinDiamMinDeg ? oracle_delta
                                  : variant == Variant::MaxMinDegDiam ? oracle_diam
                                                                      : oracle_dist;
            ProblemSpec ospec{variant, param};
            ospec.validate();
            LoadedGraph loaded = detail::load_graph_file(oracle_args.graph);
            QuerySet qs = detail::make_query_set(
                loaded,
                detail::parse_query_ids(oracle_args.queries,
                                        oracle_args.queries_file),
                oracle_args.k);
            qs.validate(loaded.graph);
            OracleOptions oopts;
            oopts.max_vertices = oracle_guard;
            OracleResult res = oracle_solve(loaded.graph, qs, ospec, oopts);
            emit(oracle_to_json(loaded, res, qs, ospec).dump(2) + "\n",
                 oracle_args.out_path);
            return res.feasible ? kExitOk : kExitUnfeasible;
        }

        if (sub_gen->parsed()) {
            LoadedGraph loaded = detail::load_graph_file(gq_graph);
            std::ifstream cf(gq_communities);
            if (!cf)
                throw std::runtime_error("cannot open community file: " +
                                         gq_communities);
            CommunityMembership memb = load_communities_mapped(cf, loaded, &err);
            QueryGenParams p{gq_n_same, gq_m_other, gq_span, gq_seed};
            std::vector<Vertex> q = generate_query(loaded.graph, memb, p);
            std::string text;
            for (std::uint64_t id : detail::to_original(loaded, q))
                text += std::to_string(id) + "\n";
            emit(text, gq_out);
            return kExitOk;
        }

        if (sub_sweep->parsed()) {
            std::vector<std::string> entries;
            if (!sweep_config.empty()) {
                std::ifstream f(sweep_config);
                if (!f)
                    throw std::runtime_error("cannot open config file: " +
                                             sweep_config);
                std::string line;
                while (std::getline(f, line)) entries.push_back(line);
            }
            entries.insert(entries.end(), sweep_entries.begin(),
                           sweep_entries.end());
            ExperimentConfig cfg = parse_experiment_config(entries);
            std::vector<SweepRow> rows = run_sweep(cfg, &err);
            std::ostringstream csv;
            write_sweep_csv(csv, rows);
            emit(csv.str(), cfg.out_path);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    err << "error: no subcommand\n";
    return kExitError;
}

} // namespace cso::cli
