#pragma once

#include "kremove/generators.hpp"
#include "kremove/graph.hpp"
#include "kremove/oracle.hpp"
#include "kremove/random.hpp"
#include "kremove/removable.hpp"
#include "kremove/tree.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kremove {

enum class Algorithm { TwoConnected, ThreeConnected, Oracle };

inline Algorithm parse_algorithm(const std::string &name) {
    if (name == "2conn")
        return Algorithm::TwoConnected;
    if (name == "3conn")
        return Algorithm::ThreeConnected;
    if (name == "oracle")
        return Algorithm::Oracle;
    throw std::invalid_argument("unknown algorithm \"" + name + "\" (expected 2conn, 3conn or oracle)");
}

struct Instance {
    std::string id;
    Graph graph;
    RootedTree tree;
    int k = 2;
};

struct InstanceResult {
    std::string id;
    int n = 0;
    int m = 0;
    int k = 0;
    bool found = false;
    bool verified = false;
    int iterations = 0;
    std::vector<Incident> incidents;
    bool used_fallback = false;
    /// Every accepted move raised the potential and the move count stayed within its bound.
    bool monotone = true;
    std::optional<bool> oracle_found;
    std::optional<bool> oracle_verified;
    std::string error;
    double millis = 0;

    nlohmann::json to_json(bool timing) const {
        nlohmann::json j{{"id", id},       {"n", n},
                         {"m", m},         {"k", k},
                         {"found", found}, {"verified", verified},
                         {"iterations", iterations}, {"incident_count", incidents.size()}};
        if (used_fallback)
            j["used_fallback"] = true;
        if (!monotone)
            j["monotone"] = false;
        if (oracle_found)
            j["oracle_found"] = *oracle_found;
        if (!error.empty())
            j["error"] = error;
        if (timing)
            j["millis"] = millis;
        return j;
    }
};

struct SweepSummary {
    int instances = 0;
    int found = 0;
    int verified = 0;
    int incidents = 0;
    int fallbacks = 0;
    int non_monotone = 0;
    int oracle_checked = 0;
    int oracle_agree = 0;

    nlohmann::json to_json() const {
        return {{"summary",
                 {{"instances", instances},
                  {"found", found},
                  {"verified", verified},
                  {"incidents", incidents},
                  {"fallbacks", fallbacks},
                  {"non_monotone", non_monotone},
                  {"oracle_checked", oracle_checked},
                  {"oracle_agree", oracle_agree}}}};
    }
};

struct SweepReport {
    std::vector<InstanceResult> results;
    SweepSummary summary;

    /// One JSON object per instance in index order, then the summary. Timings only on request,
    /// so repeated runs produce identical bytes.
    std::string to_jsonl(bool timing = false) const {
        std::string out;
        for (const auto &r : results)
            out += r.to_json(timing).dump() + "\n";
        out += summary.to_json().dump() + "\n";
        return out;
    }
};

struct SweepOptions {
    Algorithm algorithm = Algorithm::TwoConnected;
    int threads = 1;
    /// Also run the brute-force oracle on every instance with n <= oracle_max_n.
    bool cross_check = false;
    int oracle_max_n = 12;
    SearchOptions search;
};

/// Seeded instances: instance i draws n, m, its graph and its tree from streams derived from
/// (seed, i) only, so a batch is reproducible element by element.
inline std::vector<Instance> random_instances(const InstanceSpec &spec) {
    if (spec.count < 0)
        throw std::invalid_argument("negative instance count");
    std::vector<Instance> out;
    const int n_lo = spec.n_min > 0 ? spec.n_min : spec.n;
    const int m_lo = spec.m_min > 0 ? spec.m_min : spec.m;
    if (n_lo > spec.n || m_lo > spec.m || m_lo < 1)
        throw std::invalid_argument("empty order range");
    for (int i = 0; i < spec.count; ++i) {
        SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
        const int n = n_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n - n_lo + 1)));
        const int m = m_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.m - m_lo + 1)));
        const int delta = spec.delta_min > 0 ? spec.delta_min : theorem_degree(spec.k, m);
        Graph g = random_k_connected_graph(n, spec.k, delta, rng.next());
        RootedTree t = random_tree(m, rng.next());
        out.push_back(Instance{"r" + std::to_string(i), std::move(g), std::move(t), spec.k});
    }
    return out;
}

/// Every corpus graph paired with every tree shape of order m_lo..m_hi whose degree
/// threshold it meets; the connectivity predicate is re-applied here rather than trusted.
inline std::vector<Instance> corpus_instances(const std::vector<Graph> &graphs, int k, int m_lo, int m_hi) {
    std::vector<Instance> out;
    for (int m = m_lo; m <= m_hi; ++m) {
        const auto shapes = tree_shapes(m);
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            const Graph &g = graphs[gi];
            if (g.order() <= k || min_degree(g) < theorem_degree(k, m) || !is_k_connected(g, k))
                continue;
            for (std::size_t ti = 0; ti < shapes.size(); ++ti)
                out.push_back(Instance{"g" + std::to_string(gi) + "t" + std::to_string(m) + "." + std::to_string(ti), g,
                                       shapes[ti], k});
        }
    }
    return out;
}

namespace detail {

inline bool potentials_increase(const std::vector<std::vector<int>> &trace) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (!(trace[i - 1] < trace[i]))
            return false;
    return true;
}

inline InstanceResult run_instance(const Instance &inst, const SweepOptions &options) {
    InstanceResult r;
    r.id = inst.id;
    r.n = inst.graph.order();
    r.m = inst.tree.order();
    r.k = inst.k;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::optional<Embedding> found;
        if (options.algorithm == Algorithm::Oracle) {
            found = brute_force_removable(inst.graph, inst.tree, inst.k);
        } else {
            if ((options.algorithm == Algorithm::TwoConnected) != (inst.k == 2))
                throw std::invalid_argument("algorithm does not match the instance connectivity");
            SearchResult s = inst.k == 2 ? search_removable_tree_2(inst.graph, inst.tree, options.search)
                                         : search_removable_tree_3(inst.graph, inst.tree, options.search);
            found = s.embedding;
            r.iterations = s.iterations;
            r.incidents = std::move(s.incidents);
            r.used_fallback = s.used_fallback;
            const int bound = inst.k == 2 ? r.n : r.n * r.n;
            r.monotone = potentials_increase(s.potentials) && s.iterations <= bound;
        }
        if (found) {
            r.found = true;
            r.verified = verify_solution(inst.graph, inst.tree, inst.k, *found);
        }
    } catch (const std::exception &e) {
        r.error = e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (options.cross_check && r.n <= options.oracle_max_n && options.algorithm != Algorithm::Oracle) {
        auto oracle = brute_force_removable(inst.graph, inst.tree, inst.k);
        r.oracle_found = oracle.has_value();
        r.oracle_verified = oracle && verify_solution(inst.graph, inst.tree, inst.k, *oracle);
    }
    return r;
}

} // namespace detail

/// Runs every instance, spread over a worker pool; results are kept in instance order.
inline SweepReport run_sweep(const std::vector<Instance> &instances, const SweepOptions &options) {
    SweepReport report;
    report.results.resize(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++)
            report.results[i] = detail::run_instance(instances[i], options);
    };
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(instances.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();

    auto &s = report.summary;
    for (const auto &r : report.results) {
        ++s.instances;
        s.found += r.found;
        s.verified += r.verified;
        s.incidents += static_cast<int>(r.incidents.size());
        s.fallbacks += r.used_fallback;
        s.non_monotone += !r.monotone;
        if (r.oracle_found) {
            ++s.oracle_checked;
            s.oracle_agree += *r.oracle_found == r.found && r.oracle_verified.value_or(false) == r.verified;
        }
    }
    return report;
}

/// Seeded sweep: generate the batch described by `spec`, then run it.
inline SweepReport corpus_sweep(const InstanceSpec &spec, const SweepOptions &options) {
    return run_sweep(random_instances(spec), options);
}

} // namespace kremove
