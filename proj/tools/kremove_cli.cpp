#include "kremove/embedding.hpp"
#include "kremove/errors.hpp"
#include "kremove/generators.hpp"
#include "kremove/io.hpp"
#include "kremove/oracle.hpp"
#include "kremove/removable.hpp"
#include "kremove/sweep.hpp"
#include "kremove/tree.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <string>

using nlohmann::json;
using namespace kremove;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

void emit(const json &j) { std::cout << j.dump() << "\n"; }

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

json incidents_json(const std::vector<Incident> &incidents) {
    json out = json::array();
    for (const auto &i : incidents)
        out.push_back(i.to_json());
    return out;
}

struct Inputs {
    std::string graph;
    std::string tree;
    std::string embedding;
    std::string corpus;
    std::string out;
    std::string format = "json";
    std::string algorithm;
    int k = 2;
    int n = 10;
    int n_min = 0;
    int m = 3;
    int m_min = 0;
    int delta = 0;
    int count = 1;
    int threads = 1;
    std::uint64_t seed = 1;
    std::size_t limit = 0;
    bool timing = false;
    bool cross_check = false;
};

int cmd_embed(const Inputs &in) {
    const Graph g = load_graph(in.graph);
    const RootedTree t = load_tree(in.tree);
    if (in.limit > 0) {
        json list = json::array();
        enumerate_embeddings(
            g, t, in.limit,
            [&](const Embedding &phi) {
                list.push_back(embedding_to_json(phi));
                return true;
            },
            g.vertices());
        emit({{"count", list.size()}, {"embeddings", list}});
        return list.empty() ? kDomainFailure : kOk;
    }
    const Embedding phi = greedy_embed(g, t);
    if (!is_valid_embedding(g, t, phi))
        throw InternalContradiction("embed", "greedy result failed validation");
    emit({{"embedding", embedding_to_json(phi)}});
    return kOk;
}

int cmd_remove(const Inputs &in) {
    const Graph g = load_graph(in.graph);
    const RootedTree t = load_tree(in.tree);
    const SearchResult r = search_removable_tree(g, t, in.k);
    if (!verify_solution(g, t, in.k, r.embedding))
        throw InternalContradiction("remove", "result failed verification");
    emit({{"k", in.k},
          {"embedding", embedding_to_json(r.embedding)},
          {"verified", true},
          {"iterations", r.iterations},
          {"used_fallback", r.used_fallback},
          {"incidents", incidents_json(r.incidents)}});
    std::cerr << "removable tree found after " << r.iterations << " moves\n";
    return kOk;
}

int cmd_oracle(const Inputs &in) {
    const Graph g = load_graph(in.graph);
    const RootedTree t = load_tree(in.tree);
    const auto found = brute_force_removable(g, t, in.k);
    if (!found) {
        emit({{"found", false}});
        return kDomainFailure;
    }
    if (!verify_solution(g, t, in.k, *found))
        throw InternalContradiction("oracle", "result failed verification");
    emit({{"found", true}, {"embedding", embedding_to_json(*found)}});
    return kOk;
}

int cmd_verify(const Inputs &in) {
    const Graph g = load_graph(in.graph);
    const RootedTree t = load_tree(in.tree);
    const Embedding phi = load_embedding(in.embedding, t.order());
    const auto defect = embedding_defect(g, t, phi);
    const bool connected = !defect && is_k_connected(g, phi.image(g.order()).complement(), in.k);
    json out{{"valid", !defect && connected}, {"embedding_valid", !defect}, {"k_connected", connected}};
    if (defect)
        out["reason"] = *defect;
    emit(out);
    return !defect && connected ? kOk : kDomainFailure;
}

int cmd_gen_graph(const Inputs &in) {
    const int delta = in.delta > 0 ? in.delta : theorem_degree(in.k, in.m);
    const Graph g = random_k_connected_graph(in.n, in.k, delta, in.seed);
    if (!in.out.empty())
        write_text(in.out, in.out.ends_with(".g6") ? write_graph6(g) + "\n" : write_edge_list(g));
    json edges = json::array();
    for (auto [u, v] : g.edges())
        edges.push_back({u, v});
    emit({{"n", g.order()}, {"min_degree", min_degree(g)}, {"graph6", write_graph6(g)}, {"edges", edges}});
    return kOk;
}

int cmd_gen_tree(const Inputs &in) {
    const RootedTree t = random_tree(in.m, in.seed);
    if (!in.out.empty())
        write_text(in.out, write_tree(t));
    emit({{"m", t.order()}, {"root", t.root()}, {"parents", t.parents()}});
    return kOk;
}

int cmd_sweep(const Inputs &in) {
    SweepOptions options;
    options.algorithm = in.algorithm.empty() ? (in.k == 3 ? Algorithm::ThreeConnected : Algorithm::TwoConnected)
                                             : parse_algorithm(in.algorithm);
    options.threads = in.threads;
    options.cross_check = in.cross_check;
    std::vector<Instance> instances;
    if (!in.corpus.empty()) {
        instances = corpus_instances(load_graph6_corpus(in.corpus), in.k, in.m_min > 0 ? in.m_min : in.m, in.m);
    } else {
        InstanceSpec spec{in.n, in.m, in.k, in.delta, in.seed, in.count, in.n_min, in.m_min};
        instances = random_instances(spec);
    }
    const SweepReport report = run_sweep(instances, options);
    const std::string text = report.to_jsonl(in.timing);
    if (in.out.empty())
        std::cout << text;
    else
        write_text(in.out, text);
    const auto &s = report.summary;
    std::cerr << s.verified << "/" << s.instances << " verified, " << s.incidents << " incidents, " << s.fallbacks
              << " fallbacks\n";
    return s.verified == s.instances ? kOk : kDomainFailure;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Removable subtrees in k-connected graphs"};
    app.require_subcommand(1);
    Inputs in;
    app.add_option("--format", in.format, "Output format")->check(CLI::IsMember({"json"}));

    auto graph_opt = [&](CLI::App *sub) { sub->add_option("--graph", in.graph, "Edge list, or graph6 (.g6)")->required(); };
    auto tree_opt = [&](CLI::App *sub) { sub->add_option("--tree", in.tree, "Tree file: \"m root\" then child/parent lines")->required(); };
    auto k_opt = [&](CLI::App *sub) { sub->add_option("--k", in.k, "Connectivity")->check(CLI::Range(1, 3)); };

    auto *embed = app.add_subcommand("embed", "Embed a tree greedily, or list embeddings with --limit");
    graph_opt(embed);
    tree_opt(embed);
    embed->add_option("--limit", in.limit, "List up to this many embeddings");

    auto *remove = app.add_subcommand("remove", "Find a tree whose removal keeps the graph k-connected");
    graph_opt(remove);
    tree_opt(remove);
    k_opt(remove);

    auto *oracle = app.add_subcommand("oracle", "Brute-force search for a removable tree");
    graph_opt(oracle);
    tree_opt(oracle);
    k_opt(oracle);

    auto *verify = app.add_subcommand("verify", "Check an embedding and the connectivity of its complement");
    graph_opt(verify);
    tree_opt(verify);
    k_opt(verify);
    verify->add_option("--embedding", in.embedding, "JSON embedding file")->required();

    auto *gen_graph = app.add_subcommand("gen-graph", "Random k-connected graph");
    gen_graph->add_option("--n", in.n)->check(CLI::PositiveNumber);
    k_opt(gen_graph);
    gen_graph->add_option("--m", in.m, "Tree order used for the default degree threshold")->check(CLI::PositiveNumber);
    gen_graph->add_option("--delta", in.delta, "Minimum degree");
    gen_graph->add_option("--seed", in.seed);
    gen_graph->add_option("--out", in.out, "Also write the graph (.g6 or edge list)");

    auto *gen_tree = app.add_subcommand("gen-tree", "Random labeled tree");
    gen_tree->add_option("--m", in.m)->check(CLI::PositiveNumber);
    gen_tree->add_option("--seed", in.seed);
    gen_tree->add_option("--out", in.out, "Also write the tree file");

    auto *sweep = app.add_subcommand("sweep", "Run a seeded or corpus batch and report JSON lines");
    k_opt(sweep);
    sweep->add_option("--n", in.n, "Graph order (upper end with --n-min)")->check(CLI::PositiveNumber);
    sweep->add_option("--n-min", in.n_min);
    sweep->add_option("--m", in.m, "Tree order (upper end with --m-min)")->check(CLI::PositiveNumber);
    sweep->add_option("--m-min", in.m_min);
    sweep->add_option("--count", in.count)->check(CLI::NonNegativeNumber);
    sweep->add_option("--seed", in.seed);
    sweep->add_option("--delta", in.delta, "Minimum degree (default: theorem threshold)");
    sweep->add_option("--algorithm", in.algorithm)->check(CLI::IsMember({"2conn", "3conn", "oracle"}));
    sweep->add_option("--corpus", in.corpus, "graph6 corpus instead of random graphs");
    sweep->add_option("--out", in.out, "Write the report here instead of stdout");
    sweep->add_option("--threads", in.threads)->check(CLI::PositiveNumber);
    sweep->add_flag("--timing", in.timing, "Add per-instance millis (breaks byte-identical reports)");
    sweep->add_flag("--cross-check", in.cross_check, "Also run the oracle on instances with n <= 12");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*embed)
            return cmd_embed(in);
        if (*remove)
            return cmd_remove(in);
        if (*oracle)
            return cmd_oracle(in);
        if (*verify)
            return cmd_verify(in);
        if (*gen_graph)
            return cmd_gen_graph(in);
        if (*gen_tree)
            return cmd_gen_tree(in);
        if (*sweep)
            return cmd_sweep(in);
    } catch (const ParseError &e) {
        emit({{"error", e.what()}, {"kind", "parse"}});
        return kUsage;
    } catch (const HypothesisUnmet &e) {
        emit({{"error", e.what()}, {"kind", "hypothesis"}});
        return kUsage;
    } catch (const std::invalid_argument &e) {
        emit({{"error", e.what()}, {"kind", "usage"}});
        return kUsage;
    } catch (const std::exception &e) {
        emit({{"error", e.what()}, {"kind", "domain"}});
        return kDomainFailure;
    }
    return kUsage;
}
