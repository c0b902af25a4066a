#include "kremove/generators.hpp"
#include "kremove/io.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace kremove;

namespace {

ParseError parse_failure(const std::function<void()> &f) {
    try {
        f();
    } catch (const ParseError &e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError";
    return ParseError("none", 0, 0, "none");
}

} // namespace

TEST(EdgeList, RoundTrip) {
    const Graph g = petersen_graph();
    EXPECT_EQ(parse_edge_list(write_edge_list(g)), g);
    EXPECT_EQ(parse_edge_list("3 2 # a path\n0 1\n1 2\n"), path_graph(3));
    EXPECT_EQ(parse_edge_list("0 0"), Graph(0));
}

TEST(EdgeList, ErrorsCarryLocations) {
    auto e = parse_failure([] { parse_edge_list("3 2\n0 1\n1 x\n", "g.el"); });
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
    EXPECT_NE(std::string(e.what()).find("g.el:3:3"), std::string::npos);

    e = parse_failure([] { parse_edge_list("3 2\n0 1\n1 7\n"); });
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 1);

    e = parse_failure([] { parse_edge_list("3 2\n0 1\n"); });
    EXPECT_NE(std::string(e.what()).find("end of input"), std::string::npos);

    EXPECT_THROW(parse_edge_list("3 1\n0 1\n5"), ParseError);
    EXPECT_THROW(parse_edge_list("3 2\n0 1\n1 0\n"), ParseError);
    EXPECT_THROW(parse_edge_list("3 1\n1 1\n"), ParseError);
    EXPECT_THROW(parse_edge_list("-3 0"), ParseError);
    EXPECT_THROW(parse_edge_list("3 1\n0 1x\n"), ParseError);
}

TEST(Graph6, KnownEncodings) {
    // standard examples: K4 is "C~", the 5-cycle 0-1-2-3-4 is "Dhc"
    EXPECT_EQ(write_graph6(complete_graph(4)), "C~");
    EXPECT_EQ(parse_graph6("C~"), complete_graph(4));
    EXPECT_EQ(write_graph6(cycle_graph(5)), "Dhc");
    EXPECT_EQ(parse_graph6(">>graph6<<Dhc\n"), cycle_graph(5));
    EXPECT_EQ(parse_graph6("?"), Graph(0));
}

TEST(Graph6, RoundTripIncludingLongOrders) {
    SplitMix64 rng(73);
    for (int n : {1, 2, 7, 8, 62, 63, 64, 100}) {
        std::vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.unit() < 0.3)
                    edges.emplace_back(u, v);
        const Graph g = Graph::from_edges(n, edges);
        const std::string s = write_graph6(g);
        EXPECT_EQ(parse_graph6(s), g) << "n=" << n;
        if (n >= 63) {
            EXPECT_EQ(s[0], '~');
        }
    }
}

TEST(Graph6, MalformedInput) {
    EXPECT_THROW(parse_graph6(""), ParseError);
    EXPECT_THROW(parse_graph6("C"), ParseError);
    EXPECT_THROW(parse_graph6("C~~"), ParseError);
    auto e = parse_failure([] { parse_graph6("C\x20", "x.g6", 4); });
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 2);
    e = parse_failure([] { parse_graph6_corpus("C~\nC~\nC!\n", "c.g6"); });
    EXPECT_EQ(e.line(), 3);
}

// The shipped corpora: every graph on <= 8 vertices up to isomorphism, and its 2-connected,
// min-degree >= 4 part. Counts of graphs per order are the known 1, 2, 4, 11, 34, 156, 1044, 12346.
TEST(Corpus, ShippedFilesHaveExpectedContents) {
    const auto all = load_graph6_corpus(KREMOVE_DATA_DIR "/all_graphs_n8.g6");
    std::vector<int> per_order(9, 0);
    for (const auto &g : all)
        ++per_order[g.order()];
    EXPECT_EQ(per_order, (std::vector<int>{0, 1, 2, 4, 11, 34, 156, 1044, 12346}));

    const auto two = load_graph6_corpus(KREMOVE_DATA_DIR "/two_connected_mindeg4_n8.g6");
    int expect = 0;
    for (const auto &g : all)
        expect += min_degree(g) >= 4 && oracle::k_connected(g, 2);
    EXPECT_EQ(static_cast<int>(two.size()), expect);
    for (const auto &g : two) {
        EXPECT_GE(min_degree(g), 4);
        EXPECT_TRUE(is_k_connected(g, 2));
    }
}

TEST(Tree, RoundTripAndFormat) {
    const RootedTree t = RootedTree::from_parents({1, kNoVertex, 1, 2});
    EXPECT_EQ(write_tree(t), "4 1\n0 1\n2 1\n3 2\n");
    EXPECT_EQ(parse_tree(write_tree(t)).parents(), t.parents());
    EXPECT_EQ(parse_tree("1 0\n").order(), 1);
}

TEST(Tree, MalformedInput) {
    EXPECT_THROW(parse_tree("0 0"), ParseError);
    EXPECT_THROW(parse_tree("3 3\n"), ParseError);
    EXPECT_THROW(parse_tree("3 0\n1 0\n"), ParseError);
    EXPECT_THROW(parse_tree("3 0\n1 0\n1 2\n"), ParseError);   // second parent
    EXPECT_THROW(parse_tree("3 0\n1 2\n2 1\n"), ParseError);   // cycle
    EXPECT_THROW(parse_tree("2 0\n1 0\n9 9\n"), ParseError);   // trailing
    auto e = parse_failure([] { parse_tree("3 0\n1 0\n2 5\n", "t.tree"); });
    EXPECT_EQ(e.line(), 3);
}

TEST(EmbeddingJson, RoundTripAndWrapping) {
    Embedding phi(3);
    phi[0] = 4;
    phi[1] = 2;
    phi[2] = 7;
    const auto j = embedding_to_json(phi);
    EXPECT_EQ(j.dump(), R"({"0":4,"1":2,"2":7})");
    EXPECT_EQ(embedding_from_json(j, 3), phi);
    EXPECT_EQ(embedding_from_json(nlohmann::json{{"embedding", j}, {"found", true}}, 3), phi);
    const Embedding partial = embedding_from_json(nlohmann::json{{"1", 5}}, 3);
    EXPECT_FALSE(partial.total());
}

TEST(EmbeddingJson, MalformedInput) {
    EXPECT_THROW(embedding_from_json(nlohmann::json::array({1, 2}), 2), ParseError);
    EXPECT_THROW(embedding_from_json(nlohmann::json{{"x", 1}}, 2), ParseError);
    EXPECT_THROW(embedding_from_json(nlohmann::json{{"2", 1}}, 2), ParseError);
    EXPECT_THROW(embedding_from_json(nlohmann::json{{"1", "a"}}, 2), ParseError);
    EXPECT_THROW(embedding_from_json(nlohmann::json{{"01x", 1}}, 2), ParseError);
}

TEST(Files, LoadByExtension) {
    const auto dir = std::filesystem::temp_directory_path() / "kremove_io_test";
    std::filesystem::create_directories(dir);
    const auto el = (dir / "k4.el").string(), g6 = (dir / "c5.g6").string(), bad = (dir / "two.g6").string(),
               js = (dir / "phi.json").string();
    std::ofstream(el) << write_edge_list(complete_graph(4));
    std::ofstream(g6) << write_graph6(cycle_graph(5)) << "\n";
    std::ofstream(bad) << "C~\nC~\n";
    std::ofstream(js) << "{\"0\": 1, \"1\": ";
    EXPECT_EQ(load_graph(el), complete_graph(4));
    EXPECT_EQ(load_graph(g6), cycle_graph(5));
    EXPECT_THROW(load_graph(bad), ParseError);
    EXPECT_THROW(load_graph((dir / "missing.el").string()), ParseError);
    EXPECT_THROW(load_embedding(js, 2), ParseError);
    std::filesystem::remove_all(dir);
}
