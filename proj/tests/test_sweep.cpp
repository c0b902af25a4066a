#include "kremove/sweep.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace kremove;

namespace {

InstanceSpec spec_of(int k, int n_min, int n, int m_min, int m, int count, std::uint64_t seed) {
    InstanceSpec s;
    s.k = k;
    s.n_min = n_min;
    s.n = n;
    s.m_min = m_min;
    s.m = m;
    s.count = count;
    s.seed = seed;
    return s;
}

} // namespace

TEST(Sweep, ParseAlgorithm) {
    EXPECT_EQ(parse_algorithm("2conn"), Algorithm::TwoConnected);
    EXPECT_EQ(parse_algorithm("3conn"), Algorithm::ThreeConnected);
    EXPECT_EQ(parse_algorithm("oracle"), Algorithm::Oracle);
    EXPECT_THROW(parse_algorithm("4conn"), std::invalid_argument);
}

TEST(Sweep, RandomInstancesAreReproducibleAndInRange) {
    const auto spec = spec_of(2, 7, 10, 2, 4, 25, 17);
    const auto a = random_instances(spec), b = random_instances(spec);
    ASSERT_EQ(a.size(), 25u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].graph, b[i].graph);
        EXPECT_EQ(a[i].tree.parents(), b[i].tree.parents());
        EXPECT_GE(a[i].graph.order(), 7);
        EXPECT_LE(a[i].graph.order(), 10);
        EXPECT_GE(a[i].tree.order(), 2);
        EXPECT_LE(a[i].tree.order(), 4);
        EXPECT_GE(min_degree(a[i].graph), a[i].tree.order() + 2);
        EXPECT_TRUE(oracle::k_connected(a[i].graph, 2));
    }
    // a longer batch starts with the same instances
    auto longer = spec;
    longer.count = 30;
    EXPECT_EQ(random_instances(longer)[24].graph, a[24].graph);
    EXPECT_THROW(random_instances(spec_of(2, 9, 8, 2, 3, 1, 1)), std::invalid_argument);
}

TEST(Sweep, CorpusInstancesFilter) {
    const std::vector<Graph> graphs{complete_graph(5), cycle_graph(6), complete_graph(6), wheel_graph(7)};
    const auto two = corpus_instances(graphs, 2, 2, 3);
    // m=2 needs degree 4 (K5, K6), m=3 needs 5 (K6); one shape each
    std::vector<std::string> ids;
    for (const auto &i : two)
        ids.push_back(i.id);
    EXPECT_EQ(ids, (std::vector<std::string>{"g0t2.0", "g2t2.0", "g2t3.0"}));
    EXPECT_EQ(corpus_instances(graphs, 3, 2, 2).size(), 1u);
}

TEST(Sweep, RunVerifiesEveryInstance) {
    for (int k : {2, 3}) {
        SweepOptions options;
        options.algorithm = k == 2 ? Algorithm::TwoConnected : Algorithm::ThreeConnected;
        options.cross_check = true;
        const auto report = corpus_sweep(spec_of(k, 7, 10, 1, 3, 50, 100 + k), options);
        const auto &s = report.summary;
        EXPECT_EQ(s.instances, 50);
        EXPECT_EQ(s.verified, 50);
        EXPECT_EQ(s.incidents, 0);
        EXPECT_EQ(s.non_monotone, 0);
        EXPECT_EQ(s.oracle_checked, 50);
        EXPECT_EQ(s.oracle_agree, 50);
    }
}

TEST(Sweep, MismatchedAlgorithmIsReportedPerInstance) {
    SweepOptions options;
    options.algorithm = Algorithm::ThreeConnected;
    const auto report = corpus_sweep(spec_of(2, 8, 8, 2, 2, 2, 3), options);
    EXPECT_EQ(report.summary.verified, 0);
    EXPECT_FALSE(report.results[0].error.empty());
}

TEST(Sweep, ReportsAreByteIdentical) {
    SweepOptions options;
    const auto spec = spec_of(2, 7, 11, 2, 4, 40, 9);
    const std::string first = corpus_sweep(spec, options).to_jsonl();
    EXPECT_EQ(corpus_sweep(spec, options).to_jsonl(), first);
    options.threads = 2;
    EXPECT_EQ(corpus_sweep(spec, options).to_jsonl(), first);
    EXPECT_EQ(first.find("millis"), std::string::npos);
    const std::string timed = corpus_sweep(spec, options).to_jsonl(true);
    EXPECT_NE(timed.find("millis"), std::string::npos);
    EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 41);
    const auto last = nlohmann::json::parse(first.substr(first.rfind('\n', first.size() - 2) + 1));
    EXPECT_EQ(last["summary"]["instances"], 40);
}
