#include "kremove/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace kremove;

TEST(Families, Shapes) {
    EXPECT_EQ(complete_graph(5).size(), 10);
    EXPECT_EQ(cycle_graph(6).size(), 6);
    EXPECT_EQ(path_graph(4).size(), 3);
    EXPECT_EQ(wheel_graph(6).size(), 10);
    EXPECT_EQ(wheel_graph(6).degree(0), 5);
    EXPECT_EQ(star_graph(5).degree(0), 4);
    const Graph p = petersen_graph();
    EXPECT_EQ(p.size(), 15);
    for (Vertex v = 0; v < 10; ++v)
        EXPECT_EQ(p.degree(v), 3);
    EXPECT_THROW(cycle_graph(2), std::invalid_argument);
    EXPECT_THROW(wheel_graph(3), std::invalid_argument);
}

TEST(Thresholds, PerConnectivity) {
    EXPECT_EQ(theorem_degree(1, 4), 4);
    EXPECT_EQ(theorem_degree(2, 4), 6);
    EXPECT_EQ(theorem_degree(3, 4), 7);
    EXPECT_THROW(theorem_degree(4, 4), std::invalid_argument);
    EXPECT_EQ(conjecture_degree(1, 4), 4);
    EXPECT_EQ(conjecture_degree(2, 4), 6);
    EXPECT_EQ(conjecture_degree(3, 4), 7);
    EXPECT_EQ(conjecture_degree(4, 4), 9);
}

TEST(RandomKConnected, SmallSpecIsVerified) {
    InstanceSpec spec;
    spec.n = 6;
    spec.k = 2;
    spec.delta_min = 4;
    spec.seed = 5;
    const Graph g = random_k_connected_graph(spec);
    EXPECT_EQ(g.order(), 6);
    EXPECT_GE(min_degree(g), 4);
    EXPECT_TRUE(oracle::k_connected(g, 2));
}

TEST(RandomKConnected, InfeasibleSpecsThrow) {
    EXPECT_THROW(random_k_connected_graph(3, 2, 4, 1), GenerationExhausted);
    EXPECT_THROW(random_k_connected_graph(3, 3, 0, 1), GenerationExhausted);
    EXPECT_THROW(random_k_connected_graph(8, 4, 5, 1), std::invalid_argument);
}

TEST(RandomKConnected, DeterministicPerSeed) {
    EXPECT_EQ(random_k_connected_graph(12, 3, 6, 99), random_k_connected_graph(12, 3, 6, 99));
    bool differs = false;
    for (std::uint64_t s = 0; s < 5 && !differs; ++s)
        differs = !(random_k_connected_graph(12, 3, 6, s) == random_k_connected_graph(12, 3, 6, 99));
    EXPECT_TRUE(differs);
}

// Post hoc predicates with the independent oracle over a spread of parameters.
TEST(RandomKConnected, PredicatesHold) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int k = 1 + static_cast<int>(seed % 3);
        const int n = 6 + static_cast<int>(seed % 7);
        const int delta = std::min(n - 1, k + 1 + static_cast<int>(seed % 4));
        const Graph g = random_k_connected_graph(n, k, delta, seed);
        EXPECT_GE(min_degree(g), delta);
        EXPECT_TRUE(oracle::k_connected(g, k)) << "seed " << seed;
    }
}

TEST(Families, ConnectivityOfNamedGraphs) {
    EXPECT_TRUE(oracle::k_connected(wheel_graph(7), 3));
    EXPECT_FALSE(oracle::k_connected(cycle_graph(7), 3));
    EXPECT_TRUE(oracle::k_connected(petersen_graph(), 3));
    EXPECT_FALSE(oracle::k_connected(star_graph(4), 2));
}
