#include "dmdgp/bp_solver.hpp"
#include "dmdgp/generators.hpp"
#include "dmdgp/symmetry.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace dmdgp;
using dmdgp::testing::planar_pair_instance;
using dmdgp::testing::is_power_of_two_count;

namespace {

SolveResult solve_mode(const DgpInstance& inst, SolveMode mode, unsigned threads = 1)
{
    SolveOptions opt;
    opt.mode = mode;
    opt.threads = threads;
    return solve(inst, opt);
}

} // namespace

TEST(Solve, PlanarPairGivesReflectedPair)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto g = planar_pair_instance(seed);
        auto r = solve_mode(g.instance, SolveMode::all);
        ASSERT_EQ(r.count, 2u) << "seed " << seed;
        ASSERT_EQ(r.solutions.size(), 2u);
        // The survivors differ by the reflection at level 3.
        auto mirrored = apply_partial_reflection(g.instance, r.solutions[0], 3);
        EXPECT_LT(max_deviation(mirrored, r.solutions[1]), 1e-9);
        EXPECT_EQ(r.solutions[0].chirality[2], -r.solutions[1].chirality[2]);
        EXPECT_EQ(r.solutions[0].chirality[3], -r.solutions[1].chirality[3]);
        // Two of the four level-4 nodes are pruned.
        EXPECT_EQ(r.stats.nodes[3], 2u);
        EXPECT_EQ(r.stats.nodes[4], 2u);
        EXPECT_EQ(r.stats.pruned[4], 2u);
    }
}

TEST(Solve, GroundTruthIsAmongSolutions)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = generate_random_yes(14, 3, PruningSpec::density(0.3), seed);
        auto r = solve_mode(g.instance, SolveMode::all);
        double best = 1e300;
        for (const auto& s : r.solutions)
            best = std::min(best, max_deviation(s, g.truth));
        EXPECT_LT(best, 1e-6);
    }
}

TEST(Solve, NoPruningGivesFullTree)
{
    for (int K = 1; K <= 4; ++K) {
        const int n = K + 9;
        auto g = generate_random_yes(n, K, PruningSpec::none(), 11);
        auto r = solve_mode(g.instance, SolveMode::count);
        EXPECT_EQ(r.count, std::uint64_t{1} << (n - K));
        for (int v = K; v <= n; ++v)
            EXPECT_EQ(r.stats.nodes[static_cast<std::size_t>(v)], std::uint64_t{1} << (v - K));
    }
}

TEST(Solve, SubsetSumReduction)
{
    // a=(1,1): vertex 3 may turn either way off the first step, after which
    // the zero-sum pins every remaining sign.
    EXPECT_EQ(solve_mode(reduce_subset_sum({{1, 1}}, 2), SolveMode::count).count, 2u);
    EXPECT_EQ(solve_mode(reduce_subset_sum({{1, 2}}, 2), SolveMode::count).count, 0u);
    EXPECT_EQ(solve_mode(reduce_subset_sum({{1, 2}}, 3), SolveMode::count).count, 0u);

    auto inst = reduce_subset_sum({{1, 1}}, 2);
    auto r = solve_mode(inst, SolveMode::all);
    ASSERT_EQ(r.solutions.size(), 2u);
    for (const auto& s : r.solutions) {
        EXPECT_TRUE(verify_embedding(inst, s).feasible());
        EXPECT_LT((s.at(1) - s.at(5)).norm(), 1e-9);
    }
}

TEST(Solve, ModesAgree)
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto g = generate_random_yes(16, 2 + static_cast<int>(seed % 2), PruningSpec::density(0.15), seed);
        auto all = solve_mode(g.instance, SolveMode::all);
        auto count = solve_mode(g.instance, SolveMode::count);
        auto first = solve_mode(g.instance, SolveMode::first);
        EXPECT_EQ(all.count, count.count);
        EXPECT_EQ(all.solutions.size(), all.count);
        EXPECT_TRUE(count.solutions.empty());
        EXPECT_EQ(all.stats.nodes, count.stats.nodes);
        ASSERT_EQ(first.solutions.size(), 1u);
        EXPECT_EQ(max_deviation(first.solutions[0], all.solutions[0]), 0.0);
    }
}

TEST(Solve, SolutionsFeasibleDistinctAndOrdered)
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto g = generate_random_yes(15, 3, PruningSpec::density(0.2), seed);
        auto r = solve_mode(g.instance, SolveMode::all);
        std::set<std::string> seen;
        std::string prev;
        for (const auto& s : r.solutions) {
            EXPECT_TRUE(verify_embedding(g.instance, s).feasible());
            const auto c = chirality_string(s.chirality);
            EXPECT_TRUE(seen.insert(c).second);
            EXPECT_LT(prev, c);
            prev = c;
            // The branch signs are the geometric chirality.
            EXPECT_EQ(chirality(g.instance, s), s.chirality);
        }
        EXPECT_TRUE(is_power_of_two_count(r.count));
    }
}

TEST(Solve, FirstBranchIsAllPositive)
{
    auto g = generate_random_yes(12, 3, PruningSpec::none(), 2);
    auto r = solve_mode(g.instance, SolveMode::first);
    ASSERT_EQ(r.solutions.size(), 1u);
    EXPECT_EQ(chirality_string(r.solutions[0].chirality), std::string(12, '+'));
}

TEST(Solve, WidthNeverMoreThanDoubles)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = generate_random_yes(18, 2, PruningSpec::density(0.1), seed);
        auto r = solve_mode(g.instance, SolveMode::count);
        for (int v = 3; v <= 18; ++v)
            EXPECT_LE(r.stats.nodes[static_cast<std::size_t>(v)], 2 * r.stats.nodes[static_cast<std::size_t>(v - 1)]);
    }
}

TEST(Solve, ThreadsMatchSingleThreaded)
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto g = generate_random_yes(17, 3, PruningSpec::density(0.1), seed);
        auto ref = solve_mode(g.instance, SolveMode::all);
        for (unsigned t : {2u, 3u, 8u}) {
            auto par = solve_mode(g.instance, SolveMode::all, t);
            EXPECT_EQ(par.count, ref.count);
            EXPECT_EQ(par.stats.nodes, ref.stats.nodes);
            EXPECT_EQ(par.stats.pruned, ref.stats.pruned);
            ASSERT_EQ(par.solutions.size(), ref.solutions.size());
            for (std::size_t i = 0; i < ref.solutions.size(); ++i) {
                EXPECT_EQ(par.solutions[i].chirality, ref.solutions[i].chirality);
                EXPECT_EQ(max_deviation(par.solutions[i], ref.solutions[i]), 0.0);
            }
        }
    }
}

TEST(Solve, MemoryGuard)
{
    auto g = generate_random_yes(12, 2, PruningSpec::none(), 3);
    SolveOptions opt;
    opt.max_solutions = 100;
    EXPECT_THROW(solve(g.instance, opt), SizeGuard);
    opt.threads = 4;
    EXPECT_THROW(solve(g.instance, opt), SizeGuard);
    opt.mode = SolveMode::count;
    EXPECT_EQ(solve(g.instance, opt).count, 1024u);
}

TEST(Solve, MissingDiscretizationEdgeRejected)
{
    auto g = generate_random_yes(8, 2, PruningSpec::none(), 3);
    g.instance.remove_edge(5, 7);
    EXPECT_THROW(solve(g.instance), InvalidArgument);
}

TEST(Solve, LongChainKeepsGroundTruthFeasible)
{
    auto g = generate_random_yes(10000, 3, PruningSpec::prop1(4), 1);
    auto r = solve_mode(g.instance, SolveMode::first);
    ASSERT_EQ(r.solutions.size(), 1u);
    EXPECT_TRUE(verify_embedding(g.instance, r.solutions[0]).feasible());
    EXPECT_TRUE(verify_embedding(g.instance, g.truth).feasible());
}

TEST(VerifyEmbedding, GroundTruthHasNoViolations)
{
    auto g = generate_random_yes(20, 3, PruningSpec::density(0.3), 8);
    auto rep = verify_embedding(g.instance, g.truth);
    EXPECT_TRUE(rep.feasible());
    EXPECT_EQ(rep.edges_checked, g.instance.edges().size());
    EXPECT_LT(rep.max_residual, 1e-12);
}

TEST(VerifyEmbedding, PerturbedVertexReportsIncidentEdges)
{
    auto g = generate_random_yes(12, 3, PruningSpec::density(0.3), 8);
    Embedding x = g.truth;
    x.at(6)(0) += 1.0;
    auto rep = verify_embedding(g.instance, x);
    EXPECT_FALSE(rep.feasible());
    std::size_t incident = 0;
    for (const auto& [e, d] : g.instance.edges())
        if (e.u == 6 || e.v == 6)
            ++incident;
    EXPECT_EQ(rep.violations.size(), incident);
    for (const auto& v : rep.violations) {
        EXPECT_TRUE(v.edge.u == 6 || v.edge.v == 6);
        EXPECT_NEAR(v.realized, (x.at(v.edge.u) - x.at(v.edge.v)).norm(), 1e-15);
        EXPECT_NEAR(v.residual(), std::abs(v.realized - v.distance), 1e-15);
    }
}

TEST(VerifyEmbedding, DimensionMismatchThrows)
{
    auto g = generate_random_yes(6, 3, PruningSpec::none(), 8);
    Embedding x = g.truth;
    x.points.pop_back();
    EXPECT_THROW(verify_embedding(g.instance, x), InvalidArgument);
    x = g.truth;
    x.at(2) = Point::Zero(2);
    EXPECT_THROW(verify_embedding(g.instance, x), InvalidArgument);
}

TEST(StatsCsv, Format)
{
    auto g = generate_random_yes(5, 2, PruningSpec::none(), 8);
    auto r = solve_mode(g.instance, SolveMode::count);
    std::ostringstream out;
    write_stats_csv(out, r.stats);
    EXPECT_EQ(out.str(), "level,nodes,pruned\n2,1,0\n3,2,0\n4,4,0\n5,8,0\n");
}
