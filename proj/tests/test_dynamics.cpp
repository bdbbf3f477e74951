#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "majdyn/dynamics.hpp"
#include "majdyn/simd/kernels.hpp"
#include "test_support.hpp"

using namespace majdyn;
using namespace majdyn::testing;

TEST(Bias, Examples) {
    EXPECT_EQ(bias(OpinionVector(7, true)), 7);
    EXPECT_EQ(bias(opinions({1, 1, 1, 1, -1, -1, -1, -1})), 0);
    OpinionVector s(10);
    for (int v = 0; v < 6; ++v) s.set(v, true);
    EXPECT_EQ(bias(s), 2);
    EXPECT_EQ(positives(s), 6u);
}

TEST(NeighborSum, Examples) {
    EXPECT_EQ(neighbor_sum(empty_graph(3), opinions({1, -1, 1}), 1), 0);
    EXPECT_EQ(neighbor_sum(path_graph(3), opinions({1, -1, 1}), 1), 2);
    EXPECT_EQ(neighbor_sum(complete_graph(4), opinions({1, 1, 1, -1}), 0), 1);
    EXPECT_THROW(neighbor_sum(path_graph(3), opinions({1, 1, 1}), 3), std::out_of_range);
    EXPECT_THROW(neighbor_sum(path_graph(3), opinions({1, 1}), 0), std::invalid_argument);
}

TEST(NeighborSum, VectorFormAgrees) {
    Rng rng(2);
    auto [g, edges] = coin_graph(80, 0.1, rng);
    auto s = random_opinions(80, rng);
    auto sums = neighbor_sums(g, s);
    for (Vertex v = 0; v < 80; ++v) {
        EXPECT_EQ(sums[v], neighbor_sum(g, s, v));
    }
}

TEST(MajorityStep, Examples) {
    auto tri = OpinionVector(3, true);
    EXPECT_EQ(majority_step(complete_graph(3), tri), tri);
    EXPECT_EQ(majority_step(path_graph(3), opinions({1, -1, 1})), opinions({-1, 1, -1}));
    EXPECT_EQ(majority_step(star_graph(4), opinions({-1, 1, 1, 1, 1})), opinions({1, -1, -1, -1, -1}));
}

TEST(MajorityStep, TieKeepsOpinion) {
    // Vertex 1 on a path sees one + and one -.
    EXPECT_TRUE(majority_step(path_graph(3), opinions({1, 1, -1})).positive(1));
    EXPECT_FALSE(majority_step(path_graph(3), opinions({1, -1, -1})).positive(1));
    // Isolated vertices never change.
    auto s = opinions({1, -1, 1, -1});
    EXPECT_EQ(majority_step(empty_graph(4), s), s);
}

TEST(MajorityStep, SizeMismatchThrows) {
    EXPECT_THROW(majority_step(path_graph(3), OpinionVector(4)), std::invalid_argument);
}

TEST(MajorityStep, MatchesNaiveReference) {
    Rng rng(41);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.below(200);
        auto [g, edges] = coin_graph(n, rng.uniform() * 0.3, rng);
        auto s = random_opinions(n, rng);
        ASSERT_EQ(majority_step(g, s), naive_step(n, edges, s)) << "rep " << rep;
    }
}

TEST(MajorityStep, EveryKernelLevelAgrees) {
    Rng rng(43);
    const auto original = simd::active_kernels().level;
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 1 + rng.below(500);
        auto [g, edges] = coin_graph(n, rng.uniform() * 0.2, rng);
        auto s = random_opinions(n, rng);
        const auto expect = naive_step(n, edges, s);
        for (auto level : simd::available_levels()) {
            ASSERT_TRUE(simd::set_active_level(level));
            EXPECT_EQ(majority_step(g, s), expect) << simd::to_string(level);
        }
    }
    simd::set_active_level(original);
}

TEST(MajorityStep, SignSymmetry) {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        auto g = sample_gnp(150, 0.05, rng());
        auto s = random_opinions(150, rng);
        auto neg = s;
        neg.negate();
        auto a = majority_step(g, s);
        auto b = majority_step(g, neg);
        b.negate();
        EXPECT_EQ(a, b);
    }
}

TEST(MajorityStep, Monotone) {
    // Adding positives never removes positives from the next day.
    Rng rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        auto g = sample_gnp(120, 0.06, rng());
        auto s = random_opinions(120, rng);
        auto t = s;
        for (std::size_t v = 0; v < 120; ++v) {
            if (rng.below(4) == 0) t.set(v, true);
        }
        auto a = majority_step(g, s);
        auto b = majority_step(g, t);
        for (std::size_t v = 0; v < 120; ++v) {
            EXPECT_TRUE(!a.positive(v) || b.positive(v));
        }
    }
}

TEST(Run, Examples) {
    auto tri = run(complete_graph(3), OpinionVector(3, true), 10);
    EXPECT_EQ(tri.outcome, Outcome::Unanimous);
    EXPECT_EQ(tri.sign, 1);
    EXPECT_EQ(tri.outcome_day, 0u);

    auto path = run(path_graph(3), opinions({1, -1, 1}), 10);
    EXPECT_EQ(path.outcome, Outcome::PeriodTwo);
    EXPECT_EQ(path.period, 2u);
    EXPECT_LE(path.outcome_day, 2u);

    auto c4 = run(cycle_graph(4), opinions({1, -1, 1, -1}), 10);
    EXPECT_EQ(c4.outcome, Outcome::PeriodTwo);
    EXPECT_EQ(c4.period, 2u);
    EXPECT_EQ(c4.days[1].flips, 4u);
}

TEST(Run, FixedPointIsPeriodOne) {
    auto r = run(empty_graph(4), opinions({1, -1, 1, 1}), 10);
    EXPECT_EQ(r.outcome, Outcome::PeriodTwo);
    EXPECT_EQ(r.period, 1u);
    EXPECT_EQ(r.outcome_day, 1u);
    EXPECT_EQ(r.bias_at(30), 2);
}

TEST(Run, UnanimityAfterSteps) {
    auto r = run(star_graph(4), opinions({1, 1, -1, -1, -1}), 10);
    // Day 1: center sees 1-3 -> -, leaves see + -> all leaves +, center -.
    // Day 2: center sees +4 -> +, leaves see - -> -. Two-cycle.
    EXPECT_EQ(r.outcome, Outcome::PeriodTwo);
    auto k = run(complete_graph(5), opinions({1, 1, 1, -1, -1}), 10);
    EXPECT_EQ(k.outcome, Outcome::Unanimous);
    EXPECT_EQ(k.outcome_day, 1u);
    EXPECT_EQ(k.sign, 1);
    EXPECT_EQ(k.bias_at(0), 1);
    EXPECT_EQ(k.bias_at(1), 5);
    EXPECT_EQ(k.bias_at(40), 5);
}

TEST(Run, BiasAtAlternatesForTwoCycles) {
    auto r = run(star_graph(4), opinions({1, 1, -1, -1, -1}), 10);
    ASSERT_EQ(r.period, 2u);
    for (std::size_t d = r.days.size(); d < r.days.size() + 6; ++d) {
        EXPECT_EQ(r.bias_at(d), r.bias_at(d - 2));
    }
    EXPECT_NE(r.bias_at(r.days.size()), r.bias_at(r.days.size() + 1));
}

TEST(Run, DayCap) {
    // A long path with alternating blocks takes more than one day to settle.
    auto g = path_graph(40);
    OpinionVector s(40);
    for (int v = 0; v < 40; ++v) s.set(v, (v / 2) % 2 == 0);
    auto capped = run(g, s, 1);
    if (capped.outcome == Outcome::DayCapReached) {
        EXPECT_EQ(capped.days.size(), 2u);
        EXPECT_THROW(capped.bias_at(5), std::out_of_range);
    }
    EXPECT_THROW(run(g, s, 0), std::invalid_argument);
}

TEST(Run, RecordsMatchStepping) {
    Rng rng(77);
    auto g = sample_gnp(300, 0.04, 5);
    auto s = random_opinions(300, rng);
    auto r = run(g, s, 64);
    auto cur = s;
    for (std::size_t d = 0; d < r.days.size(); ++d) {
        EXPECT_EQ(r.days[d].bias, bias(cur));
        EXPECT_EQ(r.days[d].positives, positives(cur));
        auto next = majority_step(g, cur);
        if (d + 1 < r.days.size()) {
            EXPECT_EQ(r.days[d + 1].flips, hamming(cur, next));
        }
        cur = next;
    }
}

TEST(Run, GolesOlivosSmallGraphs) {
    // Every graph on 4 vertices and every start ends with period at most two.
    for (std::uint64_t mask = 0; mask < (1u << 6); ++mask) {
        auto g = graph_from_mask(4, mask);
        for (std::uint64_t o = 0; o < 16; ++o) {
            auto r = run(g, opinions_from_mask(4, o), 50);
            ASSERT_NE(r.outcome, Outcome::DayCapReached);
        }
    }
}

TEST(Run, OutcomeNames) {
    EXPECT_EQ(to_string(Outcome::Unanimous), "unanimous");
    EXPECT_EQ(to_string(Outcome::PeriodTwo), "period_two");
    EXPECT_EQ(to_string(Outcome::DayCapReached), "day_cap");
}
