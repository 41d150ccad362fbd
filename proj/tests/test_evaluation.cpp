#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "egodist/evaluation.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace egodist;
using namespace testing;

namespace {

DistanceMatrix matrix(std::vector<std::string> labels, std::vector<std::vector<double>> d) {
    DistanceMatrix m(std::move(labels));
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) m.set(i, j, d[i][j]);
    return m;
}

}  // namespace

TEST_CASE("perfect separation gives AUPR 1") {
    const std::vector<LabeledPair> pairs{{0.1, true}, {0.2, true}, {0.5, false}, {0.7, false}};
    const auto c = pr_curve(pairs);
    CHECK(c.aupr == 1.0);
    CHECK(c.best_f1 == 1.0);
    CHECK(c.positives == 2);
    CHECK(c.negatives == 2);
}

TEST_CASE("average precision of + + - +") {
    const std::vector<LabeledPair> pairs{{1, true}, {2, true}, {3, false}, {4, true}};
    const auto c = pr_curve(pairs);
    CHECK(c.aupr == doctest::Approx(11.0 / 12.0));
    REQUIRE(c.points.size() == 4);
    CHECK(c.points[2].precision == doctest::Approx(2.0 / 3.0));
    CHECK(c.points[3].recall == 1.0);
}

TEST_CASE("tied distances enter together") {
    const std::vector<LabeledPair> pairs{{1, true}, {1, false}, {2, true}};
    const auto c = pr_curve(pairs);
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[0].precision == 0.5);
    CHECK(c.points[0].recall == 0.5);
    CHECK(c.aupr == doctest::Approx(0.5 * 0.5 + 0.5 * 2.0 / 3.0));
    // all tied: one point at the base rate
    const std::vector<LabeledPair> flat{{0, true}, {0, false}, {0, false}};
    CHECK(pr_curve(flat).aupr == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("curve preconditions") {
    const std::vector<LabeledPair> pos{{1, true}};
    const std::vector<LabeledPair> neg{{1, false}};
    CHECK_THROWS_AS(pr_curve(pos), std::invalid_argument);
    CHECK_THROWS_AS(pr_curve(neg), std::invalid_argument);
}

TEST_CASE("AUPR of random scores approaches the positive fraction") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0, 1);
    const double phi = 0.3;
    double total = 0;
    const int shuffles = 200;
    for (int s = 0; s < shuffles; ++s) {
        std::vector<LabeledPair> pairs;
        for (int i = 0; i < 1000; ++i) pairs.push_back({u(rng), i < 300});
        total += pr_curve(pairs).aupr;
    }
    CHECK(total / shuffles == doctest::Approx(phi).epsilon(0.02));
}

TEST_CASE("curve is invariant under monotone transforms") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<LabeledPair> pairs, squashed;
    for (int i = 0; i < 200; ++i) {
        const double d = std::floor(u(rng) * 50) / 50;  // with ties
        pairs.push_back({d, u(rng) < 0.4});
        squashed.push_back({std::sqrt(d) * 3 + 1, pairs.back().is_positive});
    }
    const auto a = pr_curve(pairs), b = pr_curve(squashed);
    CHECK(a.aupr == b.aupr);
    CHECK(a.best_f1 == b.best_f1);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].recall == b.points[i].recall);
        CHECK(a.points[i].precision == b.points[i].precision);
        if (i) CHECK(a.points[i].recall >= a.points[i - 1].recall);
    }
}

TEST_CASE("pair filters") {
    const std::vector<EnsembleTag> tags{{ModelKind::er, 10, 0.2},
                                        {ModelKind::er, 20, 0.2},
                                        {ModelKind::geo, 10, 0.2},
                                        {ModelKind::geo, 20, 0.2}};
    auto m = matrix({"a", "b", "c", "d"}, {{0, 1, 2, 3}, {1, 0, 4, 5}, {2, 4, 0, 6}, {3, 5, 6, 0}});
    const auto all = labeled_pairs(m, tags, PairFilter::all_pairs);
    const auto same = labeled_pairs(m, tags, PairFilter::same_size_density);
    CHECK(all.size() == 6);
    REQUIRE(same.size() == 2);
    CHECK(same[0].distance == 2);
    CHECK_FALSE(same[0].is_positive);
    CHECK(filter_name(PairFilter::same_size_density) == "same");
    CHECK(benchmark(m, tags, PairFilter::all_pairs).positives == 2);
    CHECK_THROWS(benchmark(m, tags, PairFilter::same_size_density));  // no positives
}

TEST_CASE("benchmark from graphs") {
    const std::vector<Graph> gs{complete(4), complete(5), path(6), path(7)};
    const std::vector<EnsembleTag> tags{{ModelKind::er, 4, 1}, {ModelKind::er, 5, 1}, {ModelKind::sfba, 6, 1},
                                        {ModelKind::sfba, 7, 1}};
    DistanceSpec spec;
    spec.kind = DistanceKind::c;
    CHECK(benchmark(std::span<const Graph>(gs), tags, spec, PairFilter::all_pairs).aupr == 1.0);
    const std::vector<EnsembleTag> one_model(4, EnsembleTag{ModelKind::er, 4, 1});
    CHECK_THROWS(benchmark(std::span<const Graph>(gs), one_model, spec, PairFilter::all_pairs));
}

TEST_CASE("UPGMA") {
    SUBCASE("two items") {
        const auto t = average_linkage_dendrogram(matrix({"x", "y"}, {{0, 5}, {5, 0}}));
        REQUIRE(t.merges.size() == 1);
        CHECK(t.merges[0].height == 5);
        CHECK(t.newick() == "(x:5,y:5);");
    }
    SUBCASE("three items") {
        const auto t = average_linkage_dendrogram(matrix({"A", "B", "C"}, {{0, 1, 4}, {1, 0, 5}, {4, 5, 0}}));
        REQUIRE(t.merges.size() == 2);
        CHECK(t.merges[0].left == 0);
        CHECK(t.merges[0].right == 1);
        CHECK(t.merges[0].height == 1);
        CHECK(t.merges[1].height == 4.5);
        CHECK(t.merges[1].size == 3);
        CHECK(t.nested() == "[C, [A, B]@1]@4.5");
        CHECK(t.newick() == "(C:4.5,(A:1,B:1):3.5);");
    }
    SUBCASE("zero distance merges first, ties by lowest pair") {
        const auto t = average_linkage_dendrogram(
            matrix({"KLM", "CSA", "X", "Y"}, {{0, 0, 2, 2}, {0, 0, 2, 2}, {2, 2, 0, 2}, {2, 2, 2, 0}}));
        CHECK(t.merges[0].height == 0);
        CHECK(t.merges[0].left == 0);
        CHECK(t.merges[0].right == 1);
        CHECK(t.merges[1].left == 2);
        CHECK(t.merges[1].right == 3);
    }
    SUBCASE("weighted by cluster size") {
        // {a,b} at 2, then c joins; d sits at 10 from a, b and 1 from c
        const auto t = average_linkage_dendrogram(
            matrix({"a", "b", "c", "d"}, {{0, 2, 3, 10}, {2, 0, 3, 10}, {3, 3, 0, 1}, {10, 10, 1, 0}}));
        CHECK(t.merges[0].height == 1);  // c, d
        CHECK(t.merges[1].height == 2);  // a, b
        CHECK(t.merges[2].height == doctest::Approx((3 + 10 + 3 + 10) / 4.0));
    }
    CHECK_THROWS(average_linkage_dendrogram(matrix({"x"}, {{0}})));
}

TEST_CASE("UPGMA heights are monotone on ego-distance matrices") {
    std::mt19937_64 rng(43);
    std::vector<Graph> gs;
    for (int i = 0; i < 25; ++i) gs.push_back(oracle::random_graph(rng, 40, 3));
    DistanceSpec spec;
    spec.kind = DistanceKind::dc;
    const auto t = average_linkage_dendrogram(distance_matrix(std::span<const Graph>(gs), spec));
    for (std::size_t k = 1; k < t.merges.size(); ++k) CHECK(t.merges[k].height >= t.merges[k - 1].height);
    CHECK(t.merges.back().size == 25);
}

TEST_CASE("quartiles interpolate linearly") {
    const std::vector<double> v{1, 2, 3, 4};
    const auto q = quartiles(v);
    CHECK(q.q25 == 1.75);
    CHECK(q.q50 == 2.5);
    CHECK(q.q75 == 3.25);
    const std::vector<double> one{7};
    CHECK(quartiles(one).q25 == 7);
    CHECK_THROWS(quartiles(std::vector<double>{}));
}

TEST_CASE("timeline") {
    const std::vector<Graph> seq{complete(3), complete(3), path(3)};
    DistanceSpec spec{DistanceKind::c, BinningSpec::make(0.5), {1, 1, 1}};
    const auto tl = timeline(std::span<const Graph>(seq), spec, 0);
    REQUIRE(tl.steps.size() == 3);
    CHECK(tl.steps[0].distance == 0);
    CHECK(tl.steps[1].distance == 0);
    CHECK(tl.steps[2].distance == doctest::Approx(1.0));
    REQUIRE(tl.features == std::vector<Feature>{Feature::clustering});
    CHECK(tl.steps[0].feature_stats[0].q50 == 1.0);
    CHECK(tl.steps[2].feature_stats[0].q50 == 0.0);

    const auto from_last = timeline(std::span<const Graph>(seq), spec, 2);
    CHECK(from_last.steps[2].distance == 0);
    CHECK_THROWS(timeline(std::span<const Graph>(seq), spec, 3));
    spec.kind = DistanceKind::sum;
    CHECK(timeline(std::span<const Graph>(seq), spec).features.size() == 3);
}

TEST_CASE("curve csv") {
    const std::vector<LabeledPair> pairs{{1, true}, {2, false}};
    std::ostringstream out;
    write_pr_curve_csv(out, pr_curve(pairs));
    CHECK(out.str().rfind("recall,precision,f1,distance\n", 0) == 0);
    CHECK(out.str().find("# aupr=1") != std::string::npos);
}
