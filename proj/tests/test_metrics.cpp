#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "mospecg/metrics.hpp"

using namespace mospecg;

namespace {

Partition one_cluster(int n) { return compact_labels(std::vector<int>(n, 0)); }

Partition singletons(int n) {
    std::vector<int> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = v;
    return compact_labels(labels);
}

Partition triangle_partition() { return compact_labels({0, 0, 0, 1, 1, 1}); }

}  // namespace

TEST_CASE("intra-cluster fraction on the two-triangles graph") {
    Graph g = testing::two_triangles();
    CHECK(q_in(g, triangle_partition()) == doctest::Approx(6.0 / 7.0));
    CHECK(q_in(g, one_cluster(6)) == doctest::Approx(1.0));
    CHECK(q_in(g, singletons(6)) == doctest::Approx(0.0));
}

TEST_CASE("null-model fraction on the two-triangles graph") {
    Graph g = testing::two_triangles();
    // Both triangle strength sums are 7, 2m = 14: (49 + 49) / 196.
    CHECK(q_null(g, triangle_partition()) == doctest::Approx(0.5));
    CHECK(q_null(g, one_cluster(6)) == doctest::Approx(1.0));
    double singleton_sum = 0.0;
    for (double s : g.strength) singleton_sum += s * s;
    CHECK(q_null(g, singletons(6)) ==
          doctest::Approx(singleton_sum / (g.total_weight_2m * g.total_weight_2m)));
}

TEST_CASE("modularity values") {
    Graph g = testing::two_triangles();
    CHECK(modularity(g, triangle_partition()) == doctest::Approx(0.35714).epsilon(1e-4));
    CHECK(modularity(g, one_cluster(6)) == doctest::Approx(0.0));
    Graph k = testing::karate();
    Partition truth = testing::karate_truth(k);
    CHECK(modularity(k, truth) == doctest::Approx(0.3715).epsilon(1e-3));
}

TEST_CASE("modularity equals the difference of its two terms") {
    Graph g = testing::dolphins();
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        Partition part = testing::random_partition(g.n, 1 + t % 8, rng);
        CHECK(modularity(g, part) ==
              doctest::Approx(q_in(g, part) - q_null(g, part)).epsilon(1e-12));
        CHECK(q_in(g, part) >= 0.0);
        CHECK(q_in(g, part) <= 1.0);
        CHECK(q_null(g, part) > 0.0);
        CHECK(q_null(g, part) <= 1.0);
    }
}

TEST_CASE("normalized mutual information endpoints") {
    Partition a = compact_labels({0, 0, 1, 1, 2});
    CHECK(nmi(a, a) == doctest::Approx(1.0));
    CHECK(nmi(a, one_cluster(5)) == doctest::Approx(0.0));
    CHECK(nmi(one_cluster(5), a) == doctest::Approx(0.0));
    CHECK(nmi(one_cluster(5), one_cluster(5)) == doctest::Approx(1.0));
    // Relabeling does not change the score.
    Partition b = compact_labels({2, 2, 0, 0, 1});
    CHECK(nmi(a, b) == doctest::Approx(1.0));
}

TEST_CASE("documented dolphins NMI values from block partitions") {
    // Ground truth has communities of 42 and 20 members. The documented
    // two-cluster result (sizes 41/21) is the truth with one vertex moved
    // across; the three-cluster result (26/21/15) splits the large community
    // and moves one vertex into the small one.
    std::vector<int> truth(62);
    for (int v = 0; v < 62; ++v) truth[v] = v < 42 ? 0 : 1;
    std::vector<int> moved = truth;
    moved[0] = 1;  // 41 / 21
    CHECK(nmi(compact_labels(moved), compact_labels(truth)) ==
          doctest::Approx(0.889).epsilon(1e-3));
    std::vector<int> three(62);
    for (int v = 0; v < 62; ++v) three[v] = v < 26 ? 0 : (v < 41 ? 2 : 1);
    CHECK(nmi(compact_labels(three), compact_labels(truth)) ==
          doctest::Approx(0.662).epsilon(1e-3));
}

TEST_CASE("pair agreement counts") {
    Graph g = testing::dolphins();
    Partition truth = testing::dolphins_truth(g);
    SUBCASE("all-one against the ground truth") {
        PairAgreement pa = pair_agreement(one_cluster(g.n), truth);
        CHECK(pa.correct_together == 1051);  // C(42,2) + C(20,2)
        CHECK(pa.wrong == 840);              // 42 * 20 cross pairs grouped together
    }
    SUBCASE("identical partitions have no disagreement") {
        PairAgreement pa = pair_agreement(truth, truth);
        CHECK(pa.wrong == 0);
        CHECK(pa.correct_together == 1051);
    }
    SUBCASE("one vertex moved across") {
        std::vector<int> moved = truth.labels;
        // Move one vertex of the large community into the small one.
        int v0 = 0;
        while (truth.labels[v0] != 0) ++v0;
        moved[v0] = 1;
        PairAgreement pa = pair_agreement(compact_labels(moved), truth);
        CHECK(pa.correct_together == 1010);
        CHECK(pa.wrong == 61);
    }
}
