#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "lorlab/errors.hpp"
#include "lorlab/rng.hpp"
#include "lorlab/spaces.hpp"

using namespace lorlab;

namespace {

// Exhaustive oracle: the longest-chain value by enumerating every chain.
// Accumulates front to back so the floating-point association order matches
// a forward DP bit for bit.
double chain_walk(const std::vector<std::vector<double>>& w, int cur, int q, double acc) {
    const int n = static_cast<int>(w.size());
    double best = w[cur][q] < 0.0 ? -1.0 : acc + w[cur][q];
    for (int m = 0; m < n; ++m) {
        if (m == cur || m == q || w[cur][m] < 0.0) continue;
        best = std::max(best, chain_walk(w, m, q, acc + w[cur][m]));
    }
    return best;
}

double chain_oracle(const std::vector<std::vector<double>>& w, int p, int q) {
    return chain_walk(w, p, q, 0.0);
}

DiscreteSpace random_dag(Rng& rng, int n, std::vector<std::vector<double>>* weights) {
    std::vector<DiscreteSpace::Edge> edges;
    weights->assign(n, std::vector<double>(n, -1.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform() < 0.45) {
                const double w = rng.uniform();
                edges.push_back({i, j, w});
                (*weights)[i][j] = w;
            }
        }
    }
    // Edge weights must respect the reverse triangle inequality to be a
    // valid tau restriction; lift each direct edge to the chain maximum.
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& e : edges) {
            const double oracle = chain_oracle(*weights, e.from, e.to);
            if (oracle > e.weight) {
                e.weight = oracle;
                (*weights)[e.from][e.to] = oracle;
                changed = true;
            }
        }
    }
    return DiscreteSpace::from_edges(n, edges);
}

}  // namespace

TEST_CASE("longest-chain tau equals exhaustive enumeration on small DAGs") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.index(5));  // up to 7 points
        std::vector<std::vector<double>> w;
        const DiscreteSpace space = random_dag(rng, n, &w);
        for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
                const double oracle = p == q ? -1.0 : chain_oracle(w, p, q);
                CHECK(space.tau(p, q) == (oracle < 0.0 ? 0.0 : oracle));
                CHECK(space.related(p, q) == (p != q && oracle >= 0.0));
            }
        }
    }
}

TEST_CASE("cycles are rejected") {
    CHECK_THROWS_AS(DiscreteSpace::from_edges(2, {{0, 1, 1.0}, {1, 0, 1.0}}), ConsistencyError);
    CHECK_THROWS_AS(DiscreteSpace::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}),
                    ConsistencyError);
    CHECK_THROWS_AS(DiscreteSpace::from_edges(2, {{0, 0, 1.0}}), ConsistencyError);
    CHECK_THROWS_AS(DiscreteSpace::from_edges(2, {{0, 1, -0.5}}), ConsistencyError);
}

TEST_CASE("sprinkling is deterministic and prefix-stable") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace a = DiscreteSpace::sprinkle(region, 40, 123);
    const DiscreteSpace b = DiscreteSpace::sprinkle(region, 40, 123);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        CHECK(a.coords()[i].t == b.coords()[i].t);
        CHECK(a.coords()[i].x == b.coords()[i].x);
    }
    // Same seed, larger n: the smaller point set is a subset.
    const DiscreteSpace big = DiscreteSpace::sprinkle(region, 80, 123);
    for (int i = 0; i < a.size(); ++i) {
        bool found = false;
        for (int j = 0; j < big.size(); ++j) {
            found = found || (a.coords()[i].t == big.coords()[j].t &&
                              a.coords()[i].x == big.coords()[j].x);
        }
        CHECK(found);
    }
}

TEST_CASE("sprinkled edges carry the ambient time separation") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 30, 5);
    for (const auto& e : space.edges()) {
        CHECK(e.weight ==
              doctest::Approx(flat_tau(space.coords()[e.from], space.coords()[e.to]))
                  .epsilon(1e-12));
        CHECK(space.coords()[e.from].t <= space.coords()[e.to].t);
    }
    // Direct edges exist for all causal pairs, so tau equals the ambient tau.
    for (int i = 0; i < space.size(); ++i) {
        for (int j = 0; j < space.size(); ++j) {
            if (space.related(i, j)) {
                CHECK(space.tau(i, j) ==
                      doctest::Approx(flat_tau(space.coords()[i], space.coords()[j]))
                          .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("realisers attain tau and are causally ordered") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 50, 9);
    int checked = 0;
    for (int p = 0; p < space.size(); ++p) {
        for (int q = 0; q < space.size(); ++q) {
            if (!space.timelike(p, q)) continue;
            const RealiserChain chain = realiser(space, p, q);
            REQUIRE(chain.vertices.front() == p);
            REQUIRE(chain.vertices.back() == q);
            double sum = 0.0;
            for (std::size_t i = 1; i < chain.vertices.size(); ++i) {
                CHECK(space.related(chain.vertices[i - 1], chain.vertices[i]));
                sum += space.edge_weight(chain.vertices[i - 1], chain.vertices[i]);
            }
            CHECK(sum == doctest::Approx(space.tau(p, q)).epsilon(1e-12));
            CHECK(chain.length == doctest::Approx(space.tau(p, q)).epsilon(1e-12));
            ++checked;
        }
    }
    CHECK(checked > 0);
    // An unrelated (or reversed) pair has no chain at all.
    int latest = 0;
    for (int i = 1; i < space.size(); ++i) {
        if (space.coords()[i].t > space.coords()[latest].t) latest = i;
    }
    CHECK_THROWS_AS((void)realiser(space, latest, latest == 0 ? 1 : 0), NoPath);
}

TEST_CASE("flat sprinkles are regular") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 60, 17);
    CHECK(check_regularity(space).empty());
}

TEST_CASE("causal sets and diamonds by brute force") {
    Rng rng(21);
    std::vector<std::vector<double>> w;
    const DiscreteSpace space = random_dag(rng, 7, &w);
    for (int p = 0; p < space.size(); ++p) {
        const CausalSets sets = causal_sets(space, p);
        for (int z = 0; z < space.size(); ++z) {
            const bool jf = std::count(sets.j_future.begin(), sets.j_future.end(), z) > 0;
            CHECK(jf == (z == p || space.related(p, z)));
            const bool tf = std::count(sets.i_future.begin(), sets.i_future.end(), z) > 0;
            CHECK(tf == space.timelike(p, z));
        }
        for (int q = 0; q < space.size(); ++q) {
            if (!space.related(p, q)) continue;
            const auto diamond = causal_diamond(space, p, q);
            for (int z = 0; z < space.size(); ++z) {
                const bool in = std::count(diamond.begin(), diamond.end(), z) > 0;
                const bool expect = (z == p || z == q || (space.related(p, z) && space.related(z, q)));
                CHECK(in == expect);
            }
        }
    }
}

TEST_CASE("model patch time separation matches the closed form") {
    const Region patch = Region::model_patch(-1.0, 2.0, 0.3);
    CHECK(patch.tau({0.3, 0.1}, {1.5, -0.05}) ==
          doctest::Approx(1.1921599915764574).epsilon(1e-12));
    CHECK(patch.tau({1.5, -0.05}, {0.3, 0.1}) == 0.0);  // not causal
    // Small patches stay strictly below D_K.
    const DiscreteSpace space = DiscreteSpace::sprinkle(patch, 60, 2);
    for (int i = 0; i < space.size(); ++i)
        for (int j = 0; j < space.size(); ++j) CHECK(space.tau(i, j) < 3.14159265358979323846);
}

TEST_CASE("region validation") {
    CHECK_THROWS_AS(Region::flat_diamond({0.0, 0.0}, {0.0, 1.0}), NotRealisable);
    CHECK_THROWS_AS(Region::model_patch(1.0, 1.0, 0.3), NotRealisable);
    CHECK_THROWS_AS(Region::model_patch(-1.0, 4.0, 0.3), SizeBoundViolation);
    CHECK_THROWS_AS(Region::model_patch(-1.0, 1.0, 2.0), SizeBoundViolation);
}

TEST_CASE("save and load round trip") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 25, 77);
    const std::string path = "/tmp/lorlab_test_space.json";
    save_space(space, path);
    const DiscreteSpace loaded = load_space(path);
    REQUIRE(loaded.size() == space.size());
    for (int i = 0; i < space.size(); ++i) {
        for (int j = 0; j < space.size(); ++j) CHECK(loaded.tau(i, j) == space.tau(i, j));
    }
    REQUIRE(loaded.region().has_value());
    CHECK(loaded.region()->kind == RegionKind::FlatDiamond);
    CHECK(loaded.seed() == space.seed());
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)load_space("/tmp/definitely_missing_space.json"), ParseError);
}
