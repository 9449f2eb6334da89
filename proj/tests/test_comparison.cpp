#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lorlab/comparison.hpp"
#include "lorlab/errors.hpp"
#include "lorlab/rng.hpp"

using namespace lorlab;

namespace {

FlatTriangle random_triangle(Rng& rng, double size = 1.0) {
    for (;;) {
        const Event p{0.0, 0.0};
        const Event q{size * (0.2 + rng.uniform()), size * 2.0 * (rng.uniform() - 0.5)};
        const Event r{q.t + size * (0.2 + rng.uniform()), q.x + size * 2.0 * (rng.uniform() - 0.5)};
        if (flat_timelike(p, q) && flat_timelike(q, r)) return {p, q, r};
    }
}

const FlatTriangle kWideTriangle{{0.0, 0.0}, {1.25, 0.75}, {2.5, 0.0}};  // sides (1, 1, 2.5)

}  // namespace

TEST_CASE("flat measured angles equal rapidity gaps") {
    // q = (1.25, 0.75) from p: rapidity atanh(0.6); legs symmetric about x=0,
    // so the angle at q is twice that.
    CHECK(flat_measured_angle(kWideTriangle, Vertex::Q) ==
          doctest::Approx(2.0 * std::atanh(0.6)).epsilon(1e-12));
    CHECK(flat_measured_angle(kWideTriangle, Vertex::P) ==
          doctest::Approx(std::atanh(0.6)).epsilon(1e-12));
    CHECK(flat_measured_angle(kWideTriangle, Vertex::R) ==
          doctest::Approx(std::atanh(0.6)).epsilon(1e-12));
    CHECK_THROWS_AS(make_flat_triangle({0, 0}, {0.5, 1.0}, {2, 0}), NotRealisable);
}

TEST_CASE("flat space checked against K = 0 is exactly borderline") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const FlatTriangle tri = random_triangle(rng, 0.5 + 2.0 * rng.uniform());
        const ModelConfig cfg = make_model(0.0);
        for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
            const ReportEntry angle = check_angle_condition(tri, cfg, v);
            CHECK(angle.holds);
            CHECK(std::abs(angle.margin) < 1e-9);
            const ReportEntry hinge = check_hinge_condition(tri, cfg, v);
            CHECK(hinge.holds);
            CHECK(std::abs(hinge.margin) < 1e-9);
        }
        const ReportEntry triangle = check_triangle_condition(tri, cfg, 40, 1234 + i);
        CHECK(triangle.holds);
        CHECK(std::abs(triangle.margin) < 1e-9);
    }
}

TEST_CASE("curvature hierarchy on the frozen wide triangle") {
    // Measured angle at the middle vertex: 1.3862943611198906.
    // Comparison angles: 1.000547575953513 (K = -1), 1.6565885134512854 (K = +1).
    const ReportEntry neg = check_angle_condition(kWideTriangle, make_model(-1.0), Vertex::Q);
    CHECK(!neg.holds);
    CHECK(neg.measured == doctest::Approx(1.3862943611198906).epsilon(1e-12));
    CHECK(neg.comparison == doctest::Approx(1.000547575953513).epsilon(1e-12));

    const ReportEntry pos = check_angle_condition(kWideTriangle, make_model(1.0), Vertex::Q);
    CHECK(pos.holds);
    CHECK(pos.comparison == doctest::Approx(1.6565885134512854).epsilon(1e-12));

    // Flat space satisfies the bound for every K >= 0 at every vertex.
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
        const FlatTriangle tri = random_triangle(rng);
        for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
            CHECK(check_angle_condition(tri, make_model(1.0), v).holds);
            CHECK(check_angle_condition(tri, make_model(0.0), v).holds);
        }
    }
}

TEST_CASE("the three checkers agree vertex by vertex") {
    Rng rng(13);
    for (double K : {-1.0, 0.0, 1.0}) {
        const ModelConfig cfg = make_model(K);
        int agreements = 0;
        for (int i = 0; i < 150; ++i) {
            const FlatTriangle tri = random_triangle(rng, 0.4);
            try {
                validate_triangle(cfg, flat_triangle_sides(tri));
            } catch (const Error&) {
                continue;
            }
            bool angle_all = true, hinge_all = true;
            for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
                angle_all = angle_all && check_angle_condition(tri, cfg, v).holds;
                hinge_all = hinge_all && check_hinge_condition(tri, cfg, v).holds;
            }
            // Equivalence of the bound formulations: a triangle passing all
            // angle conditions passes the hinge conditions, and vice versa.
            CHECK(angle_all == hinge_all);
            if (angle_all) {
                CHECK(check_triangle_condition(tri, cfg, 30, 99 + i).holds);
            }
            ++agreements;
        }
        CHECK(agreements > 50);
    }
}

TEST_CASE("discrete angle probe approaches the flat angle") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 900, 4);
    // A wide triangle well inside the diamond.
    int p = -1, q = -1, r = -1;
    double best = -1.0;
    for (int i = 0; i < space.size(); ++i) {
        for (int j = 0; j < space.size(); ++j) {
            for (int k = 0; k < space.size(); ++k) {
                if (!space.timelike(i, j) || !space.timelike(j, k)) continue;
                const double score = std::min(space.tau(i, j), space.tau(j, k));
                if (score > best) {
                    best = score;
                    p = i;
                    q = j;
                    r = k;
                }
                break;  // first k is enough per (i, j)
            }
        }
    }
    REQUIRE(p >= 0);
    const TriangleInstance tri = make_triangle(space, p, q, r);
    const ModelConfig cfg = make_model(0.0);
    const AngleProbe probe = triangle_probe(space, tri, Vertex::Q, cfg);
    CHECK(!probe.angles.empty());
    const double exact = flat_angle(space.coords()[q], space.coords()[p], space.coords()[r]);
    CHECK(std::abs(probe.value - exact) < 0.35);
    // Scales decrease toward zero along the recorded pairs.
    for (std::size_t i = 1; i < probe.scales1.size(); ++i) {
        CHECK(probe.scales1[i] <= probe.scales1[i - 1]);
    }
    CHECK_THROWS_AS(make_triangle(space, q, p, r), NotFound);
}

TEST_CASE("alexandrov classifications agree across both routes") {
    Rng rng(17);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const FlatTriangle tri = random_triangle(rng, 0.4);
        const double frac = 0.1 + 0.8 * rng.uniform();
        const double K = -1.0 + 2.0 * rng.uniform();
        const ModelConfig cfg = make_model(K);
        try {
            validate_triangle(cfg, flat_triangle_sides(tri));
            const AlexandrovResult res = verify_alexandrov_future(tri, frac, cfg, 1e-9);
            CHECK(res.agree);
            ++checked;
        } catch (const Error&) {
            continue;
        }
    }
    CHECK(checked > 200);
}

TEST_CASE("alexandrov in flat against K = 0 is degenerate") {
    const AlexandrovResult res = verify_alexandrov_future(kWideTriangle, 0.5, make_model(0.0));
    // Flat space is its own model: both routes sit exactly on the boundary.
    CHECK(res.tau_xr == doctest::Approx(res.tau_tilde).epsilon(1e-9));
    CHECK(res.by_tau == AlexandrovClass::Degenerate);
}

TEST_CASE("triangle inequality of angles") {
    Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        const Event x{0.0, 0.0};
        const Event alpha{0.3 + rng.uniform(), 0.8 * (2.0 * rng.uniform() - 1.0)};
        const Event gamma{0.3 + rng.uniform(), 0.8 * (2.0 * rng.uniform() - 1.0)};
        const Event beta{-0.3 - rng.uniform(), 0.8 * (2.0 * rng.uniform() - 1.0)};
        if (!flat_timelike(x, alpha) || !flat_timelike(x, gamma) || !flat_timelike(beta, x)) {
            continue;
        }
        const AngleInequalityResult res = angle_triangle_inequality_check(x, alpha, beta, gamma);
        CHECK(res.holds);
    }
    CHECK_THROWS_AS(angle_triangle_inequality_check({0, 0}, {1, 0}, {2, 0}, {3, 0}),
                    NotRealisable);
}

TEST_CASE("reports serialise") {
    ComparisonReport rep;
    rep.triangle_id = 3;
    rep.entries.push_back(check_angle_condition(kWideTriangle, make_model(0.0), Vertex::Q));
    const std::string csv = report_csv({rep});
    CHECK(csv.find("triangle,vertex,mode,margin,verdict") == 0);
    CHECK(csv.find("holds") != std::string::npos);
    const std::string jsonText = report_json({rep});
    CHECK(jsonText.find("\"margin\"") != std::string::npos);
    CHECK(rep.all_hold());
}
