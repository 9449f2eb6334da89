#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lorlab/errors.hpp"
#include "lorlab/flat.hpp"
#include "lorlab/model.hpp"
#include "lorlab/rng.hpp"

using namespace lorlab;

namespace {

// Independent flat oracle: embed the hinge in the Minkowski plane and read
// off the opposite side, instead of going through the law of cosines.
double flat_hinge_oracle(double a, double b, double omega, int sigma) {
    const Event v{0.0, 0.0};
    if (sigma == +1) {
        // v is the middle vertex: one side past-directed, one future-directed.
        const Event p = v - a * Event{std::cosh(0.0), std::sinh(0.0)};
        const Event r = v + b * Event{std::cosh(omega), std::sinh(omega)};
        return flat_tau(p, r);
    }
    // v is a time-endpoint: both sides future-directed, angle = rapidity gap.
    const Event q = v + a * Event{std::cosh(0.0), std::sinh(0.0)};
    const Event r = v + b * Event{std::cosh(omega), std::sinh(omega)};
    return std::max(flat_tau(q, r), flat_tau(r, q));
}

}  // namespace

TEST_CASE("model config and diameter") {
    CHECK(make_model(0.0).flat());
    CHECK(make_model(0.0).diameter == std::numeric_limits<double>::infinity());
    CHECK(make_model(1.0).diameter == std::numeric_limits<double>::infinity());
    CHECK(make_model(-1.0).diameter == doctest::Approx(3.14159265358979323846).epsilon(1e-12));
    CHECK(make_model(-4.0).diameter == doctest::Approx(3.14159265358979323846 / 2.0).epsilon(1e-12));
    CHECK(finite_diameter(-1.0) == doctest::Approx(3.14159265358979323846));
}

TEST_CASE("flat law of cosines matches the embedding oracle") {
    Rng rng(7);
    const ModelConfig cfg = make_model(0.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = 0.1 + 2.0 * rng.uniform();
        const double b = 0.1 + 2.0 * rng.uniform();
        const double omega = 2.0 * rng.uniform();
        const int sigma = rng.uniform() < 0.5 ? +1 : -1;
        const double oracle = flat_hinge_oracle(a, b, omega, sigma);
        double c;
        try {
            c = side_from_hinge(cfg, {a, b, omega, sigma});
        } catch (const NotRealisable&) {
            // sigma = -1 hinge too wide to close: the embedded endpoints are
            // not causally related, so the oracle tau vanishes.
            CHECK(oracle == 0.0);
            continue;
        }
        CHECK(c == doctest::Approx(oracle).epsilon(1e-12));
        if (c > 0.0) {
            CHECK(angle_from_sides(cfg, {a, b, c}, sigma) == doctest::Approx(omega).epsilon(1e-9));
        }
    }
}

TEST_CASE("frozen curved-regime hinge values") {
    // a = b = 1, omega = 1, sigma = +1, computed independently from the
    // closed-form law of cosines in each regime.
    CHECK(side_from_hinge(make_model(-1.0), {1.0, 1.0, 1.0, +1}) ==
          doctest::Approx(2.4992387525033197).epsilon(1e-12));
    CHECK(side_from_hinge(make_model(1.0), {1.0, 1.0, 1.0, +1}) ==
          doctest::Approx(2.1874302871749363).epsilon(1e-12));
    CHECK(side_from_hinge(make_model(0.0), {1.0, 1.0, 1.0, +1}) ==
          doctest::Approx(std::sqrt(2.0 + 2.0 * std::cosh(1.0))).epsilon(1e-12));
}

TEST_CASE("frozen triangle comparison angles at the middle vertex") {
    // Sides (1, 1, 2.5): the comparison angle depends strongly on K.
    const ModelTriangle tri{1.0, 1.0, 2.5};
    CHECK(triangle_angle(make_model(0.0), tri, Vertex::Q) ==
          doctest::Approx(1.3862943611198906).epsilon(1e-12));
    CHECK(triangle_angle(make_model(-1.0), tri, Vertex::Q) ==
          doctest::Approx(1.000547575953513).epsilon(1e-12));
    CHECK(triangle_angle(make_model(1.0), tri, Vertex::Q) ==
          doctest::Approx(1.6565885134512854).epsilon(1e-12));
}

TEST_CASE("round trip in every regime, both signs") {
    for (double K : {-1.0, 0.0, 1.0}) {
        const ModelConfig cfg = make_model(K);
        Rng rng(11);
        int done = 0;
        while (done < 1000) {
            const double a = 0.05 + 0.8 * rng.uniform();
            const double b = 0.05 + 0.8 * rng.uniform();
            const double omega = 0.01 + 2.0 * rng.uniform();
            const int sigma = rng.uniform() < 0.5 ? +1 : -1;
            double c;
            try {
                c = side_from_hinge(cfg, {a, b, omega, sigma});
            } catch (const Error&) {
                continue;
            }
            if (c <= 1e-9) continue;
            const double back = angle_from_sides(cfg, {a, b, c}, sigma);
            CHECK(std::abs(back - omega) / std::max(omega, 1.0) < 1e-9);
            ++done;
        }
    }
}

TEST_CASE("size bounds for K < 0") {
    const ModelConfig cfg = make_model(-1.0);
    CHECK_THROWS_AS((void)angle_from_sides(cfg, {1.0, 1.0, 4.0}, +1), SizeBoundViolation);
    CHECK_THROWS_AS((void)side_from_hinge(cfg, {1.5, 1.5, 5.0, +1}), SizeBoundViolation);
    CHECK_THROWS_AS(validate_triangle(cfg, {1.5, 1.6, 3.2}), SizeBoundViolation);
}

TEST_CASE("triangle realisability") {
    const ModelConfig cfg = make_model(0.0);
    CHECK_NOTHROW(validate_triangle(cfg, {1.0, 1.0, 2.0}));
    CHECK_NOTHROW(validate_triangle(cfg, {1.0, 1.0, 2.5}));
    CHECK_THROWS_AS(validate_triangle(cfg, {1.0, 1.0, 1.5}), NotRealisable);
    CHECK_THROWS_AS(validate_triangle(cfg, {0.0, 1.0, 1.5}), NotRealisable);
}

TEST_CASE("vertex roles and signs") {
    CHECK(vertex_sigma(Vertex::P) == -1);
    CHECK(vertex_sigma(Vertex::Q) == +1);
    CHECK(vertex_sigma(Vertex::R) == -1);
    // Degenerate triangle pr = pq + qr: the middle angle is zero and the
    // endpoint angles agree with the straight configuration.
    const ModelConfig cfg = make_model(0.0);
    CHECK(triangle_angle(cfg, {1.0, 1.0, 2.0}, Vertex::Q) == doctest::Approx(0.0));
}

TEST_CASE("comparison point distance endpoints recover side lengths") {
    const ModelTriangle tri{1.0, 1.2, 2.6};
    for (double K : {-0.5, 0.0, 1.0}) {
        const ModelConfig cfg = make_model(K);
        CHECK(comparison_point_distance(cfg, tri, Side::PQ, 0.0, Side::PR, 1.0).value ==
              doctest::Approx(tri.pr).epsilon(1e-9));
        CHECK(comparison_point_distance(cfg, tri, Side::PQ, 1.0, Side::QR, 1.0).value ==
              doctest::Approx(tri.qr).epsilon(1e-9));
        CHECK(comparison_point_distance(cfg, tri, Side::PQ, 0.0, Side::PQ, 1.0).value ==
              doctest::Approx(tri.pq).epsilon(1e-9));
        // Distance from a point to itself vanishes.
        CHECK(comparison_point_distance(cfg, tri, Side::PR, 0.3, Side::PR, 0.3).value ==
              doctest::Approx(0.0));
    }
}

TEST_CASE("monotonicity in the longest side") {
    for (double K : {-1.0, 0.0, 1.0}) {
        const ModelConfig cfg = make_model(K);
        const double a = 0.4, b = 0.5;
        double prev_q = -1.0, prev_p = -1.0, prev_r = -1.0;
        for (double c = a + b + 1e-6; c < std::min(2.5, cfg.diameter - 1e-3); c += 1e-3) {
            const ModelTriangle tri{a, b, c};
            const double aq = triangle_angle(cfg, tri, Vertex::Q);
            const double ap = triangle_angle(cfg, tri, Vertex::P);
            const double ar = triangle_angle(cfg, tri, Vertex::R);
            if (prev_q >= 0.0) {
                CHECK(aq >= prev_q - 1e-12);
                CHECK(ap >= prev_p - 1e-12);
                CHECK(ar >= prev_r - 1e-12);
            }
            prev_q = aq;
            prev_p = ap;
            prev_r = ar;
        }
    }
}
