#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lorlab/errors.hpp"
#include "lorlab/globalisation.hpp"
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

const FlatTriangle kWideTriangle{{0.0, 0.0}, {1.25, 0.75}, {2.5, 0.0}};  // fails against K = -1

}  // namespace

TEST_CASE("cat's cradle in flat space against K = 0") {
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const FlatTriangle tri = random_triangle(rng);
        const CatsCradleTrace trace = cats_cradle(tri, make_model(0.0), 0.05);
        CHECK(trace.termination == "converged");
        // The hinge at q_0 reproduces tau(p, r) exactly in the flat model.
        CHECK(trace.model_pr.front() == doctest::Approx(trace.tau_pr).epsilon(1e-9));
        // LS5: l_n nondecreasing and bounded by tau(p, r).
        for (std::size_t n = 1; n < trace.l.size(); ++n) {
            CHECK(trace.l[n] >= trace.l[n - 1] - 1e-12);
            CHECK(trace.l[n] <= trace.tau_pr + 1e-9);
        }
        // LS6: model tau(p-bar_n, r-bar_n) nondecreasing.
        for (std::size_t n = 1; n < trace.model_pr.size(); ++n) {
            CHECK(trace.model_pr[n] >= trace.model_pr[n - 1] - 1e-9);
        }
        // l_n converges to tau(p, r).
        CHECK(std::abs(trace.l.back() - trace.tau_pr) < 1e-5);
    }
}

TEST_CASE("cat's cradle parameter validation and series output") {
    CHECK_THROWS_AS((void)cats_cradle(kWideTriangle, make_model(0.0), 0.6), NotRealisable);
    CHECK_THROWS_AS((void)cats_cradle(kWideTriangle, make_model(0.0), 1e-5), NotRealisable);
    const CatsCradleTrace trace = cats_cradle(kWideTriangle, make_model(0.0), 0.1);
    const std::string tsv = trace_series_tsv(trace.l);
    CHECK(tsv.find("step\tvalue\n0\t") == 0);
}

TEST_CASE("cat's cradle in flat space against K = -1 overshoots tau(p, r)") {
    // Flat space does not satisfy the K = -1 lower bound, and the starting
    // hinge inequality tau(p-bar_0, r-bar_0) <= tau(p, r) goes the wrong way.
    // For wide hinges the K = -1 side can even exceed the model diameter.
    try {
        const CatsCradleTrace trace = cats_cradle(kWideTriangle, make_model(-1.0), 0.05);
        CHECK(trace.model_pr.front() > trace.tau_pr + 1e-3);
    } catch (const SizeBoundViolation&) {
        CHECK(true);  // the overshoot left the model space entirely
    }
    // A narrower flat triangle stays inside the model space and still overshoots.
    const FlatTriangle narrow{{0.0, 0.0}, {0.4, 0.1}, {0.9, 0.0}};
    const CatsCradleTrace trace = cats_cradle(narrow, make_model(-1.0), 0.05);
    CHECK(trace.model_pr.front() > trace.tau_pr + 1e-6);
}

TEST_CASE("gluing disjunction on failing parents") {
    Rng rng(6);
    const ModelConfig cfg = make_model(-1.0);
    int parents_failed = 0;
    for (int i = 0; i < 400; ++i) {
        const FlatTriangle tri = random_triangle(rng, 0.6);
        try {
            validate_triangle(cfg, flat_triangle_sides(tri));
        } catch (const Error&) {
            continue;
        }
        const GluingVerdicts v = gluing_subdivide(tri, 0.3 + 0.4 * rng.uniform(), cfg);
        if (!v.parent_at_p.holds) {
            ++parents_failed;
            CHECK(v.some_sub_fails);
        }
    }
    CHECK(parents_failed > 10);  // failures against K = -1 are common
    CHECK_THROWS_AS(gluing_subdivide(kWideTriangle, 0.0, make_model(0.0)), NotRealisable);
}

TEST_CASE("a positive failure is located by subdivision") {
    const PositiveFailureTrace trace = locate_positive_failure(kWideTriangle, make_model(-1.0), 0.01);
    CHECK(trace.found);
    // The witness triangle fails the angle condition at its middle vertex.
    const ReportEntry at_q = check_angle_condition(trace.witness, make_model(-1.0), Vertex::Q);
    CHECK(!at_q.holds);
    CHECK(!trace.steps.empty());
    // A triangle passing everywhere has nothing to locate.
    CHECK_THROWS_AS((void)locate_positive_failure(kWideTriangle, make_model(0.0), 0.01), NotFound);
}

TEST_CASE("lebesgue number on a covered diamond") {
    // Dense flat diamond; points near the tips have timelike neighbours
    // beyond the chosen inner pair, so covers exist.
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 120, 19);
    const TimeFunctionAssignment T = coordinate_time(space);
    // Pick an inner timelike pair with a healthy diamond.
    int x = -1, y = -1;
    double best = -1.0;
    for (int i = 0; i < space.size(); ++i) {
        for (int j = 0; j < space.size(); ++j) {
            if (!space.timelike(i, j)) continue;
            const double margin =
                std::min({T(i) - 0.0, 2.0 - T(j), space.tau(i, j)});
            if (margin > best) {
                best = margin;
                x = i;
                y = j;
            }
        }
    }
    REQUIRE(x >= 0);
    const DiamondCover cover = generate_cover(space, T, x, y, 0.8 * (T(y) - T(x)));
    bool has_fallback = false;
    for (const auto& el : cover.elements) {
        has_fallback = has_fallback || (el.first == x && el.second == y);
    }
    LebesgueResult res;
    try {
        res = lebesgue_number(space, T, cover);
    } catch (const CoverInvalid&) {
        // Only possible when the greedy cover had to fall back to the
        // ambient pair, which cannot contain its own tips.
        CHECK(has_fallback);
        return;
    }
    CHECK(cover.elements.size() >= 2);  // one diamond cannot reach both tips
    if (!res.unconstrained) {
        CHECK(res.epsilon > 0.0);
        // Contract: every sub-diamond of d_T-diameter below epsilon lies in
        // one cover element.
        const NullDistanceCache d(space, T);
        const auto diamond = causal_diamond(space, x, y);
        for (int a : diamond) {
            for (int b : diamond) {
                if (a != b && !space.related(a, b)) continue;
                const auto sub = causal_diamond(space, a, b);
                double diam = 0.0;
                for (int u : sub)
                    for (int v : sub) diam = std::max(diam, d(u, v).value_or(0.0));
                if (diam >= res.epsilon) continue;
                bool contained = false;
                for (const auto& el : cover.elements) {
                    bool all = true;
                    for (int u : sub) {
                        all = all && space.timelike(el.first, u) && space.timelike(u, el.second);
                    }
                    contained = contained || all;
                }
                CHECK(contained);
            }
        }
    }
    // A single-element cover is unconstrained by definition.
    DiamondCover trivial;
    trivial.x = x;
    trivial.y = y;
    trivial.elements = {{x, y}};
    bool covered_by_inner = true;
    for (int pnt : causal_diamond(space, x, y)) {
        covered_by_inner =
            covered_by_inner && space.timelike(x, pnt) && space.timelike(pnt, y);
    }
    if (covered_by_inner) {
        CHECK(lebesgue_number(space, T, trivial).unconstrained);
    } else {
        CHECK_THROWS_AS(lebesgue_number(space, T, trivial), CoverInvalid);
    }
}

TEST_CASE("scan of the flat backend") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    // K = 0: flat space is its own model, no failures.
    const auto flat_reports = scan_global_bound(region, make_model(0.0), 60, 3);
    for (const auto& rep : flat_reports) CHECK(rep.all_hold());
    // K = +1: the bound holds strictly.
    const auto pos_reports = scan_global_bound(region, make_model(1.0), 60, 3);
    for (const auto& rep : pos_reports) CHECK(rep.all_hold());
    // K = -1: failures exist and the gluing disjunction covers each of them.
    const auto neg_reports = scan_global_bound(region, make_model(-1.0), 60, 3);
    int failures = 0;
    for (const auto& rep : neg_reports) {
        if (!rep.all_hold()) ++failures;
    }
    CHECK(failures > 0);
}

TEST_CASE("bonnet-myers diameter bound on the K = -1 patch") {
    const Region patch = Region::model_patch(-1.0, 2.8, 0.15);
    const BonnetMyersResult res =
        bonnet_myers_check(patch, make_model(-1.0), {50, 100, 200}, 31);
    CHECK(res.within_bound);
    CHECK(res.monotone);
    CHECK(res.bound == doctest::Approx(3.14159265358979323846));
    for (double d : res.diameters) CHECK(d > 0.0);
    CHECK_THROWS_AS(bonnet_myers_check(Region::flat_slab(0, 1, 0, 1), make_model(-1.0), {10}, 1),
                    NotRealisable);
}

TEST_CASE("discrete cat's cradle runs on a sprinkle") {
    const Region region = Region::flat_diamond({0.0, 0.0}, {2.0, 0.0});
    const DiscreteSpace space = DiscreteSpace::sprinkle(region, 250, 11);
    const TimeFunctionAssignment T = coordinate_time(space);
    // A wide interior triangle.
    int p = -1, q = -1, r = -1;
    double best = -1.0;
    for (int i = 0; i < space.size(); ++i) {
        for (int j = 0; j < space.size(); ++j) {
            if (!space.timelike(i, j)) continue;
            for (int k = 0; k < space.size(); ++k) {
                if (!space.timelike(j, k)) continue;
                const double score = std::min(space.tau(i, j), space.tau(j, k));
                if (score > best) {
                    best = score;
                    p = i;
                    q = j;
                    r = k;
                }
                break;
            }
        }
    }
    REQUIRE(p >= 0);
    const TriangleInstance tri = make_triangle(space, p, q, r);
    const CatsCradleTrace trace = cats_cradle(space, T, tri, make_model(0.0), 0.1);
    CHECK(trace.steps >= 1);
    CHECK(trace.point_indices.size() == trace.l.size());
    CHECK((trace.termination == "converged" || trace.termination == "degenerate" ||
           trace.termination == "max_steps"));
    // l_n never exceeds tau(p, r) (reverse triangle inequality, exact data).
    for (double l : trace.l) CHECK(l <= trace.tau_pr + 1e-9);
}
