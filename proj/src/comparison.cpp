#include "lorlab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "lorlab/errors.hpp"
#include "lorlab/rng.hpp"

namespace lorlab {

using nlohmann::json;

namespace {

const char* vertex_name(Vertex v) {
    switch (v) {
        case Vertex::P: return "p";
        case Vertex::Q: return "q";
        case Vertex::R: return "r";
    }
    return "?";
}

// Adjacent side lengths (a, b) at a vertex and the opposite side, following
// the law-of-cosines roles.
struct VertexSides {
    double a, b, c;
};

VertexSides sides_at(const ModelTriangle& tri, Vertex v) {
    switch (v) {
        case Vertex::P: return {tri.pq, tri.pr, tri.qr};
        case Vertex::Q: return {tri.pq, tri.qr, tri.pr};
        case Vertex::R: return {tri.qr, tri.pr, tri.pq};
    }
    throw Error("sides_at: bad vertex");
}

}  // namespace

// ---------------------------------------------------------------------------
// Analytic backend

FlatTriangle make_flat_triangle(Event p, Event q, Event r) {
    if (!flat_timelike(p, q) || !flat_timelike(q, r)) {
        throw NotRealisable("flat triangle requires p << q << r");
    }
    return {p, q, r};
}

ModelTriangle flat_triangle_sides(const FlatTriangle& tri) {
    return {flat_tau(tri.p, tri.q), flat_tau(tri.q, tri.r), flat_tau(tri.p, tri.r)};
}

double flat_measured_angle(const FlatTriangle& tri, Vertex v) {
    switch (v) {
        case Vertex::P: return flat_angle(tri.p, tri.q, tri.r);
        case Vertex::Q: return flat_angle(tri.q, tri.p, tri.r);
        case Vertex::R: return flat_angle(tri.r, tri.q, tri.p);
    }
    throw Error("flat_measured_angle: bad vertex");
}

// ---------------------------------------------------------------------------
// Reports

bool ComparisonReport::all_hold() const {
    for (const auto& e : entries)
        if (!e.holds) return false;
    return true;
}

std::string report_json(const std::vector<ComparisonReport>& reports) {
    json out = json::array();
    for (const auto& r : reports) {
        json entries = json::array();
        for (const auto& e : r.entries) {
            entries.push_back({{"mode", e.mode},
                               {"vertex", vertex_name(e.vertex)},
                               {"measured", e.measured},
                               {"comparison", e.comparison},
                               {"margin", e.margin},
                               {"holds", e.holds},
                               {"converged", e.converged}});
        }
        out.push_back({{"triangle", r.triangle_id}, {"entries", std::move(entries)}});
    }
    return out.dump(1);
}

std::string report_csv(const std::vector<ComparisonReport>& reports) {
    std::ostringstream out;
    out.precision(17);
    out << "triangle,vertex,mode,margin,verdict\n";
    for (const auto& r : reports) {
        for (const auto& e : r.entries) {
            out << r.triangle_id << "," << vertex_name(e.vertex) << "," << e.mode << "," << e.margin
                << "," << (e.holds ? "holds" : "fails") << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Checkers, analytic

SignedAngle comparison_angle(const ModelConfig& cfg, const ModelTriangle& tri, Vertex v) {
    return {triangle_angle(cfg, tri, v), vertex_sigma(v)};
}

namespace {

// Angle condition: signed measured <= signed comparison. Margin is the slack
// sigma * (comparison - measured).
ReportEntry angle_entry(double measured, bool converged, const ModelConfig& cfg,
                        const ModelTriangle& sides, Vertex v, double tol) {
    ReportEntry e;
    e.mode = "angle";
    e.vertex = v;
    e.measured = measured;
    e.comparison = triangle_angle(cfg, sides, v);
    e.margin = vertex_sigma(v) * (e.comparison - e.measured);
    e.holds = e.margin >= -tol;
    e.converged = converged;
    return e;
}

// Hinge condition: actual opposite side >= model opposite side built from
// the measured angle. A sigma = -1 hinge too wide to close has model side 0
// (the model endpoints are not causally related, so tau vanishes); a
// sigma = +1 hinge hitting D_K can only fail.
ReportEntry hinge_entry(double measured, bool converged, const ModelConfig& cfg,
                        const ModelTriangle& sides, Vertex v, double tol) {
    ReportEntry e;
    e.mode = "hinge";
    e.vertex = v;
    const VertexSides vs = sides_at(sides, v);
    e.measured = vs.c;  // actual opposite side
    try {
        e.comparison = side_from_hinge(cfg, {vs.a, vs.b, measured, vertex_sigma(v)});
    } catch (const NotRealisable&) {
        e.comparison = 0.0;
    } catch (const SizeBoundViolation&) {
        e.comparison = cfg.diameter;
    }
    e.margin = e.measured - e.comparison;
    e.holds = e.margin >= -tol;
    e.converged = converged;
    return e;
}

struct SamplePoint {
    Side side;
    double t;  // tau fraction from the side's past endpoint
};

// Stratified sample points: vertices and midpoints first, then uniform.
std::vector<SamplePoint> stratified_points(int count, Rng& rng) {
    std::vector<SamplePoint> pts;
    const Side all[3] = {Side::PQ, Side::QR, Side::PR};
    for (Side s : all)
        for (double t : {0.0, 0.5, 1.0}) pts.push_back({s, t});
    while (static_cast<int>(pts.size()) < count) {
        const Side s = all[rng.index(3)];
        pts.push_back({s, rng.uniform()});
    }
    return pts;
}

Event flat_side_point(const FlatTriangle& tri, Side s, double t) {
    switch (s) {
        case Side::PQ: return flat_point_on(tri.p, tri.q, t);
        case Side::QR: return flat_point_on(tri.q, tri.r, t);
        case Side::PR: return flat_point_on(tri.p, tri.r, t);
    }
    throw Error("flat_side_point: bad side");
}

}  // namespace

ReportEntry check_angle_condition(const FlatTriangle& tri, const ModelConfig& cfg, Vertex v,
                                  double tol) {
    return angle_entry(flat_measured_angle(tri, v), true, cfg, flat_triangle_sides(tri), v, tol);
}

ReportEntry check_hinge_condition(const FlatTriangle& tri, const ModelConfig& cfg, Vertex v,
                                  double tol) {
    return hinge_entry(flat_measured_angle(tri, v), true, cfg, flat_triangle_sides(tri), v, tol);
}

ReportEntry check_triangle_condition(const FlatTriangle& tri, const ModelConfig& cfg, int samples,
                                     std::uint64_t seed, double tol) {
    const ModelTriangle sides = flat_triangle_sides(tri);
    validate_triangle(cfg, sides);
    Rng rng(seed);
    const auto pts = stratified_points(samples, rng);
    ReportEntry e;
    e.mode = "triangle";
    e.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Event A = flat_side_point(tri, pts[i].side, pts[i].t);
            const Event B = flat_side_point(tri, pts[j].side, pts[j].t);
            const double actual = std::max(flat_tau(A, B), flat_tau(B, A));
            const PointSeparation model =
                comparison_point_distance(cfg, sides, pts[i].side, pts[i].t, pts[j].side, pts[j].t);
            const double margin = model.value - actual;
            if (margin < e.margin) {
                e.margin = margin;
                e.measured = actual;
                e.comparison = model.value;
            }
        }
    }
    e.holds = e.margin >= -tol;
    return e;
}

// ---------------------------------------------------------------------------
// Discrete triangles

TriangleInstance make_triangle(const DiscreteSpace& space, int p, int q, int r) {
    if (!space.timelike(p, q) || !space.timelike(q, r) || !space.timelike(p, r)) {
        throw NotFound("make_triangle: vertices are not pairwise timelike related");
    }
    TriangleInstance tri;
    tri.p = p;
    tri.q = q;
    tri.r = r;
    tri.side_pq = realiser(space, p, q);
    tri.side_qr = realiser(space, q, r);
    tri.side_pr = realiser(space, p, r);
    tri.sides = {space.tau(p, q), space.tau(q, r), space.tau(p, r)};
    return tri;
}

namespace {

// Candidate probe points along a chain emanating from the vertex, with their
// tau-distance from the vertex, smallest first.
std::vector<std::pair<int, double>> chain_candidates(const DiscreteSpace& space,
                                                     const std::vector<int>& chain, bool future) {
    std::vector<std::pair<int, double>> out;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const int y = chain[i];
        const double s = future ? space.tau(chain[0], y) : space.tau(y, chain[0]);
        if (s > 0.0) out.push_back({y, s});
    }
    return out;  // chains are realisers, so tau grows along them
}

}  // namespace

AngleProbe measure_angle(const DiscreteSpace& space, int vertex, const std::vector<int>& chain1,
                         bool future1, const std::vector<int>& chain2, bool future2,
                         const ModelConfig& cfg, int k, double converge_tol) {
    AngleProbe probe;
    probe.vertex = vertex;
    probe.chain1 = chain1;
    probe.chain2 = chain2;
    probe.future1 = future1;
    probe.future2 = future2;
    const auto c1 = chain_candidates(space, chain1, future1);
    const auto c2 = chain_candidates(space, chain2, future2);
    const int sigma = (future1 != future2) ? +1 : -1;
    const std::size_t pairs = std::min(c1.size(), c2.size());
    std::vector<double> scales1, scales2, angles;
    for (std::size_t m = 0; m < pairs && static_cast<int>(angles.size()) < k; ++m) {
        const auto [y, a] = c1[m];
        const auto [z, b] = c2[m];
        // Opposite side of the comparison triple in the domain D.
        const double c = std::max(space.tau(y, z), space.tau(z, y));
        if (sigma == -1 && c == 0.0 && !space.related(y, z) && !space.related(z, y) && y != z) {
            ++probe.excluded;  // same-orientation pair not causally related
            continue;
        }
        try {
            angles.push_back(angle_from_sides(cfg, {a, b, c}, sigma));
        } catch (const Error&) {
            ++probe.excluded;  // size bounds or unrealisable at this scale
            continue;
        }
        scales1.push_back(a);
        scales2.push_back(b);
    }
    if (angles.empty()) throw NoAdmissiblePairs("measure_angle: domain D empty at every scale");
    // Largest scale first; the estimate is the smallest-scale value.
    std::reverse(angles.begin(), angles.end());
    std::reverse(scales1.begin(), scales1.end());
    std::reverse(scales2.begin(), scales2.end());
    probe.angles = angles;
    probe.scales1 = scales1;
    probe.scales2 = scales2;
    probe.value = angles.back();
    probe.converged = true;
    for (std::size_t i = 1; i < angles.size(); ++i) {
        if (std::abs(angles[i] - angles[i - 1]) >= converge_tol) probe.converged = false;
    }
    if (angles.size() < 2) probe.converged = false;
    return probe;
}

AngleProbe triangle_probe(const DiscreteSpace& space, const TriangleInstance& tri, Vertex v,
                          const ModelConfig& cfg, int k) {
    auto reversed = [](const std::vector<int>& c) { return std::vector<int>(c.rbegin(), c.rend()); };
    switch (v) {
        case Vertex::P:
            return measure_angle(space, tri.p, tri.side_pq.vertices, true, tri.side_pr.vertices,
                                 true, cfg, k);
        case Vertex::Q:
            return measure_angle(space, tri.q, reversed(tri.side_pq.vertices), false,
                                 tri.side_qr.vertices, true, cfg, k);
        case Vertex::R:
            return measure_angle(space, tri.r, reversed(tri.side_qr.vertices), false,
                                 reversed(tri.side_pr.vertices), false, cfg, k);
    }
    throw Error("triangle_probe: bad vertex");
}

ReportEntry check_angle_condition(const DiscreteSpace& space, const TriangleInstance& tri,
                                  const ModelConfig& cfg, Vertex v, double tol) {
    const AngleProbe probe = triangle_probe(space, tri, v, cfg);
    return angle_entry(probe.value, probe.converged, cfg, tri.sides, v, tol);
}

ReportEntry check_hinge_condition(const DiscreteSpace& space, const TriangleInstance& tri,
                                  const ModelConfig& cfg, Vertex v, double tol) {
    const AngleProbe probe = triangle_probe(space, tri, v, cfg);
    return hinge_entry(probe.value, probe.converged, cfg, tri.sides, v, tol);
}

ReportEntry check_triangle_condition(const DiscreteSpace& space, const TriangleInstance& tri,
                                     const ModelConfig& cfg, int samples, std::uint64_t seed,
                                     double tol) {
    validate_triangle(cfg, tri.sides);
    Rng rng(seed);
    const auto pts = stratified_points(samples, rng);

    auto chain_of = [&](Side s) -> const RealiserChain& {
        switch (s) {
            case Side::PQ: return tri.side_pq;
            case Side::QR: return tri.side_qr;
            default: return tri.side_pr;
        }
    };
    // Resolve a requested fraction to the closest chain vertex (ties toward
    // the past endpoint) and report the fraction actually achieved.
    auto resolve = [&](Side s, double t) -> std::pair<int, double> {
        const RealiserChain& chain = chain_of(s);
        const double len = chain.length;
        int best = chain.vertices.front();
        double best_frac = 0.0, best_err = std::abs(t * len);
        double acc = 0.0;
        for (std::size_t i = 1; i < chain.vertices.size(); ++i) {
            acc += space.edge_weight(chain.vertices[i - 1], chain.vertices[i]);
            const double err = std::abs(acc - t * len);
            if (err < best_err) {
                best_err = err;
                best = chain.vertices[i];
                best_frac = len > 0.0 ? acc / len : 0.0;
            }
        }
        return {best, best_frac};
    };

    ReportEntry e;
    e.mode = "triangle";
    e.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto [A, ta] = resolve(pts[i].side, pts[i].t);
            const auto [B, tb] = resolve(pts[j].side, pts[j].t);
            if (A == B) continue;
            const double actual = std::max(space.tau(A, B), space.tau(B, A));
            const PointSeparation model =
                comparison_point_distance(cfg, tri.sides, pts[i].side, ta, pts[j].side, tb);
            const double margin = model.value - actual;
            if (margin < e.margin) {
                e.margin = margin;
                e.measured = actual;
                e.comparison = model.value;
            }
        }
    }
    e.holds = e.margin >= -tol;
    return e;
}

// ---------------------------------------------------------------------------
// Alexandrov lemma, future version

AlexandrovResult verify_alexandrov_future(const FlatTriangle& tri, double x_fraction,
                                          const ModelConfig& cfg, double tol) {
    if (!(x_fraction > 0.0) || !(x_fraction < 1.0)) {
        throw NotRealisable("alexandrov: split fraction must be interior");
    }
    const Event x = flat_point_on(tri.p, tri.q, x_fraction);
    const ModelTriangle full = flat_triangle_sides(tri);
    const ModelTriangle d1{flat_tau(tri.p, x), flat_tau(x, tri.r), full.pr};       // (p, x, r)
    const ModelTriangle d2{flat_tau(x, tri.q), full.qr, flat_tau(x, tri.r)};       // (x, q, r)

    AlexandrovResult res;
    res.angle_pr = triangle_angle(cfg, d1, Vertex::Q);  // at x-bar in Delta-bar_1
    res.angle_qr = triangle_angle(cfg, d2, Vertex::P);  // at x-bar in Delta-bar_2
    res.tau_xr = flat_tau(x, tri.r);
    res.tau_tilde =
        comparison_point_distance(cfg, full, Side::PQ, x_fraction, Side::PR, 1.0).value;

    auto classify = [tol](double lhs, double rhs) {
        if (std::abs(lhs - rhs) <= tol) return AlexandrovClass::Degenerate;
        return lhs < rhs ? AlexandrovClass::Convex : AlexandrovClass::Concave;
    };
    res.by_angle = classify(res.angle_qr, res.angle_pr);
    res.by_tau = classify(res.tau_xr, res.tau_tilde);
    res.agree = res.by_angle == res.by_tau || res.by_angle == AlexandrovClass::Degenerate ||
                res.by_tau == AlexandrovClass::Degenerate;
    return res;
}

// ---------------------------------------------------------------------------
// Triangle inequality of angles

AngleInequalityResult angle_triangle_inequality_check(Event x, Event alpha, Event beta, Event gamma,
                                                      double tol) {
    if (!flat_timelike(x, alpha) && !flat_timelike(alpha, x)) {
        throw NotRealisable("angle inequality: alpha not timelike from x");
    }
    const bool alpha_future = flat_timelike(x, alpha);
    const bool gamma_future = flat_timelike(x, gamma);
    const bool beta_future = flat_timelike(x, beta);
    if (alpha_future != gamma_future || alpha_future == beta_future) {
        throw NotRealisable("angle inequality: alpha, gamma must share orientation, beta oppose");
    }
    AngleInequalityResult res;
    res.alpha_gamma = flat_angle(x, alpha, gamma);
    res.alpha_beta = flat_angle(x, alpha, beta);
    res.beta_gamma = flat_angle(x, beta, gamma);
    res.holds = res.alpha_gamma <= res.alpha_beta + res.beta_gamma + tol;
    return res;
}

}  // namespace lorlab
