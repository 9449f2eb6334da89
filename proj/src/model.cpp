#include "lorlab/model.hpp"

#include <algorithm>
#include <cmath>

#include "lorlab/errors.hpp"

namespace lorlab {

namespace {

constexpr double kCoshSlack = 1e-9;

// cosh(omega) must be >= 1; values within a small window below it are
// degenerate configurations at numerical noise and are clamped.
double acosh_clamped(double x, const char* who) {
    const double slack = kCoshSlack * std::max(1.0, std::abs(x));
    if (x < 1.0 - slack) {
        throw NotRealisable(std::string(who) + ": implied cosh(omega) = " + std::to_string(x) +
                            " < 1, no comparison configuration exists");
    }
    return x <= 1.0 ? 0.0 : std::acosh(x);
}

}  // namespace

double finite_diameter(double K) {
    if (K >= 0.0) return std::numeric_limits<double>::infinity();
    return M_PI / std::sqrt(-K);
}

ModelConfig make_model(double K) {
    ModelConfig cfg;
    cfg.K = K;
    cfg.scale = std::sqrt(std::abs(K));
    cfg.diameter = finite_diameter(K);
    return cfg;
}

double angle_from_sides(const ModelConfig& cfg, const TriangleSides& sides, int sigma) {
    const double a = sides.a, b = sides.b, c = sides.c;
    if (!(a > 0.0) || !(b > 0.0)) {
        throw NotRealisable("angle_from_sides: sides adjacent to the vertex must be timelike (a,b > 0)");
    }
    if (c < 0.0) throw NotRealisable("angle_from_sides: c < 0");
    if (sigma != +1 && sigma != -1) throw Error("angle_from_sides: sigma must be +1 or -1");
    const double longest = std::max({a, b, c});
    if (longest >= cfg.diameter) {
        throw SizeBoundViolation("angle_from_sides: longest side " + std::to_string(longest) +
                                 " >= D_K = " + std::to_string(cfg.diameter));
    }
    const double s = cfg.scale;
    double cosh_omega;
    if (cfg.K == 0.0) {
        cosh_omega = (c * c - a * a - b * b) / (2.0 * a * b * sigma);
    } else if (cfg.K < 0.0) {
        cosh_omega =
            (std::cos(s * a) * std::cos(s * b) - std::cos(s * c)) / (sigma * std::sin(s * a) * std::sin(s * b));
    } else {
        cosh_omega = (std::cosh(s * c) - std::cosh(s * a) * std::cosh(s * b)) /
                     (sigma * std::sinh(s * a) * std::sinh(s * b));
    }
    return acosh_clamped(cosh_omega, "angle_from_sides");
}

double side_from_hinge(const ModelConfig& cfg, const Hinge& hinge) {
    const double a = hinge.a, b = hinge.b;
    if (!(a > 0.0) || !(b > 0.0)) throw NotRealisable("side_from_hinge: hinge sides must be positive");
    if (hinge.omega < 0.0) throw Error("side_from_hinge: omega must be nonnegative");
    if (hinge.sigma != +1 && hinge.sigma != -1) throw Error("side_from_hinge: sigma must be +1 or -1");
    if (std::max(a, b) >= cfg.diameter) {
        throw SizeBoundViolation("side_from_hinge: hinge side >= D_K");
    }
    const double s = cfg.scale;
    const double ch = std::cosh(hinge.omega);
    if (cfg.K == 0.0) {
        const double c2 = a * a + b * b + 2.0 * a * b * hinge.sigma * ch;
        if (c2 < 0.0) {
            if (c2 > -kCoshSlack * a * b) return 0.0;
            throw NotRealisable("side_from_hinge: hinge endpoints not causally related (c^2 < 0)");
        }
        return std::sqrt(c2);
    }
    if (cfg.K < 0.0) {
        const double arg = std::cos(s * a) * std::cos(s * b) - hinge.sigma * ch * std::sin(s * a) * std::sin(s * b);
        if (arg <= -1.0) {
            throw SizeBoundViolation("side_from_hinge: no admissible c below D_K (cos(s c) <= -1)");
        }
        if (arg > 1.0) {
            if (arg < 1.0 + kCoshSlack) return 0.0;
            throw NotRealisable("side_from_hinge: hinge endpoints not causally related (cos(s c) > 1)");
        }
        return std::acos(arg) / s;
    }
    const double arg = std::cosh(s * a) * std::cosh(s * b) + hinge.sigma * ch * std::sinh(s * a) * std::sinh(s * b);
    if (arg < 1.0) {
        if (arg > 1.0 - kCoshSlack) return 0.0;
        throw NotRealisable("side_from_hinge: hinge endpoints not causally related (cosh(s c) < 1)");
    }
    return std::acosh(arg) / s;
}

void validate_triangle(const ModelConfig& cfg, const ModelTriangle& tri, double tol) {
    if (!(tri.pq > 0.0) || !(tri.qr > 0.0) || !(tri.pr > 0.0)) {
        throw NotRealisable("triangle: need pq, qr, pr > 0");
    }
    if (tri.pr >= cfg.diameter) {
        throw SizeBoundViolation("triangle: tau(p,r) = " + std::to_string(tri.pr) +
                                 " >= D_K = " + std::to_string(cfg.diameter));
    }
    // Reverse triangle inequality of the causal configuration.
    if (tri.pr + tol * std::max(1.0, tri.pr) < tri.pq + tri.qr) {
        throw NotRealisable("triangle: reverse triangle inequality violated, tau(p,r) < tau(p,q) + tau(q,r)");
    }
}

double triangle_angle(const ModelConfig& cfg, const ModelTriangle& tri, Vertex v) {
    switch (v) {
        case Vertex::P:
            return angle_from_sides(cfg, {tri.pq, tri.pr, tri.qr}, -1);
        case Vertex::Q:
            return angle_from_sides(cfg, {tri.pq, tri.qr, tri.pr}, +1);
        case Vertex::R:
            return angle_from_sides(cfg, {tri.qr, tri.pr, tri.pq}, -1);
    }
    throw Error("triangle_angle: bad vertex");
}

namespace {

double side_length(const ModelTriangle& tri, Side s) {
    switch (s) {
        case Side::PQ: return tri.pq;
        case Side::QR: return tri.qr;
        case Side::PR: return tri.pr;
    }
    throw Error("side_length: bad side");
}

// Distance of the point at fraction t along side s from the given vertex,
// when that vertex is an endpoint of s. Fractions run from the past endpoint.
double distance_from_vertex(const ModelTriangle& tri, Side s, double t, Vertex v) {
    const double len = side_length(tri, s);
    switch (s) {
        case Side::PQ: return v == Vertex::P ? t * len : (1.0 - t) * len;
        case Side::QR: return v == Vertex::Q ? t * len : (1.0 - t) * len;
        case Side::PR: return v == Vertex::P ? t * len : (1.0 - t) * len;
    }
    throw Error("distance_from_vertex: bad side");
}

Vertex shared_vertex(Side s1, Side s2) {
    const bool pq = (s1 == Side::PQ) || (s2 == Side::PQ);
    const bool qr = (s1 == Side::QR) || (s2 == Side::QR);
    if (pq && qr) return Vertex::Q;
    if (pq) return Vertex::P;  // PQ and PR
    return Vertex::R;          // QR and PR
}

}  // namespace

PointSeparation comparison_point_distance(const ModelConfig& cfg, const ModelTriangle& tri,
                                          Side side1, double t1, Side side2, double t2) {
    validate_triangle(cfg, tri);
    if (t1 < 0.0 || t1 > 1.0 || t2 < 0.0 || t2 > 1.0) {
        throw Error("comparison_point_distance: fractions must lie in [0,1]");
    }
    if (side1 == side2) {
        // Both points on a common realiser.
        return {std::abs(t1 - t2) * side_length(tri, side1), true};
    }
    const Vertex v = shared_vertex(side1, side2);
    const double d1 = distance_from_vertex(tri, side1, t1, v);
    const double d2 = distance_from_vertex(tri, side2, t2, v);
    if (d1 == 0.0) return {d2, true};
    if (d2 == 0.0) return {d1, true};
    const double omega = triangle_angle(cfg, tri, v);
    // Sigma of the shared vertex within the two-point sub-configuration: it is
    // causally in the middle only when the shared vertex is Q.
    const int sigma = vertex_sigma(v);
    try {
        return {side_from_hinge(cfg, {d1, d2, omega, sigma}), true};
    } catch (const NotRealisable&) {
        // tau convention: non-causally-related comparison points have value 0.
        return {0.0, false};
    }
}

}  // namespace lorlab
