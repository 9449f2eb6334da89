#pragma once

#include <limits>
#include <utility>

namespace lorlab {

// Constant-curvature two-dimensional Lorentzian model space, described
// entirely through its side-length trigonometry. No coordinate chart is
// used for K != 0.
struct ModelConfig {
    double K = 0.0;         // curvature
    double scale = 0.0;     // sqrt(|K|); 0 iff K == 0
    double diameter = std::numeric_limits<double>::infinity();  // finite diameter D_K

    bool flat() const { return K == 0.0; }
};

ModelConfig make_model(double K);

/// Finite diameter of the model space: +inf for K >= 0, pi/sqrt(-K) for K < 0.
double finite_diameter(double K);

/// Side lengths around one triangle vertex: a and b are adjacent to the
// vertex (both timelike, > 0), c is the opposite side (>= 0).
struct TriangleSides {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Two timelike sides of lengths a, b meeting at a vertex with unsigned
// hyperbolic angle omega. sigma is +1 when the vertex is causally in the
// middle of the configuration, -1 when it is a time-endpoint.
struct Hinge {
    double a = 0.0;
    double b = 0.0;
    double omega = 0.0;
    int sigma = +1;
};

// Unsigned hyperbolic angle solving the law of cosines for the regime of
// cfg. Throws SizeBoundViolation when a side reaches D_K, NotRealisable
// when no comparison configuration with these sides exists.
double angle_from_sides(const ModelConfig& cfg, const TriangleSides& sides, int sigma);

// The unique opposite side length c >= 0 with
// angle_from_sides(cfg, {a,b,c}, sigma) == omega. For K < 0 the branch with
// s*c in [0, pi) is taken; an argument at or past the boundary throws
// SizeBoundViolation. A sigma = -1 hinge too wide to close up throws
// NotRealisable (the model endpoints would not be causally related).
double side_from_hinge(const ModelConfig& cfg, const Hinge& hinge);

// Side lengths of a full model triangle with vertices P << Q << R.
struct ModelTriangle {
    double pq = 0.0;  // tau(P,Q)
    double qr = 0.0;  // tau(Q,R)
    double pr = 0.0;  // tau(P,R)
};

enum class Side { PQ, QR, PR };
enum class Vertex { P, Q, R };

// Sign convention of the comparison angle: +1 at the middle vertex Q,
// -1 at the time-endpoints P and R.
inline int vertex_sigma(Vertex v) { return v == Vertex::Q ? +1 : -1; }

// Unsigned hyperbolic angle of the model triangle at the given vertex.
double triangle_angle(const ModelConfig& cfg, const ModelTriangle& tri, Vertex v);

// Validates the realisability of a triple of side lengths: a,b > 0,
// reverse triangle inequality pr >= pq + qr within tol, pr < D_K.
void validate_triangle(const ModelConfig& cfg, const ModelTriangle& tri, double tol = 1e-9);

// Model time separation between the point at tau-fraction t1 along side1
// and the point at tau-fraction t2 along side2 (fractions measured from
// each side's past endpoint). value is 0 with causal=false when the two
// comparison points are not causally related.
struct PointSeparation {
    double value = 0.0;
    bool causal = true;
};

PointSeparation comparison_point_distance(const ModelConfig& cfg, const ModelTriangle& tri,
                                          Side side1, double t1, Side side2, double t2);

}  // namespace lorlab
