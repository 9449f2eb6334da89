#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lorlab/model.hpp"
#include "lorlab/spaces.hpp"

namespace lorlab {

// ---------------------------------------------------------------------------
// Analytic backend: timelike triangles in the flat plane, where angles are
// exact (the upper angle equals the rapidity gap) and the flat space is its
// own K = 0 comparison model.

struct FlatTriangle {
    Event p, q, r;  // p << q << r
};

// Validates p << q << r; throws NotRealisable otherwise.
FlatTriangle make_flat_triangle(Event p, Event q, Event r);

ModelTriangle flat_triangle_sides(const FlatTriangle& tri);

// Exact (unsigned) hyperbolic angle between the two sides meeting the vertex.
double flat_measured_angle(const FlatTriangle& tri, Vertex v);

// ---------------------------------------------------------------------------
// Reports

struct ReportEntry {
    std::string mode;           // "angle" | "hinge" | "triangle"
    Vertex vertex = Vertex::Q;  // unused for triangle mode
    double measured = 0.0;      // measured side of the inequality
    double comparison = 0.0;    // model side of the inequality
    double margin = 0.0;        // oriented so holds <=> margin >= -tol
    bool holds = true;
    bool converged = true;      // discrete angle estimates only
};

struct ComparisonReport {
    int triangle_id = 0;
    std::vector<ReportEntry> entries;

    bool all_hold() const;
};

std::string report_json(const std::vector<ComparisonReport>& reports);
std::string report_csv(const std::vector<ComparisonReport>& reports);

// ---------------------------------------------------------------------------
// Comparison angles

// Unsigned model angle and sign at a triangle vertex.
struct SignedAngle {
    double angle = 0.0;
    int sigma = +1;
};

SignedAngle comparison_angle(const ModelConfig& cfg, const ModelTriangle& tri, Vertex v);

// ---------------------------------------------------------------------------
// Analytic checkers. The measured angle is the exact flat angle; verdicts
// compare against the model configuration cfg.

ReportEntry check_angle_condition(const FlatTriangle& tri, const ModelConfig& cfg, Vertex v,
                                  double tol = 1e-6);
ReportEntry check_hinge_condition(const FlatTriangle& tri, const ModelConfig& cfg, Vertex v,
                                  double tol = 1e-6);
ReportEntry check_triangle_condition(const FlatTriangle& tri, const ModelConfig& cfg, int samples,
                                     std::uint64_t seed, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Discrete triangles

struct TriangleInstance {
    int p = 0, q = 0, r = 0;
    RealiserChain side_pq, side_qr, side_pr;
    ModelTriangle sides;
};

// Requires p << q << r; throws NotFound otherwise.
TriangleInstance make_triangle(const DiscreteSpace& space, int p, int q, int r);

// Discrete upper-angle estimate from the k smallest admissible scale pairs
// along two emanating realiser chains. Chains start at the vertex; a chain
// is future directed or past directed as seen from the vertex.
struct AngleProbe {
    int vertex = 0;
    std::vector<int> chain1, chain2;  // vertex first
    bool future1 = true, future2 = true;
    std::vector<double> scales1, scales2;  // tau from the vertex, per used pair
    std::vector<double> angles;            // comparison angle per pair, largest scale first
    double value = 0.0;                    // smallest-scale estimate
    bool converged = false;  // successive differences below tolerance
    int excluded = 0;        // pairs dropped by the domain D (size bounds / relatedness)
};

AngleProbe measure_angle(const DiscreteSpace& space, int vertex, const std::vector<int>& chain1,
                         bool future1, const std::vector<int>& chain2, bool future2,
                         const ModelConfig& cfg, int k = 5, double converge_tol = 0.05);

// Probe along two triangle sides meeting at vertex v.
AngleProbe triangle_probe(const DiscreteSpace& space, const TriangleInstance& tri, Vertex v,
                          const ModelConfig& cfg, int k = 5);

ReportEntry check_angle_condition(const DiscreteSpace& space, const TriangleInstance& tri,
                                  const ModelConfig& cfg, Vertex v, double tol = 0.05);
ReportEntry check_hinge_condition(const DiscreteSpace& space, const TriangleInstance& tri,
                                  const ModelConfig& cfg, Vertex v, double tol = 0.05);
ReportEntry check_triangle_condition(const DiscreteSpace& space, const TriangleInstance& tri,
                                     const ModelConfig& cfg, int samples, std::uint64_t seed,
                                     double tol = 0.05);

// ---------------------------------------------------------------------------
// Alexandrov lemma, future version: split the side [p,q] at tau-fraction t,
// classify the comparison situation by the two routes of the lemma's iff and
// assert that they agree.

enum class AlexandrovClass { Convex, Concave, Degenerate };

struct AlexandrovResult {
    AlexandrovClass by_angle = AlexandrovClass::Degenerate;
    AlexandrovClass by_tau = AlexandrovClass::Degenerate;
    double angle_qr = 0.0;   // model angle at x-bar toward (q-bar, r-bar)
    double angle_pr = 0.0;   // model angle at x-bar toward (p-bar, r-bar)
    double tau_xr = 0.0;     // actual tau(x, r) = model tau(x-bar, r-bar)
    double tau_tilde = 0.0;  // tau(x-tilde, r-tilde) in the full comparison triangle
    bool agree = false;
};

AlexandrovResult verify_alexandrov_future(const FlatTriangle& tri, double x_fraction,
                                          const ModelConfig& cfg, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Triangle inequality of angles at a common vertex: alpha, gamma in one time
// direction, beta in the other. Exact flat evaluation.

struct AngleInequalityResult {
    double alpha_gamma = 0.0, alpha_beta = 0.0, beta_gamma = 0.0;
    bool holds = false;
};

AngleInequalityResult angle_triangle_inequality_check(Event x, Event alpha, Event beta, Event gamma,
                                                      double tol = 1e-9);

}  // namespace lorlab
