#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorlab/comparison.hpp"
#include "lorlab/null_distance.hpp"

namespace lorlab {

// ---------------------------------------------------------------------------
// Lebesgue number for covers of causal diamonds by timelike diamonds

struct DiamondCover {
    int x = 0, y = 0;                           // ambient diamond J(x, y)
    std::vector<std::pair<int, int>> elements;  // timelike diamonds I(a_i, b_i)
};

struct LebesgueResult {
    double epsilon = 0.0;
    bool unconstrained = false;  // a single element already covers J(x, y)
};

// epsilon = min over p in J(x,y) of max over i of d_T(p, C_i n (J+(p) u J-(p))),
// where C_i = J(x,y) \ I(a_i, b_i). Throws CoverInvalid if some point of
// J(x,y) lies in no element.
LebesgueResult lebesgue_number(const DiscreteSpace& space, const TimeFunctionAssignment& T,
                               const DiamondCover& cover);

// Greedy cover of J(x,y) by timelike diamonds of d_T-diameter at most
// target_diameter (the ambient pair (x,y) is used as a fallback element when
// some point fits in no smaller diamond).
DiamondCover generate_cover(const DiscreteSpace& space, const TimeFunctionAssignment& T, int x,
                            int y, double target_diameter);

// ---------------------------------------------------------------------------
// Gluing lemma subdivision (analytic flat backend)

struct GluingVerdicts {
    ReportEntry parent_at_p;   // angle condition at p in the parent triangle
    ReportEntry at_x_in_pxr;   // at x (middle vertex) in the sub-triangle (p,x,r)
    ReportEntry at_p_in_pxr;   // at p in (p,x,r)
    ReportEntry at_x_in_xqr;   // at x (past endpoint) in (x,q,r)
    bool some_sub_fails = false;
};

// Splits [p,q] at tau-fraction x_fraction in (0,1); degenerate splits throw
// NotRealisable.
GluingVerdicts gluing_subdivide(const FlatTriangle& tri, double x_fraction, const ModelConfig& cfg,
                                double tol = 1e-9);

// ---------------------------------------------------------------------------
// Localisation of a sigma = +1 failure (analytic flat backend)

struct PositiveFailureStep {
    FlatTriangle triangle;  // current (p_n, q_n, r)
    Vertex checked = Vertex::P;
    bool failed = false;
};

struct PositiveFailureTrace {
    bool found = false;
    FlatTriangle witness;  // triangle whose middle vertex fails, when found
    std::vector<PositiveFailureStep> steps;
    bool used_long_side_split = false;
};

// Follows the proof: bisect [p_n, q_n] at the d_T-midpoint; when the
// bisection stalls, split the long side through the boundary of J+(q_n).
// Requires a failing angle condition at some vertex of tri for cfg.
PositiveFailureTrace locate_positive_failure(const FlatTriangle& tri, const ModelConfig& cfg,
                                             double eps, int max_steps = 64, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Cat's cradle

struct CatsCradleTrace {
    double eps = 0.0;
    double L = 0.0;  // d_T(p, r)
    bool swapped = false;  // p and r interchanged so that d_T(p,q) >= d_T(q,r)
    double tau_pr = 0.0;
    std::vector<Event> points;        // q_0 .. q_N (analytic runs)
    std::vector<int> point_indices;   // q_0 .. q_N (discrete runs)
    std::vector<double> l;            // l_n = tau(p,q_n) + tau(q_n,r)
    std::vector<double> model_pr;     // tau(p-bar_n, r-bar_n)
    std::vector<double> theta;        // measured angle at q_{n-1}, n >= 1
    std::vector<double> phi;          // measured angle at q_n in Delta_n
    std::vector<double> theta_bar;    // model angle at q-bar_{n-1} in Delta-bar_n
    std::vector<double> phi_bar;      // model angle at q-bar_n in Delta-bar_n
    std::vector<double> omega_bar;    // hinge angles; omega_bar[n] pairs with model_pr[n]
    std::string termination;          // "converged" | "max_steps" | "degenerate"
    int steps = 0;
};

constexpr double kCradleEpsFloor = 1e-3;

CatsCradleTrace cats_cradle(const FlatTriangle& tri, const ModelConfig& cfg, double eps,
                            int max_steps = 200, double excess_tol = 1e-9);

CatsCradleTrace cats_cradle(const DiscreteSpace& space, const TimeFunctionAssignment& T,
                            const TriangleInstance& tri, const ModelConfig& cfg, double eps,
                            int max_steps = 200, double excess_tol = 1e-4);

// Two-column TSV (step, value) for plot-ready output.
std::string trace_series_tsv(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Global bound scan (analytic flat backend)

// Samples timelike triangles inside the region, stratified by tau(p,r)
// deciles so large triangles are not starved, and runs the angle condition
// at every vertex. Returns one report per triangle; failures are the
// entries with holds == false.
std::vector<ComparisonReport> scan_global_bound(const Region& region, const ModelConfig& cfg,
                                                int triangles, std::uint64_t seed,
                                                double tol = 1e-6);

// ---------------------------------------------------------------------------
// Bonnet-Myers diameter check

struct BonnetMyersResult {
    double bound = 0.0;  // pi / sqrt(-K)
    std::vector<int> sizes;
    std::vector<double> diameters;  // max tau per sampled size
    bool within_bound = false;      // every diameter <= bound + tol
    bool monotone = false;          // diameters nondecreasing across sizes
};

// Sprinkles the model patch at each size with the same seed (prefix-stable
// point stream), so the sampled diameter can only grow with n.
BonnetMyersResult bonnet_myers_check(const Region& patch, const ModelConfig& cfg,
                                     const std::vector<int>& sizes, std::uint64_t seed,
                                     double tol = 1e-6);

}  // namespace lorlab
