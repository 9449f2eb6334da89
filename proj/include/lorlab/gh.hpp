#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorlab/spaces.hpp"

namespace lorlab {

// Finite bounded Lorentzian metric space: a point set carrying only its time
// separation matrix.
struct BoundedLorentzianSpace {
    int n = 0;
    std::vector<double> tau_matrix;            // row-major
    std::vector<int> origin;                   // indices in the source space, if any
    std::optional<std::pair<int, int>> indistinct;  // pair violating point distinction

    double tau(int i, int j) const { return tau_matrix[static_cast<std::size_t>(i) * n + j]; }
};

// Restricts to J(p,q) and removes the spacelike boundary S (points timelike
// related to nothing in the diamond). Throws EmptyDiamond when no timelike
// pair remains.
BoundedLorentzianSpace diamond_to_bounded(const DiscreteSpace& space, int p, int q);

enum class GhMode { Exact, Search };

struct GhResult {
    double value = 0.0;
    bool is_upper_bound = false;  // search mode only certifies an upper bound
    // The 1/2 normalisation follows the metric Gromov-Hausdorff
    // correspondence convention; it is a choice, repeated in every report.
    static constexpr double normalisation = 0.5;
};

// GH semi-distance: 1/2 inf over correspondences of the distortion
// sup |tau_X(x,x') - tau_Y(y,y')|. Exact mode enumerates map-pair
// correspondences (throws TooLargeForExact above the cap); search mode runs
// randomized greedy matching with pair-swap local search and restarts.
GhResult gh_distance(const BoundedLorentzianSpace& X, const BoundedLorentzianSpace& Y, GhMode mode,
                     std::uint64_t seed = 0, int restarts = 32, int exact_cap = 6);

// gh report CSV: i, j, mode, value, is_upper_bound.
struct GhReportRow {
    int i = 0, j = 0;
    GhMode mode = GhMode::Exact;
    double value = 0.0;
    bool is_upper_bound = false;
};

std::string gh_csv(const std::vector<GhReportRow>& rows);

// Bounded-space JSON files: points + row-major tau.
void save_bounded(const BoundedLorentzianSpace& space, const std::string& path);
BoundedLorentzianSpace load_bounded(const std::string& path);

// Pairwise GH distances along a sequence of diamonds cut from the given
// spaces, plus a triangle-comparison pass on the final space. Observational:
// numbers are reported, no convergence is asserted.
struct StabilityReport {
    std::vector<GhReportRow> pairwise;
    int final_triangles = 0;
    int final_failures = 0;
};

StabilityReport stability_experiment(const std::vector<DiscreteSpace>& spaces, double K,
                                     std::uint64_t seed);

}  // namespace lorlab
