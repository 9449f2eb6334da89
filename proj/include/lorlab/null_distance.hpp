#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lorlab/spaces.hpp"

namespace lorlab {

// Per-point time function value, strictly increasing along the causal
// relation.
struct TimeFunctionAssignment {
    std::vector<double> values;

    double operator()(int p) const { return values[p]; }
};

// T(p) = ambient time coordinate. Validated against every edge; an edge with
// non-increasing time throws NotMonotone.
TimeFunctionAssignment coordinate_time(const DiscreteSpace& space);

// Validates an externally supplied assignment the same way.
void validate_time_function(const DiscreteSpace& space, const TimeFunctionAssignment& T);

// Null distance d_T(p, .) for all targets: shortest path over the undirected
// causal graph with weights |T difference|. Disconnected targets are
// nullopt (d_T = +inf), never a sentinel value.
std::vector<std::optional<double>> null_distance_from(const DiscreteSpace& space,
                                                      const TimeFunctionAssignment& T, int p);

std::optional<double> null_distance(const DiscreteSpace& space, const TimeFunctionAssignment& T,
                                    int p, int q);

// d_T-diameter of the causal diamond J(p,q); equals T(q) - T(p).
double diamond_diameter(const DiscreteSpace& space, const TimeFunctionAssignment& T, int p, int q);

// Connected components of the undirected causal graph; one component
// certifies piecewise-causal connectedness. Returns component id per point.
std::vector<int> check_piecewise_connectivity(const DiscreteSpace& space);

// Write-once all-pairs cache.
class NullDistanceCache {
public:
    NullDistanceCache(const DiscreteSpace& space, const TimeFunctionAssignment& T);

    std::optional<double> operator()(int p, int q) const {
        const double v = matrix_[static_cast<std::size_t>(p) * n_ + q];
        if (v < 0.0) return std::nullopt;
        return v;
    }
    int size() const { return n_; }

private:
    int n_;
    std::vector<double> matrix_;  // -1 encodes unreachable, internal only
};

// CSV: header row of point ids, then row-major d_T values, "inf" when
// unreachable.
std::string null_distance_csv(const DiscreteSpace& space, const TimeFunctionAssignment& T);

}  // namespace lorlab
