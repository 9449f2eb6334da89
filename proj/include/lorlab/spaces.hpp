#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorlab/flat.hpp"

namespace lorlab {

enum class RegionKind { FlatDiamond, FlatSlab, ModelPatch };

// Sampling region with an exact ambient causal structure.
//
//  - FlatDiamond: the causal diamond J(tip_past, tip_future) in the flat plane.
//  - FlatSlab: the coordinate rectangle [t0,t1] x [x0,x1] in the flat plane.
//  - ModelPatch: a patch of the constant-curvature model space with K < 0,
//    in conformal coordinates (t = future coordinate in [0, theta_max],
//    x in [-xi_max, xi_max]) where causality is the flat light cone and the
//    ambient time separation comes from the model-space closed form. The
//    patch must be small enough that every tau value stays below D_K.
struct Region {
    RegionKind kind = RegionKind::FlatDiamond;
    Event tip_past{0.0, 0.0}, tip_future{1.0, 0.0};  // FlatDiamond
    double t0 = 0.0, t1 = 1.0, x0 = 0.0, x1 = 1.0;   // FlatSlab
    double K = -1.0, theta_max = 1.0, xi_max = 1.0;  // ModelPatch

    static Region flat_diamond(Event past_tip, Event future_tip);
    static Region flat_slab(double t0, double t1, double x0, double x1);
    static Region model_patch(double K, double theta_max, double xi_max);

    bool causal(Event p, Event q) const;
    double tau(Event p, Event q) const;
};

class Rng;

// Draws exactly two uniforms per point; the point stream is prefix-stable in
// the RNG, so growing n extends the sample rather than reshuffling it.
Event sample_point(const Region& region, Rng& rng);

struct RealiserChain;

// Finite Lorentzian pre-length space: a strict partial order with
// nonnegative edge weights on every related pair and the longest-chain
// time separation matrix. Immutable after construction.
class DiscreteSpace {
public:
    struct Edge {
        int from = 0, to = 0;
        double weight = 0.0;
    };

    // Sprinkled space: points i.i.d. uniform in the region (two RNG draws per
    // point, in point order), relation and weights from the exact ambient
    // geometry, points sorted by coordinate time.
    static DiscreteSpace sprinkle(const Region& region, int n, std::uint64_t seed);

    // Hand-built space from an explicit edge list. The relation is the
    // transitive closure of the edges; a cycle is a ConsistencyError.
    static DiscreteSpace from_edges(int n, const std::vector<Edge>& edges,
                                    const std::vector<Event>* coords = nullptr);

    int size() const { return n_; }
    bool has_coords() const { return has_coords_; }
    const std::vector<Event>& coords() const { return coords_; }
    const std::optional<Region>& region() const { return region_; }
    std::optional<std::uint64_t> seed() const { return seed_; }

    // Strict causal relation p < q.
    bool related(int p, int q) const { return rel_[static_cast<std::size_t>(p) * n_ + q] != 0; }
    // Timelike relation p << q.
    bool timelike(int p, int q) const { return tau(p, q) > 0.0; }

    // Longest-chain time separation; 0 when q is not causally after p.
    double tau(int p, int q) const { return tau_[static_cast<std::size_t>(p) * n_ + q] ; }

    // Direct edge weight (ambient tau for sprinkles); 0 when not related.
    double edge_weight(int p, int q) const;

    const std::vector<int>& topological_order() const { return topo_; }
    const std::vector<Edge>& edges() const { return edges_; }

private:
    DiscreteSpace() = default;
    void finalize();  // topo sort, closure checks, longest-chain DP

    int n_ = 0;
    bool has_coords_ = false;
    std::vector<Event> coords_;
    std::optional<Region> region_;
    std::optional<std::uint64_t> seed_;
    std::vector<Edge> edges_;
    std::vector<std::uint8_t> rel_;
    std::vector<double> tau_;
    std::vector<int> topo_;
    // CSR in-edges, used by the DP and by realiser backtracking.
    std::vector<int> in_start_, in_from_;
    std::vector<double> in_weight_;
    std::vector<int> out_start_, out_to_;
    std::vector<double> out_weight_;

    friend RealiserChain realiser(const DiscreteSpace&, int, int);
    friend DiscreteSpace load_space(const std::string&, std::vector<double>*);
};

double tau_longest_chain(const DiscreteSpace& space, int p, int q);

// Causal chain whose summed edge weights attain tau(p, q).
struct RealiserChain {
    std::vector<int> vertices;
    double length = 0.0;
    bool timelike = true;  // no zero-weight edge
};

// Distance-realising chain from p to q, tie-broken to the lexicographically
// smallest vertex index sequence. Throws NoPath when p <= q fails.
RealiserChain realiser(const DiscreteSpace& space, int p, int q);

struct RegularityViolation {
    int p = 0, q = 0;            // timelike related pair
    std::vector<int> chain;      // selected realiser containing a null edge
};

// Pairs p << q whose selected realiser contains a zero-weight edge. An empty
// list certifies regularity of the selected realisers only.
std::vector<RegularityViolation> check_regularity(const DiscreteSpace& space);

struct CausalSets {
    std::vector<int> j_future, j_past;  // include the base point
    std::vector<int> i_future, i_past;
};

CausalSets causal_sets(const DiscreteSpace& space, int p);

// Causal diamond J(p,q) as a sorted index set (includes p and q).
std::vector<int> causal_diamond(const DiscreteSpace& space, int p, int q);

// JSON space files; tau is embedded for spaces up to 512 points and is
// checked against recomputation on load.
void save_space(const DiscreteSpace& space, const std::string& path,
                const std::vector<double>* time_function = nullptr);
DiscreteSpace load_space(const std::string& path, std::vector<double>* time_function = nullptr);

}  // namespace lorlab
