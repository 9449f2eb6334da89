#include "lorlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"

#include "lorlab/errors.hpp"
#include "lorlab/rng.hpp"

namespace lorlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Region

Region Region::flat_diamond(Event past_tip, Event future_tip) {
    if (!flat_timelike(past_tip, future_tip)) {
        throw NotRealisable("flat_diamond: tips must be timelike related");
    }
    Region r;
    r.kind = RegionKind::FlatDiamond;
    r.tip_past = past_tip;
    r.tip_future = future_tip;
    return r;
}

Region Region::flat_slab(double t0, double t1, double x0, double x1) {
    if (!(t1 > t0) || !(x1 > x0)) throw Error("flat_slab: degenerate extent");
    Region r;
    r.kind = RegionKind::FlatSlab;
    r.t0 = t0; r.t1 = t1; r.x0 = x0; r.x1 = x1;
    return r;
}

Region Region::model_patch(double K, double theta_max, double xi_max) {
    if (!(K < 0.0)) throw NotRealisable("model_patch: requires K < 0");
    if (!(theta_max > 0.0) || theta_max >= M_PI) {
        throw SizeBoundViolation("model_patch: theta_max must lie in (0, pi) to respect D_K");
    }
    if (!(xi_max > 0.0) || xi_max >= M_PI / 2.0) {
        throw SizeBoundViolation("model_patch: xi_max must lie in (0, pi/2)");
    }
    Region r;
    r.kind = RegionKind::ModelPatch;
    r.K = K; r.theta_max = theta_max; r.xi_max = xi_max;
    return r;
}

bool Region::causal(Event p, Event q) const {
    // All three charts are conformally flat: causality is the flat cone.
    return flat_causal(p, q);
}

double Region::tau(Event p, Event q) const {
    switch (kind) {
        case RegionKind::FlatDiamond:
        case RegionKind::FlatSlab:
            return flat_tau(p, q);
        case RegionKind::ModelPatch: {
            if (!flat_causal(p, q)) return 0.0;
            // cos(s tau) = sec(xi_p) sec(xi_q) cos(dtheta) - tan(xi_p) tan(xi_q)
            // in the conformal chart of the K < 0 model space.
            const double arg =
                (std::cos(q.t - p.t) - std::sin(p.x) * std::sin(q.x)) / (std::cos(p.x) * std::cos(q.x));
            if (arg < -1.0) {
                throw SizeBoundViolation("model_patch: pair separation reaches D_K; shrink the patch");
            }
            const double s = std::sqrt(-K);
            return std::acos(std::min(arg, 1.0)) / s;
        }
    }
    throw Error("Region::tau: bad kind");
}

Event sample_point(const Region& region, Rng& rng) {
    // Exactly two draws per point; the mapping per region kind is fixed.
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    switch (region.kind) {
        case RegionKind::FlatDiamond: {
            // Light-cone coordinates turn the diamond into a rectangle.
            const double up = region.tip_past.t - region.tip_past.x;
            const double vp = region.tip_past.t + region.tip_past.x;
            const double uq = region.tip_future.t - region.tip_future.x;
            const double vq = region.tip_future.t + region.tip_future.x;
            const double u = up + u1 * (uq - up);
            const double v = vp + u2 * (vq - vp);
            return {(u + v) / 2.0, (v - u) / 2.0};
        }
        case RegionKind::FlatSlab:
            return {region.t0 + u1 * (region.t1 - region.t0), region.x0 + u2 * (region.x1 - region.x0)};
        case RegionKind::ModelPatch: {
            // Volume density is sec^2(xi) d theta d xi; invert the xi CDF.
            const double theta = u1 * region.theta_max;
            const double xi = std::atan((2.0 * u2 - 1.0) * std::tan(region.xi_max));
            return {theta, xi};
        }
    }
    throw Error("sample_point: bad region kind");
}

// ---------------------------------------------------------------------------
// DiscreteSpace construction

void DiscreteSpace::finalize() {
    const std::size_t n = static_cast<std::size_t>(n_);
    // Adjacency (out edges), sorted by target for deterministic tie-breaking.
    std::vector<std::vector<std::pair<int, double>>> out(n), in(n);
    for (const Edge& e : edges_) {
        if (e.from < 0 || e.from >= n_ || e.to < 0 || e.to >= n_ || e.from == e.to) {
            throw ConsistencyError("edge endpoints out of range or self loop");
        }
        if (e.weight < 0.0) throw ConsistencyError("negative edge weight");
        out[e.from].emplace_back(e.to, e.weight);
        in[e.to].emplace_back(e.from, e.weight);
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    for (auto& v : in) std::sort(v.begin(), v.end());

    // Kahn topological sort; smallest index first for determinism.
    std::vector<int> indeg(n, 0);
    for (const Edge& e : edges_) ++indeg[e.to];
    std::vector<int> ready;
    for (int i = 0; i < n_; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::make_heap(ready.begin(), ready.end(), std::greater<>());
    topo_.clear();
    topo_.reserve(n);
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), std::greater<>());
        const int u = ready.back();
        ready.pop_back();
        topo_.push_back(u);
        for (const auto& [v, w] : out[u]) {
            if (--indeg[v] == 0) {
                ready.push_back(v);
                std::push_heap(ready.begin(), ready.end(), std::greater<>());
            }
        }
    }
    if (static_cast<int>(topo_.size()) != n_) {
        throw ConsistencyError("causal relation contains a cycle");
    }

    // Reachability (transitive closure) via bitsets in reverse topo order.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> reach(n * words, 0);
    for (std::size_t pos = n; pos-- > 0;) {
        const int u = topo_[pos];
        std::uint64_t* ru = reach.data() + static_cast<std::size_t>(u) * words;
        for (const auto& [v, w] : out[u]) {
            ru[static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (v % 64);
            const std::uint64_t* rv = reach.data() + static_cast<std::size_t>(v) * words;
            for (std::size_t k = 0; k < words; ++k) ru[k] |= rv[k];
        }
    }
    rel_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t* ri = reach.data() + i * words;
        for (std::size_t j = 0; j < n; ++j) {
            rel_[i * n + j] = (ri[j / 64] >> (j % 64)) & 1;
        }
    }

    // CSR adjacency.
    auto pack = [&](const std::vector<std::vector<std::pair<int, double>>>& adj, std::vector<int>& start,
                    std::vector<int>& node, std::vector<double>& weight) {
        start.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) start[i + 1] = start[i] + static_cast<int>(adj[i].size());
        node.resize(edges_.size());
        weight.resize(edges_.size());
        for (std::size_t i = 0; i < n; ++i) {
            int k = start[i];
            for (const auto& [v, w] : adj[i]) {
                node[k] = v;
                weight[k] = w;
                ++k;
            }
        }
    };
    pack(in, in_start_, in_from_, in_weight_);
    pack(out, out_start_, out_to_, out_weight_);

    // Longest-chain DP: one pass in topological order per source.
    constexpr double kUnset = -1.0;
    tau_.assign(n * n, 0.0);
    std::vector<int> topo_pos(n);
    for (std::size_t pos = 0; pos < n; ++pos) topo_pos[topo_[pos]] = static_cast<int>(pos);
    std::vector<double> best(n);
    for (int i = 0; i < n_; ++i) {
        std::fill(best.begin(), best.end(), kUnset);
        best[i] = 0.0;
        const std::uint8_t* reli = rel_.data() + static_cast<std::size_t>(i) * n;
        for (std::size_t pos = topo_pos[i] + 1; pos < n; ++pos) {
            const int j = topo_[pos];
            if (!reli[j]) continue;
            double m = kUnset;
            for (int e = in_start_[j]; e < in_start_[j + 1]; ++e) {
                const double bk = best[in_from_[e]];
                if (bk >= 0.0 && bk + in_weight_[e] > m) m = bk + in_weight_[e];
            }
            best[j] = m;
            tau_[static_cast<std::size_t>(i) * n + j] = m;
        }
    }
}

DiscreteSpace DiscreteSpace::sprinkle(const Region& region, int n, std::uint64_t seed) {
    if (n < 2) throw Error("sprinkle: need n >= 2");
    Rng rng(seed);
    DiscreteSpace s;
    s.n_ = n;
    s.region_ = region;
    s.seed_ = seed;
    s.has_coords_ = true;
    s.coords_.resize(n);
    for (int i = 0; i < n; ++i) s.coords_[i] = sample_point(region, rng);
    std::sort(s.coords_.begin(), s.coords_.end(), [](const Event& a, const Event& b) {
        return a.t != b.t ? a.t < b.t : a.x < b.x;
    });
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            // Sorted by time, so only i -> j is possible.
            if (region.causal(s.coords_[i], s.coords_[j])) {
                s.edges_.push_back({i, j, region.tau(s.coords_[i], s.coords_[j])});
            }
        }
    }
    s.finalize();
    return s;
}

DiscreteSpace DiscreteSpace::from_edges(int n, const std::vector<Edge>& edges,
                                        const std::vector<Event>* coords) {
    if (n < 1) throw Error("from_edges: need n >= 1");
    DiscreteSpace s;
    s.n_ = n;
    s.edges_ = edges;
    if (coords) {
        if (static_cast<int>(coords->size()) != n) throw Error("from_edges: coords size mismatch");
        s.coords_ = *coords;
        s.has_coords_ = true;
    }
    s.finalize();
    return s;
}

double DiscreteSpace::edge_weight(int p, int q) const {
    for (int e = out_start_[p]; e < out_start_[p + 1]; ++e) {
        if (out_to_[e] == q) return out_weight_[e];
    }
    return 0.0;
}

double tau_longest_chain(const DiscreteSpace& space, int p, int q) { return space.tau(p, q); }

// ---------------------------------------------------------------------------
// Realisers

RealiserChain realiser(const DiscreteSpace& space, int p, int q) {
    if (p == q) return {{p}, 0.0, true};
    if (!space.related(p, q)) throw NoPath("realiser: q is not in the causal future of p");
    const int n = space.size();
    // Longest chain value from each vertex to q, by one backward DP pass.
    constexpr double kUnset = -1.0;
    std::vector<double> best_to(n, kUnset);
    best_to[q] = 0.0;
    const auto& topo = space.topological_order();
    for (std::size_t pos = topo.size(); pos-- > 0;) {
        const int k = topo[pos];
        if (k == q || !(k == p || space.related(p, k)) || !space.related(k, q)) continue;
        double m = kUnset;
        for (int e = space.out_start_[k]; e < space.out_start_[k + 1]; ++e) {
            const double bm = best_to[space.out_to_[e]];
            if (bm >= 0.0 && bm + space.out_weight_[e] > m) m = bm + space.out_weight_[e];
        }
        best_to[k] = m;
    }
    // Greedy forward walk picking the smallest-index optimal successor gives
    // the lexicographically smallest vertex sequence among optimal chains.
    RealiserChain chain;
    chain.vertices.push_back(p);
    int cur = p;
    while (cur != q) {
        int next = -1;
        double w_next = 0.0;
        for (int e = space.out_start_[cur]; e < space.out_start_[cur + 1]; ++e) {
            const int m = space.out_to_[e];
            if (best_to[m] >= 0.0 && best_to[m] + space.out_weight_[e] == best_to[cur]) {
                next = m;
                w_next = space.out_weight_[e];
                break;  // out edges are sorted by target index
            }
        }
        if (next < 0) throw Error("realiser: backtracking failed");
        chain.vertices.push_back(next);
        chain.length += w_next;
        if (w_next == 0.0) chain.timelike = false;
        cur = next;
    }
    return chain;
}

std::vector<RegularityViolation> check_regularity(const DiscreteSpace& space) {
    std::vector<RegularityViolation> out;
    const int n = space.size();
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (!space.timelike(p, q)) continue;
            RealiserChain chain = realiser(space, p, q);
            if (!chain.timelike) out.push_back({p, q, chain.vertices});
        }
    }
    return out;
}

CausalSets causal_sets(const DiscreteSpace& space, int p) {
    CausalSets cs;
    for (int q = 0; q < space.size(); ++q) {
        if (q == p || space.related(p, q)) cs.j_future.push_back(q);
        if (q == p || space.related(q, p)) cs.j_past.push_back(q);
        if (space.timelike(p, q)) cs.i_future.push_back(q);
        if (space.timelike(q, p)) cs.i_past.push_back(q);
    }
    return cs;
}

std::vector<int> causal_diamond(const DiscreteSpace& space, int p, int q) {
    std::vector<int> out;
    for (int m = 0; m < space.size(); ++m) {
        const bool after_p = (m == p) || space.related(p, m);
        const bool before_q = (m == q) || space.related(m, q);
        if (after_p && before_q) out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

json region_to_json(const Region& r) {
    json j;
    switch (r.kind) {
        case RegionKind::FlatDiamond:
            j["kind"] = "flat-diamond";
            j["tip_past"] = {r.tip_past.t, r.tip_past.x};
            j["tip_future"] = {r.tip_future.t, r.tip_future.x};
            break;
        case RegionKind::FlatSlab:
            j["kind"] = "flat-slab";
            j["t"] = {r.t0, r.t1};
            j["x"] = {r.x0, r.x1};
            break;
        case RegionKind::ModelPatch:
            j["kind"] = "model-K-patch";
            j["K"] = r.K;
            j["theta_max"] = r.theta_max;
            j["xi_max"] = r.xi_max;
            break;
    }
    return j;
}

Region region_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "flat-diamond") {
        return Region::flat_diamond({j.at("tip_past")[0], j.at("tip_past")[1]},
                                    {j.at("tip_future")[0], j.at("tip_future")[1]});
    }
    if (kind == "flat-slab") {
        return Region::flat_slab(j.at("t")[0], j.at("t")[1], j.at("x")[0], j.at("x")[1]);
    }
    if (kind == "model-K-patch") {
        return Region::model_patch(j.at("K").get<double>(), j.at("theta_max").get<double>(),
                                   j.at("xi_max").get<double>());
    }
    throw ParseError("unknown region kind: " + kind);
}

constexpr int kTauEmbedLimit = 512;

}  // namespace

void save_space(const DiscreteSpace& space, const std::string& path,
                const std::vector<double>* time_function) {
    json j;
    j["version"] = 1;
    if (space.region()) j["region"] = region_to_json(*space.region());
    if (space.seed()) j["seed"] = *space.seed();
    json points = json::array();
    for (int i = 0; i < space.size(); ++i) {
        json p;
        p["id"] = i;
        if (space.has_coords()) p["coords"] = {space.coords()[i].t, space.coords()[i].x};
        points.push_back(std::move(p));
    }
    j["points"] = std::move(points);
    json edges = json::array();
    for (const auto& e : space.edges()) edges.push_back({e.from, e.to, e.weight});
    j["edges"] = std::move(edges);
    if (space.size() <= kTauEmbedLimit) {
        std::vector<double> tau;
        tau.reserve(static_cast<std::size_t>(space.size()) * space.size());
        for (int p = 0; p < space.size(); ++p)
            for (int q = 0; q < space.size(); ++q) tau.push_back(space.tau(p, q));
        j["tau"] = std::move(tau);
    }
    if (time_function) {
        if (static_cast<int>(time_function->size()) != space.size()) {
            throw Error("save_space: time function size mismatch");
        }
        j["time_function"] = *time_function;
    }
    std::ofstream out(path);
    if (!out) throw Error("save_space: cannot open " + path);
    out << j.dump(1) << "\n";
}

DiscreteSpace load_space(const std::string& path, std::vector<double>* time_function) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_space: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("load_space: invalid JSON: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1) throw ParseError("load_space: unsupported version");
        const auto& points = j.at("points");
        const int n = static_cast<int>(points.size());
        std::vector<Event> coords;
        bool has_coords = !points.empty() && points[0].contains("coords");
        for (int i = 0; i < n; ++i) {
            if (points[i].at("id").get<int>() != i) throw ParseError("load_space: point ids must be 0..n-1");
            if (has_coords) coords.push_back({points[i].at("coords")[0], points[i].at("coords")[1]});
        }
        std::vector<DiscreteSpace::Edge> edges;
        for (const auto& e : j.at("edges")) edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
        DiscreteSpace space = DiscreteSpace::from_edges(n, edges, has_coords ? &coords : nullptr);
        if (j.contains("region")) space.region_ = region_from_json(j["region"]);
        if (j.contains("seed")) space.seed_ = j["seed"].get<std::uint64_t>();
        if (j.contains("tau")) {
            const auto& tau = j["tau"];
            if (static_cast<int>(tau.size()) != n * n) throw ConsistencyError("load_space: tau matrix size mismatch");
            for (int p = 0; p < n; ++p) {
                for (int q = 0; q < n; ++q) {
                    const double stored = tau[static_cast<std::size_t>(p) * n + q].get<double>();
                    if (std::abs(stored - space.tau(p, q)) > 1e-9) {
                        throw ConsistencyError("load_space: stored tau disagrees with recomputation");
                    }
                }
            }
        }
        if (time_function) {
            time_function->clear();
            if (j.contains("time_function")) {
                for (const auto& v : j["time_function"]) time_function->push_back(v.get<double>());
            }
        }
        return space;
    } catch (const json::exception& e) {
        throw ParseError(std::string("load_space: malformed document: ") + e.what());
    }
}

}  // namespace lorlab
