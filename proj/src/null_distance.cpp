#include "lorlab/null_distance.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "lorlab/errors.hpp"

namespace lorlab {

TimeFunctionAssignment coordinate_time(const DiscreteSpace& space) {
    if (!space.has_coords()) throw Error("coordinate_time: space has no coordinates");
    TimeFunctionAssignment T;
    T.values.reserve(space.size());
    for (const Event& e : space.coords()) T.values.push_back(e.t);
    validate_time_function(space, T);
    return T;
}

void validate_time_function(const DiscreteSpace& space, const TimeFunctionAssignment& T) {
    if (static_cast<int>(T.values.size()) != space.size()) {
        throw Error("time function size mismatch");
    }
    for (const auto& e : space.edges()) {
        if (!(T.values[e.to] > T.values[e.from])) {
            throw NotMonotone("time function not strictly increasing along edge " +
                              std::to_string(e.from) + " -> " + std::to_string(e.to));
        }
    }
}

namespace {

// Undirected adjacency over causal edges, weight |T difference|.
std::vector<std::vector<std::pair<int, double>>> undirected_graph(
    const DiscreteSpace& space, const TimeFunctionAssignment& T) {
    std::vector<std::vector<std::pair<int, double>>> adj(space.size());
    for (const auto& e : space.edges()) {
        const double w = std::abs(T.values[e.to] - T.values[e.from]);
        adj[e.from].emplace_back(e.to, w);
        adj[e.to].emplace_back(e.from, w);
    }
    return adj;
}

std::vector<std::optional<double>> dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adj, int source) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::optional<double>> dist(n);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > *dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
            if (!dist[v] || d + w < *dist[v]) {
                dist[v] = d + w;
                heap.push({d + w, v});
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<std::optional<double>> null_distance_from(const DiscreteSpace& space,
                                                      const TimeFunctionAssignment& T, int p) {
    return dijkstra(undirected_graph(space, T), p);
}

std::optional<double> null_distance(const DiscreteSpace& space, const TimeFunctionAssignment& T,
                                    int p, int q) {
    return null_distance_from(space, T, p)[q];
}

double diamond_diameter(const DiscreteSpace& space, const TimeFunctionAssignment& T, int p, int q) {
    if (p != q && !space.related(p, q)) throw NoPath("diamond_diameter: p <= q required");
    return T.values[q] - T.values[p];
}

std::vector<int> check_piecewise_connectivity(const DiscreteSpace& space) {
    const int n = space.size();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : space.edges()) {
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adj[u]) {
                if (comp[v] < 0) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

NullDistanceCache::NullDistanceCache(const DiscreteSpace& space, const TimeFunctionAssignment& T)
    : n_(space.size()) {
    matrix_.resize(static_cast<std::size_t>(n_) * n_);
    const auto adj = undirected_graph(space, T);
    for (int p = 0; p < n_; ++p) {
        const auto row = dijkstra(adj, p);
        for (int q = 0; q < n_; ++q) {
            matrix_[static_cast<std::size_t>(p) * n_ + q] = row[q] ? *row[q] : -1.0;
        }
    }
}

std::string null_distance_csv(const DiscreteSpace& space, const TimeFunctionAssignment& T) {
    NullDistanceCache cache(space, T);
    std::ostringstream out;
    out.precision(17);
    for (int q = 0; q < space.size(); ++q) {
        if (q) out << ",";
        out << q;
    }
    out << "\n";
    for (int p = 0; p < space.size(); ++p) {
        for (int q = 0; q < space.size(); ++q) {
            if (q) out << ",";
            const auto v = cache(p, q);
            if (v) {
                out << *v;
            } else {
                out << "inf";
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace lorlab
