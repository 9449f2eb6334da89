#include "lorlab/gh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "lorlab/comparison.hpp"
#include "lorlab/errors.hpp"
#include "lorlab/model.hpp"
#include "lorlab/rng.hpp"

namespace lorlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Bounded spaces

BoundedLorentzianSpace diamond_to_bounded(const DiscreteSpace& space, int p, int q) {
    const std::vector<int> diamond = causal_diamond(space, p, q);
    // Remove the spacelike boundary S: points timelike related to nothing
    // else inside the diamond.
    std::vector<int> keep;
    for (int a : diamond) {
        bool timelike_somewhere = false;
        for (int b : diamond) {
            if (space.timelike(a, b) || space.timelike(b, a)) timelike_somewhere = true;
        }
        if (timelike_somewhere) keep.push_back(a);
    }
    if (keep.empty()) throw EmptyDiamond("diamond_to_bounded: no timelike pair in J(p,q)");

    BoundedLorentzianSpace out;
    out.n = static_cast<int>(keep.size());
    out.origin = keep;
    out.tau_matrix.assign(static_cast<std::size_t>(out.n) * out.n, 0.0);
    for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j) out.tau_matrix[static_cast<std::size_t>(i) * out.n + j] =
            space.tau(keep[i], keep[j]);

    // Point distinction: two points with identical separations to everything.
    for (int i = 0; i < out.n && !out.indistinct; ++i) {
        for (int j = i + 1; j < out.n && !out.indistinct; ++j) {
            bool same = out.tau(i, j) == 0.0 && out.tau(j, i) == 0.0;
            for (int k = 0; same && k < out.n; ++k) {
                same = out.tau(i, k) == out.tau(j, k) && out.tau(k, i) == out.tau(k, j);
            }
            if (same) out.indistinct = std::make_pair(i, j);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// GH distance

namespace {

double pair_distortion(const BoundedLorentzianSpace& X, const BoundedLorentzianSpace& Y,
                       const std::vector<std::pair<int, int>>& pairs,
                       const std::pair<int, int>& cand) {
    double dis = 0.0;
    for (const auto& [x, y] : pairs) {
        dis = std::max(dis, std::abs(X.tau(x, cand.first) - Y.tau(y, cand.second)));
        dis = std::max(dis, std::abs(X.tau(cand.first, x) - Y.tau(cand.second, y)));
    }
    return dis;
}

// Exhaustive search over minimal correspondences: a map X -> Y plus a map
// from the uncovered part of Y back to X. Prunes on the running distortion.
struct ExactSearch {
    const BoundedLorentzianSpace& X;
    const BoundedLorentzianSpace& Y;
    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> y_covered;
    double best = std::numeric_limits<double>::infinity();

    void extend(const std::pair<int, int>& cand, double dis, auto&& next) {
        const double d = std::max(dis, pair_distortion(X, Y, pairs, cand));
        if (d >= best) return;
        pairs.push_back(cand);
        const bool cover = !y_covered[cand.second];
        if (cover) y_covered[cand.second] = true;
        next(d);
        if (cover) y_covered[cand.second] = false;
        pairs.pop_back();
    }

    void assign_x(int x, double dis) {
        if (x == X.n) {
            assign_y(0, dis);
            return;
        }
        for (int y = 0; y < Y.n; ++y) {
            extend({x, y}, dis, [&](double d) { assign_x(x + 1, d); });
        }
    }

    void assign_y(int y, double dis) {
        while (y < Y.n && y_covered[y]) ++y;
        if (y == Y.n) {
            best = std::min(best, dis);
            return;
        }
        for (int x = 0; x < X.n; ++x) {
            extend({x, y}, dis, [&](double d) { assign_y(y + 1, d); });
        }
    }
};

double correspondence_distortion(const BoundedLorentzianSpace& X, const BoundedLorentzianSpace& Y,
                                 const std::vector<std::pair<int, int>>& pairs) {
    double dis = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            dis = std::max(dis, std::abs(X.tau(pairs[i].first, pairs[j].first) -
                                         Y.tau(pairs[i].second, pairs[j].second)));
        }
    }
    return dis;
}

double search_once(const BoundedLorentzianSpace& X, const BoundedLorentzianSpace& Y, Rng& rng) {
    // Greedy: match each x (in random order) to the y with the least
    // incremental distortion, then cover the remaining y the same way.
    std::vector<int> order(static_cast<std::size_t>(X.n));
    for (int i = 0; i < X.n; ++i) order[i] = i;
    for (int i = X.n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);

    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> y_covered(static_cast<std::size_t>(Y.n), false);
    for (int x : order) {
        int best_y = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int y = 0; y < Y.n; ++y) {
            const double d = pair_distortion(X, Y, pairs, {x, y});
            if (d < best_d) {
                best_d = d;
                best_y = y;
            }
        }
        pairs.push_back({x, best_y});
        y_covered[best_y] = true;
    }
    for (int y = 0; y < Y.n; ++y) {
        if (y_covered[y]) continue;
        int best_x = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int x = 0; x < X.n; ++x) {
            const double d = pair_distortion(X, Y, pairs, {x, y});
            if (d < best_d) {
                best_d = d;
                best_x = x;
            }
        }
        pairs.push_back({best_x, y});
    }

    // Local search: swap the y-targets of two x-pairs while it improves.
    double cur = correspondence_distortion(X, Y, pairs);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < static_cast<std::size_t>(X.n); ++i) {
            for (std::size_t j = i + 1; j < static_cast<std::size_t>(X.n); ++j) {
                std::swap(pairs[i].second, pairs[j].second);
                const double d = correspondence_distortion(X, Y, pairs);
                if (d < cur) {
                    cur = d;
                    improved = true;
                } else {
                    std::swap(pairs[i].second, pairs[j].second);
                }
            }
        }
    }
    return cur;
}

}  // namespace

GhResult gh_distance(const BoundedLorentzianSpace& X, const BoundedLorentzianSpace& Y, GhMode mode,
                     std::uint64_t seed, int restarts, int exact_cap) {
    if (X.n == 0 || Y.n == 0) throw EmptyDiamond("gh_distance: empty space");
    GhResult res;
    if (mode == GhMode::Exact) {
        if (X.n > exact_cap || Y.n > exact_cap) {
            throw TooLargeForExact("gh_distance: exact mode is capped at " +
                                   std::to_string(exact_cap) + " points per side");
        }
        ExactSearch search{X, Y, {}, std::vector<bool>(static_cast<std::size_t>(Y.n), false)};
        search.assign_x(0, 0.0);
        res.value = GhResult::normalisation * search.best;
        res.is_upper_bound = false;
        return res;
    }
    Rng rng(seed);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) best = std::min(best, search_once(X, Y, rng));
    res.value = GhResult::normalisation * best;
    res.is_upper_bound = true;
    return res;
}

std::string gh_csv(const std::vector<GhReportRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "i,j,mode,value,is_upper_bound\n";
    for (const auto& r : rows) {
        out << r.i << "," << r.j << "," << (r.mode == GhMode::Exact ? "exact" : "search") << ","
            << r.value << "," << (r.is_upper_bound ? 1 : 0) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Serialisation

void save_bounded(const BoundedLorentzianSpace& space, const std::string& path) {
    json doc;
    doc["version"] = 1;
    doc["n"] = space.n;
    doc["origin"] = space.origin;
    doc["tau"] = space.tau_matrix;
    std::ofstream out(path);
    if (!out) throw Error("save_bounded: cannot open " + path);
    out << doc.dump(1) << "\n";
}

BoundedLorentzianSpace load_bounded(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_bounded: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("load_bounded: ") + e.what());
    }
    BoundedLorentzianSpace space;
    try {
        space.n = doc.at("n").get<int>();
        space.origin = doc.value("origin", std::vector<int>{});
        space.tau_matrix = doc.at("tau").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("load_bounded: ") + e.what());
    }
    if (space.n < 0 ||
        space.tau_matrix.size() != static_cast<std::size_t>(space.n) * space.n) {
        throw ParseError("load_bounded: tau matrix size does not match n");
    }
    return space;
}

// ---------------------------------------------------------------------------
// Stability experiment

StabilityReport stability_experiment(const std::vector<DiscreteSpace>& spaces, double K,
                                     std::uint64_t seed) {
    std::vector<BoundedLorentzianSpace> bounded;
    for (const auto& space : spaces) {
        // The global diamond: the pair realising the maximal time separation.
        int bp = 0, bq = 0;
        double best = -1.0;
        for (int i = 0; i < space.size(); ++i) {
            for (int j = 0; j < space.size(); ++j) {
                if (space.tau(i, j) > best) {
                    best = space.tau(i, j);
                    bp = i;
                    bq = j;
                }
            }
        }
        if (best <= 0.0) throw EmptyDiamond("stability_experiment: no timelike pair");
        bounded.push_back(diamond_to_bounded(space, bp, bq));
    }

    StabilityReport report;
    for (std::size_t i = 0; i < bounded.size(); ++i) {
        for (std::size_t j = i + 1; j < bounded.size(); ++j) {
            GhReportRow row;
            row.i = static_cast<int>(i);
            row.j = static_cast<int>(j);
            const bool small = bounded[i].n <= 6 && bounded[j].n <= 6;
            row.mode = small ? GhMode::Exact : GhMode::Search;
            const GhResult res = gh_distance(bounded[i], bounded[j], row.mode, seed);
            row.value = res.value;
            row.is_upper_bound = res.is_upper_bound;
            report.pairwise.push_back(row);
        }
    }

    // Triangle-comparison pass on the final space.
    const DiscreteSpace& fin = spaces.back();
    const ModelConfig cfg = make_model(K);
    Rng rng(seed);
    const int wanted = 24;
    int attempts = 0;
    while (report.final_triangles < wanted && attempts < wanted * 100) {
        ++attempts;
        int p = static_cast<int>(rng.index(fin.size()));
        int q = static_cast<int>(rng.index(fin.size()));
        int r = static_cast<int>(rng.index(fin.size()));
        if (!(fin.timelike(p, q) && fin.timelike(q, r) && fin.timelike(p, r))) continue;
        try {
            validate_triangle(cfg, {fin.tau(p, q), fin.tau(q, r), fin.tau(p, r)});
            const TriangleInstance tri = make_triangle(fin, p, q, r);
            for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
                if (!check_angle_condition(fin, tri, cfg, v).holds) ++report.final_failures;
            }
            ++report.final_triangles;
        } catch (const Error&) {
            continue;  // size bounds or no admissible probe pairs
        }
    }
    return report;
}

}  // namespace lorlab
