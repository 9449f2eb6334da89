#include "lorlab/globalisation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lorlab/errors.hpp"
#include "lorlab/rng.hpp"

namespace lorlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Lebesgue number

LebesgueResult lebesgue_number(const DiscreteSpace& space, const TimeFunctionAssignment& T,
                               const DiamondCover& cover) {
    const std::vector<int> diamond = causal_diamond(space, cover.x, cover.y);
    if (cover.elements.empty()) throw CoverInvalid("lebesgue: empty cover");

    auto inside = [&](int p, const std::pair<int, int>& el) {
        return space.timelike(el.first, p) && space.timelike(p, el.second);
    };
    for (int p : diamond) {
        bool covered = false;
        for (const auto& el : cover.elements) covered = covered || inside(p, el);
        if (!covered) {
            throw CoverInvalid("lebesgue: point " + std::to_string(p) + " lies in no element");
        }
    }
    if (cover.elements.size() == 1) return {kInf, true};

    const NullDistanceCache d(space, T);
    LebesgueResult res{kInf, true};
    for (int p : diamond) {
        // f(p) = max over elements of d_T(p, complement within the diamond,
        // restricted to points causally related to p). An element whose
        // complement misses the causal cone of p leaves p unconstrained.
        double fp = 0.0;
        for (const auto& el : cover.elements) {
            double nearest = kInf;
            for (int z : diamond) {
                if (inside(z, el)) continue;  // z not in the complement C_i
                if (z != p && !space.related(p, z) && !space.related(z, p)) continue;
                const auto dv = d(p, z);
                if (dv && *dv < nearest) nearest = *dv;
            }
            fp = std::max(fp, nearest);
            if (fp == kInf) break;
        }
        if (fp < kInf) {
            res.unconstrained = false;
            res.epsilon = std::min(res.epsilon, fp);
        }
    }
    if (res.unconstrained) res.epsilon = kInf;
    return res;
}

DiamondCover generate_cover(const DiscreteSpace& space, const TimeFunctionAssignment& T, int x,
                            int y, double target_diameter) {
    const std::vector<int> diamond = causal_diamond(space, x, y);
    std::vector<bool> covered(static_cast<std::size_t>(space.size()), false);
    auto in_diamond = std::vector<bool>(static_cast<std::size_t>(space.size()), false);
    for (int p : diamond) in_diamond[p] = true;

    DiamondCover cover;
    cover.x = x;
    cover.y = y;
    int remaining = static_cast<int>(diamond.size());
    while (remaining > 0) {
        // Greedy: the admissible timelike diamond covering the most points
        // that are still uncovered.
        int best_a = -1, best_b = -1, best_gain = 0;
        for (int a = 0; a < space.size(); ++a) {
            for (int b = 0; b < space.size(); ++b) {
                if (!space.timelike(a, b)) continue;
                if (T(b) - T(a) > target_diameter) continue;
                int gain = 0;
                for (int p : diamond) {
                    if (!covered[p] && space.timelike(a, p) && space.timelike(p, b)) ++gain;
                }
                if (gain > best_gain) {
                    best_gain = gain;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_gain == 0) {
            // No small diamond reaches the stragglers; fall back to the
            // ambient pair and stop.
            cover.elements.push_back({x, y});
            break;
        }
        cover.elements.push_back({best_a, best_b});
        for (int p : diamond) {
            if (!covered[p] && space.timelike(best_a, p) && space.timelike(p, best_b)) {
                covered[p] = true;
                --remaining;
            }
        }
    }
    return cover;
}

// ---------------------------------------------------------------------------
// Gluing lemma subdivision

GluingVerdicts gluing_subdivide(const FlatTriangle& tri, double x_fraction, const ModelConfig& cfg,
                                double tol) {
    if (!(x_fraction > 0.0) || !(x_fraction < 1.0)) {
        throw NotRealisable("gluing_subdivide: split fraction must be interior");
    }
    const Event x = flat_point_on(tri.p, tri.q, x_fraction);
    const FlatTriangle sub1 = make_flat_triangle(tri.p, x, tri.r);
    const FlatTriangle sub2 = make_flat_triangle(x, tri.q, tri.r);

    GluingVerdicts v;
    v.parent_at_p = check_angle_condition(tri, cfg, Vertex::P, tol);
    v.at_x_in_pxr = check_angle_condition(sub1, cfg, Vertex::Q, tol);
    v.at_p_in_pxr = check_angle_condition(sub1, cfg, Vertex::P, tol);
    v.at_x_in_xqr = check_angle_condition(sub2, cfg, Vertex::P, tol);
    v.some_sub_fails = !v.at_x_in_pxr.holds || !v.at_p_in_pxr.holds || !v.at_x_in_xqr.holds;
    return v;
}

// ---------------------------------------------------------------------------
// Localising a sigma = +1 failure

namespace {

Event time_reverse(Event e) { return {-e.t, e.x}; }

FlatTriangle time_reverse(const FlatTriangle& t) {
    return {time_reverse(t.r), time_reverse(t.q), time_reverse(t.p)};
}

// Point on the segment a -> b lying on the boundary of J+(q): the parameter
// where the time gap to q equals the spatial gap.
Event null_boundary_point(Event a, Event b, Event q) {
    auto gap = [&](double s) {
        const Event y = flat_point_on(a, b, s);
        return (y.t - q.t) - std::abs(y.x - q.x);
    };
    double lo = 0.0, hi = 1.0;
    if (gap(lo) > 0.0 || gap(hi) < 0.0) {
        throw NotRealisable("null boundary does not cross the segment");
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return flat_point_on(a, b, 0.5 * (lo + hi));
}

}  // namespace

PositiveFailureTrace locate_positive_failure(const FlatTriangle& tri, const ModelConfig& cfg,
                                             double eps, int max_steps, double tol) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw NotRealisable("locate: eps must lie in (0,1)");

    const ReportEntry at_p = check_angle_condition(tri, cfg, Vertex::P, tol);
    const ReportEntry at_q = check_angle_condition(tri, cfg, Vertex::Q, tol);
    const ReportEntry at_r = check_angle_condition(tri, cfg, Vertex::R, tol);
    if (at_p.holds && at_q.holds && at_r.holds) {
        throw NotFound("locate: the angle condition holds at every vertex");
    }

    PositiveFailureTrace trace;
    if (!at_q.holds) {  // already a failure at the middle vertex
        trace.found = true;
        trace.witness = tri;
        trace.steps.push_back({tri, Vertex::Q, true});
        return trace;
    }
    // A failure at r becomes a failure at p under time reversal.
    const bool reversed = at_p.holds;
    FlatTriangle cur = reversed ? time_reverse(tri) : tri;
    auto emit = [&](FlatTriangle t) { return reversed ? time_reverse(t) : t; };

    const double initial_dt = cur.q.t - cur.p.t;
    for (int n = 0; n < max_steps; ++n) {
        if (cur.q.t - cur.p.t <= eps * initial_dt) {
            // Bisection has stalled near the limit point; split the long
            // side through the boundary of J+(q_n).
            trace.used_long_side_split = true;
            const Event rb = null_boundary_point(cur.p, cur.r, cur.q);
            // Nudge slightly to the future along [p_n, r] so tau(q_n, r_n) > 0.
            const double s = (rb.t - cur.p.t) / (cur.r.t - cur.p.t);
            const Event rn = flat_point_on(cur.p, cur.r, std::min(1.0, s + 1e-3 * (1.0 - s)));
            const FlatTriangle split = make_flat_triangle(cur.q, rn, cur.r);
            const ReportEntry at_rn = check_angle_condition(split, cfg, Vertex::Q, tol);
            trace.steps.push_back({emit(split), Vertex::Q, !at_rn.holds});
            if (!at_rn.holds) {
                trace.found = true;
                trace.witness = emit(split);
                return trace;
            }
            throw ResolutionExhausted("locate: long-side split produced no positive failure");
        }
        const Event x = flat_point_on(cur.p, cur.q, 0.5);  // d_T midpoint of [p_n, q_n]
        const FlatTriangle sub1 = make_flat_triangle(cur.p, x, cur.r);
        const FlatTriangle sub2 = make_flat_triangle(x, cur.q, cur.r);

        const ReportEntry mid = check_angle_condition(sub1, cfg, Vertex::Q, tol);
        trace.steps.push_back({emit(sub1), Vertex::Q, !mid.holds});
        if (!mid.holds) {
            trace.found = true;
            trace.witness = emit(sub1);
            return trace;
        }
        const ReportEntry sub1_p = check_angle_condition(sub1, cfg, Vertex::P, tol);
        trace.steps.push_back({emit(sub1), Vertex::P, !sub1_p.holds});
        if (!sub1_p.holds) {
            cur = sub1;
            continue;
        }
        const ReportEntry sub2_p = check_angle_condition(sub2, cfg, Vertex::P, tol);
        trace.steps.push_back({emit(sub2), Vertex::P, !sub2_p.holds});
        if (!sub2_p.holds) {
            cur = sub2;
            continue;
        }
        // The gluing disjunction guarantees one of the three failures.
        throw ConsistencyError("locate: subdivision produced no failing angle");
    }
    throw ResolutionExhausted("locate: bisection limit reached without a positive failure");
}

// ---------------------------------------------------------------------------
// Cat's cradle

namespace {

// Shared bookkeeping for one recursion step: given the sides of the current
// triangle Delta_n and the incoming hinge angle, push the model quantities.
struct CradleModelStep {
    double theta_bar = 0.0;  // model angle at q-bar_{n-1}
    double phi_bar = 0.0;    // model angle at q-bar_n
};

CradleModelStep cradle_model_step(const ModelConfig& cfg, const ModelTriangle& sides, bool odd) {
    CradleModelStep out;
    if (odd) {
        // Delta_n = (q_n, q_{n-1}, r): q_{n-1} is the middle vertex, q_n the
        // past endpoint.
        out.theta_bar = triangle_angle(cfg, sides, Vertex::Q);
        out.phi_bar = triangle_angle(cfg, sides, Vertex::P);
    } else {
        // Delta_n = (p, q_{n-1}, q_n): q_{n-1} middle, q_n future endpoint.
        out.theta_bar = triangle_angle(cfg, sides, Vertex::Q);
        out.phi_bar = triangle_angle(cfg, sides, Vertex::R);
    }
    return out;
}

double checked_eps(double eps) {
    if (!(eps > 0.0) || !(eps >= kCradleEpsFloor) || !(eps < 0.5)) {
        throw NotRealisable("cats_cradle: eps must lie in [1e-3, 1/2)");
    }
    return eps;
}

}  // namespace

CatsCradleTrace cats_cradle(const FlatTriangle& tri, const ModelConfig& cfg, double eps,
                            int max_steps, double excess_tol) {
    eps = checked_eps(eps);
    CatsCradleTrace trace;
    trace.eps = eps;

    Event p = tri.p, q = tri.q, r = tri.r;
    // Arrange d_T(p, q) >= d_T(q, r) by reversing time orientation if needed.
    if (q.t - p.t < r.t - q.t) {
        trace.swapped = true;
        const Event np{-r.t, r.x}, nq{-q.t, q.x}, nr{-p.t, p.x};
        p = np;
        q = nq;
        r = nr;
    }
    trace.L = r.t - p.t;
    trace.tau_pr = flat_tau(p, r);
    trace.points.push_back(q);
    trace.l.push_back(flat_tau(p, q) + flat_tau(q, r));
    // The starting hinge uses the measured angle at q_0.
    trace.theta.push_back(flat_angle(q, p, r));
    trace.omega_bar.push_back(trace.theta.back());
    trace.model_pr.push_back(
        side_from_hinge(cfg, {flat_tau(p, q), flat_tau(q, r), trace.omega_bar.back(), +1}));
    trace.termination = "max_steps";

    Event prev = q;
    for (int n = 1; n <= max_steps; ++n) {
        const bool odd = (n % 2) == 1;
        Event next;
        if (odd) {
            const double gap = prev.t - p.t;  // d_T(p, q_{n-1})
            if (eps * trace.L >= gap) {
                trace.termination = "degenerate";
                break;
            }
            next = flat_point_on(p, prev, eps * trace.L / gap);
        } else {
            const double gap = r.t - prev.t;  // d_T(q_{n-1}, r)
            if (eps * trace.L >= gap) {
                trace.termination = "degenerate";
                break;
            }
            next = flat_point_on(prev, r, 1.0 - eps * trace.L / gap);
        }
        const ModelTriangle sides =
            odd ? ModelTriangle{flat_tau(next, prev), flat_tau(prev, r), flat_tau(next, r)}
                : ModelTriangle{flat_tau(p, prev), flat_tau(prev, next), flat_tau(p, next)};
        const CradleModelStep step = cradle_model_step(cfg, sides, odd);
        trace.theta_bar.push_back(step.theta_bar);
        trace.phi_bar.push_back(step.phi_bar);
        if (n >= 2) trace.theta.push_back(flat_angle(prev, p, r));
        trace.phi.push_back(odd ? flat_angle(next, prev, r) : flat_angle(next, prev, p));

        trace.points.push_back(next);
        trace.omega_bar.push_back(step.phi_bar);
        trace.l.push_back(flat_tau(p, next) + flat_tau(next, r));
        trace.model_pr.push_back(
            side_from_hinge(cfg, {flat_tau(p, next), flat_tau(next, r), step.phi_bar, +1}));
        trace.steps = n;
        prev = next;
        const std::size_t m = trace.l.size();
        if (trace.l[m - 1] - trace.l[m - 2] < excess_tol) {
            trace.termination = "converged";
            break;
        }
    }
    return trace;
}

CatsCradleTrace cats_cradle(const DiscreteSpace& space, const TimeFunctionAssignment& T,
                            const TriangleInstance& tri, const ModelConfig& cfg, double eps,
                            int max_steps, double excess_tol) {
    eps = checked_eps(eps);
    CatsCradleTrace trace;
    trace.eps = eps;

    int p = tri.p, q = tri.q, r = tri.r;
    bool rev = false;  // reverse the time orientation so d_T(p,q) >= d_T(q,r)
    if (T(q) - T(p) < T(r) - T(q)) {
        rev = true;
        std::swap(p, r);
        trace.swapped = true;
    }
    auto dT = [&](int a, int b) { return std::abs(T(b) - T(a)); };
    auto tau = [&](int a, int b) { return rev ? space.tau(b, a) : space.tau(a, b); };
    // Candidate q_n: any point strictly timelike between the two endpoints of
    // the side being subdivided. (Realiser chains are no use here: with exact
    // ambient weights the longest chain is generically the direct edge.)

    trace.L = dT(p, r);
    trace.tau_pr = tau(p, r);
    trace.point_indices.push_back(q);
    trace.l.push_back(tau(p, q) + tau(q, r));
    // Measured hinge angle at q_0; fall back to the comparison angle when the
    // sprinkle has no admissible probe pairs.
    double theta0;
    try {
        theta0 = triangle_probe(space, tri, Vertex::Q, cfg).value;
    } catch (const NoAdmissiblePairs&) {
        theta0 = triangle_angle(cfg, {tau(p, q), tau(q, r), tau(p, r)}, Vertex::Q);
    }
    trace.theta.push_back(theta0);
    trace.omega_bar.push_back(theta0);
    trace.model_pr.push_back(side_from_hinge(cfg, {tau(p, q), tau(q, r), theta0, +1}));
    trace.termination = "max_steps";

    int prev = q;
    for (int n = 1; n <= max_steps; ++n) {
        const bool odd = (n % 2) == 1;
        // Pick the chain vertex closest to the target d_T offset, timelike
        // to both endpoints of its side.
        int next = -1;
        double best_err = kInf;
        if (odd) {
            for (int z = 0; z < space.size(); ++z) {
                if (tau(p, z) <= 0.0 || tau(z, prev) <= 0.0) continue;
                const double err = std::abs(dT(p, z) - eps * trace.L);
                if (err < best_err) {
                    best_err = err;
                    next = z;
                }
            }
        } else {
            for (int z = 0; z < space.size(); ++z) {
                if (tau(prev, z) <= 0.0 || tau(z, r) <= 0.0) continue;
                const double err = std::abs(dT(z, r) - eps * trace.L);
                if (err < best_err) {
                    best_err = err;
                    next = z;
                }
            }
        }
        if (next < 0) {
            trace.termination = "degenerate";
            break;
        }
        const ModelTriangle sides =
            odd ? ModelTriangle{tau(next, prev), tau(prev, r), tau(next, r)}
                : ModelTriangle{tau(p, prev), tau(prev, next), tau(p, next)};
        const CradleModelStep step = cradle_model_step(cfg, sides, odd);
        trace.theta_bar.push_back(step.theta_bar);
        trace.phi_bar.push_back(step.phi_bar);

        trace.point_indices.push_back(next);
        trace.omega_bar.push_back(step.phi_bar);
        trace.l.push_back(tau(p, next) + tau(next, r));
        trace.model_pr.push_back(
            side_from_hinge(cfg, {tau(p, next), tau(next, r), step.phi_bar, +1}));
        trace.steps = n;
        prev = next;
        const std::size_t m = trace.l.size();
        if (trace.l[m - 1] - trace.l[m - 2] < excess_tol) {
            trace.termination = "converged";
            break;
        }
    }
    return trace;
}

std::string trace_series_tsv(const std::vector<double>& values) {
    std::ostringstream out;
    out.precision(17);
    out << "step\tvalue\n";
    for (std::size_t i = 0; i < values.size(); ++i) out << i << "\t" << values[i] << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Global bound scan

std::vector<ComparisonReport> scan_global_bound(const Region& region, const ModelConfig& cfg,
                                                int triangles, std::uint64_t seed, double tol) {
    if (region.kind == RegionKind::ModelPatch) {
        throw NotRealisable("scan_global_bound: flat regions only");
    }
    Rng rng(seed);
    // Oversample candidates, then draw evenly from tau(p, r) deciles so large
    // triangles are represented.
    struct Candidate {
        FlatTriangle tri;
        double span;
    };
    std::vector<Candidate> cands;
    const int want = std::max(triangles * 20, 200);
    int attempts = 0;
    while (static_cast<int>(cands.size()) < want && attempts < want * 50) {
        ++attempts;
        Event e[3] = {sample_point(region, rng), sample_point(region, rng),
                      sample_point(region, rng)};
        std::sort(e, e + 3, [](Event a, Event b) { return a.t < b.t; });
        if (!flat_timelike(e[0], e[1]) || !flat_timelike(e[1], e[2])) continue;
        const FlatTriangle tri{e[0], e[1], e[2]};
        try {
            validate_triangle(cfg, flat_triangle_sides(tri));
        } catch (const Error&) {
            continue;  // outside the size bounds for this K
        }
        cands.push_back({tri, flat_tau(e[0], e[2])});
    }
    if (cands.empty()) throw NotFound("scan_global_bound: no admissible triangles sampled");

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.span < b.span; });
    const double lo = cands.front().span, hi = cands.back().span;
    std::vector<std::vector<int>> bins(10);
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
        int b = hi > lo ? static_cast<int>(9.999 * (cands[i].span - lo) / (hi - lo)) : 0;
        bins[std::min(b, 9)].push_back(i);
    }
    std::vector<int> chosen;
    for (std::size_t round = 0; static_cast<int>(chosen.size()) < triangles; ++round) {
        bool any = false;
        for (auto& bin : bins) {
            if (round < bin.size()) {
                chosen.push_back(bin[round]);
                any = true;
                if (static_cast<int>(chosen.size()) == triangles) break;
            }
        }
        if (!any) break;
    }

    std::vector<ComparisonReport> reports;
    for (std::size_t id = 0; id < chosen.size(); ++id) {
        const FlatTriangle& tri = cands[chosen[id]].tri;
        ComparisonReport rep;
        rep.triangle_id = static_cast<int>(id);
        for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
            rep.entries.push_back(check_angle_condition(tri, cfg, v, tol));
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

// ---------------------------------------------------------------------------
// Bonnet-Myers diameter check

BonnetMyersResult bonnet_myers_check(const Region& patch, const ModelConfig& cfg,
                                     const std::vector<int>& sizes, std::uint64_t seed,
                                     double tol) {
    if (patch.kind != RegionKind::ModelPatch || !(cfg.K < 0.0)) {
        throw NotRealisable("bonnet_myers_check: needs a K < 0 model patch");
    }
    BonnetMyersResult res;
    res.bound = cfg.diameter;
    res.sizes = sizes;
    std::sort(res.sizes.begin(), res.sizes.end());
    for (int n : res.sizes) {
        const DiscreteSpace space = DiscreteSpace::sprinkle(patch, n, seed);
        double diam = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) diam = std::max(diam, space.tau(i, j));
        res.diameters.push_back(diam);
    }
    res.within_bound = true;
    res.monotone = true;
    for (std::size_t i = 0; i < res.diameters.size(); ++i) {
        if (res.diameters[i] > res.bound + tol) res.within_bound = false;
        if (i > 0 && res.diameters[i] < res.diameters[i - 1] - 1e-12) res.monotone = false;
    }
    return res;
}

}  // namespace lorlab
