#pragma once

#include <cmath>

namespace lorlab {

// Event in the two-dimensional Minkowski plane, signature (+,-).
struct Event {
    double t = 0.0;
    double x = 0.0;
};

inline Event operator+(Event a, Event b) { return {a.t + b.t, a.x + b.x}; }
inline Event operator-(Event a, Event b) { return {a.t - b.t, a.x - b.x}; }
inline Event operator*(double s, Event a) { return {s * a.t, s * a.x}; }

inline double minkowski_dot(Event a, Event b) { return a.t * b.t - a.x * b.x; }

// p causally precedes q.
inline bool flat_causal(Event p, Event q) {
    const double dt = q.t - p.t;
    return dt >= 0.0 && dt * dt - (q.x - p.x) * (q.x - p.x) >= 0.0;
}

inline bool flat_timelike(Event p, Event q) {
    const double dt = q.t - p.t;
    return dt > 0.0 && dt * dt - (q.x - p.x) * (q.x - p.x) > 0.0;
}

// Time separation in the flat plane; 0 for non-causally-related pairs.
inline double flat_tau(Event p, Event q) {
    if (!flat_causal(p, q)) return 0.0;
    const double dt = q.t - p.t, dx = q.x - p.x;
    return std::sqrt(dt * dt - dx * dx);
}

// Rapidity of the future-directed unit vector along q - p (requires timelike).
inline double flat_rapidity(Event p, Event q) {
    double dt = q.t - p.t, dx = q.x - p.x;
    if (dt < 0.0) { dt = -dt; dx = -dx; }  // future-ize
    return std::atanh(dx / dt);
}

// Hyperbolic angle at vertex v between the realisers toward e1 and e2.
// In flat space the upper angle is exact and equals the rapidity gap of the
// future-directed versions of the two emanating directions, for every sign
// combination of their time orientations.
inline double flat_angle(Event v, Event e1, Event e2) {
    return std::abs(flat_rapidity(v, e1) - flat_rapidity(v, e2));
}

// Point at tau-fraction t along the straight realiser from a to b. Along a
// timelike line, tau from the start point is proportional to the affine
// parameter, so this is also the point with tau(a, .) = t * tau(a, b).
inline Event flat_point_on(Event a, Event b, double t) {
    return {a.t + t * (b.t - a.t), a.x + t * (b.x - a.x)};
}

}  // namespace lorlab
