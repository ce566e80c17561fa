#pragma once

// Closed polylines pushed forward by f, with winding numbers about the
// extended pole set and the contractibility test they give.

#include <cstddef>
#include <optional>
#include <vector>

#include "bakerlab/complexmap.hpp"

namespace bakerlab {

/// Closed polyline; the edge from the last vertex back to the first is implicit.
struct LoopPath {
    std::vector<Complex> vertices;
    double max_gap = 0.1;
};

/// Counter-clockwise boundary of the square |Re(z - c)|, |Im(z - c)| <= half_side
/// (corners only; refine_loop fills in the sides).
LoopPath square_loop(Complex center, double half_side, double max_gap);

LoopPath reversed(const LoopPath& loop);

inline constexpr std::size_t kMaxLoopVertices = 1'000'000;

/// Bisects edges until every edge and every image edge |f(a) - f(b)| is at most
/// max_gap. Throws AmbiguityError past kMaxLoopVertices.
LoopPath refine_loop(const MapModel& model, const LoopPath& loop);

/// Image polyline f(loop), from the refined loop so image edges respect max_gap.
/// Throws UncertifiedError if a vertex lies within eps/2 of a pole.
LoopPath push_forward(const MapModel& model, const LoopPath& loop);
LoopPath push_forward(const MapModel& model, const LoopPath& loop, int times);

double distance_to_polyline(const LoopPath& loop, Complex v);

/// Winding number by signed angle summation. Throws AmbiguityError if v is
/// within max_gap of the polyline.
int winding(const LoopPath& loop, Complex v);

struct PoleWinding {
    Complex pole;
    int winding;
};

struct WindingReport {
    std::vector<PoleWinding> windings;  // every point of P~ in the padded bounding box
    bool contractible = false;
    bool certified = false;  // polyline stays more than delta away from P~
    double clearance = 0.0;  // lower bound on dist(polyline, P~)
    int winding_about(Complex pole) const;
};

/// Decides null-homotopy in U. The complement of U lies in the open delta-disks
/// about P~ (plus infinity), so a loop avoiding those disks is contractible in U
/// iff it winds zero times about every point of P~. Loops entering a disk come
/// back with certified = false and contractible = false.
WindingReport contractibility(const MapModel& model, const LoopPath& loop);

struct PersistenceStep {
    int n = 0;
    std::size_t vertices = 0;
    std::size_t failing_vertices = 0;  // |f(z) - z| >= dist(z, dU)/2 not excluded
    bool condition_holds = false;
    bool windings_preserved = true;    // only meaningful when condition_holds
    std::vector<PoleWinding> windings;       // of f^n(loop), when condition_holds
    std::vector<PoleWinding> next_windings;  // of f^{n+1}(loop), when condition_holds
};

struct PersistenceReport {
    std::vector<PersistenceStep> steps;
    std::optional<int> stable_from;  // first n0 with the condition for all n0 <= n <= n_max
    std::size_t certified_steps = 0;
    std::size_t violations = 0;
};

/// For n = 0 .. n_max checks |f^{n+1}(z) - f^n(z)| < dist(f^n(z), dU)/2 at
/// every vertex of f^n(loop) and, where it holds, compares the windings of
/// f^n(loop) and f^{n+1}(loop) about every nearby point of P~.
PersistenceReport persistence_check(const MapModel& model, const LoopPath& loop, int n_max);

}  // namespace bakerlab
