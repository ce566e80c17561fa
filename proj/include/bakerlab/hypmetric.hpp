#pragma once

// Certified bounds on the hyperbolic density and distance of the Baker domain U.
// Convention: curvature -1, so the unit disk has density 2 / (1 - |z|^2).

#include <string>

#include "bakerlab/complexmap.hpp"

namespace bakerlab {

enum class BoundKind { DensityUpper, DistanceUpper, DistanceLower };

struct MetricBound {
    BoundKind kind;
    double value;
    std::string basis;
};

/// Gamma(1/4)^4 / (4 pi^2), the sharp constant in the lower density bound of C \ {0, 1}.
inline constexpr double kTwicePuncturedConstant = 4.3768792304529533;

/// rho_U(z) <= 2 / dist(z, dU), from a lower enclosure of the boundary distance.
MetricBound density_upper(double lower_boundary_dist);
MetricBound density_upper(const MapModel& model, Complex z);

/// rho_U(z, w) <= -2 ln(1 - |z - w| / dist(b, dU)) for both base points b in {z, w};
/// the larger of the two values is returned, so the bound is symmetric in z and w.
/// Throws UncertifiedError unless |z - w| is below the boundary-distance lower
/// bound at both ends.
MetricBound hyp_distance_upper(const MapModel& model, Complex z, Complex w);

/// -2 ln(1 - r) for a ratio r = |z - w| / dist in [0, 1).
double log_chain_bound(double ratio);

/// Integral of 2 / dist along the segment [z, w] using, on each of `pieces`
/// equal sub-segments, the worst-case lower distance. Valid upper bound on
/// rho_U(z, w); can be smaller than hyp_distance_upper.
MetricBound hyp_distance_upper_segment(const MapModel& model, Complex z, Complex w,
                                       int pieces = 64);

/// Pointwise lower bound on the density of C \ {0, 1}:
/// rho(u) >= 1 / (|u| (K + |ln|u||)) and its images under u -> 1 - u, u -> u / (u - 1).
double twice_punctured_density_lower(Complex u);

/// Lower bound on rho_{C \ {p, q}}(z, w), hence on rho_U(z, w) when p, q lie
/// outside U. After normalising to C \ {0, 1}, every path from z to w must
/// sweep the level sets of |u|, |1 - u| and |u / (1 - u)|; integrating the
/// radial density bound across them gives three lower bounds, of which the
/// largest is returned. Throws DomainError if p == q or z, w hit a puncture.
MetricBound hyp_distance_lower_two_punctures(Complex z, Complex w, Complex p, Complex q);

/// Antiderivative of 1 / (s (K + |ln s|)) in s, normalised to vanish at s = 1.
double radial_potential(double s);

}  // namespace bakerlab
