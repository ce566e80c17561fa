#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bakerlab/complexmap.hpp"

namespace bakerlab {

/// Forward orbit z_n = f^n(z_0) with drift z_n - z_0 - n and a running
/// absolute error bound for each stored point.
struct Orbit {
    Complex start;
    std::vector<Complex> points;
    std::vector<Complex> drift;
    std::vector<double> eval_err;
    std::vector<bool> in_v;  // dist(z_n, P~) >= epsilon

    /// Set when iteration stopped early because a point came within eps/2 of a pole.
    bool truncated = false;
    std::string note;

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Iterates f for `steps` steps from z0, which must satisfy dist(z0, P~) >= 2 eps.
/// Throws UncertifiedError if it does not.
Orbit iterate(const MapModel& model, Complex z0, std::size_t steps);

struct DriftCertificate {
    bool passed = false;
    double worst_margin = 0.0;  // min over n of eps/2 - eval_err[n] - |drift[n]|
    std::optional<std::size_t> failed_at;
    std::string reason;
};

/// Checks |drift[n]| < eps/2 - eval_err[n] and in_v[n] at every stored step.
DriftCertificate certify_drift(const Orbit& orbit, const MapModel& model);

struct AbelValue {
    Complex value;
    double tail_bound = 0.0;
    std::size_t terms = 0;
};

/// psi(z) = z + sum_{k >= 0} e(f^k(z)), which satisfies psi(f(z)) = psi(z) + 1.
///
/// The sum stops at the first orbit point w = f^{K+1}(z) inside V~ that is far
/// enough right of the heavy poles: poles with |p|_1 <= M contribute at most
/// S_M (1/a^2 + 1/a) with a = Re w - M - eps/2, and the remaining poles at most
/// (sum_{|p|_1 > M} |a_p|) * orbit_pole_constant. Requires dist(z, P~) >= eps.
/// Throws UncertifiedError if the tail cannot be certified below `tol`.
AbelValue abel_function(const MapModel& model, Complex z, double tol);

/// Enclosures of |z_{n+1} - z_n| / dist(z_n, dU) for n = 0 .. steps-1. An
/// infinite upper end marks a point whose boundary distance has no positive
/// lower bound.
std::vector<BoundInterval> step_ratio_series(const MapModel& model, const Orbit& orbit);

/// Step-ratio enclosures for precomputed steps and boundary-distance enclosures.
std::vector<BoundInterval> step_ratio_series(std::span<const double> step_lengths,
                                             std::span<const double> step_errors,
                                             std::span<const BoundInterval> distances);

struct AbsorptionResult {
    Complex seed;
    std::optional<std::size_t> entered_at;
    bool left_after_entry = false;
};

/// For each seed, the first n with Re f^n(z) > threshold and whether the orbit
/// leaves that half-plane again within `steps`.
std::vector<AbsorptionResult> half_plane_absorption(const MapModel& model,
                                                    std::span<const Complex> seeds,
                                                    double threshold,
                                                    std::size_t steps);

}  // namespace bakerlab
