#pragma once

// Type verdicts from certified step-ratio enclosures
//   s_n(z) = |f^{n+1}(z) - f^n(z)| / dist(f^n(z), dU).
// Parabolic I  <=> s_n -> 0 along every orbit.
// Hyperbolic    <=  s_n bounded below uniformly over U.
// Between the two sit maps whose ratios stay positive along each orbit while
// their infimum over starting points is zero; finite data can only show the
// signature of that behaviour, never prove parabolic II type.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bakerlab/complexmap.hpp"

namespace bakerlab {

enum class Verdict { ParabolicI, ParabolicIISignature, Hyperbolic, Inconclusive };

std::string_view verdict_label(Verdict v);

struct Thresholds {
    double tau_zero = 0.01;     // "ratio has reached zero"
    double tau_pos = 0.05;      // "ratio bounded away from zero"
    double stationarity = 0.75; // late-window max >= this * mid-window max: no decay
    double spread = 0.25;       // across-seed inf/sup of late lower ratios
};

/// tau_zero = 10 / steps, other fields at their defaults.
Thresholds default_thresholds(std::size_t steps);

struct SeedEvidence {
    Complex seed;
    bool excluded = false;
    std::string note;
    double min_lower = 0.0;       // over all n
    double max_upper = 0.0;       // over all n
    double mid_max_upper = 0.0;   // n in [N/4, N/2)
    double late_max_upper = 0.0;  // n in [N/2, N]
    double late_min_lower = 0.0;  // n in [N/2, N]
};

struct TypeVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::string rule;
    Thresholds thresholds;
    std::size_t steps = 0;
    std::vector<SeedEvidence> evidence;
};

/// Window statistics of s_0 .. s_N for one seed.
SeedEvidence seed_evidence(const MapModel& model, Complex seed, std::size_t steps);

/// Decision rules applied to precomputed evidence.
TypeVerdict decide(std::vector<SeedEvidence> evidence, std::size_t steps,
                   const Thresholds& thresholds);

/// Requires a nonempty seed list and steps >= 100.
TypeVerdict classify(const MapModel& model, std::span<const Complex> seeds,
                     std::size_t steps, const Thresholds& thresholds);

struct OneStepReport {
    double min_lower = 0.0;
    Complex argmin;
    std::vector<double> lower_bounds;
};

/// Lower bounds on rho_U(z, f(z)) through the two poles nearest each sample.
/// Samples must be certified inside U (UncertifiedError otherwise).
OneStepReport hyperbolic_one_step_test(const MapModel& model,
                                       std::span<const Complex> samples);

}  // namespace bakerlab
