#include "bakerlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bakerlab/errors.hpp"
#include "bakerlab/hypmetric.hpp"
#include "bakerlab/orbit.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view verdict_label(Verdict v) {
    switch (v) {
    case Verdict::ParabolicI: return "PARABOLIC_I";
    case Verdict::ParabolicIISignature: return "PARABOLIC_II_SIGNATURE";
    case Verdict::Hyperbolic: return "HYPERBOLIC";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

Thresholds default_thresholds(std::size_t steps) {
    Thresholds t;
    t.tau_zero = 10.0 / static_cast<double>(std::max<std::size_t>(steps, 1));
    return t;
}

SeedEvidence seed_evidence(const MapModel& model, Complex seed, std::size_t steps) {
    SeedEvidence ev;
    ev.seed = seed;
    Orbit orbit;
    try {
        orbit = iterate(model, seed, steps + 1);
    } catch (const UncertifiedError& e) {
        ev.excluded = true;
        ev.note = e.what();
        return ev;
    }
    if (orbit.truncated) {
        ev.excluded = true;
        ev.note = orbit.note;
        return ev;
    }
    const auto ratios = step_ratio_series(model, orbit);
    const std::size_t mid_begin = steps / 4, late_begin = steps / 2;
    ev.min_lower = kInf;
    ev.late_min_lower = kInf;
    for (std::size_t n = 0; n < ratios.size(); ++n) {
        const BoundInterval& s = ratios[n];
        if (!s.finite()) {
            ev.excluded = true;
            ev.note = "no positive boundary-distance lower bound at step " + std::to_string(n);
            return ev;
        }
        ev.min_lower = std::min(ev.min_lower, s.lower);
        ev.max_upper = std::max(ev.max_upper, s.upper);
        if (n >= mid_begin && n < late_begin)
            ev.mid_max_upper = std::max(ev.mid_max_upper, s.upper);
        if (n >= late_begin) {
            ev.late_max_upper = std::max(ev.late_max_upper, s.upper);
            ev.late_min_lower = std::min(ev.late_min_lower, s.lower);
        }
    }
    return ev;
}

TypeVerdict decide(std::vector<SeedEvidence> evidence, std::size_t steps,
                   const Thresholds& thresholds) {
    TypeVerdict out;
    out.thresholds = thresholds;
    out.steps = steps;
    out.evidence = std::move(evidence);

    std::vector<const SeedEvidence*> used;
    for (const auto& ev : out.evidence)
        if (!ev.excluded) used.push_back(&ev);
    if (used.empty()) {
        out.rule = "no certified seeds";
        return out;
    }

    double global_min_lower = kInf;
    for (const auto* ev : used) global_min_lower = std::min(global_min_lower, ev->min_lower);
    if (global_min_lower > thresholds.tau_pos) {
        out.verdict = Verdict::Hyperbolic;
        out.rule = "min over seeds and n of lower(s_n) > tau_pos";
        return out;
    }

    const bool all_vanish = std::all_of(used.begin(), used.end(), [&](const auto* ev) {
        return ev->late_max_upper < thresholds.tau_zero &&
               ev->late_max_upper < ev->mid_max_upper;
    });
    if (all_vanish) {
        out.verdict = Verdict::ParabolicI;
        out.rule = "late-window max upper(s_n) < tau_zero and decreasing for every seed";
        return out;
    }

    if (used.size() >= 2) {
        const bool each_persists = std::all_of(used.begin(), used.end(), [&](const auto* ev) {
            return ev->late_min_lower > 0.0 &&
                   ev->late_max_upper >= thresholds.stationarity * ev->mid_max_upper;
        });
        double inf_late = kInf, sup_late = 0.0;
        for (const auto* ev : used) {
            inf_late = std::min(inf_late, ev->late_min_lower);
            sup_late = std::max(sup_late, ev->late_min_lower);
        }
        if (each_persists && inf_late < thresholds.spread * sup_late) {
            out.verdict = Verdict::ParabolicIISignature;
            out.rule = "per-seed ratios stationary and positive; infimum over seeds decays";
            return out;
        }
    }
    out.rule = "no decision rule fired";
    return out;
}

TypeVerdict classify(const MapModel& model, std::span<const Complex> seeds,
                     std::size_t steps, const Thresholds& thresholds) {
    if (seeds.empty()) throw DomainError("classification needs at least one seed");
    if (steps < 100) throw DomainError("classification needs at least 100 steps");
    std::vector<SeedEvidence> evidence(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        evidence[i] = seed_evidence(model, seeds[i], steps);
    });
    return decide(std::move(evidence), steps, thresholds);
}

OneStepReport hyperbolic_one_step_test(const MapModel& model,
                                       std::span<const Complex> samples) {
    OneStepReport report;
    report.min_lower = kInf;
    report.lower_bounds.reserve(samples.size());
    for (const Complex z : samples) {
        dist_to_boundary_interval(model, z);  // certification only
        const Complex fz = eval_f(model, z).value;
        const auto punctures = nearest_poles(model.pole_case(), z, 2);
        const double lower =
            hyp_distance_lower_two_punctures(z, fz, punctures[0], punctures[1]).value;
        report.lower_bounds.push_back(lower);
        if (lower < report.min_lower) {
            report.min_lower = lower;
            report.argmin = z;
        }
    }
    return report;
}

}  // namespace bakerlab
