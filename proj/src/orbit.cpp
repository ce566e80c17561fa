#include "bakerlab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxAbelSteps = 100'000'000;

// Bound on |e'(w)| over the disk of radius `spread` about w: |e'| <= 2 S / d^3.
double derivative_bound(const MapModel& model, double dist_to_poles, double spread) {
    const double d = dist_to_poles - spread;
    if (!(d > 0.0)) return kInf;
    return 2.0 * model.coeff_sum() / (d * d * d);
}

// Adds x to sum componentwise, accumulating the lost low-order parts in carry.
Complex neumaier_add(Complex sum, Complex x, Complex& carry) {
    auto add = [](double s, double v, double& c) {
        const double t = s + v;
        c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
        return t;
    };
    double cr = carry.real(), ci = carry.imag();
    const Complex out(add(sum.real(), x.real(), cr), add(sum.imag(), x.imag(), ci));
    carry = {cr, ci};
    return out;
}

}  // namespace

Orbit iterate(const MapModel& model, Complex z0, std::size_t steps) {
    const double eps = model.epsilon();
    const PoleDistances d0 = dist_to_poles(model, z0);
    if (!(d0.to_extended >= 2.0 * eps))
        throw UncertifiedError("orbit seed must satisfy dist(z0, P~) >= 2 eps");

    Orbit orbit;
    orbit.start = z0;
    orbit.points.reserve(steps + 1);
    orbit.drift.reserve(steps + 1);
    orbit.eval_err.reserve(steps + 1);
    orbit.in_v.reserve(steps + 1);
    orbit.points.push_back(z0);
    orbit.drift.push_back({0.0, 0.0});
    orbit.eval_err.push_back(0.0);
    orbit.in_v.push_back(d0.to_extended >= eps);

    // z_n = z0 + n + drift_n with the drift kept as a compensated running sum
    // of e(z_k), so translation steps do not pile up rounding in the points.
    Complex z = z0;
    Complex drift{0.0, 0.0}, carry{0.0, 0.0};
    double err = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
        const double dp = dist_to_poles(model, z).to_poles;
        if (dp < 0.5 * eps) {
            orbit.truncated = true;
            orbit.note = "orbit came within eps/2 of a pole at step " + std::to_string(n);
            break;
        }
        const Evaluation e = eval_e(model, z);
        drift = neumaier_add(drift, e.value, carry);
        z = z0 + static_cast<double>(n + 1) + (drift + carry);
        const double lip = derivative_bound(model, dp, err);
        err = err * (1.0 + lip) + e.err + 10.0 * kMachineEps * std::abs(z);

        orbit.points.push_back(z);
        orbit.drift.push_back(drift + carry);
        orbit.eval_err.push_back(err);
        orbit.in_v.push_back(dist_to_poles(model, z).to_extended >= eps);
    }
    return orbit;
}

DriftCertificate certify_drift(const Orbit& orbit, const MapModel& model) {
    DriftCertificate cert;
    cert.worst_margin = kInf;
    const double half_eps = 0.5 * model.epsilon();
    for (std::size_t n = 0; n < orbit.points.size(); ++n) {
        const double margin = half_eps - orbit.eval_err[n] - std::abs(orbit.drift[n]);
        cert.worst_margin = std::min(cert.worst_margin, margin);
        if (!orbit.in_v[n]) {
            cert.failed_at = n;
            cert.reason = "orbit point left V (dist to P~ < eps)";
            return cert;
        }
        if (!(margin > 0.0)) {
            cert.failed_at = n;
            cert.reason = "drift reached eps/2";
            return cert;
        }
    }
    if (orbit.truncated) {
        cert.failed_at = orbit.points.size();
        cert.reason = orbit.note;
        return cert;
    }
    cert.passed = true;
    return cert;
}

AbelValue abel_function(const MapModel& model, Complex z, double tol) {
    if (!(tol > 0.0)) throw DomainError("Abel tolerance must be positive");
    const double eps = model.epsilon();
    if (!(dist_to_poles(model, z).to_extended >= eps))
        throw UncertifiedError("Abel function needs dist(z, P~) >= eps");
    const double total = model.coeff_sum();
    if (total == 0.0) return {z, 0.0, 0};

    // Split the poles at |p|_1 = M so that the far part is already below tol/4.
    const double pole_const = orbit_pole_constant(model.pole_case(), eps);
    int split = 0;
    while (model.coeff_tail(split) * pole_const > 0.25 * tol) {
        if (++split > 1 << 16)
            throw UncertifiedError("cannot split pole series for the Abel tail");
    }
    const double far_part = model.coeff_tail(split) * pole_const;
    const double near_mass = total - model.coeff_tail(split);

    Complex w = z;
    double w_err = 0.0;
    Complex sum{0.0, 0.0};
    double sum_err = 0.0;
    double abs_sum = 0.0;
    for (std::size_t k = 0; k <= kMaxAbelSteps; ++k) {
        const PoleDistances d = dist_to_poles(model, w);
        const double a = w.real() - w_err - split - 0.5 * eps;
        if (d.to_extended - w_err >= 2.0 * eps && a > 0.0) {
            const double near_part = near_mass * (1.0 / (a * a) + 1.0 / a);
            if (near_part + far_part <= 0.5 * tol) {
                const double rounding = static_cast<double>(k + 2) * kMachineEps * abs_sum +
                                        kMachineEps * std::abs(z + sum);
                const double bound = near_part + far_part + sum_err + rounding;
                if (bound > tol)
                    throw UncertifiedError("Abel sum rounding exceeds the tolerance");
                return {z + sum, bound, k};
            }
        }
        if (d.to_poles < 0.5 * eps)
            throw UncertifiedError("Abel orbit came within eps/2 of a pole");
        const Evaluation e = eval_e(model, w);
        const double lip = derivative_bound(model, d.to_poles, w_err);
        sum += e.value;
        abs_sum += std::abs(e.value);
        sum_err += e.err + lip * w_err;
        w = w + 1.0 + e.value;
        w_err = w_err * (1.0 + lip) + e.err + 10.0 * kMachineEps * std::abs(w);
    }
    throw UncertifiedError("Abel tail not certified within the step limit");
}

std::vector<BoundInterval> step_ratio_series(std::span<const double> step_lengths,
                                             std::span<const double> step_errors,
                                             std::span<const BoundInterval> distances) {
    if (step_lengths.size() != distances.size() || step_errors.size() != distances.size())
        throw DomainError("step and distance sequences differ in length");
    std::vector<BoundInterval> out;
    out.reserve(distances.size());
    for (std::size_t n = 0; n < distances.size(); ++n) {
        const double lo_step = std::max(0.0, step_lengths[n] - step_errors[n]);
        const double hi_step = step_lengths[n] + step_errors[n];
        const BoundInterval& dist = distances[n];
        const double lo = dist.finite() ? lo_step / dist.upper : 0.0;
        const double hi = dist.lower > 0.0 ? hi_step / dist.lower : kInf;
        out.emplace_back(lo, std::max(lo, hi));
    }
    return out;
}

std::vector<BoundInterval> step_ratio_series(const MapModel& model, const Orbit& orbit) {
    if (!(dist_to_poles(model, orbit.start).to_extended > model.delta()))
        throw UncertifiedError("orbit start is not certified inside the Baker domain");
    const std::size_t steps = orbit.steps();
    std::vector<double> lengths(steps), errors(steps);
    std::vector<BoundInterval> distances(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        lengths[n] = std::abs(orbit.points[n + 1] - orbit.points[n]);
        errors[n] = orbit.eval_err[n] + orbit.eval_err[n + 1];
        // Orbit points of a certified seed stay in U by invariance; widen by the
        // position error of the computed point.
        const BoundInterval raw = boundary_distance_bounds(model, orbit.points[n]);
        distances[n] = BoundInterval(std::max(0.0, raw.lower - orbit.eval_err[n]),
                                     raw.upper + orbit.eval_err[n]);
    }
    return step_ratio_series(lengths, errors, distances);
}

std::vector<AbsorptionResult> half_plane_absorption(const MapModel& model,
                                                    std::span<const Complex> seeds,
                                                    double threshold,
                                                    std::size_t steps) {
    std::vector<AbsorptionResult> out;
    out.reserve(seeds.size());
    for (const Complex seed : seeds) {
        const Orbit orbit = iterate(model, seed, steps);
        AbsorptionResult r{seed, std::nullopt, false};
        for (std::size_t n = 0; n < orbit.points.size(); ++n) {
            const Complex p = orbit.points[n];
            const bool inside = p.real() - orbit.eval_err[n] > threshold;
            if (!r.entered_at && inside) r.entered_at = n;
            else if (r.entered_at && !inside) r.left_after_entry = true;
        }
        if (orbit.truncated) r.left_after_entry = true;
        out.push_back(r);
    }
    return out;
}

}  // namespace bakerlab
