#include "bakerlab/hypmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double radial_density(double s) {
    return 1.0 / (s * (kTwicePuncturedConstant + std::abs(std::log(s))));
}

}  // namespace

MetricBound density_upper(double lower_boundary_dist) {
    if (!(lower_boundary_dist > 0.0))
        return {BoundKind::DensityUpper, kInf,
                "unbounded: no positive lower bound on dist(z, dU)"};
    return {BoundKind::DensityUpper, 2.0 / lower_boundary_dist,
            "2 / dist(z, dU) with dist >= dist(z, P~) - delta"};
}

MetricBound density_upper(const MapModel& model, Complex z) {
    return density_upper(dist_to_boundary_interval(model, z).lower);
}

double log_chain_bound(double ratio) {
    if (!(ratio >= 0.0 && ratio < 1.0))
        throw DomainError("log chain bound needs a ratio in [0, 1)");
    return -2.0 * std::log1p(-ratio);
}

MetricBound hyp_distance_upper(const MapModel& model, Complex z, Complex w) {
    const double r = std::abs(z - w);
    double value = 0.0;
    for (const Complex base : {z, w}) {
        const double lower = boundary_distance_bounds(model, base).lower;
        if (!(r < lower))
            throw UncertifiedError("segment is not certified inside the Baker domain");
        value = std::max(value, log_chain_bound(r / lower));
    }
    return {BoundKind::DistanceUpper, value,
            "-2 ln(1 - |z-w| / dist(b, dU)), larger over b in {z, w}"};
}

MetricBound hyp_distance_upper_segment(const MapModel& model, Complex z, Complex w,
                                       int pieces) {
    if (pieces < 1) throw DomainError("segment rule needs at least one piece");
    // Fixed endpoint order keeps the sub-segments identical under swapping z and w.
    if (std::make_pair(w.real(), w.imag()) < std::make_pair(z.real(), z.imag()))
        std::swap(z, w);
    const Complex step = (w - z) / static_cast<double>(pieces);
    const double half_len = 0.5 * std::abs(step);
    double integral = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const Complex mid = z + step * (i + 0.5);
        const double lower =
            dist_to_poles(model, mid).to_extended - half_len - model.delta();
        if (!(lower > 0.0))
            throw UncertifiedError("segment is not certified inside the Baker domain");
        integral += 2.0 * (2.0 * half_len) / lower;
    }
    return {BoundKind::DistanceUpper, integral,
            "segment integral of 2 / dist, worst case per piece"};
}

double twice_punctured_density_lower(Complex u) {
    const double a = std::abs(u);
    const double b = std::abs(1.0 - u);
    if (a == 0.0 || b == 0.0) return kInf;
    // Pull back the bound at u / (u - 1) through that Moebius symmetry.
    const double via_ratio = radial_density(a / b) / (b * b);
    return std::max({radial_density(a), radial_density(b), via_ratio});
}

double radial_potential(double s) {
    const double t = std::log(s);
    return std::copysign(std::log1p(std::abs(t) / kTwicePuncturedConstant), t);
}

MetricBound hyp_distance_lower_two_punctures(Complex z, Complex w, Complex p, Complex q) {
    if (p == q) throw DomainError("punctures must be distinct");
    if (z == p || z == q || w == p || w == q)
        throw DomainError("endpoints must avoid the punctures");
    const Complex u = (z - p) / (q - p);
    const Complex v = (w - p) / (q - p);
    const double au = std::abs(u), av = std::abs(v);
    const double bu = std::abs(1.0 - u), bv = std::abs(1.0 - v);
    const double across_0 = std::abs(radial_potential(au) - radial_potential(av));
    const double across_1 = std::abs(radial_potential(bu) - radial_potential(bv));
    const double across_r =
        std::abs(radial_potential(au / bu) - radial_potential(av / bv));
    return {BoundKind::DistanceLower, std::max({across_0, across_1, across_r}),
            "radial sweep of 1/(s(K+|ln s|)) in |u|, |1-u|, |u/(1-u)|"};
}

}  // namespace bakerlab
