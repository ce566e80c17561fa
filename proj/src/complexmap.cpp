#include "bakerlab/complexmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;
constexpr int kMaxTruncationRadius = 1 << 14;

template <typename Fn>
void for_each_pole(PoleCase c, int radius, Fn&& fn) {
    switch (c) {
    case PoleCase::I:
        for (int m = -radius; m <= radius; ++m) fn(Complex(0.0, m), std::abs(m));
        break;
    case PoleCase::II:
        for (int j = -radius; j <= radius; ++j) fn(Complex(j, 0.0), std::abs(j));
        break;
    case PoleCase::IIPlus:
        for (int j = 0; j <= radius; ++j) fn(Complex(j, 0.0), j);
        break;
    case PoleCase::III:
        for (int j = -radius; j <= radius; ++j) {
            const int rest = radius - std::abs(j);
            for (int m = -rest; m <= rest; ++m)
                fn(Complex(j, m), std::abs(j) + std::abs(m));
        }
        break;
    }
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw DomainError("epsilon must lie in (0, 1/2]");
}

void check_decay(double decay) {
    if (!(decay > 0.0 && decay < 1.0))
        throw DomainError("coefficient decay must lie in (0, 1)");
}

Evaluation sum_series(const MapModel& model, Complex z,
                      const std::vector<PoleTerm>& terms, int radius) {
    const double d = dist_to_poles(model, z).to_poles;
    if (!(d > 4.0 * kUnitRoundoff * std::max(1.0, std::abs(z))))
        throw SingularityError("evaluation point lies on a pole");

    // Neumaier compensated sum; per-term rounding is a few ulps of |term|.
    double abs_sum = 0.0;
    auto add = [](double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    };
    // a / w^2 = a conj(w)^2 / |w|^4; each component is within a few ulps of |a / w^2|.
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    for (const auto& term : terms) {
        const double x = z.real() - term.pole.real(), y = z.imag() - term.pole.imag();
        const double n = x * x + y * y;
        const double scale = term.coeff / (n * n);
        add(re, cre, (x - y) * (x + y) * scale);
        add(im, cim, -2.0 * x * y * scale);
        abs_sum += term.coeff / n;
    }
    const Complex value = Complex(re, im) + Complex(cre, cim);
    const double tail = model.coeff_tail(radius) / (d * d);
    const double rounding =
        8.0 * kUnitRoundoff * abs_sum + 2.0 * kUnitRoundoff * std::abs(value);
    return {value, tail + rounding};
}

}  // namespace

std::string_view case_label(PoleCase c) {
    switch (c) {
    case PoleCase::I: return "i";
    case PoleCase::II: return "ii";
    case PoleCase::IIPlus: return "ii+";
    case PoleCase::III: return "iii";
    }
    return "?";
}

PoleCase parse_case(std::string_view label) {
    if (label == "i" || label == "I") return PoleCase::I;
    if (label == "ii" || label == "II") return PoleCase::II;
    if (label == "ii+" || label == "II+") return PoleCase::IIPlus;
    if (label == "iii" || label == "III") return PoleCase::III;
    throw ConfigError("unknown pole case '" + std::string(label) +
                      "' (expected i, ii, ii+ or iii)");
}

BoundInterval::BoundInterval(double lo, double hi) : lower(lo), upper(hi) {
    if (!(lo >= 0.0) || !(hi >= lo))
        throw DomainError("bound interval needs 0 <= lower <= upper");
}

double geometric_normalizer(PoleCase c, double decay) {
    check_decay(decay);
    const double r = decay;
    switch (c) {
    case PoleCase::I:
    case PoleCase::II: return (1.0 + r) / (1.0 - r);
    case PoleCase::IIPlus: return 1.0 / (1.0 - r);
    case PoleCase::III: {
        const double s = (1.0 + r) / (1.0 - r);
        return s * s;
    }
    }
    return 0.0;
}

double geometric_tail(PoleCase c, double decay, int radius) {
    check_decay(decay);
    if (radius < 0) return geometric_normalizer(c, decay);
    const double r = decay;
    const double lead = std::pow(r, radius + 1);
    switch (c) {
    case PoleCase::I:
    case PoleCase::II: return 2.0 * lead / (1.0 - r);
    case PoleCase::IIPlus: return lead / (1.0 - r);
    case PoleCase::III:
        // sum_{m > R} 4 m r^m
        return 4.0 * lead * ((radius + 1) - radius * r) / ((1.0 - r) * (1.0 - r));
    }
    return 0.0;
}

double coefficient_budget(PoleCase c, double epsilon) {
    check_epsilon(epsilon);
    return 0.5 * epsilon / orbit_pole_constant(c, epsilon);
}

double orbit_pole_constant(PoleCase c, double epsilon) {
    check_epsilon(epsilon);
    constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 3.0;  // sum_{k != 0} 1/k^2
    // Case I reuses the lattice constant: its proof is the lattice proof with j = 0.
    const double factor = (c == PoleCase::II || c == PoleCase::IIPlus) ? 16.0 : 64.0;
    return 4.0 / (epsilon * epsilon) + factor / (epsilon * epsilon) * zeta2;
}

double MapModel::coefficient(Complex p) const {
    const double re = p.real(), im = p.imag();
    if (re != std::round(re) || im != std::round(im)) return 0.0;
    bool member = false;
    switch (case_) {
    case PoleCase::I: member = re == 0.0; break;
    case PoleCase::II: member = im == 0.0; break;
    case PoleCase::IIPlus: member = im == 0.0 && re >= 0.0; break;
    case PoleCase::III: member = true; break;
    }
    if (!member) return 0.0;
    return amplitude_ * std::pow(decay_, std::abs(re) + std::abs(im));
}

double MapModel::coeff_tail(int radius) const {
    return amplitude_ * geometric_tail(case_, decay_, radius);
}

MapModel make_model(PoleCase c, double epsilon, double amplitude, double decay,
                    double tail_tol) {
    check_epsilon(epsilon);
    check_decay(decay);
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw DomainError("coefficient amplitude must be finite and >= 0");
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw DomainError("tail tolerance must lie in (0, 1)");

    MapModel m;
    m.case_ = c;
    m.epsilon_ = epsilon;
    m.amplitude_ = amplitude;
    m.decay_ = decay;
    m.tail_tol_ = tail_tol;
    m.normalizer_ = geometric_normalizer(c, decay);

    // Doubling search: the tail mass must be at most half the tolerance of the
    // total mass, so err <= tail_tol * sum|a_p| / dist(z, P)^2 leaves room for rounding.
    int radius = 4;
    while (geometric_tail(c, decay, radius) > 0.5 * tail_tol * m.normalizer_) {
        radius *= 2;
        if (radius > kMaxTruncationRadius)
            throw DomainError("decay too slow for the requested tail tolerance");
    }
    m.radius_ = radius;
    if (amplitude > 0.0) {
        for_each_pole(c, radius, [&](Complex p, int norm1) {
            m.terms_.push_back({p, amplitude * std::pow(decay, norm1)});
        });
    }
    return m;
}

MapModel build_map(PoleCase c, double epsilon, double decay, double safety,
                   double tail_tol) {
    if (!(safety > 0.0 && safety < 1.0))
        throw DomainError("safety factor must lie in (0, 1)");
    const double amplitude =
        safety * coefficient_budget(c, epsilon) / geometric_normalizer(c, decay);
    return make_model(c, epsilon, amplitude, decay, tail_tol);
}

Evaluation eval_e(const MapModel& model, Complex z) {
    return sum_series(model, z, model.terms(), model.truncation_radius());
}

Evaluation eval_e_truncated(const MapModel& model, Complex z, int radius) {
    if (radius < 0) throw DomainError("truncation radius must be >= 0");
    std::vector<PoleTerm> terms;
    if (model.coeff_amplitude() > 0.0) {
        for_each_pole(model.pole_case(), radius, [&](Complex p, int norm1) {
            terms.push_back({p, model.coeff_amplitude() *
                                    std::pow(model.coeff_decay(), norm1)});
        });
    }
    return sum_series(model, z, terms, radius);
}

Evaluation eval_f(const MapModel& model, Complex z) {
    const Evaluation e = eval_e(model, z);
    const Complex value = z + 1.0 + e.value;
    const double rounding =
        2.0 * kUnitRoundoff * (std::abs(z) + 1.0 + std::abs(e.value));
    return {value, e.err + rounding};
}

PoleDistances dist_to_poles(PoleCase c, Complex z) {
    const double x = z.real(), y = z.imag();
    const double rx = std::round(x), ry = std::round(y);
    switch (c) {
    case PoleCase::I: {
        const double to_p = std::hypot(x, y - ry);
        const double to_ext = std::hypot(x - std::min(rx, 0.0), y - ry);
        return {to_p, to_ext};
    }
    case PoleCase::II: {
        const double d = std::hypot(x - rx, y);
        return {d, d};
    }
    case PoleCase::IIPlus:
        return {std::hypot(x - std::max(rx, 0.0), y), std::hypot(x - rx, y)};
    case PoleCase::III: {
        const double d = std::hypot(x - rx, y - ry);
        return {d, d};
    }
    }
    return {0.0, 0.0};
}

BoundInterval dist_to_boundary_interval(const MapModel& model, Complex z) {
    const PoleDistances d = dist_to_poles(model, z);
    if (!(d.to_extended > model.delta()))
        throw UncertifiedError("point is not certified inside the Baker domain");
    return {d.to_extended - model.delta(), d.to_poles};
}

BoundInterval boundary_distance_bounds(const MapModel& model, Complex z) {
    const PoleDistances d = dist_to_poles(model, z);
    return {std::max(0.0, d.to_extended - model.delta()), d.to_poles};
}

std::vector<Complex> poles_in_box(PoleCase c, bool extended, double re_lo,
                                  double re_hi, double im_lo, double im_hi) {
    std::vector<Complex> out;
    const double j0 = std::ceil(re_lo), j1 = std::floor(re_hi);
    const double m0 = std::ceil(im_lo), m1 = std::floor(im_hi);
    if (j0 > j1 || m0 > m1) return out;
    switch (c) {
    case PoleCase::I: {
        // P = iZ sits on Re = 0; P~ adds every lattice column with Re < 0.
        const double hi = std::min(j1, 0.0);
        const double lo = extended ? j0 : std::max(j0, 0.0);
        for (double j = lo; j <= hi; ++j)
            for (double m = m0; m <= m1; ++m) out.emplace_back(j, m);
        break;
    }
    case PoleCase::II:
    case PoleCase::IIPlus: {
        if (m0 > 0.0 || m1 < 0.0) break;
        const double lo = (c == PoleCase::IIPlus && !extended) ? std::max(j0, 0.0) : j0;
        for (double j = lo; j <= j1; ++j) out.emplace_back(j, 0.0);
        break;
    }
    case PoleCase::III:
        for (double j = j0; j <= j1; ++j)
            for (double m = m0; m <= m1; ++m) out.emplace_back(j, m);
        break;
    }
    return out;
}

std::vector<Complex> nearest_poles(PoleCase c, Complex z, std::size_t count) {
    const double reach = dist_to_poles(c, z).to_poles + static_cast<double>(count) + 1.0;
    auto pts = poles_in_box(c, false, z.real() - reach, z.real() + reach,
                            z.imag() - reach, z.imag() + reach);
    std::sort(pts.begin(), pts.end(), [z](Complex a, Complex b) {
        const double da = std::abs(a - z), db = std::abs(b - z);
        if (da != db) return da < db;
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    if (pts.size() > count) pts.resize(count);
    return pts;
}

}  // namespace bakerlab
