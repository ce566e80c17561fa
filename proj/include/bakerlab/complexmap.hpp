#pragma once

// The map family f(z) = z + 1 + e(z), e(z) = sum_p a_p / (z - p)^2, over the
// three pole configurations (imaginary integers, integers, Gaussian integers),
// with certified truncation of the pole series.

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace bakerlab {

using Complex = std::complex<double>;

/// Pole configuration. `IIPlus` is the half-line variant {0, 1, 2, ...} of case II.
enum class PoleCase { I, II, IIPlus, III };

std::string_view case_label(PoleCase c);
PoleCase parse_case(std::string_view label);

/// Certified enclosure [lower, upper] of a nonnegative quantity; upper may be +inf.
struct BoundInterval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();

    BoundInterval() = default;
    BoundInterval(double lo, double hi);

    bool contains(double x) const { return lower <= x && x <= upper; }
    bool finite() const { return upper < std::numeric_limits<double>::infinity(); }
};

struct PoleTerm {
    Complex pole;
    double coeff;
};

/// A fully specified member of the family. Coefficients are a_p = A * r^{|p|_1}.
/// Construct through build_map() or make_model(); the truncated pole table is
/// computed once at construction.
class MapModel {
public:
    PoleCase pole_case() const { return case_; }
    double epsilon() const { return epsilon_; }
    double delta() const { return 2.0 * epsilon_; }
    double coeff_amplitude() const { return amplitude_; }
    double coeff_decay() const { return decay_; }
    double tail_tol() const { return tail_tol_; }

    /// a_p for a point p of the pole set (zero for lattice points outside it).
    double coefficient(Complex p) const;
    /// sum over the whole pole set of |a_p|, closed form.
    double coeff_sum() const { return amplitude_ * normalizer_; }
    /// sum of |a_p| over poles with |p|_1 > radius, closed form.
    double coeff_tail(int radius) const;

    int truncation_radius() const { return radius_; }
    const std::vector<PoleTerm>& terms() const { return terms_; }

    friend MapModel make_model(PoleCase, double, double, double, double);

private:
    MapModel() = default;

    PoleCase case_ = PoleCase::I;
    double epsilon_ = 0.1;
    double amplitude_ = 0.0;
    double decay_ = 0.25;
    double tail_tol_ = 1e-14;
    double normalizer_ = 1.0;
    int radius_ = 0;
    std::vector<PoleTerm> terms_;
};

/// Sum_{p} r^{|p|_1} over the pole set of `c`.
double geometric_normalizer(PoleCase c, double decay);

/// Sum over poles with |p|_1 > radius of r^{|p|_1}.
double geometric_tail(PoleCase c, double decay, int radius);

/// Largest admissible sum_p |a_p| keeping the orbit perturbation sum below eps/2.
/// Throws DomainError unless 0 < epsilon <= 1/2.
double coefficient_budget(PoleCase c, double epsilon);

/// Per-pole bound on sum_k 1/|z_k - p|^2 along an orbit with drift < eps/2
/// started at distance >= eps from the extended pole set.
double orbit_pole_constant(PoleCase c, double epsilon);

/// Model with amplitude chosen as safety * budget / normalizer.
MapModel build_map(PoleCase c, double epsilon, double decay, double safety,
                   double tail_tol = 1e-14);

/// Model with an explicit amplitude (zero gives the pure translation z + 1).
MapModel make_model(PoleCase c, double epsilon, double amplitude, double decay,
                    double tail_tol = 1e-14);

struct Evaluation {
    Complex value;
    double err = 0.0;
};

/// e(z) with a certified absolute error bound. Throws SingularityError at a pole.
Evaluation eval_e(const MapModel& model, Complex z);

/// e(z) truncated to poles with |p|_1 <= radius; err bounds the distance to the full series.
Evaluation eval_e_truncated(const MapModel& model, Complex z, int radius);

/// f(z) = z + 1 + e(z).
Evaluation eval_f(const MapModel& model, Complex z);

struct PoleDistances {
    double to_poles;     // dist(z, P)
    double to_extended;  // dist(z, P~), P~ = union over j >= 0 of (P - j)
};

PoleDistances dist_to_poles(PoleCase c, Complex z);
inline PoleDistances dist_to_poles(const MapModel& m, Complex z) {
    return dist_to_poles(m.pole_case(), z);
}

/// Enclosure of dist(z, dU) for z certified inside U (dist(z, P~) > delta).
/// Throws UncertifiedError otherwise.
BoundInterval dist_to_boundary_interval(const MapModel& model, Complex z);

/// Same enclosure for a point already known to lie in U (e.g. an orbit point of
/// a certified seed); the lower end clamps to 0 instead of throwing.
BoundInterval boundary_distance_bounds(const MapModel& model, Complex z);

/// Points of P (extended = false) or P~ (extended = true) in the closed box.
std::vector<Complex> poles_in_box(PoleCase c, bool extended, double re_lo,
                                  double re_hi, double im_lo, double im_hi);

/// The `count` points of P nearest to z, closest first.
std::vector<Complex> nearest_poles(PoleCase c, Complex z, std::size_t count);

}  // namespace bakerlab
