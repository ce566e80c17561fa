#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bakerlab/complexmap.hpp"
#include "bakerlab/errors.hpp"
#include "oracles.hpp"

using namespace bakerlab;

namespace {

oracle::Poles oracle_kind(PoleCase c) {
    switch (c) {
    case PoleCase::I: return oracle::Poles::ImagAxis;
    case PoleCase::II: return oracle::Poles::Integers;
    case PoleCase::IIPlus: return oracle::Poles::HalfIntegers;
    case PoleCase::III: return oracle::Poles::Lattice;
    }
    return oracle::Poles::Integers;
}

constexpr PoleCase kCases[] = {PoleCase::I, PoleCase::II, PoleCase::IIPlus, PoleCase::III};

}  // namespace

TEST_SUITE("complexmap") {

TEST_CASE("budget examples against partial-sum oracle") {
    CHECK(std::abs(coefficient_budget(PoleCase::II, 0.1) - 8.8280e-6) < 1e-9);
    CHECK(std::abs(coefficient_budget(PoleCase::III, 0.1) - 2.3305e-6) < 1e-9);
    for (double eps : {0.05, 0.1, 0.2, 0.5}) {
        const double b2 = oracle::budget(eps, 16.0);
        const double b3 = oracle::budget(eps, 64.0);
        CHECK(std::abs(coefficient_budget(PoleCase::II, eps) / b2 - 1.0) < 1e-9);
        CHECK(std::abs(coefficient_budget(PoleCase::IIPlus, eps) / b2 - 1.0) < 1e-9);
        CHECK(std::abs(coefficient_budget(PoleCase::I, eps) / b3 - 1.0) < 1e-9);
        CHECK(std::abs(coefficient_budget(PoleCase::III, eps) / b3 - 1.0) < 1e-9);
    }
}

TEST_CASE("budget shrinks monotonically to zero and rejects bad epsilon") {
    double prev = coefficient_budget(PoleCase::II, 0.5);
    for (double eps = 0.4; eps > 1e-4; eps *= 0.8) {
        const double b = coefficient_budget(PoleCase::II, eps);
        CHECK(b < prev);
        prev = b;
    }
    CHECK(prev < 1e-12);
    CHECK_THROWS_AS(coefficient_budget(PoleCase::II, 0.0), DomainError);
    CHECK_THROWS_AS(coefficient_budget(PoleCase::II, 0.6), DomainError);
    CHECK_THROWS_AS(coefficient_budget(PoleCase::II, std::nan("")), DomainError);
}

TEST_CASE("build_map spends the requested fraction of the budget") {
    const MapModel m = build_map(PoleCase::II, 0.1, 0.25, 0.9);
    CHECK(m.coeff_sum() == doctest::Approx(0.9 * coefficient_budget(PoleCase::II, 0.1)));
    CHECK_THROWS_AS(build_map(PoleCase::II, 0.1, 0.25, 1.0), DomainError);
    CHECK_THROWS_AS(build_map(PoleCase::II, 0.1, 1.0, 0.5), DomainError);
}

TEST_CASE("normalizers agree with direct summation") {
    CHECK(geometric_normalizer(PoleCase::II, 0.25) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    for (PoleCase c : kCases) {
        for (double r : {0.1, 0.25, 0.5}) {
            double direct = 0.0;
            for (const auto& [p, a] : oracle::pole_list(oracle_kind(c), 1.0, r, 120)) direct += a;
            CHECK(geometric_normalizer(c, r) == doctest::Approx(direct).epsilon(1e-13));
            for (int radius : {0, 3, 10}) {
                double tail = 0.0;
                for (const auto& [p, a] : oracle::pole_list(oracle_kind(c), 1.0, r, 120))
                    if (std::abs(p.real()) + std::abs(p.imag()) > radius) tail += a;
                CHECK(geometric_tail(c, r, radius) == doctest::Approx(tail).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("coefficients are symmetric in the imaginary direction") {
    const MapModel m = build_map(PoleCase::I, 0.1, 0.25, 0.9);
    for (int k = 0; k < 20; ++k)
        CHECK(m.coefficient(Complex(0, k)) == m.coefficient(Complex(0, -k)));
    CHECK(m.coefficient(Complex(1, 0)) == 0.0);
}

TEST_CASE("e at 1/2 in case II: real and equal to the brute-force sum") {
    const MapModel m = build_map(PoleCase::II, 0.1, 0.25, 0.9);
    const Evaluation e = eval_e(m, Complex(0.5, 0.0));
    CHECK(e.value.imag() == 0.0);
    const auto poles = oracle::pole_list(oracle::Poles::Integers, m.coeff_amplitude(), 0.25, 10000);
    const Complex ref = oracle::series(poles, Complex(0.5, 0.0));
    CHECK(std::abs(e.value - ref) <= e.err + 4e-16 * std::abs(ref));
    CHECK(e.err > 0.0);
}

TEST_CASE("error bound is sound: truncation at R versus 2R") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (PoleCase c : kCases) {
        const MapModel m = build_map(c, 0.1, 0.25, 0.9);
        const int r = m.truncation_radius();
        int checked = 0;
        while (checked < 250) {
            const Complex z(u(rng), u(rng));
            if (dist_to_poles(m, z).to_poles < 0.05) continue;
            const Evaluation a = eval_e_truncated(m, z, r);
            const Evaluation b = eval_e_truncated(m, z, 2 * r);
            CHECK(std::abs(a.value - b.value) <= a.err + b.err);
            ++checked;
        }
    }
}

TEST_CASE("far-field decay of e") {
    for (PoleCase c : kCases) {
        const MapModel m = build_map(c, 0.1, 0.25, 0.9);
        const double cap = m.coeff_sum() / std::pow(0.05, 2);
        const double near = std::abs(eval_e(m, Complex(1e3, 0.5)).value);
        const double far = std::abs(eval_e(m, Complex(1e6, 0.5)).value);
        CHECK(near <= cap);
        CHECK(far < near);
        CHECK(far < 1e-10);
    }
}

TEST_CASE("f: translation limit, case I at 1, reflection symmetry") {
    const MapModel zero = make_model(PoleCase::III, 0.1, 0.0, 0.25);
    CHECK(eval_f(zero, Complex(0.3, 0.7)).value == Complex(1.3, 0.7));

    const MapModel m1 = build_map(PoleCase::I, 0.1, 0.25, 0.9);
    const Evaluation f1 = eval_f(m1, Complex(1.0, 0.0));
    CHECK(std::abs(f1.value - 2.0) + f1.err < 0.05);

    const MapModel m2 = build_map(PoleCase::II, 0.1, 0.25, 0.9);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z(u(rng), u(rng));
        if (dist_to_poles(m2, z).to_poles < 0.05) continue;
        const Complex a = eval_f(m2, std::conj(z)).value, b = std::conj(eval_f(m2, z).value);
        CHECK(std::abs(a - b) <= 1e-15 * std::abs(b));
    }
}

TEST_CASE("evaluation at a pole raises") {
    const MapModel m = build_map(PoleCase::III, 0.1, 0.25, 0.9);
    CHECK_THROWS_AS(eval_e(m, Complex(2.0, -1.0)), SingularityError);
}

TEST_CASE("distance examples") {
    CHECK(dist_to_poles(PoleCase::III, Complex(0.5, 0.5)).to_poles ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    // P~ in case I is {-j + i m}: everything with Re <= 0 on the integer lattice.
    CHECK(dist_to_poles(PoleCase::I, Complex(3.25, 0.0)).to_extended == doctest::Approx(3.25));
    CHECK(dist_to_poles(PoleCase::I, Complex(3.25, 0.0)).to_poles == doctest::Approx(3.25));
    const auto d2 = dist_to_poles(PoleCase::II, Complex(-7.5, 4.0));
    CHECK(d2.to_poles == doctest::Approx(std::hypot(0.5, 4.0)).epsilon(1e-15));
    CHECK(d2.to_extended == d2.to_poles);
    CHECK(d2.to_poles == doctest::Approx(4.0311288741).epsilon(1e-10));
    // Half-line: P = {0,1,...}, but P~ is all of Z.
    const auto dp = dist_to_poles(PoleCase::IIPlus, Complex(-3.0, 0.5));
    CHECK(dp.to_poles == doctest::Approx(std::hypot(3.0, 0.5)));
    CHECK(dp.to_extended == doctest::Approx(0.5));
}

TEST_CASE("closed-form distances match a finite search") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (PoleCase c : kCases) {
        const auto near = oracle::pole_list(oracle_kind(c), 1.0, 0.5, 40);
        for (int i = 0; i < 300; ++i) {
            const Complex z(u(rng), u(rng));
            double dp = 1e300, dt = 1e300;
            for (const auto& [p, a] : near) {
                dp = std::min(dp, std::abs(z - p));
                for (int j = 0; j <= 40; ++j) dt = std::min(dt, std::abs(z - (p - double(j))));
            }
            const auto d = dist_to_poles(c, z);
            CHECK(d.to_poles == doctest::Approx(dp).epsilon(1e-14));
            CHECK(d.to_extended == doctest::Approx(dt).epsilon(1e-14));
        }
    }
}

TEST_CASE("boundary distance enclosures") {
    const MapModel m2 = build_map(PoleCase::II, 0.1, 0.25, 0.9);
    for (int k = 1; k <= 30; ++k) {
        const BoundInterval b = dist_to_boundary_interval(m2, Complex(0.0, k));
        CHECK(b.lower > k / 2.0);
        CHECK(b.upper < 2.0 * k);
    }
    const MapModel m3 = build_map(PoleCase::III, 0.1, 0.25, 0.9);
    for (const Complex on_circle : {Complex(0.2, 0.0), Complex(0.0, -0.2), Complex(-0.2, 0.0)}) {
        CHECK(boundary_distance_bounds(m3, on_circle).lower == 0.0);
        CHECK_THROWS_AS(dist_to_boundary_interval(m3, on_circle), UncertifiedError);
    }

    const MapModel m1 = build_map(PoleCase::I, 0.1, 0.25, 0.9);
    const BoundInterval b = dist_to_boundary_interval(m1, Complex(10.5, 0.0));
    CHECK(b.lower >= 10.0 - 2.5 * 0.1);
    CHECK(b.lower > 9.0);
    CHECK_THROWS_AS(BoundInterval(2.0, 1.0), DomainError);
}

TEST_CASE("pole enumeration helpers") {
    const auto box = poles_in_box(PoleCase::I, false, -2.0, 2.0, -1.5, 1.5);
    CHECK(box.size() == 3);
    CHECK(poles_in_box(PoleCase::I, true, -2.0, 2.0, -1.5, 1.5).size() == 9);
    CHECK(poles_in_box(PoleCase::III, true, -1.0, 1.0, -1.0, 1.0).size() == 9);
    CHECK(poles_in_box(PoleCase::IIPlus, false, -3.0, 3.0, -1.0, 1.0).size() == 4);
    const auto n = nearest_poles(PoleCase::III, Complex(0.2, 0.1), 2);
    REQUIRE(n.size() == 2);
    CHECK(n[0] == Complex(0.0, 0.0));
    CHECK(n[1] == Complex(1.0, 0.0));
}

TEST_CASE("case labels round-trip") {
    for (PoleCase c : kCases) CHECK(parse_case(case_label(c)) == c);
    CHECK_THROWS_AS(parse_case("iv"), ConfigError);
}

}  // TEST_SUITE
