// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bakerlab/classifier.hpp"
#include "bakerlab/complexmap.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/experiment.hpp"
#include "bakerlab/hypmetric.hpp"
#include "bakerlab/loops.hpp"
#include "bakerlab/orbit.hpp"
#include "bakerlab/parallel.hpp"
#include "oracles.hpp"

using namespace bakerlab;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

MapModel default_model(PoleCase c) { return build_map(c, 0.1, 0.25, 0.9); }

std::vector<Complex> random_seeds(const MapModel& m, std::size_t count, std::uint64_t seed,
                                  double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Complex> out;
    while (out.size() < count) {
        const Complex z(u(rng), u(rng));
        if (dist_to_poles(m, z).to_extended >= 2.0 * m.epsilon()) out.push_back(z);
    }
    return out;
}

void budgets() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double eps : {0.05, 0.1, 0.2, 0.5}) {
        const double b2 = oracle::budget(eps, 16.0), b3 = oracle::budget(eps, 64.0);
        worst = std::max({worst, std::abs(coefficient_budget(PoleCase::II, eps) / b2 - 1.0),
                          std::abs(coefficient_budget(PoleCase::IIPlus, eps) / b2 - 1.0),
                          std::abs(coefficient_budget(PoleCase::I, eps) / b3 - 1.0),
                          std::abs(coefficient_budget(PoleCase::III, eps) / b3 - 1.0)});
    }
    const double t = seconds_since(t0);
    report("budget closed forms", worst < 1e-9 && t < 1.0,
           "max relative deviation " + fmt("%.3g", worst) + ", " + fmt("%.3f s", t));
}

void drift_certification() {
    const auto t0 = Clock::now();
    for (PoleCase c : {PoleCase::I, PoleCase::II, PoleCase::IIPlus, PoleCase::III}) {
        const MapModel m = default_model(c);
        const auto seeds = random_seeds(m, 100, 1000 + static_cast<int>(c), -6.0, 6.0);
        std::vector<DriftCertificate> certs(seeds.size());
        std::vector<double> max_drift(seeds.size());
        parallel_for(seeds.size(), [&](std::size_t i) {
            const Orbit o = iterate(m, seeds[i], 10000);
            certs[i] = certify_drift(o, m);
            for (const Complex d : o.drift) max_drift[i] = std::max(max_drift[i], std::abs(d));
        });
        bool ok = true;
        double margin = 1.0, drift = 0.0;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            ok = ok && certs[i].passed && certs[i].worst_margin > 0.0;
            margin = std::min(margin, certs[i].worst_margin);
            drift = std::max(drift, max_drift[i]);
        }
        report(std::string("drift certification case ") + std::string(case_label(c)),
               ok && drift < 0.5 * m.epsilon(),
               "100 seeds x 1e4 steps, max |drift| " + fmt("%.3e", drift) +
                   ", min margin " + fmt("%.6f", margin));
    }
    const double t = seconds_since(t0);
    report("drift certification runtime", t < 60.0, fmt("%.2f s", t));
}

void abel() {
    const auto t0 = Clock::now();
    const MapModel m = default_model(PoleCase::I);
    const auto seeds = random_seeds(m, 100, 77, -6.0, 6.0);
    // Each value is certified to 4e-10, so the residual is certified below 1e-9
    // even before comparing the computed numbers.
    constexpr double tol = 4e-10;
    std::vector<double> residual(seeds.size()), certified(seeds.size());
    std::vector<std::string> errors(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        try {
            const AbelValue a = abel_function(m, seeds[i], tol);
            const AbelValue b = abel_function(m, eval_f(m, seeds[i]).value, tol);
            residual[i] = std::abs(b.value - a.value - 1.0);
            certified[i] = residual[i] + a.tail_bound + b.tail_bound;
        } catch (const Error& e) {
            errors[i] = e.what();
            residual[i] = certified[i] = INFINITY;
        }
    });
    double worst = 0.0, worst_certified = 0.0;
    std::string error;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (error.empty()) error = errors[i];
        worst = std::max(worst, residual[i]);
        worst_certified = std::max(worst_certified, certified[i]);
    }
    const double t = seconds_since(t0);
    report("Abel equation case i", worst < 1e-9 && worst_certified < 1e-9 && t < 30.0,
           "100 seeds, max residual " + fmt("%.3e", worst) + " (certified " +
               fmt("%.3e", worst_certified) + "), " + fmt("%.2f s", t) +
               (error.empty() ? "" : ", error: " + error));
}

void case_one() {
    const MapModel m = default_model(PoleCase::I);
    const Orbit o = iterate(m, Complex(1.0, 0.0), 1001);
    const auto s = step_ratio_series(m, o);
    bool ok = true;
    double worst = 0.0;
    for (std::size_t n = 10; n <= 1000; ++n) {
        ok = ok && s[n].upper < 2.0 / n;
        worst = std::max(worst, s[n].upper * n / 2.0);
    }
    const std::vector<Complex> seeds{{1.0, 0.0}, {2.0, 1.0}};
    const TypeVerdict v = classify(m, seeds, 1000, default_thresholds(1000));
    report("case i ratios and verdict", ok && v.verdict == Verdict::ParabolicI,
           "max n*upper(s_n)/2 = " + fmt("%.4f", worst) + ", verdict " +
               std::string(verdict_label(v.verdict)));
}

void case_two() {
    const MapModel m = default_model(PoleCase::II);
    bool inside = true;
    std::vector<Complex> seeds;
    for (int k = 1; k <= 20; ++k) {
        seeds.emplace_back(0.0, k);
        const Orbit o = iterate(m, seeds.back(), 1001);
        for (const BoundInterval& b : step_ratio_series(m, o))
            inside = inside && b.lower > 1.0 / (4.0 * k) && b.upper < 4.0 / k;
    }
    const TypeVerdict v = classify(m, seeds, 1000, default_thresholds(1000));
    const double first = v.evidence.front().late_max_upper;
    const double last = v.evidence.back().late_max_upper;
    report("case ii ratio enclosures", inside, "all s_n in (1/(4k), 4/k), k = 1..20, n <= 1000");
    report("case ii decay over seeds", last < 0.25 * first,
           "late-window max upper: k=1 " + fmt("%.4f", first) + ", k=20 " + fmt("%.4f", last) +
               "; verdict " + std::string(verdict_label(v.verdict)));
}

void case_three() {
    const MapModel m = default_model(PoleCase::III);
    std::vector<Complex> cell;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            const Complex z((i + 0.5) / 32, (j + 0.5) / 32);
            if (dist_to_poles(m, z).to_extended > m.delta()) cell.push_back(z);
        }
    std::vector<double> min_lower(cell.size());
    parallel_for(cell.size(), [&](std::size_t i) {
        double lo = INFINITY;
        for (const BoundInterval& b : step_ratio_series(m, iterate(m, cell[i], 1001)))
            lo = std::min(lo, b.lower);
        min_lower[i] = lo;
    });
    double lo = INFINITY;
    for (double x : min_lower) lo = std::min(lo, x);
    const OneStepReport one = hyperbolic_one_step_test(m, cell);
    std::vector<Complex> grid;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const Complex z((i + 0.5) / 8, (j + 0.5) / 8);
            if (dist_to_poles(m, z).to_extended > m.delta()) grid.push_back(z);
        }
    const TypeVerdict v = classify(m, grid, 1000, default_thresholds(1000));
    report("case iii ratio floor", lo > 0.5,
           std::to_string(cell.size()) + " cell samples, min lower(s_n) " + fmt("%.4f", lo));
    report("case iii one-step bound", one.min_lower > 0.0, "min " + fmt("%.4g", one.min_lower));
    report("case iii verdict", v.verdict == Verdict::Hyperbolic,
           std::string(verdict_label(v.verdict)));
}

void loop_discrimination() {
    for (PoleCase c : {PoleCase::II, PoleCase::III}) {
        const MapModel m = default_model(c);
        LoopPath loop = refine_loop(m, square_loop(0.0, 0.5, 0.05));
        bool ok = true;
        for (int n = 1; n <= 20; ++n) {
            loop = push_forward(m, loop);
            const WindingReport r = contractibility(m, loop);
            ok = ok && r.winding_about(Complex(n, 0.0)) == 1 && !r.contractible;
        }
        report(std::string("loop discrimination case ") + std::string(case_label(c)), ok,
               "f^n(dQ0) winds once around pole n, not contractible, n = 1..20");
    }
    const MapModel m = default_model(PoleCase::I);
    LoopPath loop = refine_loop(m, square_loop(0.0, 0.5, 0.05));
    std::optional<int> contractible_from;
    for (int n = 0; n <= 20; ++n) {
        if (n > 0) loop = push_forward(m, loop);
        if (!contractibility(m, loop).contractible) contractible_from.reset();
        else if (!contractible_from) contractible_from = n;
    }
    const PersistenceReport p = persistence_check(m, square_loop(0.0, 0.5, 0.05), 20);
    const int n0 = std::max(contractible_from.value_or(99), p.stable_from.value_or(99));
    report("loop discrimination case i", n0 <= 10 && p.violations == 0,
           "contractible from n = " +
               (contractible_from ? std::to_string(*contractible_from) : std::string("-")) +
               ", persistence stable from n = " +
               (p.stable_from ? std::to_string(*p.stable_from) : std::string("-")) +
               ", n0 = " + std::to_string(n0));
}

void winding_persistence() {
    std::size_t certified = 0, violations = 0, loops = 0;
    std::mt19937_64 rng(404);
    for (PoleCase c : {PoleCase::I, PoleCase::II, PoleCase::IIPlus, PoleCase::III}) {
        const MapModel m = default_model(c);
        std::vector<LoopPath> tested{square_loop(0.0, 0.5, 0.05)};
        std::uniform_real_distribution<double> u(-4.0, 4.0), h(0.2, 1.5);
        while (tested.size() < 6) {
            const Complex center(u(rng), u(rng));
            const double half = h(rng);
            const LoopPath sq = square_loop(center, half, 0.05);
            bool clear = true;
            for (std::size_t i = 0; i < 4; ++i)
                clear = clear && dist_to_poles(m, sq.vertices[i]).to_poles > m.epsilon();
            if (clear && dist_to_poles(m, center + Complex(half, 0.0)).to_poles > m.epsilon() &&
                dist_to_poles(m, center - Complex(half, 0.0)).to_poles > m.epsilon())
                tested.push_back(sq);
        }
        for (const LoopPath& l : tested) {
            try {
                const PersistenceReport r = persistence_check(m, l, 20);
                certified += r.certified_steps;
                violations += r.violations;
                ++loops;
            } catch (const Error&) {
                // A side that runs into a pole cannot be pushed; not a tested loop.
            }
        }
    }
    report("winding persistence", violations == 0 && certified > 0,
           std::to_string(loops) + " loops, " + std::to_string(certified) +
               " certified steps, " + std::to_string(violations) + " violations");
}

void absorbing() {
    const MapModel m = default_model(PoleCase::I);
    const std::vector<SquareRegion> squares{
        {{-2.5, 0.5}, 0.2}, {{0.5, 3.5}, 0.2}, {{4.5, -2.5}, 0.2}};
    const auto samples = sample_squares(m, squares, 50, 20240601);
    const auto results = half_plane_absorption(m, samples, 1.0, 1000);
    std::size_t good = 0;
    std::size_t latest = 0;
    for (const auto& r : results) {
        if (r.entered_at && !r.left_after_entry) ++good;
        if (r.entered_at) latest = std::max(latest, *r.entered_at);
    }
    report("absorbing half-plane case i", good == results.size() && results.size() == 150,
           std::to_string(good) + "/" + std::to_string(results.size()) +
               " samples enter Re > 1 and stay for 1000 steps, latest entry n = " +
               std::to_string(latest));
}

void metric_consistency() {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(-5.0, 5.0), d(-0.4, 0.4);
    std::size_t segments = 0, violations = 0;
    const PoleCase cases[] = {PoleCase::I, PoleCase::II, PoleCase::III};
    while (segments < 1000) {
        const MapModel m = default_model(cases[segments % 3]);
        const Complex z(u(rng), u(rng)), w = z + Complex(d(rng), d(rng));
        if (!(dist_to_poles(m, z).to_extended > m.delta()) ||
            !(dist_to_poles(m, w).to_extended > m.delta()))
            continue;
        double upper = 0.0;
        try {
            upper = hyp_distance_upper(m, z, w).value;
        } catch (const UncertifiedError&) {
            continue;
        }
        ++segments;
        const double r = std::abs(z - w);
        for (const Complex b : {z, w}) {
            const double far = dist_to_boundary_interval(m, b).upper;
            if (!(1.0 - std::exp(-upper / 2.0) >= r / far)) ++violations;
        }
    }
    report("metric bound consistency", violations == 0,
           std::to_string(segments) + " certified segments, " + std::to_string(violations) +
               " violations");
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void()>> stages[] = {
        {"budgets", budgets},
        {"drift", drift_certification},
        {"abel", abel},
        {"case i", case_one},
        {"case ii", case_two},
        {"case iii", case_three},
        {"loops", loop_discrimination},
        {"persistence", winding_persistence},
        {"absorbing", absorbing},
        {"metric", metric_consistency},
    };
    for (const auto& [name, run] : stages) {
        try {
            run();
        } catch (const std::exception& e) {
            report(name, false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
