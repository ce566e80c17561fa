#include "bakerlab/loops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
    double re_lo = kInf, re_hi = -kInf, im_lo = kInf, im_hi = -kInf;

    void add(Complex z) {
        re_lo = std::min(re_lo, z.real());
        re_hi = std::max(re_hi, z.real());
        im_lo = std::min(im_lo, z.imag());
        im_hi = std::max(im_hi, z.imag());
    }
};

Box bounding_box(const LoopPath& loop) {
    Box b;
    for (const Complex v : loop.vertices) b.add(v);
    return b;
}

double segment_distance(Complex a, Complex b, Complex v) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(v - a);
    const double t = std::clamp(((v - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(v - (a + t * ab));
}

Evaluation guarded_f(const MapModel& model, Complex z) {
    if (dist_to_poles(model, z).to_poles < 0.5 * model.epsilon())
        throw UncertifiedError("loop vertex within eps/2 of a pole");
    return eval_f(model, z);
}

std::vector<PoleWinding> windings_in_box(const MapModel& model, const LoopPath& loop,
                                         const Box& box) {
    std::vector<PoleWinding> out;
    for (const Complex p : poles_in_box(model.pole_case(), true, box.re_lo - 1.0,
                                        box.re_hi + 1.0, box.im_lo - 1.0,
                                        box.im_hi + 1.0))
        out.push_back({p, winding(loop, p)});
    return out;
}

}  // namespace

LoopPath square_loop(Complex center, double half_side, double max_gap) {
    if (!(half_side > 0.0) || !(max_gap > 0.0))
        throw DomainError("square loop needs positive half side and gap");
    const double h = half_side;
    return {{center + Complex(h, -h), center + Complex(h, h), center + Complex(-h, h),
             center + Complex(-h, -h)},
            max_gap};
}

LoopPath reversed(const LoopPath& loop) {
    LoopPath out = loop;
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
}

LoopPath refine_loop(const MapModel& model, const LoopPath& loop) {
    if (loop.vertices.size() < 2) throw DomainError("loop needs at least two vertices");
    const double gap = loop.max_gap;
    if (!(gap > 0.0)) throw DomainError("loop max_gap must be positive");

    const std::size_t n = loop.vertices.size();
    std::vector<Complex> images(n);
    for (std::size_t i = 0; i < n; ++i) images[i] = guarded_f(model, loop.vertices[i]).value;

    LoopPath out{{}, gap};
    struct Piece {
        Complex a, fa, b, fb;
    };
    std::vector<Piece> stack;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        stack.push_back({loop.vertices[i], images[i], loop.vertices[j], images[j]});
        // Depth-first, left half on top, so vertices come out in order.
        while (!stack.empty()) {
            const Piece p = stack.back();
            stack.pop_back();
            if (std::abs(p.b - p.a) <= gap && std::abs(p.fb - p.fa) <= gap) {
                out.vertices.push_back(p.a);
                if (out.vertices.size() > kMaxLoopVertices)
                    throw AmbiguityError("loop refinement exceeded the vertex cap");
                continue;
            }
            const Complex m = 0.5 * (p.a + p.b);
            const Complex fm = guarded_f(model, m).value;
            stack.push_back({m, fm, p.b, p.fb});
            stack.push_back({p.a, p.fa, m, fm});
        }
    }
    return out;
}

LoopPath push_forward(const MapModel& model, const LoopPath& loop) {
    LoopPath refined = refine_loop(model, loop);
    for (Complex& v : refined.vertices) v = guarded_f(model, v).value;
    return refined;
}

LoopPath push_forward(const MapModel& model, const LoopPath& loop, int times) {
    if (times < 0) throw DomainError("push count must be >= 0");
    LoopPath out = loop;
    for (int i = 0; i < times; ++i) out = push_forward(model, out);
    return out;
}

double distance_to_polyline(const LoopPath& loop, Complex v) {
    double best = kInf;
    const std::size_t n = loop.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best,
                        segment_distance(loop.vertices[i], loop.vertices[(i + 1) % n], v));
    return best;
}

int winding(const LoopPath& loop, Complex v) {
    if (loop.vertices.size() < 2) throw DomainError("loop needs at least two vertices");
    if (distance_to_polyline(loop, v) < loop.max_gap)
        throw AmbiguityError("point too close to the loop for a winding number");
    double total = 0.0;
    const std::size_t n = loop.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
        total += std::arg((loop.vertices[(i + 1) % n] - v) / (loop.vertices[i] - v));
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

int WindingReport::winding_about(Complex pole) const {
    for (const auto& w : windings)
        if (w.pole == pole) return w.winding;
    return 0;
}

WindingReport contractibility(const MapModel& model, const LoopPath& loop) {
    WindingReport report;
    double clearance = kInf;
    const std::size_t n = loop.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = loop.vertices[i], b = loop.vertices[(i + 1) % n];
        const double lower =
            dist_to_poles(model, 0.5 * (a + b)).to_extended - 0.5 * std::abs(b - a);
        clearance = std::min(clearance, lower);
    }
    report.clearance = std::max(0.0, clearance);
    report.certified = clearance > model.delta();

    const Box box = bounding_box(loop);
    for (const Complex p : poles_in_box(model.pole_case(), true, box.re_lo - 1.0,
                                        box.re_hi + 1.0, box.im_lo - 1.0,
                                        box.im_hi + 1.0)) {
        try {
            report.windings.push_back({p, winding(loop, p)});
        } catch (const AmbiguityError&) {
            report.certified = false;
        }
    }
    report.contractible =
        report.certified && std::all_of(report.windings.begin(), report.windings.end(),
                                        [](const PoleWinding& w) { return w.winding == 0; });
    return report;
}

PersistenceReport persistence_check(const MapModel& model, const LoopPath& loop, int n_max) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    PersistenceReport report;
    LoopPath current = loop;
    for (int n = 0; n <= n_max; ++n) {
        LoopPath refined = refine_loop(model, current);
        LoopPath next{{}, refined.max_gap};
        next.vertices.reserve(refined.vertices.size());

        PersistenceStep step;
        step.n = n;
        step.vertices = refined.vertices.size();
        for (const Complex z : refined.vertices) {
            const Evaluation fz = guarded_f(model, z);
            next.vertices.push_back(fz.value);
            const double lower = boundary_distance_bounds(model, z).lower;
            if (!(std::abs(fz.value - z) + fz.err < 0.5 * lower)) ++step.failing_vertices;
        }
        step.condition_holds = step.failing_vertices == 0;
        if (step.condition_holds) {
            ++report.certified_steps;
            Box box = bounding_box(refined);
            for (const Complex v : next.vertices) box.add(v);
            step.windings = windings_in_box(model, refined, box);
            step.next_windings = windings_in_box(model, next, box);
            for (std::size_t i = 0; i < step.windings.size(); ++i)
                if (step.windings[i].winding != step.next_windings[i].winding)
                    step.windings_preserved = false;
            if (!step.windings_preserved) ++report.violations;
        }
        report.steps.push_back(std::move(step));
        current = std::move(next);
    }
    for (int n = n_max; n >= 0 && report.steps[n].condition_holds; --n)
        report.stable_from = n;
    return report;
}

}  // namespace bakerlab
