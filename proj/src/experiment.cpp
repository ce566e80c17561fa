#include "bakerlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bakerlab/errors.hpp"
#include "bakerlab/hypmetric.hpp"
#include "bakerlab/orbit.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"model", {"case", "epsilon", "decay", "safety", "tail_tol"}},
        {"orbit", {"seeds", "steps"}},
        {"classify", {"tau_zero", "tau_pos"}},
        {"abel", {"tol"}},
        {"loop", {"center", "half_side", "max_gap", "n_max"}},
        {"absorb", {"squares", "samples", "threshold", "steps", "rng_seed"}},
        {"render", {"enabled", "viewport", "width", "height"}},
        {"output", {"dir", "orbit_csv", "verdict_json", "loop_json", "persist_json",
                    "abel_json", "render_ppm"}},
    };
    return keys;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + text + "'");
}

long long to_integer(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
}

bool to_bool(const std::string& text, const std::string& key) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + text + "'");
}

std::vector<double> to_numbers(const std::string& text, const std::string& key,
                               std::size_t count) {
    const auto parts = split(text, ',');
    if (parts.size() != count)
        throw ConfigError(key + ": expected " + std::to_string(count) +
                          " comma-separated numbers, got '" + text + "'");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(to_double(p, key));
    return out;
}

Complex to_complex(const std::string& text, const std::string& key) {
    const auto v = to_numbers(text, key, 2);
    return {v[0], v[1]};
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json windings_json(const std::vector<PoleWinding>& windings) {
    json out = json::array();
    for (const auto& w : windings)
        out.push_back({{"re", w.pole.real()}, {"im", w.pole.imag()}, {"winding", w.winding}});
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << text;
    if (!file) throw IoError("failed writing " + path.string());
}

std::vector<Complex> cell_grid(const MapModel& model, int per_side) {
    std::vector<Complex> out;
    for (int i = 0; i < per_side; ++i)
        for (int j = 0; j < per_side; ++j) {
            const Complex z((i + 0.5) / per_side, (j + 0.5) / per_side);
            if (dist_to_poles(model, z).to_extended > model.delta()) out.push_back(z);
        }
    return out;
}

}  // namespace

Thresholds ExperimentConfig::thresholds() const {
    Thresholds t = default_thresholds(steps);
    if (tau_zero) t.tau_zero = *tau_zero;
    t.tau_pos = tau_pos;
    return t;
}

ExperimentConfig parse_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    ExperimentConfig c;
    for (const auto& [section, body] : tree) {
        const auto known = allowed_keys().find(section);
        if (known == allowed_keys().end()) {
            if (body.empty())
                throw ConfigError("key outside any section: '" + section + "'");
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [name, node] : body) {
            if (!known->second.contains(name))
                throw ConfigError("unknown key '" + name + "' in [" + section + "]");
            const std::string key = section + "." + name;
            const std::string v = trim(node.data());
            if (key == "model.case") c.pole_case = parse_case(v);
            else if (key == "model.epsilon") c.epsilon = to_double(v, key);
            else if (key == "model.decay") c.decay = to_double(v, key);
            else if (key == "model.safety") c.safety = to_double(v, key);
            else if (key == "model.tail_tol") c.tail_tol = to_double(v, key);
            else if (key == "orbit.seeds") {
                c.seeds.clear();
                for (const auto& s : split(v, ';')) c.seeds.push_back(to_complex(s, key));
            } else if (key == "orbit.steps") {
                const long long n = to_integer(v, key);
                if (n < 0) throw ConfigError(key + " must be >= 0");
                c.steps = static_cast<std::size_t>(n);
            } else if (key == "classify.tau_zero") c.tau_zero = to_double(v, key);
            else if (key == "classify.tau_pos") c.tau_pos = to_double(v, key);
            else if (key == "abel.tol") c.abel_tol = to_double(v, key);
            else if (key == "loop.center") c.loop_center = to_complex(v, key);
            else if (key == "loop.half_side") c.loop_half_side = to_double(v, key);
            else if (key == "loop.max_gap") c.loop_max_gap = to_double(v, key);
            else if (key == "loop.n_max") c.loop_n_max = static_cast<int>(to_integer(v, key));
            else if (key == "absorb.squares") {
                c.absorb_squares.clear();
                for (const auto& s : split(v, ';')) {
                    const auto nums = to_numbers(s, key, 3);
                    c.absorb_squares.push_back({{nums[0], nums[1]}, nums[2]});
                }
            } else if (key == "absorb.samples") c.absorb_samples = static_cast<int>(to_integer(v, key));
            else if (key == "absorb.threshold") c.absorb_threshold = to_double(v, key);
            else if (key == "absorb.steps") {
                const long long n = to_integer(v, key);
                if (n < 0) throw ConfigError(key + " must be >= 0");
                c.absorb_steps = static_cast<std::size_t>(n);
            } else if (key == "absorb.rng_seed") c.rng_seed = static_cast<std::uint64_t>(to_integer(v, key));
            else if (key == "render.enabled") c.render = to_bool(v, key);
            else if (key == "render.viewport") {
                const auto nums = to_numbers(v, key, 4);
                c.viewport = {nums[0], nums[1], nums[2], nums[3]};
            } else if (key == "render.width") c.width = static_cast<int>(to_integer(v, key));
            else if (key == "render.height") c.height = static_cast<int>(to_integer(v, key));
            else if (key == "output.dir") c.out_dir = v;
            else if (key == "output.orbit_csv") c.orbit_csv = v;
            else if (key == "output.verdict_json") c.verdict_json = v;
            else if (key == "output.loop_json") c.loop_json = v;
            else if (key == "output.persist_json") c.persist_json = v;
            else if (key == "output.abel_json") c.abel_json = v;
            else if (key == "output.render_ppm") c.render_ppm = v;
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return parse_config(in);
}

void validate(const ExperimentConfig& c) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(c.epsilon > 0.0 && c.epsilon <= 0.5, "model.epsilon must lie in (0, 1/2]");
    require(c.decay > 0.0 && c.decay < 1.0, "model.decay must lie in (0, 1)");
    require(c.safety > 0.0 && c.safety < 1.0, "model.safety must lie in (0, 1)");
    require(c.tail_tol > 0.0 && c.tail_tol < 1.0, "model.tail_tol must lie in (0, 1)");
    require(!c.seeds.empty(), "orbit.seeds is empty: give at least one seed");
    for (const Complex s : c.seeds)
        require(dist_to_poles(c.pole_case, s).to_extended >= 2.0 * c.epsilon,
                "seed " + format_number(s.real()) + "," + format_number(s.imag()) +
                    " is closer than 2*epsilon to the extended pole set");
    require(c.steps >= 100, "orbit.steps must be >= 100");
    require(!c.tau_zero || *c.tau_zero > 0.0, "classify.tau_zero must be positive");
    require(c.tau_pos > 0.0, "classify.tau_pos must be positive");
    require(c.abel_tol > 0.0, "abel.tol must be positive");
    require(c.loop_half_side > 0.0, "loop.half_side must be positive");
    require(c.loop_max_gap > 0.0, "loop.max_gap must be positive");
    require(c.loop_n_max >= 0, "loop.n_max must be >= 0");
    require(c.absorb_samples > 0, "absorb.samples must be positive");
    for (const auto& sq : c.absorb_squares)
        require(sq.half_side > 0.0, "absorb.squares half sides must be positive");
    require(c.width > 0 && c.height > 0, "render width and height must be positive");
    require(c.viewport.re_hi > c.viewport.re_lo && c.viewport.im_hi > c.viewport.im_lo,
            "render.viewport must be re_lo,re_hi,im_lo,im_hi with lo < hi");
}

MapModel model_for(const ExperimentConfig& c) {
    return build_map(c.pole_case, c.epsilon, c.decay, c.safety, c.tail_tol);
}

ExperimentConfig preset_config(PoleCase c) {
    ExperimentConfig cfg;
    cfg.pole_case = c;
    switch (c) {
    case PoleCase::I:
        cfg.seeds = {{1.0, 0.0}, {2.0, 1.0}};
        cfg.absorb_squares = {{{-2.5, 0.5}, 0.2}, {{0.5, 3.5}, 0.2}, {{4.5, -2.5}, 0.2}};
        cfg.viewport = {-3.0, 9.0, -4.0, 4.0};
        break;
    case PoleCase::II:
    case PoleCase::IIPlus:
        for (int k = 1; k <= 20; ++k) cfg.seeds.emplace_back(0.0, k);
        cfg.viewport = {-2.0, 6.0, -3.0, 3.0};
        break;
    case PoleCase::III: {
        const MapModel probe = make_model(c, cfg.epsilon, 0.0, cfg.decay);
        cfg.seeds = cell_grid(probe, 8);
        cfg.viewport = {-2.0, 2.0, -2.0, 2.0};
        break;
    }
    }
    return cfg;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_orbit_csv(std::ostream& out, const MapModel& model,
                     std::span<const Complex> seeds, std::size_t steps) {
    std::vector<std::string> blocks(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        const Orbit orbit = iterate(model, seeds[i], steps + 1);
        const auto ratios = step_ratio_series(model, orbit);
        std::ostringstream rows;
        const std::size_t last = std::min(steps, orbit.steps());
        for (std::size_t n = 0; n <= last; ++n) {
            rows << i << ',' << n << ',' << format_number(orbit.points[n].real()) << ','
                 << format_number(orbit.points[n].imag()) << ','
                 << format_number(std::abs(orbit.drift[n])) << ',';
            if (n < ratios.size())
                rows << format_number(ratios[n].lower) << ',' << format_number(ratios[n].upper);
            else
                rows << ',';
            rows << '\n';
        }
        blocks[i] = rows.str();
    });
    out << "seed,n,re,im,drift_abs,ratio_lower,ratio_upper\n";
    for (const auto& b : blocks) out << b;
}

json model_json(const MapModel& model) {
    return {
        {"case", std::string(case_label(model.pole_case()))},
        {"epsilon", model.epsilon()},
        {"delta", model.delta()},
        {"coeff_amplitude", model.coeff_amplitude()},
        {"coeff_decay", model.coeff_decay()},
        {"coeff_sum", model.coeff_sum()},
        {"budget", coefficient_budget(model.pole_case(), model.epsilon())},
        {"truncation_radius", model.truncation_radius()},
        {"tail_tol", model.tail_tol()},
    };
}

json verdict_json(const MapModel& model, const TypeVerdict& verdict) {
    json seeds = json::array();
    for (const auto& ev : verdict.evidence) {
        json s = complex_json(ev.seed);
        s["excluded"] = ev.excluded;
        s["note"] = ev.note;
        if (!ev.excluded) {
            s["min_lower"] = ev.min_lower;
            s["max_upper"] = ev.max_upper;
            s["mid_max_upper"] = ev.mid_max_upper;
            s["late_max_upper"] = ev.late_max_upper;
            s["late_min_lower"] = ev.late_min_lower;
        }
        seeds.push_back(std::move(s));
    }
    return {
        {"schema_version", kSchemaVersion},
        {"model", model_json(model)},
        {"steps", verdict.steps},
        {"verdict", std::string(verdict_label(verdict.verdict))},
        {"rule", verdict.rule},
        {"thresholds",
         {{"tau_zero", verdict.thresholds.tau_zero},
          {"tau_pos", verdict.thresholds.tau_pos},
          {"stationarity", verdict.thresholds.stationarity},
          {"spread", verdict.thresholds.spread}}},
        {"seeds", std::move(seeds)},
    };
}

json persistence_json(const PersistenceReport& report) {
    json steps = json::array();
    for (const auto& s : report.steps) {
        json j{{"n", s.n},
               {"vertices", s.vertices},
               {"failing_vertices", s.failing_vertices},
               {"condition_holds", s.condition_holds}};
        if (s.condition_holds) {
            j["windings_preserved"] = s.windings_preserved;
            j["windings"] = windings_json(s.windings);
            j["next_windings"] = windings_json(s.next_windings);
        }
        steps.push_back(std::move(j));
    }
    return {
        {"schema_version", kSchemaVersion},
        {"stable_from", report.stable_from ? json(*report.stable_from) : json(nullptr)},
        {"certified_steps", report.certified_steps},
        {"violations", report.violations},
        {"steps", std::move(steps)},
    };
}

json loop_report_json(const MapModel& model, const LoopPath& loop, int n_max) {
    json steps = json::array();
    LoopPath current = refine_loop(model, loop);
    for (int n = 0; n <= n_max; ++n) {
        const WindingReport r = contractibility(model, current);
        steps.push_back({{"n", n},
                         {"vertices", current.vertices.size()},
                         {"certified", r.certified},
                         {"contractible", r.contractible},
                         {"clearance", r.clearance},
                         {"windings", windings_json(r.windings)}});
        if (n < n_max) current = push_forward(model, current);
    }
    return {
        {"schema_version", kSchemaVersion},
        {"model", model_json(model)},
        {"loop", {{"vertices", loop.vertices.size()}, {"max_gap", loop.max_gap}}},
        {"steps", std::move(steps)},
        {"persistence", persistence_json(persistence_check(model, loop, n_max))},
    };
}

json abel_json(const MapModel& model, std::span<const Complex> seeds, double tol) {
    json rows = json::array();
    for (const Complex z : seeds) {
        const AbelValue psi = abel_function(model, z, tol);
        const Complex fz = eval_f(model, z).value;
        const AbelValue psi_f = abel_function(model, fz, tol);
        json row = complex_json(z);
        row["psi"] = complex_json(psi.value);
        row["tail_bound"] = psi.tail_bound;
        row["terms"] = psi.terms;
        row["residual"] = std::abs(psi_f.value - psi.value - 1.0);
        rows.push_back(std::move(row));
    }
    return {{"schema_version", kSchemaVersion},
            {"model", model_json(model)},
            {"tol", tol},
            {"values", std::move(rows)}};
}

std::vector<Complex> sample_squares(const MapModel& model,
                                    std::span<const SquareRegion> squares, int per_square,
                                    std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::vector<Complex> out;
    for (const auto& sq : squares) {
        std::uniform_real_distribution<double> offset(-sq.half_side, sq.half_side);
        int kept = 0;
        for (int attempt = 0; kept < per_square && attempt < 1000 * per_square; ++attempt) {
            const Complex z = sq.center + Complex(offset(rng), offset(rng));
            if (dist_to_poles(model, z).to_extended < 2.0 * model.epsilon()) continue;
            out.push_back(z);
            ++kept;
        }
        if (kept < per_square)
            throw ConfigError("absorb square does not meet V~ often enough to sample");
    }
    return out;
}

AbsorptionSummary absorption_check(const MapModel& model, const ExperimentConfig& config) {
    const auto samples =
        sample_squares(model, config.absorb_squares, config.absorb_samples, config.rng_seed);
    AbsorptionSummary summary;
    summary.results =
        half_plane_absorption(model, samples, config.absorb_threshold, config.absorb_steps);
    summary.all_absorbed =
        std::all_of(summary.results.begin(), summary.results.end(), [](const auto& r) {
            return r.entered_at.has_value() && !r.left_after_entry;
        });
    return summary;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
    validate(config);
    const MapModel model = model_for(config);
    ExperimentOutcome outcome;

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir.string());

    json drift = json::array();
    for (const Complex s : config.seeds) {
        const Orbit orbit = iterate(model, s, config.steps);
        const DriftCertificate cert = certify_drift(orbit, model);
        json row = complex_json(s);
        row["passed"] = cert.passed;
        row["worst_margin"] = cert.worst_margin;
        if (!cert.passed) {
            row["failed_at"] = cert.failed_at.value_or(0);
            row["reason"] = cert.reason;
            outcome.certification_failures.push_back(
                "drift certification failed for seed " + format_number(s.real()) + "," +
                format_number(s.imag()) + ": " + cert.reason);
        }
        drift.push_back(std::move(row));
    }

    outcome.verdict = classify(model, config.seeds, config.steps, config.thresholds());
    json verdict = verdict_json(model, outcome.verdict);
    verdict["drift_certificates"] = std::move(drift);

    if (config.pole_case == PoleCase::I && !config.absorb_squares.empty()) {
        const AbsorptionSummary absorb = absorption_check(model, config);
        json rows = json::array();
        for (const auto& r : absorb.results) {
            json row = complex_json(r.seed);
            row["entered_at"] = r.entered_at ? json(*r.entered_at) : json(nullptr);
            row["left_after_entry"] = r.left_after_entry;
            rows.push_back(std::move(row));
        }
        verdict["absorbing_check"] = {{"threshold_re", config.absorb_threshold},
                                      {"steps", config.absorb_steps},
                                      {"all_absorbed", absorb.all_absorbed},
                                      {"samples", std::move(rows)}};
        if (!absorb.all_absorbed)
            outcome.certification_failures.push_back(
                "a sampled orbit failed to stay in the half-plane Re > threshold");
    }

    const LoopPath loop =
        square_loop(config.loop_center, config.loop_half_side, config.loop_max_gap);

    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = config.out_dir / name;
        write_text(path, text);
        outcome.written.push_back(path);
    };
    {
        std::ostringstream csv;
        write_orbit_csv(csv, model, config.seeds, config.steps);
        emit(config.orbit_csv, csv.str());
    }
    emit(config.verdict_json, verdict.dump(2) + "\n");
    emit(config.loop_json, loop_report_json(model, loop, config.loop_n_max).dump(2) + "\n");
    emit(config.persist_json,
         persistence_json(persistence_check(model, loop, config.loop_n_max)).dump(2) + "\n");
    if (config.pole_case == PoleCase::I) {
        try {
            emit(config.abel_json,
                 abel_json(model, config.seeds, config.abel_tol).dump(2) + "\n");
        } catch (const UncertifiedError& e) {
            outcome.certification_failures.push_back(std::string("abel: ") + e.what());
        }
    }

    if (config.render) {
        RenderOverlays overlays;
        for (const Complex s : config.seeds) {
            const Orbit orbit = iterate(model, s, 50);
            overlays.orbit_points.insert(overlays.orbit_points.end(), orbit.points.begin(),
                                         orbit.points.end());
        }
        const LoopPath refined = refine_loop(model, loop);
        overlays.loops = {refined, push_forward(model, refined)};
        const auto path = config.out_dir / config.render_ppm;
        write_ppm(path, render_region(model, config.viewport, config.width, config.height,
                                      overlays));
        outcome.written.push_back(path);
    }
    return outcome;
}

std::vector<CheckLine> reproduce_case(PoleCase c, const std::filesystem::path& out_dir,
                                      bool render) {
    ExperimentConfig cfg = preset_config(c);
    cfg.out_dir = out_dir;
    cfg.render = render;
    const ExperimentOutcome outcome = run_experiment(cfg);
    const MapModel model = model_for(cfg);

    std::vector<CheckLine> lines;
    lines.push_back({"orbit drift certified", outcome.certified(),
                     outcome.certified() ? "all seeds" : outcome.certification_failures.front()});

    const Verdict expected = c == PoleCase::I     ? Verdict::ParabolicI
                             : c == PoleCase::III ? Verdict::Hyperbolic
                                                  : Verdict::ParabolicIISignature;
    lines.push_back({"type verdict", outcome.verdict.verdict == expected,
                     std::string(verdict_label(outcome.verdict.verdict))});

    LoopPath loop = refine_loop(model, square_loop(cfg.loop_center, cfg.loop_half_side,
                                                   cfg.loop_max_gap));
    if (c == PoleCase::I) {
        std::optional<int> contractible_from;
        for (int n = 0; n <= cfg.loop_n_max; ++n) {
            const bool contractible = contractibility(model, loop).contractible;
            if (!contractible) contractible_from.reset();
            else if (!contractible_from) contractible_from = n;
            if (n < cfg.loop_n_max) loop = push_forward(model, loop);
        }
        lines.push_back({"loop images eventually contractible",
                         contractible_from && *contractible_from <= 10,
                         contractible_from ? "from n = " + std::to_string(*contractible_from)
                                           : "never"});
        const auto persist = persistence_check(
            model, square_loop(cfg.loop_center, cfg.loop_half_side, cfg.loop_max_gap),
            cfg.loop_n_max);
        lines.push_back({"winding persistence", persist.stable_from &&
                                                    *persist.stable_from <= 10 &&
                                                    persist.violations == 0,
                         "stable from n = " +
                             (persist.stable_from ? std::to_string(*persist.stable_from)
                                                  : std::string("-")) +
                             ", violations = " + std::to_string(persist.violations)});
        const AbsorptionSummary absorb = absorption_check(model, cfg);
        lines.push_back({"half-plane Re > 1 absorbs sampled squares", absorb.all_absorbed,
                         std::to_string(absorb.results.size()) + " samples"});
    } else {
        bool all_once = true;
        int worst_n = -1;
        for (int n = 1; n <= cfg.loop_n_max; ++n) {
            loop = push_forward(model, loop);
            const WindingReport r = contractibility(model, loop);
            if (r.winding_about(Complex(n, 0.0)) != 1 || r.contractible) {
                all_once = false;
                worst_n = n;
            }
        }
        lines.push_back({"f^n(dQ0) winds once around pole n and is not contractible",
                         all_once,
                         all_once ? "n = 1.." + std::to_string(cfg.loop_n_max)
                                  : "fails at n = " + std::to_string(worst_n)});
        if (c == PoleCase::III) {
            const auto samples = cell_grid(model, 32);
            const OneStepReport one = hyperbolic_one_step_test(model, samples);
            lines.push_back({"one-step hyperbolic lower bound positive", one.min_lower > 0.0,
                             "min = " + format_number(one.min_lower)});
        }
    }
    return lines;
}

}  // namespace bakerlab
