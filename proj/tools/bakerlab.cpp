// Command-line front end. Exit codes: 0 ok, 2 config/usage, 3 certification
// failure, 4 I/O, 1 anything unexpected.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bakerlab/errors.hpp"
#include "bakerlab/experiment.hpp"
#include "bakerlab/hypmetric.hpp"

using namespace bakerlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCrash = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUncertified = 3;
constexpr int kExitIo = 4;

struct ModelFlags {
    std::string config_path;
    std::optional<std::string> pole_case;
    std::optional<double> epsilon, decay, safety;
    std::vector<std::string> seeds;
    std::optional<std::size_t> steps;
    std::string out;

    void attach(CLI::App* cmd, bool with_seeds) {
        cmd->add_option("--config", config_path, "experiment config file");
        cmd->add_option("--case", pole_case, "pole set: i, ii, ii+ or iii");
        cmd->add_option("--epsilon", epsilon, "disk radius eps in (0, 1/2]");
        cmd->add_option("--decay", decay, "coefficient decay r in (0, 1)");
        cmd->add_option("--safety", safety, "fraction of the coefficient budget used");
        if (with_seeds) {
            cmd->add_option("--seed", seeds, "seed as re,im (repeatable)");
            cmd->add_option("--steps", steps, "orbit length N");
        }
        cmd->add_option("-o,--out", out, "output file (default stdout)");
    }

    ExperimentConfig config() const {
        ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (pole_case) c.pole_case = parse_case(*pole_case);
        if (epsilon) c.epsilon = *epsilon;
        if (decay) c.decay = *decay;
        if (safety) c.safety = *safety;
        if (steps) c.steps = *steps;
        if (!seeds.empty()) {
            c.seeds.clear();
            for (const auto& s : seeds) {
                std::istringstream in(s);
                double re = 0.0, im = 0.0;
                char comma = 0;
                if (!(in >> re >> comma >> im) || comma != ',' || !in.eof())
                    throw ConfigError("--seed expects re,im, got '" + s + "'");
                c.seeds.emplace_back(re, im);
            }
        }
        return c;
    }

    void emit(const std::string& text) const {
        if (out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream file(out, std::ios::binary);
        if (!file) throw IoError("cannot open " + out + " for writing");
        file << text;
        if (!file) throw IoError("failed writing " + out);
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Certified numerics for perturbed-translation meromorphic maps"};
    app.require_subcommand(1);

    ModelFlags flags;

    auto* budget = app.add_subcommand("budget", "coefficient budget and model summary");
    flags.attach(budget, false);

    auto* orbit = app.add_subcommand("orbit", "orbit CSV with drift and ratio enclosures");
    flags.attach(orbit, true);

    auto* abel = app.add_subcommand("abel", "Abel function values with certified tails");
    flags.attach(abel, true);
    std::optional<double> abel_tol;
    abel->add_option("--tol", abel_tol, "absolute tolerance");

    auto* classify_cmd = app.add_subcommand("classify", "type verdict with per-seed evidence");
    flags.attach(classify_cmd, true);

    auto* loop = app.add_subcommand("loop", "per-n winding tables for images of a square");
    flags.attach(loop, false);
    auto* persist = app.add_subcommand("persist", "winding persistence along a loop");
    flags.attach(persist, false);
    std::optional<int> n_max;
    std::optional<double> half_side;
    std::optional<std::string> center;
    for (auto* cmd : {loop, persist}) {
        cmd->add_option("--n-max", n_max, "number of images");
        cmd->add_option("--half-side", half_side, "square half side");
        cmd->add_option("--center", center, "square centre as re,im");
    }

    auto* render = app.add_subcommand("render", "PPM picture of the distance bands");
    flags.attach(render, true);
    render->get_option("--out")->required();
    std::optional<int> width, height;
    render->add_option("--width", width, "pixels");
    render->add_option("--height", height, "pixels");

    auto* run_cmd = app.add_subcommand("run", "run a full experiment from a config file");
    std::string run_path;
    run_cmd->add_option("config", run_path, "config file")->required();

    auto* reproduce = app.add_subcommand("reproduce-thm51", "reproduce one case end to end");
    std::string repro_case;
    std::string repro_out = "reproduce_out";
    bool repro_render = false;
    reproduce->add_option("--case", repro_case, "i, ii or iii")
        ->required()
        ->check(CLI::IsMember({"i", "ii", "iii"}));
    reproduce->add_option("--out", repro_out, "output directory");
    reproduce->add_flag("--render", repro_render, "also write a PPM render");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    auto with_loop = [&](ExperimentConfig c) {
        if (n_max) c.loop_n_max = *n_max;
        if (half_side) c.loop_half_side = *half_side;
        if (center) {
            std::istringstream in(*center);
            double re = 0.0, im = 0.0;
            char comma = 0;
            if (!(in >> re >> comma >> im) || comma != ',')
                throw ConfigError("--center expects re,im");
            c.loop_center = {re, im};
        }
        return c;
    };

    if (*budget) {
        const ExperimentConfig c = flags.config();
        const MapModel model = model_for(c);
        flags.emit(model_json(model).dump(2) + "\n");
    } else if (*orbit) {
        const ExperimentConfig c = flags.config();
        validate(c);
        std::ostringstream csv;
        write_orbit_csv(csv, model_for(c), c.seeds, c.steps);
        flags.emit(csv.str());
    } else if (*abel) {
        ExperimentConfig c = flags.config();
        if (abel_tol) c.abel_tol = *abel_tol;
        validate(c);
        flags.emit(abel_json(model_for(c), c.seeds, c.abel_tol).dump(2) + "\n");
    } else if (*classify_cmd) {
        const ExperimentConfig c = flags.config();
        validate(c);
        const MapModel model = model_for(c);
        const TypeVerdict v = classify(model, c.seeds, c.steps, c.thresholds());
        flags.emit(verdict_json(model, v).dump(2) + "\n");
        if (v.verdict == Verdict::Inconclusive) return kExitUncertified;
    } else if (*loop || *persist) {
        const ExperimentConfig c = with_loop(flags.config());
        const MapModel model = model_for(c);
        const LoopPath path = square_loop(c.loop_center, c.loop_half_side, c.loop_max_gap);
        if (*loop) {
            flags.emit(loop_report_json(model, path, c.loop_n_max).dump(2) + "\n");
        } else {
            const PersistenceReport r = persistence_check(model, path, c.loop_n_max);
            flags.emit(persistence_json(r).dump(2) + "\n");
            if (r.violations > 0) return kExitUncertified;
        }
    } else if (*render) {
        ExperimentConfig c = flags.config();
        if (width) c.width = *width;
        if (height) c.height = *height;
        if (c.width <= 0 || c.height <= 0) throw ConfigError("resolution must be positive");
        const MapModel model = model_for(c);
        RenderOverlays overlays;
        for (const Complex s : c.seeds) {
            const Orbit o = iterate(model, s, 50);
            overlays.orbit_points.insert(overlays.orbit_points.end(), o.points.begin(),
                                         o.points.end());
        }
        write_ppm(flags.out, render_region(model, c.viewport, c.width, c.height, overlays));
    } else if (*run_cmd) {
        const ExperimentOutcome outcome = run_experiment(load_config(run_path));
        for (const auto& p : outcome.written) std::cout << "wrote " << p.string() << "\n";
        std::cout << "verdict " << verdict_label(outcome.verdict.verdict) << "\n";
        for (const auto& f : outcome.certification_failures) std::cerr << f << "\n";
        if (!outcome.certified()) return kExitUncertified;
    } else if (*reproduce) {
        const auto lines = reproduce_case(parse_case(repro_case), repro_out, repro_render);
        bool ok = true;
        for (const auto& l : lines) {
            std::cout << (l.passed ? "PASS " : "FAIL ") << l.name << " (" << l.detail << ")\n";
            ok = ok && l.passed;
        }
        if (!ok) return kExitUncertified;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitUncertified;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitCrash;
    }
}
