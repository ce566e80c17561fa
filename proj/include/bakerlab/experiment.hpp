#pragma once

// Batch experiments: flat INI-style configs in, CSV / JSON / PPM artifacts out.
// Column and key layout is documented in schema/output_schema.md.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bakerlab/classifier.hpp"
#include "bakerlab/complexmap.hpp"
#include "bakerlab/loops.hpp"
#include "bakerlab/orbit.hpp"
#include "bakerlab/render.hpp"

#include <json.hpp>

namespace bakerlab {

inline constexpr int kSchemaVersion = 1;

struct SquareRegion {
    Complex center;
    double half_side = 0.2;
};

struct ExperimentConfig {
    PoleCase pole_case = PoleCase::I;
    double epsilon = 0.1;
    double decay = 0.25;
    double safety = 0.9;
    double tail_tol = 1e-14;

    std::vector<Complex> seeds;
    std::size_t steps = 1000;

    std::optional<double> tau_zero;  // default 10 / steps
    double tau_pos = 0.05;

    double abel_tol = 1e-10;

    Complex loop_center{0.0, 0.0};
    double loop_half_side = 0.5;
    double loop_max_gap = 0.05;
    int loop_n_max = 20;

    std::vector<SquareRegion> absorb_squares;  // case i only; empty skips the check
    int absorb_samples = 50;
    double absorb_threshold = 1.0;
    std::size_t absorb_steps = 200;
    std::uint64_t rng_seed = 20240601;

    bool render = false;
    Viewport viewport;
    int width = 400;
    int height = 400;

    std::filesystem::path out_dir = ".";
    std::string orbit_csv = "orbit.csv";
    std::string verdict_json = "verdict.json";
    std::string loop_json = "loops.json";
    std::string persist_json = "persist.json";
    std::string abel_json = "abel.json";
    std::string render_ppm = "render.ppm";

    Thresholds thresholds() const;
};

/// Parses the INI text. Unknown sections or keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks against the operations each field feeds. Throws ConfigError.
void validate(const ExperimentConfig& config);

MapModel model_for(const ExperimentConfig& config);

/// Built-in configuration reproducing one case of the example family.
ExperimentConfig preset_config(PoleCase c);

/// 17 significant digits, "inf" / "-inf" / "nan" spelled out.
std::string format_number(double x);

void write_orbit_csv(std::ostream& out, const MapModel& model,
                     std::span<const Complex> seeds, std::size_t steps);

nlohmann::json model_json(const MapModel& model);
nlohmann::json verdict_json(const MapModel& model, const TypeVerdict& verdict);
nlohmann::json loop_report_json(const MapModel& model, const LoopPath& loop, int n_max);
nlohmann::json persistence_json(const PersistenceReport& report);
nlohmann::json abel_json(const MapModel& model, std::span<const Complex> seeds, double tol);

struct AbsorptionSummary {
    std::vector<AbsorptionResult> results;
    bool all_absorbed = false;
};

/// Random samples (fixed RNG seed) from each square, kept only if they lie in V~.
std::vector<Complex> sample_squares(const MapModel& model,
                                    std::span<const SquareRegion> squares, int per_square,
                                    std::uint64_t rng_seed);

AbsorptionSummary absorption_check(const MapModel& model, const ExperimentConfig& config);

struct ExperimentOutcome {
    TypeVerdict verdict;
    std::vector<std::string> certification_failures;
    std::vector<std::filesystem::path> written;

    bool certified() const { return certification_failures.empty(); }
};

/// Writes orbit CSV, verdict JSON, loop JSON and (if enabled) the PPM render
/// under config.out_dir. Throws IoError on write failures.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

struct CheckLine {
    std::string name;
    bool passed;
    std::string detail;
};

/// Runs the preset for `c` and checks the expected qualitative behaviour.
std::vector<CheckLine> reproduce_case(PoleCase c, const std::filesystem::path& out_dir,
                                      bool render);

}  // namespace bakerlab
