#pragma once

#include <cstdint>
#include <string>

namespace fringewire::cli {

enum class Scenario { fringes, scan, blocked, comb, photons, duality, uncertainty };
enum class OutputFormat { csv, json };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);

/// Flat key set shared by every scenario. Zero or NaN marks keys resolved
/// from the physics defaults (window = 6*waist, detector_half_width =
/// alpha/4, scan range = +-2 fringe periods).
struct RunConfig {
    Scenario scenario = Scenario::fringes;

    // beams
    double wavelength = 0.633;
    double crossing_angle = 0.01;
    double waist = 500.0;
    double amplitude_ratio = 1.0;
    double relative_phase = 0.0;

    // grid
    double window = 0.0;        // 0 = auto
    std::int64_t samples = 0;   // 0 = auto

    // wire
    double wire_center = 0.0;
    double wire_diameter = 17.0;
    bool clamped = true;
    bool wire_present = true;

    // detectors
    double detector_half_width = 0.0;  // 0 = auto

    // ensemble
    std::int64_t photon_count = 100000;
    double source_split = 0.5;
    double interacting_fraction = 0.12;
    std::int64_t shards = 1;
    std::string phase_convention = "hadamard";
    bool counterfactual_readable_wire = false;

    // scan
    double scan_start = 0.0;
    double scan_stop = 0.0;
    bool scan_range_set = false;
    std::int64_t scan_steps = 65;

    // comb
    double misalignment = 0.0;

    // calibration (blocked scenario)
    double calibrate_target = 0.0;  // 0 = off

    // output
    std::uint64_t seed = 0;
    std::string format;  // "" = scenario default (csv for fringes/scan, else json)
    std::string output = "-";
};

struct CommandOutcome {
    int exit_code = 0;
    std::string payload;
};

/// Fill auto keys from the physics defaults.
void resolve_defaults(RunConfig& config);

/// Validate every key; throws invalid_parameter with the key name.
void validate(const RunConfig& config);

/// Run one scenario and serialize its output. Pure: no file I/O.
CommandOutcome run_scenario(const RunConfig& config);

/// Full command-line entry point: parse, validate, run, write output.
int run(int argc, const char* const* argv);

/// Number formatted with 12 significant digits (the serialization contract).
std::string g12(double value);

}  // namespace fringewire::cli
