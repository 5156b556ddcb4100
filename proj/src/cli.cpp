#include "fringewire/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fringewire/field.hpp"
#include "fringewire/heisenberg.hpp"
#include "fringewire/obstruction.hpp"
#include "fringewire/quantum.hpp"
#include "fringewire/transport.hpp"

namespace fringewire::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// Serialization contract: 12 significant digits, round-tripped so the JSON
// writer emits the same digits as the CSV writer.
double round12(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::strtod(buf, nullptr);
}

// Small negative losses from discretization are clamped in reports; raw
// values stay available in the JSON output.
double clamp_loss(double loss) {
    return (loss < 0.0 && loss > -1e-9) ? 0.0 : loss;
}

BeamPair beams_from(const RunConfig& config) {
    BeamPair beams;
    beams.wavelength = config.wavelength;
    beams.crossing_angle = config.crossing_angle;
    beams.waist = config.waist;
    beams.amplitude_ratio = config.amplitude_ratio;
    beams.relative_phase = config.relative_phase;
    return beams;
}

WireSpec wire_from(const RunConfig& config) {
    return {config.wire_center, config.wire_diameter, config.clamped};
}

DetectorPlane plane_from(const RunConfig& config) {
    return DetectorPlane::for_beams(beams_from(config), config.detector_half_width);
}

OutputFormat format_from(const RunConfig& config) {
    return config.format == "csv" ? OutputFormat::csv : OutputFormat::json;
}

std::vector<double> scan_positions(const RunConfig& config) {
    std::vector<double> positions;
    const std::int64_t steps = config.scan_steps;
    positions.reserve(static_cast<std::size_t>(steps));
    if (steps == 1) {
        positions.push_back(config.scan_start);
        return positions;
    }
    const double step = (config.scan_stop - config.scan_start) / static_cast<double>(steps - 1);
    for (std::int64_t i = 0; i < steps; ++i)
        positions.push_back(config.scan_start + step * static_cast<double>(i));
    return positions;
}

ordered_json config_echo(const RunConfig& config) {
    ordered_json echo;
    echo["scenario"] = to_string(config.scenario);
    echo["wavelength"] = round12(config.wavelength);
    echo["crossing_angle"] = round12(config.crossing_angle);
    echo["waist"] = round12(config.waist);
    echo["amplitude_ratio"] = round12(config.amplitude_ratio);
    echo["relative_phase"] = round12(config.relative_phase);
    echo["window"] = round12(config.window);
    echo["samples"] = config.samples;
    echo["wire_present"] = config.wire_present;
    echo["wire_center"] = round12(config.wire_center);
    echo["wire_diameter"] = round12(config.wire_diameter);
    echo["clamped"] = config.clamped;
    echo["detector_half_width"] = round12(config.detector_half_width);
    echo["photon_count"] = config.photon_count;
    echo["source_split"] = round12(config.source_split);
    echo["interacting_fraction"] = round12(config.interacting_fraction);
    echo["shards"] = config.shards;
    echo["phase_convention"] = config.phase_convention;
    echo["counterfactual_readable_wire"] = config.counterfactual_readable_wire;
    echo["scan_start"] = round12(config.scan_start);
    echo["scan_stop"] = round12(config.scan_stop);
    echo["scan_steps"] = config.scan_steps;
    echo["misalignment"] = round12(config.misalignment);
    echo["calibrate_target"] = round12(config.calibrate_target);
    echo["seed"] = config.seed;
    echo["format"] = config.format;
    return echo;
}

std::string dump_json(const RunConfig& config, ordered_json results, ordered_json checks) {
    ordered_json doc;
    doc["scenario"] = to_string(config.scenario);
    doc["config_echo"] = config_echo(config);
    doc["results"] = std::move(results);
    doc["checks"] = std::move(checks);
    return doc.dump(2) + "\n";
}

ordered_json class_json(const ClassStats& stats) {
    ordered_json j;
    j["count"] = stats.count;
    j["detector_1"] = stats.detector_1;
    j["detector_2"] = stats.detector_2;
    j["switches"] = stats.switches;
    j["K"] = round12(stats.which_way_K);
    j["V"] = round12(stats.visibility_V);
    j["K2_plus_V2"] = round12(stats.k2_plus_v2);
    j["satisfied"] = stats.satisfied;
    return j;
}

void class_csv(std::ostringstream& out, const std::string& name, const ClassStats& stats,
               bool excluded) {
    out << name << ',' << stats.count << ',' << stats.detector_1 << ',' << stats.detector_2
        << ',' << stats.switches << ',' << g12(stats.which_way_K) << ','
        << g12(stats.visibility_V) << ',' << g12(stats.k2_plus_v2) << ','
        << (stats.satisfied ? "true" : "false") << ',' << (excluded ? "true" : "false") << '\n';
}

CommandOutcome cmd_fringes(const RunConfig& config) {
    const BeamPair beams = beams_from(config);
    const ComplexField field =
        superpose(beams, config.window, static_cast<std::size_t>(config.samples));
    const std::vector<double> profile = intensity(field);
    const std::vector<double> compensated = compensated_intensity(field, beams);

    bool found = true;
    FringeGeometry geometry;
    try {
        geometry = locate_fringes(field, beams);
    } catch (const fringe_detection_error&) {
        found = false;
    }
    const double contrast = visibility(compensated);
    const double period_formula = fringe_spacing(beams);

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "y_um,intensity,envelope,compensated\n";
        for (std::size_t i = 0; i < field.size(); ++i) {
            out << g12(field.position(i)) << ',' << g12(profile[i]) << ','
                << g12(envelope_at(beams, field.position(i))) << ',' << g12(compensated[i])
                << '\n';
        }
        return {0, out.str()};
    }

    ordered_json results;
    results["fringe_spacing_formula_um"] = round12(period_formula);
    results["fringes_found"] = found;
    if (found) {
        results["fringe_spacing_measured_um"] = round12(geometry.spacing_l);
        ordered_json dark = ordered_json::array();
        for (double p : geometry.dark_positions) dark.push_back(round12(p));
        ordered_json bright = ordered_json::array();
        for (double p : geometry.bright_positions) bright.push_back(round12(p));
        ordered_json nulls = ordered_json::array();
        for (bool b : geometry.is_null) nulls.push_back(b);
        results["dark_positions_um"] = std::move(dark);
        results["bright_positions_um"] = std::move(bright);
        results["dark_is_null"] = std::move(nulls);
    }
    results["visibility"] = round12(contrast);

    ordered_json checks;
    checks["fringes_found"] = found;
    if (found)
        checks["period_matches_formula_1pct"] =
            std::abs(geometry.spacing_l - period_formula) <= 0.01 * period_formula;
    return {0, dump_json(config, std::move(results), std::move(checks))};
}

CommandOutcome cmd_scan(const RunConfig& config) {
    const BeamPair beams = beams_from(config);
    const DetectorPlane plane = plane_from(config);
    const std::vector<double> positions = scan_positions(config);
    const ScanResult scan = scan_wire(beams, wire_from(config), plane, positions);

    bool in_bounds = true;
    for (const auto& row : scan.rows)
        in_bounds = in_bounds && row.loss_fraction >= -1e-9 && row.loss_fraction <= 1.0;

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "wire_y_um,count1,count2,loss_fraction\n";
        for (const auto& row : scan.rows) {
            out << g12(row.wire_center) << ',' << g12(row.count_1) << ',' << g12(row.count_2)
                << ',' << g12(clamp_loss(row.loss_fraction)) << '\n';
        }
        return {0, out.str()};
    }

    ordered_json rows = ordered_json::array();
    for (const auto& row : scan.rows) {
        ordered_json j;
        j["wire_y_um"] = round12(row.wire_center);
        j["count_1"] = round12(row.count_1);
        j["count_2"] = round12(row.count_2);
        j["loss_fraction"] = round12(clamp_loss(row.loss_fraction));
        j["loss_fraction_raw"] = round12(row.loss_fraction);
        rows.push_back(std::move(j));
    }
    ordered_json results;
    results["fringe_spacing_um"] = round12(fringe_spacing(beams));
    results["rows"] = std::move(rows);
    ordered_json checks;
    checks["loss_within_bounds"] = in_bounds;
    return {0, dump_json(config, std::move(results), std::move(checks))};
}

CommandOutcome cmd_blocked(const RunConfig& config) {
    BeamPair beams = beams_from(config);
    const WireSpec wire = wire_from(config);

    bool calibrated = false;
    if (config.calibrate_target > 0.0) {
        beams.waist =
            calibrate_waist(beams, wire, config.calibrate_target, config.detector_half_width);
        calibrated = true;
    }
    const DetectorPlane plane = DetectorPlane::for_beams(beams, config.detector_half_width);
    const LossBreakdown loss = blocked_beam_breakdown(beams, wire, plane);

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "waist_um,loss_fraction,absorbed_fraction,diffracted_fraction\n";
        out << g12(beams.waist) << ',' << g12(clamp_loss(loss.total)) << ','
            << g12(clamp_loss(loss.absorbed)) << ',' << g12(loss.diffracted) << '\n';
        return {0, out.str()};
    }

    ordered_json results;
    results["waist_um"] = round12(beams.waist);
    results["loss_fraction"] = round12(clamp_loss(loss.total));
    results["absorbed_fraction"] = round12(clamp_loss(loss.absorbed));
    results["diffracted_fraction"] = round12(loss.diffracted);
    results["loss_fraction_raw"] = round12(loss.total);
    if (calibrated) {
        ordered_json cal;
        cal["target_loss"] = round12(config.calibrate_target);
        cal["calibrated_waist_um"] = round12(beams.waist);
        cal["achieved_loss"] = round12(loss.total);
        results["calibration"] = std::move(cal);
    }
    ordered_json checks;
    checks["loss_within_bounds"] = loss.total >= -1e-9 && loss.total <= 1.0;
    return {0, dump_json(config, std::move(results), std::move(checks))};
}

CommandOutcome cmd_comb(const RunConfig& config) {
    const BeamPair beams = beams_from(config);
    const DetectorPlane plane = plane_from(config);
    const std::vector<double> centers = dark_comb_positions(beams, config.wire_diameter);
    const ScanResult result =
        comb_at_dark_fringes(beams, plane, config.misalignment, config.wire_diameter);
    const ScanRow& row = result.rows.front();

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "misalignment_um,wire_count,count1,count2,loss_fraction\n";
        out << g12(config.misalignment) << ',' << centers.size() << ',' << g12(row.count_1)
            << ',' << g12(row.count_2) << ',' << g12(clamp_loss(row.loss_fraction)) << '\n';
        return {0, out.str()};
    }

    ordered_json results;
    results["misalignment_um"] = round12(config.misalignment);
    results["wire_count"] = centers.size();
    ordered_json positions = ordered_json::array();
    for (double c : centers) positions.push_back(round12(c));
    results["wire_positions_um"] = std::move(positions);
    results["count_1"] = round12(row.count_1);
    results["count_2"] = round12(row.count_2);
    results["loss_fraction"] = round12(clamp_loss(row.loss_fraction));
    results["loss_fraction_raw"] = round12(row.loss_fraction);
    ordered_json checks;
    checks["loss_within_bounds"] = row.loss_fraction >= -1e-9 && row.loss_fraction <= 1.0;
    return {0, dump_json(config, std::move(results), std::move(checks))};
}

CommandOutcome cmd_photons(const RunConfig& config) {
    EnsembleConfig ensemble;
    ensemble.photon_count = static_cast<std::uint64_t>(config.photon_count);
    ensemble.source_split = config.source_split;
    ensemble.interacting_fraction = config.interacting_fraction;
    if (config.wire_present) ensemble.wire = wire_from(config);
    ensemble.seed = config.seed;
    ensemble.shards = static_cast<int>(config.shards);
    ensemble.convention = parse_phase_convention(config.phase_convention);

    const RunReport report = run_ensemble(ensemble);
    const bool duality_ok = report.free_class.satisfied && report.interacting_class.satisfied;
    const bool conserved =
        report.detected() + report.lost == ensemble.photon_count;
    const int exit_code = duality_ok ? 0 : 2;

    // The counterfactual readable-momentum row is excluded by physics: it is
    // reported for comparison but never contributes to the exit status.
    ClassStats counterfactual;
    if (config.counterfactual_readable_wire) {
        counterfactual.count = 0;
        counterfactual.which_way_K = 1.0;
        counterfactual.visibility_V = 1.0;
        counterfactual.k2_plus_v2 = 2.0;
        counterfactual.satisfied = false;
    }

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "class,count,detector_1,detector_2,switches,K,V,K2_plus_V2,satisfied,excluded\n";
        class_csv(out, "free", report.free_class, false);
        class_csv(out, "interacting", report.interacting_class, false);
        if (config.counterfactual_readable_wire)
            class_csv(out, "readable_wire_counterfactual", counterfactual, true);
        return {exit_code, out.str()};
    }

    ordered_json results;
    ordered_json counts;
    counts["detector_1"] = report.detector_1;
    counts["detector_2"] = report.detector_2;
    counts["lost"] = report.lost;
    counts["total"] = report.detected() + report.lost;
    results["counts"] = std::move(counts);
    ordered_json subs;
    subs["free"] = class_json(report.free_class);
    subs["interacting"] = class_json(report.interacting_class);
    results["subpopulations"] = std::move(subs);
    if (config.counterfactual_readable_wire) {
        ordered_json row = class_json(counterfactual);
        row["excluded_by_physics"] = true;
        results["readable_wire_counterfactual"] = std::move(row);
    }
    results["seed_echo"] = report.seed_echo;

    ordered_json checks;
    checks["duality_all_satisfied"] = duality_ok;
    checks["counts_conserved"] = conserved;
    return {exit_code, dump_json(config, std::move(results), std::move(checks))};
}

CommandOutcome cmd_duality(const RunConfig& config) {
    const std::vector<ScenarioRow> table = scenario_table();
    bool all_ok = true;
    for (const auto& row : table)
        if (!row.excluded_by_physics) all_ok = all_ok && row.satisfied;

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "scenario,K,V,K2_plus_V2,satisfied,excluded\n";
        for (const auto& row : table) {
            out << row.name << ',' << g12(row.which_way_K) << ',' << g12(row.visibility_V)
                << ',' << g12(row.k2_plus_v2) << ',' << (row.satisfied ? "true" : "false")
                << ',' << (row.excluded_by_physics ? "true" : "false") << '\n';
        }
        return {all_ok ? 0 : 2, out.str()};
    }

    ordered_json rows = ordered_json::array();
    for (const auto& row : table) {
        ordered_json j;
        j["scenario"] = row.name;
        j["K"] = round12(row.which_way_K);
        j["V"] = round12(row.visibility_V);
        j["K2_plus_V2"] = round12(row.k2_plus_v2);
        j["satisfied"] = row.satisfied;
        j["excluded_by_physics"] = row.excluded_by_physics;
        rows.push_back(std::move(j));
    }
    ordered_json results;
    results["rows"] = std::move(rows);
    ordered_json checks;
    checks["all_physical_rows_satisfied"] = all_ok;
    return {all_ok ? 0 : 2, dump_json(config, std::move(results), std::move(checks))};
}

CommandOutcome cmd_uncertainty(const RunConfig& config) {
    const UncertaintyReport report = uncertainty_report(beams_from(config));

    if (format_from(config) == OutputFormat::csv) {
        std::ostringstream out;
        out << "wavelength_um,crossing_angle_rad,photon_momentum_h_per_um,"
               "deflection_momentum_h_per_um,wire_position_uncertainty_um,fringe_spacing_um,"
               "spans_fringe\n";
        out << g12(config.wavelength) << ',' << g12(config.crossing_angle) << ','
            << g12(report.photon_momentum) << ',' << g12(report.deflection_momentum) << ','
            << g12(report.wire_position_uncertainty) << ',' << g12(report.fringe_spacing)
            << ',' << (report.spans_fringe ? "true" : "false") << '\n';
        return {0, out.str()};
    }

    ordered_json results;
    results["photon_momentum_h_per_um"] = round12(report.photon_momentum);
    results["deflection_momentum_h_per_um"] = round12(report.deflection_momentum);
    results["wire_position_uncertainty_um"] = round12(report.wire_position_uncertainty);
    results["fringe_spacing_um"] = round12(report.fringe_spacing);
    results["uncertainty_over_spacing"] =
        round12(report.wire_position_uncertainty / report.fringe_spacing);
    results["spans_fringe"] = report.spans_fringe;
    ordered_json checks;
    checks["spans_fringe"] = report.spans_fringe;
    return {0, dump_json(config, std::move(results), std::move(checks))};
}

}  // namespace

std::string g12(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

Scenario parse_scenario(const std::string& name) {
    if (name == "fringes") return Scenario::fringes;
    if (name == "scan") return Scenario::scan;
    if (name == "blocked") return Scenario::blocked;
    if (name == "comb") return Scenario::comb;
    if (name == "photons") return Scenario::photons;
    if (name == "duality") return Scenario::duality;
    if (name == "uncertainty") return Scenario::uncertainty;
    throw invalid_parameter(
        "unknown scenario '" + name +
        "' (expected fringes, scan, blocked, comb, photons, duality, or uncertainty)");
}

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::fringes: return "fringes";
        case Scenario::scan: return "scan";
        case Scenario::blocked: return "blocked";
        case Scenario::comb: return "comb";
        case Scenario::photons: return "photons";
        case Scenario::duality: return "duality";
        case Scenario::uncertainty: return "uncertainty";
    }
    return "unknown";
}

void resolve_defaults(RunConfig& config) {
    if (config.window == 0.0) config.window = 6.0 * config.waist;
    if (config.samples == 0) {
        const double period = config.wavelength / config.crossing_angle;
        std::int64_t samples = 4096;
        const double required = 16.0 * config.window / period;
        while (static_cast<double>(samples) < required) samples *= 2;
        config.samples = samples;
    }
    if (config.detector_half_width == 0.0)
        config.detector_half_width = config.crossing_angle / 4.0;
    if (!config.scan_range_set) {
        const double period = config.wavelength / config.crossing_angle;
        config.scan_start = -2.0 * period;
        config.scan_stop = 2.0 * period;
    }
    if (config.format.empty()) {
        config.format = (config.scenario == Scenario::fringes || config.scenario == Scenario::scan)
                            ? "csv"
                            : "json";
    }
}

void validate(const RunConfig& config) {
    beams_from(config).validate();  // wavelength, crossing_angle, waist, ratio, phase

    if (!(config.window > 0.0)) throw invalid_parameter("window must be positive");
    if (config.samples < 16) throw invalid_parameter("samples must be at least 16");
    const double period = config.wavelength / config.crossing_angle;
    const double spacing = config.window / static_cast<double>(config.samples);
    if (spacing > period / 8.0 * (1.0 + 1e-12))
        throw invalid_parameter("samples too coarse: need at least 8 samples per fringe (got " +
                                g12(period / spacing) + ")");

    if (!(config.wire_diameter > 0.0))
        throw invalid_parameter("wire_diameter must be positive");
    if ((config.scenario == Scenario::scan || config.scenario == Scenario::comb) &&
        !(config.wire_diameter < period))
        throw invalid_parameter("wire_diameter must be below the fringe spacing " + g12(period));

    if (!(config.detector_half_width > 0.0) ||
        !(config.detector_half_width < config.crossing_angle / 2.0))
        throw invalid_parameter("detector_half_width must lie in (0, crossing_angle/2)");

    if (config.photon_count < 1) throw invalid_parameter("photon_count must be at least 1");
    if (!(config.source_split >= 0.0) || !(config.source_split <= 1.0))
        throw invalid_parameter("source_split must lie in [0, 1]");
    if (!(config.interacting_fraction >= 0.0) || !(config.interacting_fraction <= 1.0))
        throw invalid_parameter("interacting_fraction must lie in [0, 1]");
    if (config.shards < 1) throw invalid_parameter("shards must be at least 1");
    parse_phase_convention(config.phase_convention);

    if (config.scan_steps < 1) throw invalid_parameter("scan_steps must be at least 1");
    if (config.scan_range_set && !(config.scan_stop >= config.scan_start))
        throw invalid_parameter("scan_stop must not be below scan_start");
    if (!std::isfinite(config.misalignment))
        throw invalid_parameter("misalignment must be finite");
    if (config.calibrate_target != 0.0 &&
        (!(config.calibrate_target > 0.0) || !(config.calibrate_target < 1.0)))
        throw invalid_parameter("calibrate_target must lie in (0, 1)");

    if (config.format != "csv" && config.format != "json")
        throw invalid_parameter("format must be 'csv' or 'json'");
    if (config.output.empty()) throw invalid_parameter("output path must not be empty");
}

CommandOutcome run_scenario(const RunConfig& config) {
    switch (config.scenario) {
        case Scenario::fringes: return cmd_fringes(config);
        case Scenario::scan: return cmd_scan(config);
        case Scenario::blocked: return cmd_blocked(config);
        case Scenario::comb: return cmd_comb(config);
        case Scenario::photons: return cmd_photons(config);
        case Scenario::duality: return cmd_duality(config);
        case Scenario::uncertainty: return cmd_uncertainty(config);
    }
    throw invalid_parameter("unhandled scenario");
}

int run(int argc, const char* const* argv) {
    CLI::App app{
        "fringewire: crossed Gaussian beams, thin-wire obstructions, and "
        "single-photon duality accounting"};
    app.allow_config_extras(false);

    std::string scenario_name;
    RunConfig config;
    app.add_option("scenario", scenario_name,
                   "One of: fringes, scan, blocked, comb, photons, duality, uncertainty")
        ->required();

    app.add_option("--wavelength", config.wavelength, "Wavelength in um")
        ->capture_default_str();
    app.add_option("--crossing_angle", config.crossing_angle, "Beam crossing angle in rad")
        ->capture_default_str();
    app.add_option("--waist", config.waist, "Gaussian 1/e^2 intensity half-width in um")
        ->capture_default_str();
    app.add_option("--amplitude_ratio", config.amplitude_ratio,
                   "Amplitude of beam 2 relative to beam 1")
        ->capture_default_str();
    app.add_option("--relative_phase", config.relative_phase, "Phase of beam 2 in rad")
        ->capture_default_str();
    app.add_option("--window", config.window, "Transverse window in um (0 = 6*waist)");
    app.add_option("--samples", config.samples, "Grid samples (0 = auto)");
    app.add_option("--wire_present", config.wire_present,
                   "Include the wire in photon transport")
        ->capture_default_str();
    app.add_option("--wire_center", config.wire_center, "Wire center in um")
        ->capture_default_str();
    app.add_option("--wire_diameter", config.wire_diameter, "Wire diameter in um")
        ->capture_default_str();
    app.add_option("--clamped", config.clamped,
                   "Wire rigidly attached to the setup (false = free wire)")
        ->capture_default_str();
    app.add_option("--detector_half_width", config.detector_half_width,
                   "Detector acceptance half-angle in rad (0 = crossing_angle/4)");
    app.add_option("--photon_count", config.photon_count, "Monte Carlo photon count")
        ->capture_default_str();
    app.add_option("--source_split", config.source_split,
                   "Probability a photon enters in mode 1")
        ->capture_default_str();
    app.add_option("--interacting_fraction", config.interacting_fraction,
                   "Fraction of photons that approach the wire")
        ->capture_default_str();
    app.add_option("--shards", config.shards, "Ensemble shard count (results are identical)")
        ->capture_default_str();
    app.add_option("--phase_convention", config.phase_convention,
                   "Wire unitary sign completion: hadamard or iphase")
        ->capture_default_str();
    app.add_flag("--counterfactual-readable-wire,--counterfactual_readable_wire",
                 config.counterfactual_readable_wire,
                 "Report the excluded readable-momentum row");
    auto* scan_start_opt =
        app.add_option("--scan_start", config.scan_start, "First wire position in um");
    auto* scan_stop_opt =
        app.add_option("--scan_stop", config.scan_stop, "Last wire position in um");
    app.add_option("--scan_steps", config.scan_steps, "Number of scan positions")
        ->capture_default_str();
    app.add_option("--misalignment", config.misalignment, "Comb misalignment in um")
        ->capture_default_str();
    app.add_option("--calibrate_target", config.calibrate_target,
                   "Solve for the waist giving this blocked-beam loss (0 = off)");
    app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app.add_option("--format", config.format, "Output format: csv or json");
    app.add_option("--output", config.output, "Output path ('-' = stdout)")
        ->capture_default_str();
    app.set_config("--config", "", "Flat key=value configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        config.scenario = parse_scenario(scenario_name);
        config.scan_range_set = scan_start_opt->count() > 0 || scan_stop_opt->count() > 0;
        resolve_defaults(config);
        validate(config);
        const CommandOutcome outcome = run_scenario(config);

        if (config.output == "-") {
            std::cout << outcome.payload;
            return outcome.exit_code;
        }
        // Write through a temporary so invalid runs never leave partial files.
        const std::string tmp = config.output + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot open output file '" << config.output << "'\n";
                return 1;
            }
            out << outcome.payload;
            out.close();
            if (out.fail()) {
                std::remove(tmp.c_str());
                std::cerr << "error: failed writing output file '" << config.output << "'\n";
                return 1;
            }
        }
        if (std::rename(tmp.c_str(), config.output.c_str()) != 0) {
            std::remove(tmp.c_str());
            std::cerr << "error: failed to move output into place at '" << config.output
                      << "'\n";
            return 1;
        }
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace fringewire::cli
