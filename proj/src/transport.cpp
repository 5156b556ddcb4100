#include "fringewire/transport.hpp"

#include <cmath>
#include <string>

namespace fringewire {

namespace {

// Per-photon outcome of the two-mode pipeline.
struct PhotonOutcome {
    bool lost = false;
    bool interacting = false;
    bool switched = false;
    int detector = 0;
};

// One photon through the pipeline. Draw positions are fixed by construction:
// u0 source mode, u1 interaction gate, then path draws. The gate draw happens
// whether or not a wire is present, so degenerate configurations (no wire,
// interacting_fraction = 0) consume identical stream positions.
PhotonOutcome simulate_photon(const EnsembleConfig& config, PhotonRng& rng) {
    PhotonOutcome outcome;
    const int source_mode = rng.uniform() < config.source_split ? 1 : 2;
    TwoModeState state =
        source_mode == 1 ? TwoModeState{1.0, 0.0} : TwoModeState{0.0, 1.0};

    const double gate = rng.uniform();
    outcome.interacting = config.wire.has_value() && gate < config.interacting_fraction;

    MomentumRecord record = MomentumRecord::erased();
    if (outcome.interacting) {
        auto [scattered, rec] = wire_interact(state, *config.wire, rng, config.convention);
        state = scattered;
        record = rec;
        outcome.switched =
            rec.kind == RecordKind::stored && rec.transfer != MomentumTransfer::zero;
    } else {
        state = free_propagate(state);
    }
    outcome.detector = detect(state, rng);
    return outcome;
}

void assign_duality(ClassStats& stats, double k, double v) {
    if (stats.count == 0) {
        stats.which_way_K = 0.0;
        stats.visibility_V = 0.0;
        stats.k2_plus_v2 = 0.0;
        stats.satisfied = true;
        return;
    }
    const DualityRecord record = duality_check(k, v);
    stats.which_way_K = record.which_way_K;
    stats.visibility_V = record.visibility_V;
    stats.k2_plus_v2 = record.k2_plus_v2;
    stats.satisfied = record.satisfied;
}

RunReport run_tallied(const EnsembleConfig& config, double absorption_probability,
                      bool hybrid) {
    config.validate();
    RunReport report;
    report.seed_echo = config.seed;

    const std::uint64_t n = config.photon_count;
    const int shards = config.shards;
    for (int shard = 0; shard < shards; ++shard) {
        const std::uint64_t begin = n * static_cast<std::uint64_t>(shard) / shards;
        const std::uint64_t end = n * static_cast<std::uint64_t>(shard + 1) / shards;
        for (std::uint64_t i = begin; i < end; ++i) {
            PhotonRng rng(config.seed, i);
            if (hybrid && rng.uniform() < absorption_probability) {
                ++report.lost;
                continue;
            }
            const PhotonOutcome outcome = simulate_photon(config, rng);
            ClassStats& cls =
                outcome.interacting ? report.interacting_class : report.free_class;
            ++cls.count;
            if (outcome.detector == 1) {
                ++cls.detector_1;
                ++report.detector_1;
            } else {
                ++cls.detector_2;
                ++report.detector_2;
            }
            if (outcome.switched) ++cls.switches;
        }
    }

    // Free photons keep their momentum, so a click identifies the source.
    assign_duality(report.free_class, 1.0, 0.0);
    if (config.wire && config.wire->clamped) {
        // Erased record: only the predictability of the scattered state
        // remains, and it is an even split for either source mode.
        const double k = which_way_K(MomentumRecord::erased(), 0.5, 0.5);
        assign_duality(report.interacting_class, k, 1.0);
    } else if (config.wire) {
        // Stored record restores the path; the wire position uncertainty
        // spans a fringe, so no fringe visibility survives.
        const double k = which_way_K(MomentumRecord::stored(MomentumTransfer::zero), 0.5, 0.5);
        assign_duality(report.interacting_class, k, 0.0);
    } else {
        assign_duality(report.interacting_class, 0.0, 0.0);
    }
    return report;
}

}  // namespace

void EnsembleConfig::validate() const {
    if (photon_count < 1) throw invalid_parameter("photon_count must be at least 1");
    if (!(source_split >= 0.0) || !(source_split <= 1.0))
        throw invalid_parameter("source_split must lie in [0, 1]");
    if (!(interacting_fraction >= 0.0) || !(interacting_fraction <= 1.0))
        throw invalid_parameter("interacting_fraction must lie in [0, 1]");
    if (shards < 1) throw invalid_parameter("shards must be at least 1");
    if (wire) wire->validate();
}

RunReport run_ensemble(const EnsembleConfig& config) {
    return run_tallied(config, 0.0, false);
}

RunReport run_ensemble_hybrid(const EnsembleConfig& config, double absorption_probability) {
    if (!(absorption_probability >= 0.0) || !(absorption_probability <= 1.0))
        throw invalid_parameter("absorption probability must lie in [0, 1]");
    return run_tallied(config, absorption_probability, true);
}

SymmetryStatistic detector_symmetry_test(const RunReport& report, const EnsembleConfig& config) {
    if (report.seed_echo != config.seed)
        throw invalid_parameter("report/config mismatch: different seeds");
    if (!config.wire || !config.wire->clamped || config.source_split != 0.5)
        throw invalid_parameter(
            "symmetry test expects a clamped wire and source_split = 0.5");
    const double detected = static_cast<double>(report.detected());
    if (detected == 0.0) throw invalid_parameter("no detected photons");
    const double d1 = static_cast<double>(report.detector_1);
    const double d2 = static_cast<double>(report.detector_2);
    SymmetryStatistic stat;
    stat.chi_square = (d1 - d2) * (d1 - d2) / detected;
    stat.pass = stat.chi_square <= stat.threshold;
    return stat;
}

double count_conservation_check(const RunReport& with_wire, const RunReport& without_wire) {
    const std::uint64_t n_with = with_wire.detected() + with_wire.lost;
    const std::uint64_t n_without = without_wire.detected() + without_wire.lost;
    if (n_with != n_without)
        throw invalid_parameter("count conservation check needs equal photon counts");
    const double diff = static_cast<double>(with_wire.detected()) -
                        static_cast<double>(without_wire.detected());
    return std::abs(diff) / static_cast<double>(n_with);
}

double spatial_interaction_probability(const BeamPair& beams, double wire_center, double radius) {
    if (!(radius > 0.0)) throw invalid_parameter("interaction radius must be positive");
    const GridSpec grid = default_grid(beams);
    const ComplexField field = superpose(beams, grid.window, grid.samples);
    WireComb zone;
    zone.wires.push_back({wire_center, 2.0 * radius, true});
    return field_power(complement_field(field, zone)) / field_power(field);
}

double calibrate_interaction_radius(const BeamPair& beams, double wire_center,
                                    double target_fraction) {
    if (!(target_fraction > 0.0) || !(target_fraction < 1.0))
        throw invalid_parameter("target fraction must lie in (0, 1)");
    const GridSpec grid = default_grid(beams);
    double lo = grid.window / static_cast<double>(grid.samples);
    double hi = 0.4 * grid.window;
    if (spatial_interaction_probability(beams, wire_center, hi) < target_fraction)
        throw invalid_parameter("target fraction unreachable within the field window");
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double p = spatial_interaction_probability(beams, wire_center, mid);
        if (std::abs(p - target_fraction) < 1e-6) return mid;
        if (p < target_fraction) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace fringewire
