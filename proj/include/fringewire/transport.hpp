#pragma once

#include <cstdint>
#include <optional>

#include "fringewire/quantum.hpp"

namespace fringewire {

/// Monte Carlo ensemble configuration. interacting_fraction is the
/// aggregate probability that a photon approaches the wire closely enough
/// to scatter; source_split is the probability of entering in mode 1.
struct EnsembleConfig {
    std::uint64_t photon_count = 100000;
    double source_split = 0.5;
    double interacting_fraction = 0.12;
    std::optional<WireSpec> wire;
    std::uint64_t seed = 0;
    int shards = 1;
    PhaseConvention convention = PhaseConvention::hadamard;

    void validate() const;
};

/// Tally and duality bookkeeping for one photon class.
struct ClassStats {
    std::uint64_t count = 0;
    std::uint64_t detector_1 = 0;
    std::uint64_t detector_2 = 0;
    std::uint64_t switches = 0;  // stored records with nonzero transfer
    double which_way_K = 0.0;
    double visibility_V = 0.0;
    double k2_plus_v2 = 0.0;
    bool satisfied = true;

    bool operator==(const ClassStats&) const = default;
};

struct RunReport {
    std::uint64_t detector_1 = 0;
    std::uint64_t detector_2 = 0;
    std::uint64_t lost = 0;
    ClassStats free_class;
    ClassStats interacting_class;
    std::uint64_t seed_echo = 0;

    std::uint64_t detected() const { return detector_1 + detector_2; }
    bool operator==(const RunReport&) const = default;
};

/// Two-cell chi-square of the detector split against a fair coin.
struct SymmetryStatistic {
    double chi_square = 0.0;
    double threshold = 16.0;  // 4-sigma band for one degree of freedom
    bool pass = false;
};

/// Run the photon ensemble. Deterministic for a fixed seed and independent
/// of the shard count. Pure two-mode transport loses no photons.
RunReport run_ensemble(const EnsembleConfig& config);

/// Hybrid mode: each photon is first absorbed with the classical
/// probability taken from the obstruction pipeline, then transported.
RunReport run_ensemble_hybrid(const EnsembleConfig& config, double absorption_probability);

/// Chi-square test of the detector split for a clamped-wire, fair-split run.
SymmetryStatistic detector_symmetry_test(const RunReport& report, const EnsembleConfig& config);

/// Relative change of the total detected count between two equal-seed runs.
double count_conservation_check(const RunReport& with_wire, const RunReport& without_wire);

/// Gaussian power fraction within +-radius of the wire center: the spatial
/// alternative to the Bernoulli interaction gate.
double spatial_interaction_probability(const BeamPair& beams, double wire_center, double radius);

/// Solve for the interaction radius whose spatial probability matches the
/// target fraction (bisection, 1e-6 absolute).
double calibrate_interaction_radius(const BeamPair& beams, double wire_center,
                                    double target_fraction);

}  // namespace fringewire
