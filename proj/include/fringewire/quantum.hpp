#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "fringewire/obstruction.hpp"
#include "fringewire/rng.hpp"

namespace fringewire {

/// Single photon over the two momentum modes of the crossed beams.
struct TwoModeState {
    std::complex<double> c1;  // amplitude of the mode with momentum p1
    std::complex<double> c2;  // amplitude of the mode with momentum p2

    double norm_squared() const { return std::norm(c1) + std::norm(c2); }
    void validate() const;
};

enum class RecordKind { erased, stored };

/// Momentum exchanged with the wire, as a symbolic tag: dp = p2 - p1.
enum class MomentumTransfer { zero, plus_dp, minus_dp };

/// Which-way record left in the wire. When kind is erased the transfer tag
/// carries no information and must not influence any downstream result.
struct MomentumRecord {
    RecordKind kind = RecordKind::erased;
    MomentumTransfer transfer = MomentumTransfer::zero;

    static MomentumRecord erased() { return {RecordKind::erased, MomentumTransfer::zero}; }
    static MomentumRecord stored(MomentumTransfer t) { return {RecordKind::stored, t}; }
};

/// Sign completion of the wire's mode-mixing unitary. hadamard is the real
/// map (c1, c2) -> ((c1+c2), (c1-c2))/sqrt2; iphase is the Hermitian
/// beam-splitter variant (c1, c2) -> ((c1 + i c2), (-i c1 - c2))/sqrt2.
/// Both are self-inverse and split a basis state 50/50.
enum class PhaseConvention { hadamard, iphase };

PhaseConvention parse_phase_convention(const std::string& name);
std::string to_string(PhaseConvention convention);

struct DualityRecord {
    double which_way_K = 0.0;
    double visibility_V = 0.0;
    double k2_plus_v2 = 0.0;
    bool satisfied = false;
};

/// One canonical experimental configuration and its duality accounting.
struct ScenarioRow {
    std::string name;
    double which_way_K;
    double visibility_V;
    double k2_plus_v2;
    bool satisfied;
    bool excluded_by_physics;  // counterfactual rows only
};

/// Free crossing: momentum conservation keeps each mode amplitude unchanged.
TwoModeState free_propagate(const TwoModeState& state);

/// The clamped-wire mode-mixing unitary (deterministic, lossless).
TwoModeState clamped_scatter(const TwoModeState& state,
                             PhaseConvention convention = PhaseConvention::hadamard);

/// Scattering off the wire at a dark-fringe center.
///
/// Clamped wire: applies the mixing unitary; the recoil is absorbed by the
/// whole setup, so the record is erased. Free wire: the wire acts as a
/// momentum measurement; the incoming mode is sampled by the Born rule,
/// then the photon keeps or switches its mode with probability 1/2 each,
/// and the transfer is stored.
std::pair<TwoModeState, MomentumRecord> wire_interact(
    const TwoModeState& state, const WireSpec& wire, PhotonRng& rng,
    PhaseConvention convention = PhaseConvention::hadamard);

/// Born-rule detection: returns 1 with probability |c1|^2, else 2.
int detect(const TwoModeState& state, PhotonRng& rng);

/// Which-way information. A stored momentum record identifies the path
/// (K = 1); with the record erased only the predictability |P1 - P2| of the
/// click distribution remains.
double which_way_K(const MomentumRecord& record, double p1, double p2);

/// Evaluate the complementarity inequality K^2 + V^2 <= 1 (tolerance 1e-9).
DualityRecord duality_check(double which_way, double visibility);

/// The four canonical cases: free crossing, opaque screen, clamped wire
/// (interacting subset), and the readable-momentum counterfactual.
std::vector<ScenarioRow> scenario_table();

}  // namespace fringewire
