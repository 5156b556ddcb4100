#include "fringewire/quantum.hpp"

#include <cmath>

namespace fringewire {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kDualityTolerance = 1e-9;
const std::complex<double> kI{0.0, 1.0};

}  // namespace

void TwoModeState::validate() const {
    if (std::abs(norm_squared() - 1.0) > kNormTolerance)
        throw invalid_parameter("two-mode state is not normalized: |c1|^2+|c2|^2 = " +
                                std::to_string(norm_squared()));
}

PhaseConvention parse_phase_convention(const std::string& name) {
    if (name == "hadamard") return PhaseConvention::hadamard;
    if (name == "iphase") return PhaseConvention::iphase;
    throw invalid_parameter("phase_convention must be 'hadamard' or 'iphase' (got '" + name +
                            "')");
}

std::string to_string(PhaseConvention convention) {
    return convention == PhaseConvention::hadamard ? "hadamard" : "iphase";
}

TwoModeState free_propagate(const TwoModeState& state) {
    state.validate();
    return state;  // mode-diagonal: momentum is conserved at a free crossing
}

TwoModeState clamped_scatter(const TwoModeState& state, PhaseConvention convention) {
    state.validate();
    const double s = std::sqrt(0.5);
    if (convention == PhaseConvention::hadamard)
        return {(state.c1 + state.c2) * s, (state.c1 - state.c2) * s};
    return {(state.c1 + kI * state.c2) * s, (-kI * state.c1 - state.c2) * s};
}

std::pair<TwoModeState, MomentumRecord> wire_interact(const TwoModeState& state,
                                                      const WireSpec& wire, PhotonRng& rng,
                                                      PhaseConvention convention) {
    state.validate();
    if (wire.clamped) return {clamped_scatter(state, convention), MomentumRecord::erased()};

    // Free wire: projective momentum measurement, then a fair keep/switch.
    const int in_mode = rng.uniform() < std::norm(state.c1) ? 1 : 2;
    const bool switched = rng.uniform() < 0.5;
    const int out_mode = switched ? 3 - in_mode : in_mode;
    const TwoModeState out =
        out_mode == 1 ? TwoModeState{1.0, 0.0} : TwoModeState{0.0, 1.0};
    MomentumTransfer transfer = MomentumTransfer::zero;
    if (switched)
        transfer = in_mode == 1 ? MomentumTransfer::plus_dp : MomentumTransfer::minus_dp;
    return {out, MomentumRecord::stored(transfer)};
}

int detect(const TwoModeState& state, PhotonRng& rng) {
    state.validate();
    return rng.uniform() < std::norm(state.c1) ? 1 : 2;
}

double which_way_K(const MomentumRecord& record, double p1, double p2) {
    if (std::abs(p1 + p2 - 1.0) > kNormTolerance)
        throw invalid_parameter("click probabilities must sum to 1");
    if (record.kind == RecordKind::stored) return 1.0;
    return std::abs(p1 - p2);
}

DualityRecord duality_check(double which_way, double visibility) {
    if (!(which_way >= 0.0) || !(which_way <= 1.0))
        throw invalid_parameter("which-way information must lie in [0, 1]");
    if (!(visibility >= 0.0) || !(visibility <= 1.0))
        throw invalid_parameter("visibility must lie in [0, 1]");
    DualityRecord record;
    record.which_way_K = which_way;
    record.visibility_V = visibility;
    record.k2_plus_v2 = which_way * which_way + visibility * visibility;
    record.satisfied = record.k2_plus_v2 <= 1.0 + kDualityTolerance;
    return record;
}

std::vector<ScenarioRow> scenario_table() {
    auto row = [](std::string name, double k, double v, bool excluded) {
        const double sum = k * k + v * v;
        return ScenarioRow{std::move(name), k, v, sum, sum <= 1.0 + kDualityTolerance, excluded};
    };
    return {
        row("free_crossing", 1.0, 0.0, false),
        row("opaque_screen", 0.0, 1.0, false),
        row("clamped_wire_interacting", 0.0, 1.0, false),
        row("readable_wire_counterfactual", 1.0, 1.0, true),
    };
}

}  // namespace fringewire
