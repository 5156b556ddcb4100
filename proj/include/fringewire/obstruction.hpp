#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "fringewire/field.hpp"

namespace fringewire {

/// Thin opaque wire in the intersection plane. A clamped wire is rigidly
/// attached to the whole setup; a free wire could in principle store the
/// recoil momentum.
struct WireSpec {
    double center = 0.0;     // um
    double diameter = 17.0;  // um
    bool clamped = true;

    double lower() const { return center - 0.5 * diameter; }
    double upper() const { return center + 0.5 * diameter; }
    void validate() const;
};

/// Set of wires sharing a common misalignment offset. Wire intervals must be
/// pairwise disjoint after the offset is applied.
struct WireComb {
    std::vector<WireSpec> wires;
    double misalignment = 0.0;  // um, added to every center

    void validate() const;
};

struct AngleInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double angle) const { return angle >= lo && angle <= hi; }
    double width() const { return hi - lo; }
};

/// Far-field acceptance windows of the two end detectors. Detector 1 is
/// centered on beam 1's exit direction (+alpha/2 under the field model's
/// sign convention), detector 2 on beam 2's.
struct DetectorPlane {
    AngleInterval acceptance_1;
    AngleInterval acceptance_2;

    /// Half-angle alpha/4 around each beam direction unless overridden.
    static DetectorPlane for_beams(const BeamPair& beams, double half_width = 0.0);
    void validate() const;
};

struct ScanRow {
    double wire_center = 0.0;
    double count_1 = 0.0;
    double count_2 = 0.0;
    double loss_fraction = 0.0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
};

/// Discrete Fraunhofer transform samples: amplitudes[i] at angles[i].
struct FarField {
    std::vector<double> angles;
    std::vector<std::complex<double>> amplitudes;
};

/// Absorbed = power removed at the mask; diffracted = additional power
/// steered outside the detector acceptances.
struct LossBreakdown {
    double total = 0.0;
    double absorbed = 0.0;
    double diffracted = 0.0;
};

/// Multiply the field by the wire transmission mask. Samples partially
/// covered by a wire are weighted by their uncovered fraction.
ComplexField apply_mask(const ComplexField& field, const WireComb& comb);

/// Complementary aperture: the field restricted to the wire intervals, with
/// the same partial-coverage weighting. apply_mask + complement_field
/// reconstruct the input exactly.
ComplexField complement_field(const ComplexField& field, const WireComb& comb);

/// Fraction of the field power falling on the wire intervals (the absorbed
/// part, with partial cells weighted by coverage).
double covered_power_fraction(const ComplexField& field, const WireComb& comb);

/// A(theta) = sum_j E(y_j) exp(-i k theta y_j) dy at the given angles.
FarField farfield(const ComplexField& field, double wavelength, std::span<const double> angles);

/// The discrete-transform angle grid on which Parseval holds exactly.
std::vector<double> matched_angles(const ComplexField& field, double wavelength);

/// Integrated far-field power (1/lambda) * sum |A|^2 dtheta on a uniform grid.
double farfield_power(const FarField& ff, double wavelength);

/// Sampling grid covering both acceptance windows, per_side points each.
std::vector<double> detector_angles(const DetectorPlane& plane, std::size_t per_side = 129);

/// Power entering each detector. Requires at least 32 far-field samples
/// inside each acceptance window.
std::pair<double, double> detector_counts(const FarField& ff, const DetectorPlane& plane);

/// Move one wire across the intersection; loss is relative to the unmasked
/// detector sum.
ScanResult scan_wire(const BeamPair& beams, const WireSpec& wire, const DetectorPlane& plane,
                     std::span<const double> positions);

/// Loss with one beam blocked (amplitude_ratio forced to 0), wire present.
double blocked_beam_loss(const BeamPair& beams, const WireSpec& wire, const DetectorPlane& plane);

/// Same configuration with absorbed/diffracted components reported separately.
LossBreakdown blocked_beam_breakdown(const BeamPair& beams, const WireSpec& wire,
                                     const DetectorPlane& plane);

/// Wire centers for a comb at every null of the default-grid fringe pattern.
/// Nulls too close to the window edge for a misaligned wire are dropped.
std::vector<double> dark_comb_positions(const BeamPair& beams, double wire_diameter = 17.0);

/// Comb of wires at all dark fringes, optionally misaligned; single-row scan
/// result with wire_center echoing the misalignment.
ScanResult comb_at_dark_fringes(const BeamPair& beams, const DetectorPlane& plane,
                                double misalignment, double wire_diameter = 17.0);

/// Solve for the waist at which blocked_beam_loss equals target_loss, by
/// bisection to 1e-4 absolute on the loss. The detector half-width follows
/// DetectorPlane::for_beams (0 = the alpha/4 default).
double calibrate_waist(const BeamPair& beams, const WireSpec& wire, double target_loss,
                       double detector_half_width = 0.0);

}  // namespace fringewire
