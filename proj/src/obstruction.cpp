#include "fringewire/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fringewire {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fraction of the cell [lo, hi) covered by the comb's wire intervals.
double covered_fraction(double lo, double hi, const WireComb& comb) {
    double covered = 0.0;
    for (const auto& wire : comb.wires) {
        const double wlo = wire.lower() + comb.misalignment;
        const double whi = wire.upper() + comb.misalignment;
        covered += std::max(0.0, std::min(hi, whi) - std::max(lo, wlo));
    }
    return std::min(covered / (hi - lo), 1.0);
}

void check_comb_in_window(const ComplexField& field, const WireComb& comb) {
    const double half_cell = 0.5 * field.spacing;
    const double lo = field.origin - half_cell;
    const double hi = field.position(field.size() - 1) + half_cell;
    for (const auto& wire : comb.wires) {
        if (wire.lower() + comb.misalignment < lo || wire.upper() + comb.misalignment > hi)
            throw invalid_parameter("wire at " + std::to_string(wire.center + comb.misalignment) +
                                    " um extends outside the field window");
    }
}

ScanRow masked_row(const ComplexField& field, const WireComb& comb, const BeamPair& beams,
                   const DetectorPlane& plane, const std::vector<double>& angles,
                   double baseline_sum, double row_center) {
    const ComplexField masked = apply_mask(field, comb);
    const FarField ff = farfield(masked, beams.wavelength, angles);
    const auto [c1, c2] = detector_counts(ff, plane);
    ScanRow row;
    row.wire_center = row_center;
    row.count_1 = c1;
    row.count_2 = c2;
    row.loss_fraction = 1.0 - (c1 + c2) / baseline_sum;
    return row;
}

}  // namespace

void WireSpec::validate() const {
    if (!(diameter > 0.0)) throw invalid_parameter("wire diameter must be positive");
    if (!std::isfinite(center)) throw invalid_parameter("wire center must be finite");
}

void WireComb::validate() const {
    for (const auto& wire : wires) wire.validate();
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(wires.size());
    for (const auto& wire : wires)
        intervals.emplace_back(wire.lower() + misalignment, wire.upper() + misalignment);
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        if (intervals[i].first < intervals[i - 1].second)
            throw invalid_parameter("wire intervals overlap");
    }
}

DetectorPlane DetectorPlane::for_beams(const BeamPair& beams, double half_width) {
    if (half_width <= 0.0) half_width = beams.crossing_angle / 4.0;
    const double c1 = +0.5 * beams.crossing_angle;  // beam 1 exit direction
    const double c2 = -0.5 * beams.crossing_angle;
    DetectorPlane plane;
    plane.acceptance_1 = {c1 - half_width, c1 + half_width};
    plane.acceptance_2 = {c2 - half_width, c2 + half_width};
    plane.validate();
    return plane;
}

void DetectorPlane::validate() const {
    if (!(acceptance_1.width() > 0.0) || !(acceptance_2.width() > 0.0))
        throw invalid_parameter("detector acceptance intervals must have positive width");
    const bool disjoint =
        acceptance_1.hi <= acceptance_2.lo || acceptance_2.hi <= acceptance_1.lo;
    if (!disjoint) throw invalid_parameter("detector acceptance intervals must be disjoint");
}

ComplexField apply_mask(const ComplexField& field, const WireComb& comb) {
    comb.validate();
    check_comb_in_window(field, comb);
    ComplexField out = field;
    const double half_cell = 0.5 * field.spacing;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = field.position(i);
        const double f = covered_fraction(y - half_cell, y + half_cell, comb);
        if (f > 0.0) out.samples[i] *= (1.0 - f);
    }
    return out;
}

double covered_power_fraction(const ComplexField& field, const WireComb& comb) {
    comb.validate();
    check_comb_in_window(field, comb);
    const double half_cell = 0.5 * field.spacing;
    double covered = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double y = field.position(i);
        const double power = std::norm(field.samples[i]);
        covered += power * covered_fraction(y - half_cell, y + half_cell, comb);
        total += power;
    }
    return total > 0.0 ? covered / total : 0.0;
}

ComplexField complement_field(const ComplexField& field, const WireComb& comb) {
    comb.validate();
    check_comb_in_window(field, comb);
    ComplexField out = field;
    const double half_cell = 0.5 * field.spacing;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = field.position(i);
        const double f = covered_fraction(y - half_cell, y + half_cell, comb);
        out.samples[i] *= f;
    }
    return out;
}

FarField farfield(const ComplexField& field, double wavelength, std::span<const double> angles) {
    if (!(wavelength > 0.0)) throw invalid_parameter("wavelength must be positive");
    const double k = kTwoPi / wavelength;
    const double dy = field.spacing;
    FarField out;
    out.angles.assign(angles.begin(), angles.end());
    out.amplitudes.resize(angles.size());
    for (std::size_t m = 0; m < angles.size(); ++m) {
        // Phasor recurrence along the grid: one complex multiply per sample.
        const std::complex<double> step = std::polar(1.0, -k * angles[m] * dy);
        std::complex<double> twiddle = std::polar(1.0, -k * angles[m] * field.origin);
        std::complex<double> sum = 0.0;
        for (const auto& e : field.samples) {
            sum += e * twiddle;
            twiddle *= step;
        }
        out.amplitudes[m] = sum * dy;
    }
    return out;
}

std::vector<double> matched_angles(const ComplexField& field, double wavelength) {
    const std::size_t n = field.size();
    const double dtheta = wavelength / field.window();
    std::vector<double> angles(n);
    for (std::size_t m = 0; m < n; ++m)
        angles[m] = (static_cast<double>(m) - 0.5 * static_cast<double>(n)) * dtheta;
    return angles;
}

double farfield_power(const FarField& ff, double wavelength) {
    if (ff.angles.size() < 2) throw invalid_parameter("far field needs at least two samples");
    const double dtheta = ff.angles[1] - ff.angles[0];
    double sum = 0.0;
    for (const auto& a : ff.amplitudes) sum += std::norm(a);
    return sum * dtheta / wavelength;
}

std::vector<double> detector_angles(const DetectorPlane& plane, std::size_t per_side) {
    plane.validate();
    if (per_side < 32) throw invalid_parameter("need at least 32 angle samples per detector");
    std::vector<double> angles;
    angles.reserve(2 * per_side);
    for (const AngleInterval* acc : {&plane.acceptance_1, &plane.acceptance_2}) {
        const double step = acc->width() / static_cast<double>(per_side - 1);
        for (std::size_t i = 0; i < per_side; ++i)
            angles.push_back(acc->lo + step * static_cast<double>(i));
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

std::pair<double, double> detector_counts(const FarField& ff, const DetectorPlane& plane) {
    plane.validate();
    auto integrate = [&](const AngleInterval& acc) {
        // Trapezoid over the samples inside the acceptance window.
        double sum = 0.0;
        std::size_t inside = 0;
        for (std::size_t i = 0; i + 1 < ff.angles.size(); ++i) {
            if (!acc.contains(ff.angles[i]) || !acc.contains(ff.angles[i + 1])) continue;
            const double h = ff.angles[i + 1] - ff.angles[i];
            sum += 0.5 * h * (std::norm(ff.amplitudes[i]) + std::norm(ff.amplitudes[i + 1]));
            ++inside;
        }
        if (inside + 1 < 32)
            throw invalid_parameter("detector acceptance resolved by fewer than 32 samples");
        return sum;
    };
    return {integrate(plane.acceptance_1), integrate(plane.acceptance_2)};
}

ScanResult scan_wire(const BeamPair& beams, const WireSpec& wire, const DetectorPlane& plane,
                     std::span<const double> positions) {
    beams.validate();
    wire.validate();
    if (positions.empty()) throw invalid_parameter("scan positions list is empty");
    if (!(wire.diameter < fringe_spacing(beams)))
        throw invalid_parameter("wire diameter must be below the fringe spacing");

    const GridSpec grid = default_grid(beams);
    const ComplexField field = superpose(beams, grid.window, grid.samples);
    const std::vector<double> angles = detector_angles(plane);
    const FarField base = farfield(field, beams.wavelength, angles);
    const auto [b1, b2] = detector_counts(base, plane);
    const double baseline = b1 + b2;

    ScanResult result;
    result.rows.reserve(positions.size());
    for (double pos : positions) {
        WireComb comb;
        comb.wires.push_back({pos, wire.diameter, wire.clamped});
        result.rows.push_back(masked_row(field, comb, beams, plane, angles, baseline, pos));
    }
    return result;
}

LossBreakdown blocked_beam_breakdown(const BeamPair& beams, const WireSpec& wire,
                                     const DetectorPlane& plane) {
    beams.validate();
    wire.validate();
    BeamPair single = beams;
    single.amplitude_ratio = 0.0;  // block beam 2

    const GridSpec grid = default_grid(single);
    const ComplexField field = superpose(single, grid.window, grid.samples);
    WireComb comb;
    comb.wires.push_back(wire);
    const ComplexField masked = apply_mask(field, comb);

    const std::vector<double> angles = detector_angles(plane);
    const auto [b1, b2] = detector_counts(farfield(field, single.wavelength, angles), plane);
    const auto [m1, m2] = detector_counts(farfield(masked, single.wavelength, angles), plane);

    LossBreakdown loss;
    loss.total = 1.0 - (m1 + m2) / (b1 + b2);
    loss.absorbed = covered_power_fraction(field, comb);
    loss.diffracted = loss.total - loss.absorbed;
    return loss;
}

double blocked_beam_loss(const BeamPair& beams, const WireSpec& wire, const DetectorPlane& plane) {
    return blocked_beam_breakdown(beams, wire, plane).total;
}

std::vector<double> dark_comb_positions(const BeamPair& beams, double wire_diameter) {
    const GridSpec grid = default_grid(beams);
    const ComplexField field = superpose(beams, grid.window, grid.samples);
    const FringeGeometry geometry = locate_fringes(field, beams);
    // Leave room for misalignments up to half a period; the envelope is
    // negligible at the dropped edge nulls anyway.
    const double margin =
        0.5 * wire_diameter + 0.75 * fringe_spacing(beams) + field.spacing;
    const double reach = 0.5 * grid.window - margin;
    std::vector<double> centers;
    for (std::size_t i = 0; i < geometry.dark_positions.size(); ++i) {
        if (geometry.is_null[i] && std::abs(geometry.dark_positions[i]) <= reach)
            centers.push_back(geometry.dark_positions[i]);
    }
    if (centers.empty())
        throw fringe_detection_error("no null fringes found for the wire comb");
    return centers;
}

ScanResult comb_at_dark_fringes(const BeamPair& beams, const DetectorPlane& plane,
                                double misalignment, double wire_diameter) {
    beams.validate();
    if (!(wire_diameter < fringe_spacing(beams)))
        throw invalid_parameter("wire diameter must be below the fringe spacing");

    const GridSpec grid = default_grid(beams);
    const ComplexField field = superpose(beams, grid.window, grid.samples);
    WireComb comb;
    comb.misalignment = misalignment;
    for (double center : dark_comb_positions(beams, wire_diameter))
        comb.wires.push_back({center, wire_diameter, true});

    const std::vector<double> angles = detector_angles(plane);
    const FarField base = farfield(field, beams.wavelength, angles);
    const auto [b1, b2] = detector_counts(base, plane);

    ScanResult result;
    result.rows.push_back(
        masked_row(field, comb, beams, plane, angles, b1 + b2, misalignment));
    return result;
}

double calibrate_waist(const BeamPair& beams, const WireSpec& wire, double target_loss,
                       double detector_half_width) {
    if (!(target_loss > 0.0) || !(target_loss < 1.0))
        throw invalid_parameter("calibration target loss must lie in (0, 1)");

    auto loss_at = [&](double waist) {
        BeamPair b = beams;
        b.waist = waist;
        return blocked_beam_loss(b, wire, DetectorPlane::for_beams(b, detector_half_width));
    };

    double lo = std::max(10.0 * beams.wavelength, 1.5 * wire.diameter);
    double hi = 4000.0;
    double loss_lo = loss_at(lo);
    double loss_hi = loss_at(hi);
    if (!(loss_lo > target_loss && target_loss > loss_hi))
        throw invalid_parameter("calibration target " + std::to_string(target_loss) +
                                " is outside the bracketed loss range [" +
                                std::to_string(loss_hi) + ", " + std::to_string(loss_lo) + "]");

    // Loss decreases monotonically with waist: plain bisection on the sign.
    double mid = lo;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double loss = loss_at(mid);
        if (std::abs(loss - target_loss) < 1e-4) return mid;
        if (loss > target_loss) lo = mid;
        else hi = mid;
    }
    throw invalid_parameter("waist calibration did not converge");
}

}  // namespace fringewire
