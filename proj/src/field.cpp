#include "fringewire/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fringewire {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Vertex of the parabola through (x0 - h, ym), (x0, y0), (x0 + h, yp).
// Returns {position, value}; falls back to the center point when flat.
struct Vertex {
    double x;
    double y;
};

Vertex parabolic_vertex(double x0, double h, double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return {x0, y0};
    const double delta = 0.5 * (ym - yp) / denom;
    return {x0 + delta * h, y0 - 0.25 * (ym - yp) * delta};
}

struct Extremum {
    double position;
    double value;
    std::size_t index;
};

// Interior local minima/maxima of a sampled profile, parabolically refined.
// Plateaus are treated as a single extremum at their left edge.
void find_extrema(std::span<const double> v, double origin, double spacing,
                  std::vector<Extremum>& minima, std::vector<Extremum>& maxima) {
    const std::size_t n = v.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool is_min = v[i] < v[i - 1] && v[i] <= v[i + 1];
        const bool is_max = v[i] > v[i - 1] && v[i] >= v[i + 1];
        if (!is_min && !is_max) continue;
        const double x0 = origin + spacing * static_cast<double>(i);
        Vertex vx = parabolic_vertex(x0, spacing, v[i - 1], v[i], v[i + 1]);
        if (is_min) {
            // A fitted vertex dipping below zero is an artifact on a
            // nonnegative profile.
            minima.push_back({vx.x, std::max(vx.y, 0.0), i});
        } else {
            maxima.push_back({vx.x, vx.y, i});
        }
    }
}

}  // namespace

void BeamPair::validate() const {
    if (!(wavelength > 0.0))
        throw invalid_parameter("wavelength must be positive (got " + std::to_string(wavelength) + ")");
    if (!(crossing_angle > 0.0) || !(crossing_angle < 0.2))
        throw invalid_parameter("crossing_angle must lie in (0, 0.2) rad (got " +
                                std::to_string(crossing_angle) + ")");
    if (!(waist >= 10.0 * wavelength))
        throw invalid_parameter("waist must be at least 10 wavelengths (got " +
                                std::to_string(waist) + " um)");
    if (!(amplitude_ratio >= 0.0))
        throw invalid_parameter("amplitude_ratio must be nonnegative");
    if (!std::isfinite(relative_phase))
        throw invalid_parameter("relative_phase must be finite");
}

double fringe_spacing(const BeamPair& beams) {
    if (beams.crossing_angle == 0.0)
        throw invalid_parameter("crossing_angle is zero: parallel beams form no fringes");
    if (!(beams.crossing_angle > 0.0) || !(beams.wavelength > 0.0))
        throw invalid_parameter("fringe spacing needs positive wavelength and crossing angle");
    return beams.wavelength / beams.crossing_angle;
}

namespace {

// One beam of the pair: plane-wave phase times the shared Gaussian envelope.
std::complex<double> component_amplitude(const BeamPair& beams, double y, int component) {
    const double k = kTwoPi / beams.wavelength;
    const double phase = 0.5 * k * y * beams.crossing_angle;
    const double g = std::exp(-(y * y) / (beams.waist * beams.waist));
    if (component == 1) return g * std::polar(1.0, phase);
    return g * std::polar(beams.amplitude_ratio, -phase + beams.relative_phase);
}

}  // namespace

std::complex<double> amplitude_at(const BeamPair& beams, double y) {
    return component_amplitude(beams, y, 1) + component_amplitude(beams, y, 2);
}

double envelope_at(const BeamPair& beams, double y) {
    const double g = std::exp(-(y * y) / (beams.waist * beams.waist));
    return g * g;
}

GridSpec default_grid(const BeamPair& beams) {
    const double window = 6.0 * beams.waist;
    const double period = fringe_spacing(beams);
    std::size_t samples = 4096;
    const double required = 16.0 * window / period;
    while (static_cast<double>(samples) < required) samples *= 2;
    return {window, samples};
}

ComplexField superpose(const BeamPair& beams, double window, std::size_t sample_count) {
    beams.validate();
    if (!(window > 0.0)) throw invalid_parameter("window must be positive");
    if (sample_count < 16) throw invalid_parameter("sample_count must be at least 16");
    const double spacing = window / static_cast<double>(sample_count);
    const double period = fringe_spacing(beams);
    if (spacing > period / 8.0 * (1.0 + 1e-12))
        throw invalid_parameter(
            "grid spacing " + std::to_string(spacing) + " um exceeds l/8 = " +
            std::to_string(period / 8.0) + " um: fringes would alias");

    ComplexField field;
    field.origin = -0.5 * window;
    field.spacing = spacing;
    field.samples.resize(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i)
        field.samples[i] = amplitude_at(beams, field.position(i));
    return field;
}

ComplexField beam_component(const BeamPair& beams, double window, std::size_t sample_count,
                            int component) {
    if (component != 1 && component != 2)
        throw invalid_parameter("beam component must be 1 or 2");
    ComplexField field = superpose(beams, window, sample_count);
    for (std::size_t i = 0; i < field.size(); ++i)
        field.samples[i] = component_amplitude(beams, field.position(i), component);
    return field;
}

std::vector<double> intensity(const ComplexField& field) {
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) out[i] = std::norm(field.samples[i]);
    return out;
}

std::vector<double> compensated_intensity(const ComplexField& field, const BeamPair& beams) {
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double env = envelope_at(beams, field.position(i));
        // Where the envelope underflows there is no light to compensate.
        out[i] = env > 0.0 ? std::norm(field.samples[i]) / env : 0.0;
    }
    return out;
}

double visibility(std::span<const double> profile) {
    if (profile.empty()) throw undefined_visibility("visibility of an empty profile");
    double lo = profile[0];
    double hi = profile[0];
    for (double v : profile) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= 0.0) throw undefined_visibility("visibility of an all-zero profile");

    // When the profile has interior structure, contrast is read from refined
    // extrema; otherwise the raw sample range stands (monotone or constant).
    std::vector<Extremum> minima;
    std::vector<Extremum> maxima;
    find_extrema(profile, 0.0, 1.0, minima, maxima);
    if (!minima.empty() && !maxima.empty()) {
        lo = minima[0].value;
        for (const auto& m : minima) lo = std::min(lo, m.value);
        hi = maxima[0].value;
        for (const auto& m : maxima) hi = std::max(hi, m.value);
    }
    return (hi - lo) / (hi + lo);
}

double beam_visibility(const BeamPair& beams, double window, std::size_t sample_count) {
    const ComplexField field = superpose(beams, window, sample_count);
    const std::vector<double> comp = compensated_intensity(field, beams);
    return visibility(comp);
}

FringeGeometry locate_fringes(const ComplexField& field, const BeamPair& beams) {
    if (field.size() < 3) throw fringe_detection_error("field too short for fringe analysis");
    const std::vector<double> comp = compensated_intensity(field, beams);

    // A flat compensated profile (single beam) has no fringes; without this
    // guard rounding noise on the plateau would masquerade as extrema.
    const auto [lo_it, hi_it] = std::minmax_element(comp.begin(), comp.end());
    if (!(*hi_it > 0.0) || *hi_it - *lo_it <= 1e-9 * *hi_it)
        throw fringe_detection_error("no fringes detected: profile has no contrast");

    std::vector<Extremum> minima;
    std::vector<Extremum> maxima;
    find_extrema(comp, field.origin, field.spacing, minima, maxima);
    if (minima.empty() || maxima.empty())
        throw fringe_detection_error(
            "no fringes detected: need at least one interior minimum and maximum");

    FringeGeometry geometry;
    geometry.dark_positions.reserve(minima.size());
    geometry.is_null.reserve(minima.size());
    for (const auto& m : minima) geometry.dark_positions.push_back(m.position);
    geometry.bright_positions.reserve(maxima.size());
    for (const auto& m : maxima) geometry.bright_positions.push_back(m.position);

    // Dark classification: depth below 1e-3 of the neighboring maxima.
    for (const auto& m : minima) {
        double left = -1.0;
        double right = -1.0;
        for (const auto& mx : maxima) {
            if (mx.position < m.position) left = mx.value;
            if (mx.position > m.position) {
                right = mx.value;
                break;
            }
        }
        double neighbor;
        if (left >= 0.0 && right >= 0.0) neighbor = 0.5 * (left + right);
        else if (left >= 0.0) neighbor = left;
        else neighbor = right;
        geometry.is_null.push_back(neighbor > 0.0 && m.value < 1e-3 * neighbor);
    }

    // Measured period: mean spacing of consecutive like extrema.
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i < minima.size(); ++i) {
        sum += minima[i].position - minima[i - 1].position;
        ++count;
    }
    for (std::size_t i = 1; i < maxima.size(); ++i) {
        sum += maxima[i].position - maxima[i - 1].position;
        ++count;
    }
    if (count == 0)
        throw fringe_detection_error("single fringe in window: period not measurable");
    geometry.spacing_l = sum / static_cast<double>(count);
    return geometry;
}

double field_power(const ComplexField& field) {
    double sum = 0.0;
    for (const auto& s : field.samples) sum += std::norm(s);
    return sum * field.spacing;
}

}  // namespace fringewire
