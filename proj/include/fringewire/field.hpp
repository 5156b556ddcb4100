#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fringewire/errors.hpp"

namespace fringewire {

/// Two Gaussian beams crossing at a small angle. Lengths in micrometers,
/// angles in radians. The envelope waist is the 1/e^2 intensity half-width.
struct BeamPair {
    double wavelength = 0.633;
    double crossing_angle = 0.01;
    double waist = 500.0;
    double amplitude_ratio = 1.0;  // beam 2 relative to beam 1
    double relative_phase = 0.0;   // of beam 2 at y = 0

    /// Throws invalid_parameter outside the small-angle thin-envelope regime.
    void validate() const;
};

/// Complex scalar amplitude sampled on a uniform transverse grid at the
/// intersection plane. Sample i sits at origin + i * spacing.
struct ComplexField {
    std::vector<std::complex<double>> samples;
    double origin = 0.0;
    double spacing = 0.0;

    std::size_t size() const { return samples.size(); }
    double position(std::size_t i) const { return origin + spacing * static_cast<double>(i); }
    double window() const { return spacing * static_cast<double>(samples.size()); }
};

/// Refined extremum positions of the envelope-compensated intensity.
/// dark_positions lists minima, bright_positions maxima; is_null flags the
/// minima whose compensated depth is below 1e-3 of the adjacent maxima.
struct FringeGeometry {
    double spacing_l = 0.0;  // period measured from the grid, um
    std::vector<double> dark_positions;
    std::vector<double> bright_positions;
    std::vector<bool> is_null;
};

/// Grid wide enough for the Gaussian envelope and fine enough for the fringes.
struct GridSpec {
    double window;
    std::size_t samples;
};

/// Fringe period l = wavelength / crossing_angle. Throws on a zero angle
/// (no-fringe configuration).
double fringe_spacing(const BeamPair& beams);

/// Closed-form field amplitude at transverse position y.
std::complex<double> amplitude_at(const BeamPair& beams, double y);

/// Intensity envelope |G(y)|^2 of a unit-amplitude single beam.
double envelope_at(const BeamPair& beams, double y);

/// Default analysis grid: window = 6 * waist, at least 4096 samples and at
/// least 16 samples per fringe.
GridSpec default_grid(const BeamPair& beams);

/// Sample the two-beam superposition over [-window/2, window/2).
/// Rejects grids coarser than 8 samples per fringe.
ComplexField superpose(const BeamPair& beams, double window, std::size_t sample_count);

/// One beam of the pair alone on the same grid (component = 1 or 2).
ComplexField beam_component(const BeamPair& beams, double window, std::size_t sample_count,
                            int component);

/// Elementwise |E|^2.
std::vector<double> intensity(const ComplexField& field);

/// Intensity divided by the envelope, so fringe contrast is read directly.
std::vector<double> compensated_intensity(const ComplexField& field, const BeamPair& beams);

/// Fringe contrast (I_max - I_min) / (I_max + I_min) with parabolic
/// refinement of interior extrema. Throws undefined_visibility on an
/// all-zero profile.
double visibility(std::span<const double> profile);

/// Visibility of the beam pair: superpose, compensate, measure contrast.
double beam_visibility(const BeamPair& beams, double window, std::size_t sample_count);

/// Locate fringe extrema of the compensated intensity. Throws
/// fringe_detection_error when fewer than two extrema exist.
FringeGeometry locate_fringes(const ComplexField& field, const BeamPair& beams);

/// Integrated optical power sum(|E|^2) * spacing.
double field_power(const ComplexField& field);

}  // namespace fringewire
