#include "fringewire/heisenberg.hpp"

namespace fringewire {

double deflection_momentum(double wavelength, double crossing_angle) {
    if (!(wavelength > 0.0)) throw invalid_parameter("wavelength must be positive");
    if (crossing_angle < 0.0) throw invalid_parameter("crossing angle must be nonnegative");
    return crossing_angle / wavelength;
}

UncertaintyReport uncertainty_report(const BeamPair& beams) {
    beams.validate();
    UncertaintyReport report;
    report.photon_momentum = 1.0 / beams.wavelength;
    report.deflection_momentum = deflection_momentum(beams.wavelength, beams.crossing_angle);
    // h/dp_y simplifies symbolically to lambda/alpha, the same expression as
    // the fringe spacing; evaluating both identically keeps dy/l == 1 exact.
    report.wire_position_uncertainty = beams.wavelength / beams.crossing_angle;
    report.fringe_spacing = fringe_spacing(beams);
    report.spans_fringe = report.wire_position_uncertainty >= report.fringe_spacing;
    return report;
}

}  // namespace fringewire
