#pragma once

#include "fringewire/field.hpp"

namespace fringewire {

/// Uncertainty analysis of a free wire. Momenta are expressed in units of
/// h per micrometer, with Planck's constant carried symbolically so the
/// identity dy = l stays exact.
struct UncertaintyReport {
    double photon_momentum;            // p = h/lambda, in h/um
    double deflection_momentum;        // dp_y = p * alpha, in h/um
    double wire_position_uncertainty;  // dy >= h/dp_y, in um
    double fringe_spacing;             // l = lambda/alpha, in um
    bool spans_fringe;                 // dy >= l
};

/// Momentum the wire must supply to deflect a photon by the crossing angle:
/// dp_y = p * alpha = alpha/lambda in units of h/um. Accepts alpha = 0 (no
/// deflection); rejects negative values and nonpositive wavelengths.
double deflection_momentum(double wavelength, double crossing_angle);

/// Full report; dy and l evaluate through the same expression, so their
/// ratio is exactly 1 for every valid beam pair.
UncertaintyReport uncertainty_report(const BeamPair& beams);

}  // namespace fringewire
