#pragma once

#include <stdexcept>
#include <string>

namespace fringewire {

/// Invalid physical parameter or grid configuration. Maps to CLI exit code 1.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No usable fringe structure in the analyzed field (single beam, or fewer
/// than two extrema inside the window).
class fringe_detection_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Visibility requested on a profile with no optical power.
class undefined_visibility : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fringewire
