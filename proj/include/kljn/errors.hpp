#pragma once
#include <stdexcept>
#include <string>

namespace kljn {

// Input fails a precondition (length mismatch, bad count, out-of-range value).
struct invalid_argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input is structurally valid but statistically unusable (e.g. zero variance).
struct degenerate_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A derived noise level or temperature came out negative; the configuration
// cannot be realized by physical noise generators.
struct unphysical_configuration_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A level-equation denominator vanished for this resistor set.
struct singular_configuration_error : std::domain_error {
    using std::domain_error::domain_error;
};

// The eavesdropper's claimed knowledge is incompatible with the measured
// record (no hypothesis survives).
struct inconsistent_knowledge_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A measured statistic cannot be mapped back to any resistor situation.
struct classification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kljn
