#pragma once
#include <stdexcept>

namespace cubespec {

// Guard violations get their own types so callers (and the CLI) can map them
// to exit codes without matching message strings.
struct DimensionTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotIndependent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooExpensive : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Malformed user input (vectors, matrices, bad parameter combinations).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cubespec
