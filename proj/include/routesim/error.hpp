#pragma once

#include <stdexcept>
#include <string>

namespace routesim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input document (edge list, scenario file, checkpoint manifest).
struct ParseError : Error {
    using Error::Error;
};

// A policy or caller broke an interface contract (e.g. routed to a
// non-neighbor). Aborts the simulation run.
struct ContractViolation : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace routesim
