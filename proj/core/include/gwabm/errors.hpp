#pragma once

#include <stdexcept>
#include <string>

namespace gwabm {

/// Base class for all recoverable errors raised by loaders, generators
/// and the simulation front end.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad JSON, bad grid header, unknown enum text).
struct ParseError : Error {
    using Error::Error;
};

/// A building file that yields zero usable footprints.
struct EmptyRegionError : Error {
    using Error::Error;
};

/// Population grid cell with a negative count.
struct NegativeCountError : Error {
    using Error::Error;
};

/// Invalid region spec or parameter set (type mix, probabilities, ...).
struct SpecError : Error {
    using Error::Error;
};

/// Population parameters that cannot produce a valid population,
/// e.g. zero residential weight mass.
struct InfeasibleParamsError : Error {
    using Error::Error;
};

/// Authority bookkeeping referenced an individual id that does not exist.
struct UnknownIndividualError : Error {
    using Error::Error;
};

/// Filesystem failure while reading or writing simulation outputs.
struct IoError : Error {
    using Error::Error;
};

} // namespace gwabm
