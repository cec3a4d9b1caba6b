#pragma once

#include <stdexcept>
#include <string>

namespace wavemaps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// product would fold high modes back into the band
struct AliasingError : Error {
    using Error::Error;
};

// integrand not compactly supported inside the central half of the grid
struct SupportError : Error {
    using Error::Error;
};

struct ResolutionError : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace wavemaps
