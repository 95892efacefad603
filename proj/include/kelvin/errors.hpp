#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kelvin {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter outside its admissible domain (material constants, mesh sizes, counts).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Evaluation point too close to a source point.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, std::size_t station, double distance)
        : Error(what), station_(station), distance_(distance) {}

    std::size_t station() const noexcept { return station_; }
    double distance() const noexcept { return distance_; }

private:
    std::size_t station_;
    double distance_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kelvin
