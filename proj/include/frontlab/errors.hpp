#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

// Invalid recipe parameters or violated operation preconditions.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A built reaction fails one of its structural constraints.
class ConstructionError : public std::runtime_error {
public:
    ConstructionError(const std::string& what, std::vector<std::string> violated = {})
        : std::runtime_error(what), violated_(std::move(violated)) {}
    const std::vector<std::string>& violated() const noexcept { return violated_; }

private:
    std::vector<std::string> violated_;
};

// Geometry, diffusion or config files that cannot be honored.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double time, double s, double r)
        : std::runtime_error(what), time_(time), s_(s), r_(r) {}
    double time() const noexcept { return time_; }
    double s() const noexcept { return s_; }
    double r() const noexcept { return r_; }

private:
    double time_, s_, r_;
};

// The front came too close to the edge of the truncated window.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double last_estimate)
        : std::runtime_error(what), last_(last_estimate) {}
    double last_estimate() const noexcept { return last_; }

private:
    double last_;
};

// Bisection could not decide on which side of the critical speed a probe lies.
class InconclusiveError : public std::runtime_error {
public:
    InconclusiveError(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower_(lower), upper_(upper) {}
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_, upper_;
};

class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InitializerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CaptureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExtractionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MeasurementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TuningError : public std::runtime_error {
public:
    TuningError(const std::string& what, std::vector<std::pair<double, double>> trace = {})
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<std::pair<double, double>>& trace() const noexcept { return trace_; }

private:
    std::vector<std::pair<double, double>> trace_;
};

}  // namespace frontlab
