#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jumpgauss {

/// Base class for all library-specific failures.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature hit its subdivision limit without reaching tolerance.
class quadrature_error : public error {
public:
    using error::error;
};

/// An integral against the small-jump measure diverges for the given parameters.
class divergence_error : public error {
public:
    using error::error;
};

/// A rejection sampler exceeded its iteration cap.
class sampler_error : public error {
public:
    using error::error;
};

/// The band minorization failed: an acceptance probability left [0,1].
class minorization_error : public error {
public:
    using error::error;
};

/// A simulated path left the finite range. Carries the event log position.
class blowup_error : public error {
public:
    blowup_error(const std::string& msg, std::int64_t path, double time, std::int64_t events_applied)
        : error(msg), path_index(path), blowup_time(time), events_applied(events_applied) {}
    std::int64_t path_index;
    double blowup_time;
    std::int64_t events_applied;
};

/// Coupled schemes disagreed on the shared big-jump digest (internal bug signal).
class coupling_error : public error {
public:
    using error::error;
};

/// A requested scheme/column is not present in a result set.
class lookup_error : public error {
public:
    using error::error;
};

/// A sample set has zero spread and cannot support density estimation.
class degenerate_sample_error : public error {
public:
    using error::error;
};

/// Fewer usable points than a fit requires.
class insufficient_data_error : public error {
public:
    using error::error;
};

/// Experiment configuration failed validation (maps to exit code 2).
class config_error : public error {
public:
    using error::error;
};

/// Artifact I/O failure (maps to exit code 4).
class io_error : public error {
public:
    using error::error;
};

} // namespace jumpgauss
