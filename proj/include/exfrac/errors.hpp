#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace exfrac {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed container: bad magic, bad header fields, trailing bytes.
struct FormatError : Error {
    using Error::Error;
};

// Payload shorter than the header promises.
struct TruncationError : Error {
    using Error::Error;
};

// Well-formed container holding unusable values (NaN/Inf components).
struct DataError : Error {
    using Error::Error;
};

// Paired fields whose dimensions do not agree.
struct ShapeError : Error {
    using Error::Error;
};

// Invalid user-supplied parameter (patch size, angle, tolerance, ...).
struct ParamError : Error {
    using Error::Error;
};

// Synthetic clip recipe that cannot be realized.
struct ConfigError : Error {
    using Error::Error;
};

// No frame of the clip produced an estimate. Carries one line per frame
// explaining why it was skipped.
class EstimationFailedError : public Error {
public:
    EstimationFailedError(const std::string& message, std::vector<std::string> diagnostics)
        : Error(message), diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

}  // namespace exfrac
