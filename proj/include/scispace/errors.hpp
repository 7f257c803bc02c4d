#pragma once

#include <stdexcept>
#include <string>

namespace scispace {

enum class ErrorCode {
    IoError,
    MissingColumn,
    DuplicateTriple,
    NegativeCount,
    MalformedRow,
    YearOutOfRange,
    InconsistentInputs,
    EmptyFlags,
    UnknownCountry,
    CountryMismatch,
    YearOrder,
    MissingYearSlice,
    NonpositiveStart,
    RankDeficient,
    SingleCluster,
    MissingCoefficient,
    EmptyDataset,
    MetricMismatch,
    DegenerateSample,
    MissingDensity,
    InvalidConfig,
};

const char* error_code_name(ErrorCode code);

// Single exception type; the code makes failures testable without a class per error.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace scispace
