#include "scispace/errors.hpp"

namespace scispace {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::DuplicateTriple: return "DuplicateTriple";
        case ErrorCode::NegativeCount: return "NegativeCount";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::YearOutOfRange: return "YearOutOfRange";
        case ErrorCode::InconsistentInputs: return "InconsistentInputs";
        case ErrorCode::EmptyFlags: return "EmptyFlags";
        case ErrorCode::UnknownCountry: return "UnknownCountry";
        case ErrorCode::CountryMismatch: return "CountryMismatch";
        case ErrorCode::YearOrder: return "YearOrder";
        case ErrorCode::MissingYearSlice: return "MissingYearSlice";
        case ErrorCode::NonpositiveStart: return "NonpositiveStart";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::SingleCluster: return "SingleCluster";
        case ErrorCode::MissingCoefficient: return "MissingCoefficient";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::MetricMismatch: return "MetricMismatch";
        case ErrorCode::DegenerateSample: return "DegenerateSample";
        case ErrorCode::MissingDensity: return "MissingDensity";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "UnknownError";
}

} // namespace scispace
