#pragma once

#include <stdexcept>

namespace htf {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : Error { using Error::Error; };
struct InvalidLagCount : Error { using Error::Error; };
struct InvalidPhase : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct DegenerateMean : Error { using Error::Error; };
struct ConstantSeries : Error { using Error::Error; };
struct LagTooLarge : Error { using Error::Error; };
struct NumericalBreakdown : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct InsufficientContext : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct NonHourlyStep : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace htf
