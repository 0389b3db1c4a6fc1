#pragma once

#include <stdexcept>
#include <string>

namespace numeraire {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input-shape and precondition failures.
class DimensionError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };
class SpecError : public Error { using Error::Error; };

// Numerical failures.
class ReductionError : public Error { using Error::Error; };
class EvaluationError : public Error { using Error::Error; };
class DegeneracyError : public Error { using Error::Error; };
class UnsupportedDimensionError : public Error { using Error::Error; };
class ExtrapolationError : public Error { using Error::Error; };
class StabilityError : public Error { using Error::Error; };

}  // namespace numeraire
