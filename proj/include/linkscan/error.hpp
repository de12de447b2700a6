#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace linkscan {

/// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed, missing or misaligned input data (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

/// A computation has no defined answer for the given numbers (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Constant series: higher moments are undefined.
class DegenerateSeriesError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Rank-deficient design matrix. Carries the names of the columns found dependent.
class SingularDesignError : public NumericalError {
public:
    SingularDesignError(const std::string& what, std::vector<std::string> dependent)
        : NumericalError(what), dependent_columns(std::move(dependent)) {}

    std::vector<std::string> dependent_columns;
};

/// Local polynomial system without enough weighted support or too badly conditioned.
class LocalFitError : public NumericalError {
public:
    LocalFitError(const std::string& what, double abscissa)
        : NumericalError(what), x(abscissa) {}

    double x;
};

}  // namespace linkscan
