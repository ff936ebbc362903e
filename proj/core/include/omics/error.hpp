#pragma once

#include <stdexcept>
#include <string>

namespace omics {

// Precondition violated by the caller.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (files, cohorts, CSV contents).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public DataError {
public:
    using DataError::DataError;
};

// Invalid configuration value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A quantity is mathematically undefined for the given input
// (zero denominators, degenerate splits).
class NumericalError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Rethrow the in-flight exception as the same omics error class with
/// `prefix + ": "` prepended to its message. Foreign exceptions become
/// NumericalError. Only valid inside a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& prefix) {
    try {
        throw;
    } catch (const IoError& e) {
        throw IoError(prefix + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(prefix + ": " + e.what());
    } catch (const std::exception& e) {
        throw NumericalError(prefix + ": " + e.what());
    }
}

}  // namespace omics
