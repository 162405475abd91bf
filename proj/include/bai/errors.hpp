#pragma once

#include <stdexcept>
#include <string>

namespace bai {

// An instance or empirical vector on which a quantity is undefined
// (tied best arms for H1/H2/H3, all-equal means for D(Q), ...).
class DegenerateInput : public std::domain_error {
public:
    explicit DegenerateInput(const std::string& what) : std::domain_error(what) {}
};

// Algorithm or experiment parameters that cannot be run.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed instance assets or result files.
class DataFormatError : public std::runtime_error {
public:
    explicit DataFormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bai
