#pragma once

#include <stdexcept>
#include <string>

namespace wbd {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An oscillatory integral needs more quadrature nodes than the cap allows.
class Unresolved : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (CLI maps this to exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The solution left the representable range (non-finite values or norm
/// above the configured ceiling).
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, double last_valid_time)
        : std::runtime_error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

}  // namespace wbd
