#pragma once

#include <stdexcept>
#include <string>

namespace commodpi {

/// Argument outside the mathematical domain of an operation (t > T, sigma <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller violated a structural contract (mismatched lengths, empty prior, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not reach its accuracy target
/// (negative inverted density, non-finite quadrature value, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace commodpi
