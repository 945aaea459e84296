#pragma once

#include <stdexcept>
#include <string>

namespace cscolloc {

/// Base class for all library errors. `exit_code()` maps onto the CLI
/// exit-code table (1 invalid config, 2 resource cap, 3 numerical failure).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual int exit_code() const noexcept = 0;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 1; }
};

class ResourceLimit : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 2; }
};

class NumericalFailure : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 3; }
};

}  // namespace cscolloc
