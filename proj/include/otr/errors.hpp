#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace otr {

//! Base for all protocol-level errors so callers can catch the family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ForgeryNotPermitted : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct UnknownStrategy : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct AmbiguousAttribution : Error {
    using Error::Error;
};
struct WindowClosed : Error {
    using Error::Error;
};
struct InsufficientBond : Error {
    using Error::Error;
};
struct NoDivergence : Error {
    using Error::Error;
};
struct NotYourTurn : Error {
    using Error::Error;
};
struct WrongPhase : Error {
    using Error::Error;
};
struct InsufficientStake : Error {
    using Error::Error;
};
struct AlreadySlashed : Error {
    using Error::Error;
};
struct MissingQueryData : Error {
    using Error::Error;
};
struct TimeTravel : Error {
    using Error::Error;
};
struct UnknownParameter : Error {
    using Error::Error;
};

//! Config rejection. Collects every violation so the user fixes them in one go.
struct ConfigError : Error {
    explicit ConfigError(std::vector<std::string> problems)
        : Error(join(problems)), issues(std::move(problems)) {}

    std::vector<std::string> issues;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
};

}  // namespace otr
