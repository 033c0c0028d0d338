#pragma once

#include <stdexcept>
#include <string>

namespace hmv {

/* Named error conditions. Input-shaped problems derive from InputError so the
 * CLI can map them to exit code 2; verification failures are reported through
 * return values, not exceptions. */

struct InputError : std::runtime_error {
    explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

struct NotTotallyReal : InputError {
    explicit NotTotallyReal(const std::string& m) : InputError("NotTotallyReal: " + m) {}
};

struct NotARing : InputError {
    explicit NotARing(const std::string& m) : InputError("NotARing: " + m) {}
};

struct UnsupportedDegree : InputError {
    explicit UnsupportedDegree(const std::string& m) : InputError("UnsupportedDegree: " + m) {}
};

struct ZeroIdeal : InputError {
    explicit ZeroIdeal(const std::string& m) : InputError("ZeroIdeal: " + m) {}
};

struct NotInAmbientGroup : InputError {
    explicit NotInAmbientGroup(const std::string& m) : InputError("NotInAmbientGroup: " + m) {}
};

struct BoxTooLarge : InputError {
    explicit BoxTooLarge(const std::string& m) : InputError("BoxTooLarge: " + m) {}
};

struct EqualCusps : InputError {
    explicit EqualCusps(const std::string& m) : InputError("EqualCusps: " + m) {}
};

struct NotPrime : InputError {
    explicit NotPrime(const std::string& m) : InputError("NotPrime: " + m) {}
};

struct NotFullDimensional : InputError {
    explicit NotFullDimensional(const std::string& m) : InputError("NotFullDimensional: " + m) {}
};

/* Internal invariant violations (bugs, not inputs). */
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& m) : std::logic_error("InternalError: " + m) {}
};

}  // namespace hmv
