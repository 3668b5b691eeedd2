#pragma once

#include <stdexcept>
#include <string>

namespace mcfill {

// Bad user input: malformed files, unknown ids, out-of-range parameters.
// CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A sweep or search exceeded its configured cap. Never a silent wrong
// answer: callers either raise the cap or get this. CLI exit code 2.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant the construction is supposed to guarantee failed.
// Reaching this is a bug (or a violated proof obligation) and test failure.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mcfill
