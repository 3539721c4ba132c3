#ifndef QMKIT_ERRORS_HPP
#define QMKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmkit {

/// Malformed or out-of-contract input (CLI exit code 2).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computed result contradicts an invariant the theory guarantees (CLI exit code 3).
class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

} // namespace qmkit

#endif // QMKIT_ERRORS_HPP
