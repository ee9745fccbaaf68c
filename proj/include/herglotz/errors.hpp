#pragma once

#include <stdexcept>
#include <string>

namespace herglotz {

/// Malformed input: wrong dimensions, missing fields, non-finite entries.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input is well formed but violates a mathematical precondition
/// (non-member measure, extreme input to split_along, ...).
class PreconditionError : public std::domain_error {
public:
    explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical pathology such as a recursion depth guard being hit.
class ToleranceError : public std::runtime_error {
public:
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

/// Something that the theory says cannot happen did happen.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace herglotz
