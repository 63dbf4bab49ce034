#pragma once

#include <stdexcept>
#include <string>

namespace morrey {

/// Invalid input: a violated precondition or theorem hypothesis. The CLI
/// maps this to exit code 2.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a finite answer (overflowed
/// characteristic, unresolvable grid). The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const std::string& what)
{
    if (!ok) throw parameter_error(what);
}
} // namespace detail

} // namespace morrey
