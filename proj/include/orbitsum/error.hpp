#ifndef ORBITSUM_ERROR_HPP
#define ORBITSUM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace orbitsum {

// Single exception type for all precondition and numerical failures.
// Messages start with a short category tag, e.g. "kernel pole: ...".
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

} // namespace orbitsum

#endif
