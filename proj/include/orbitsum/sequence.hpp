#ifndef ORBITSUM_SEQUENCE_HPP
#define ORBITSUM_SEQUENCE_HPP

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "orbitsum/complex_util.hpp"

namespace orbitsum {

// A complex sequence, either materialized or generator-backed.  Generators let
// scans choose their own truncation per path point without holding millions of
// terms in memory.
class Sequence {
public:
    static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

    static Sequence of(std::vector<cplx> values) {
        Sequence s;
        auto data = std::make_shared<std::vector<cplx>>(std::move(values));
        s.len_ = data->size();
        s.fn_ = [data](std::size_t n) { return (*data)[n]; };
        return s;
    }

    static Sequence generator(std::function<cplx(std::size_t)> fn, std::size_t len = unbounded) {
        Sequence s;
        s.fn_ = std::move(fn);
        s.len_ = len;
        return s;
    }

    static Sequence constant(cplx v) {
        return generator([v](std::size_t) { return v; });
    }

    cplx operator()(std::size_t n) const { return fn_(n); }
    std::size_t length() const { return len_; }
    bool bounded_length() const { return len_ != unbounded; }

    std::vector<cplx> materialize(std::size_t count) const {
        std::vector<cplx> out(count);
        for (std::size_t i = 0; i < count; ++i) out[i] = fn_(i);
        return out;
    }

private:
    std::function<cplx(std::size_t)> fn_;
    std::size_t len_ = unbounded;
};

} // namespace orbitsum

#endif
