#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coxdl {

// Parameters (q, n, κ, h) of an inner form of GL_n and a truncation depth.
struct GroupSpec {
    unsigned q = 2, n = 2, kappa = 0, h = 1;
    unsigned p = 2, f = 1;
    unsigned nprime = 2, n0 = 1, k0 = 0;

    static GroupSpec make(unsigned q, unsigned n, unsigned kappa, unsigned h);
    // Group-side models exist for κ = 0 and for division algebras.
    bool group_supported() const { return kappa == 0 || nprime == 1; }
    std::string str() const;
};

struct unsupported_model : std::logic_error {
    using std::logic_error::logic_error;
};

std::uint64_t ipow64(std::uint64_t b, unsigned e);

}  // namespace coxdl
